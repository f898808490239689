#ifndef ZENO_TABLE_HPP
#define ZENO_TABLE_HPP

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace zeno {

using Cell = std::variant<std::int64_t, double, bool, std::string>;

/// Deterministic tabular output: '#'-prefixed provenance header lines, one
/// comma-separated column-name line, then rows. Doubles print with 17
/// significant digits so files are byte-reproducible and lossless.
class ResultTable {
  public:
    explicit ResultTable(std::vector<std::string> columns);

    void add_row(std::vector<Cell> row);
    std::size_t row_count() const { return rows_.size(); }
    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }

    /// Ordered provenance entries echoed as "# key: value" lines.
    void set_provenance(std::vector<std::pair<std::string, std::string>> entries);
    /// Trailing comment emitted after the data, e.g. a FAILED marker.
    void set_trailer(std::string line) { trailer_ = std::move(line); }

    void write_csv(std::ostream& os) const;

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
    std::vector<std::pair<std::string, std::string>> provenance_;
    std::string trailer_;
};

/// "%.17g" rendering used for every floating-point cell.
std::string format_double(double v);

/// FNV-1a 64-bit hash of a string, rendered as 16 hex digits; used to echo a
/// config fingerprint into every output file.
std::string fnv1a_hex(const std::string& text);

}  // namespace zeno

#endif
