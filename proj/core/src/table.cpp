#include "zeno/table.hpp"

#include <cstdio>

#include "zeno/errors.hpp"

namespace zeno {

ResultTable::ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void ResultTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size())
        throw config_error("table row width does not match column count");
    rows_.push_back(std::move(row));
}

void ResultTable::set_provenance(std::vector<std::pair<std::string, std::string>> entries) {
    provenance_ = std::move(entries);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {
struct CellPrinter {
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return v; }
};
}  // namespace

void ResultTable::write_csv(std::ostream& os) const {
    for (const auto& [k, v] : provenance_) os << "# " << k << ": " << v << "\n";
    for (std::size_t c = 0; c < columns_.size(); ++c)
        os << columns_[c] << (c + 1 < columns_.size() ? "," : "\n");
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c)
            os << std::visit(CellPrinter{}, row[c]) << (c + 1 < row.size() ? "," : "\n");
    }
    if (!trailer_.empty()) os << "# " << trailer_ << "\n";
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace zeno
