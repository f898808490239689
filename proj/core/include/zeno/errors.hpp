#ifndef ZENO_ERRORS_HPP
#define ZENO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace zeno {

/// Invalid or inconsistent configuration / precondition violation (CLI exit 2).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A cost or resolution guard refused the requested computation (CLI exit 3).
struct guard_error : std::runtime_error {
    explicit guard_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A runtime numerical guard tripped mid-computation, e.g. the boundary-mass
/// monitor detecting wrap-around contamination (CLI exit 4).
struct numeric_guard_error : std::runtime_error {
    explicit numeric_guard_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace zeno

#endif
