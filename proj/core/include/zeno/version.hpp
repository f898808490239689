#ifndef ZENO_VERSION_HPP
#define ZENO_VERSION_HPP

namespace zeno {
inline constexpr const char* version_string = "0.1.0";
}

#endif
