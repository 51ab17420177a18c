#ifndef HALLWAY_UTIL_HPP_
#define HALLWAY_UTIL_HPP_

#include <charconv>
#include <stdexcept>
#include <string>

namespace hallway {

/// Shortest decimal string that round-trips the double (to_chars default).
inline std::string fmt_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end)
        throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

}  // namespace hallway

#endif  // HALLWAY_UTIL_HPP_
