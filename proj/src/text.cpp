#include "bivos/text.hpp"

#include "bivos/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace bivos {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    if (trim(s).empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view s, std::string_view what) {
    s = trim(s);
    double value = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (s.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw ParseError("invalid number for " + std::string(what) + ": '" + std::string(s) + "'");
    }
    return value;
}

long long parse_int(std::string_view s, std::string_view what) {
    s = trim(s);
    long long value = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (s.empty() || ec != std::errc{} || ptr != end) {
        throw ParseError("invalid integer for " + std::string(what) + ": '" + std::string(s) + "'");
    }
    return value;
}

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
    s = trim(s);
    std::uint64_t value = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (s.empty() || ec != std::errc{} || ptr != end) {
        throw ParseError("invalid unsigned integer for " + std::string(what) + ": '" +
                         std::string(s) + "'");
    }
    return value;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_shortest(double x) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

} // namespace bivos
