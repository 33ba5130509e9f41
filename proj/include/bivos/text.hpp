#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bivos {

std::string_view trim(std::string_view s);

/// Splits on `sep`, trimming each piece. Empty input yields no pieces.
std::vector<std::string_view> split(std::string_view s, char sep);

/// Strict decimal parse: the whole (trimmed) string must be consumed.
/// Throws ParseError naming `what` on failure.
double parse_double(std::string_view s, std::string_view what);
long long parse_int(std::string_view s, std::string_view what);
std::uint64_t parse_u64(std::string_view s, std::string_view what);

/// 17 significant digits; round-trips every double.
std::string format_double(double x);

/// Shortest decimal representation that round-trips.
std::string format_shortest(double x);

} // namespace bivos
