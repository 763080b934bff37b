#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace a3w {

// Shortest decimal form that parses back to the same double.
std::string format_roundtrip(double v);
// Fixed-point with `digits` decimals; NaN prints as "nan".
std::string format_fixed(double v, int digits = 6);

std::optional<double> parse_double(std::string_view token);
std::optional<long long> parse_int(std::string_view token);

// Splits on any run of the given separator characters; no empty tokens.
std::vector<std::string_view> split_tokens(std::string_view line, std::string_view separators = " \t");
std::string_view trim(std::string_view s);

}  // namespace a3w
