#include "a3w/numkit/text.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace a3w {

std::string format_roundtrip(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_fixed(double v, int digits) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, digits);
  std::string out(buf, res.ptr);
  // Avoid "-0.000000" so byte streams do not depend on the sign of tiny values.
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

std::optional<double> parse_double(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size() || token.empty()) return std::nullopt;
  return v;
}

std::optional<long long> parse_int(std::string_view token) {
  long long v = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size() || token.empty()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split_tokens(std::string_view line, std::string_view separators) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const auto start = line.find_first_not_of(separators, pos);
    if (start == std::string_view::npos) break;
    auto end = line.find_first_of(separators, start);
    if (end == std::string_view::npos) end = line.size();
    out.push_back(line.substr(start, end - start));
    pos = end;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace a3w
