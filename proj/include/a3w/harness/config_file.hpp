#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace a3w {

// `key = value` lines with `#` comments. Typed accessors consume keys so that
// leftovers can be reported as unknown. All failures raise ConfigError with
// the offending line.
class ConfigFile {
 public:
  static ConfigFile parse(std::istream& in);
  static ConfigFile load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return entries_.contains(key); }
  // Overrides (or adds) a key as if it appeared on a final line of the file.
  void set(const std::string& key, const std::string& value);

  std::optional<std::string> take_string(const std::string& key);
  std::optional<double> take_double(const std::string& key);
  std::optional<std::size_t> take_size(const std::string& key);
  std::optional<std::uint64_t> take_u64(const std::string& key);
  std::optional<bool> take_bool(const std::string& key);
  std::optional<std::vector<double>> take_double_list(const std::string& key);
  std::optional<std::vector<std::size_t>> take_size_list(const std::string& key);
  std::optional<std::vector<std::string>> take_string_list(const std::string& key);

  // Throws ConfigError naming the first key no accessor consumed.
  void reject_unknown() const;

 private:
  struct Entry {
    std::string value;
    std::size_t line = 0;
  };
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;
  const Entry* lookup(const std::string& key);

  std::map<std::string, Entry> entries_;
  std::set<std::string> consumed_;
  std::size_t last_line_ = 0;
};

}  // namespace a3w
