#include "a3w/harness/config_file.hpp"

#include <fstream>
#include <istream>

#include "a3w/error.hpp"
#include "a3w/numkit/text.hpp"

namespace a3w {

ConfigFile ConfigFile::parse(std::istream& in) {
  ConfigFile cfg;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (key.find_first_of(" \t") != std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": key '" + key + "' contains whitespace");
    }
    if (cfg.entries_.contains(key)) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    cfg.entries_[key] = Entry{value, line_no};
  }
  cfg.last_line_ = line_no;
  return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse(in);
}

void ConfigFile::set(const std::string& key, const std::string& value) {
  entries_[key] = Entry{value, ++last_line_};
  consumed_.erase(key);
}

void ConfigFile::fail(const std::string& key, const std::string& what) const {
  const auto it = entries_.find(key);
  const std::string where = it == entries_.end() ? "" : "line " + std::to_string(it->second.line) + ": ";
  throw ConfigError(where + key + ": " + what);
}

const ConfigFile::Entry* ConfigFile::lookup(const std::string& key) {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  consumed_.insert(key);
  return &it->second;
}

std::optional<std::string> ConfigFile::take_string(const std::string& key) {
  const Entry* e = lookup(key);
  if (!e) return std::nullopt;
  if (e->value.empty()) fail(key, "value is empty");
  return e->value;
}

std::optional<double> ConfigFile::take_double(const std::string& key) {
  const Entry* e = lookup(key);
  if (!e) return std::nullopt;
  const auto v = parse_double(e->value);
  if (!v) fail(key, "expected a number, got '" + e->value + "'");
  return *v;
}

std::optional<std::size_t> ConfigFile::take_size(const std::string& key) {
  const Entry* e = lookup(key);
  if (!e) return std::nullopt;
  const auto v = parse_int(e->value);
  if (!v || *v < 0) fail(key, "expected a non-negative integer, got '" + e->value + "'");
  return static_cast<std::size_t>(*v);
}

std::optional<std::uint64_t> ConfigFile::take_u64(const std::string& key) {
  const auto v = take_size(key);
  if (!v) return std::nullopt;
  return static_cast<std::uint64_t>(*v);
}

std::optional<bool> ConfigFile::take_bool(const std::string& key) {
  const Entry* e = lookup(key);
  if (!e) return std::nullopt;
  if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
  if (e->value == "false" || e->value == "0" || e->value == "no") return false;
  fail(key, "expected true or false, got '" + e->value + "'");
}

std::optional<std::vector<std::string>> ConfigFile::take_string_list(const std::string& key) {
  const Entry* e = lookup(key);
  if (!e) return std::nullopt;
  std::vector<std::string> out;
  for (auto tok : split_tokens(e->value, ", \t")) out.emplace_back(tok);
  if (out.empty()) fail(key, "list is empty");
  return out;
}

std::optional<std::vector<double>> ConfigFile::take_double_list(const std::string& key) {
  const auto items = take_string_list(key);
  if (!items) return std::nullopt;
  std::vector<double> out;
  for (const auto& s : *items) {
    const auto v = parse_double(s);
    if (!v) fail(key, "expected a number, got '" + s + "'");
    out.push_back(*v);
  }
  return out;
}

std::optional<std::vector<std::size_t>> ConfigFile::take_size_list(const std::string& key) {
  const auto items = take_string_list(key);
  if (!items) return std::nullopt;
  std::vector<std::size_t> out;
  for (const auto& s : *items) {
    const auto v = parse_int(s);
    if (!v || *v < 0) fail(key, "expected a non-negative integer, got '" + s + "'");
    out.push_back(static_cast<std::size_t>(*v));
  }
  return out;
}

void ConfigFile::reject_unknown() const {
  for (const auto& [key, entry] : entries_) {
    if (!consumed_.contains(key)) {
      throw ConfigError("line " + std::to_string(entry.line) + ": unknown key '" + key + "'");
    }
  }
}

}  // namespace a3w
