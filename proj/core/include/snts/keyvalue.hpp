#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace snts {

/// Flat `key = value` configuration. Blank lines and `#` comments are
/// ignored; list values are comma separated.
class KeyValueConfig {
 public:
  [[nodiscard]] static KeyValueConfig parse(std::string_view text);
  [[nodiscard]] static KeyValueConfig load(const std::string& path);

  void set(const std::string& key, std::string value) { entries_[key] = std::move(value); }
  [[nodiscard]] bool contains(const std::string& key) const { return entries_.count(key) != 0; }
  [[nodiscard]] std::optional<std::string> get(const std::string& key) const;

  [[nodiscard]] std::string get_string(const std::string& key, const std::string& fallback) const;
  [[nodiscard]] double get_double(const std::string& key, double fallback) const;
  [[nodiscard]] std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  [[nodiscard]] std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  [[nodiscard]] std::vector<std::string> get_list(const std::string& key) const;
  [[nodiscard]] std::vector<double> get_doubles(const std::string& key) const;

  [[nodiscard]] const std::map<std::string, std::string>& entries() const noexcept { return entries_; }
  [[nodiscard]] std::string to_string() const;

 private:
  std::map<std::string, std::string> entries_;
};

[[nodiscard]] std::string trim(std::string_view s);
[[nodiscard]] std::vector<std::string> split(std::string_view s, char sep);
/// Strict numeric parsing: the whole token must be consumed. Throws ParseError.
[[nodiscard]] double parse_double(std::string_view token);
[[nodiscard]] std::int64_t parse_int(std::string_view token);

}  // namespace snts
