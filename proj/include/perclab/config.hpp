#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace perclab {

/// Brace-sectioned key-value configuration:
///
///   kernel {
///     family = long_range
///     beta = 4.0
///     delta = 1.5
///   }
///
/// '#' starts a comment; list values are whitespace- or comma-separated.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config parse_file(const std::string& path);

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;
  long get_long(const std::string& section, const std::string& key) const;
  long get_long_or(const std::string& section, const std::string& key, long fallback) const;
  std::uint64_t get_u64_or(const std::string& section, const std::string& key,
                           std::uint64_t fallback) const;
  bool get_bool_or(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
  std::vector<long> get_longs(const std::string& section, const std::string& key) const;

  std::vector<std::string> section_names() const;
  std::vector<std::string> keys(const std::string& section) const;

  const std::string& text() const { return text_; }

 private:
  std::optional<std::string> lookup(const std::string& section, const std::string& key) const;

  std::map<std::string, std::map<std::string, std::string>> sections_;
  std::string text_;
};

}  // namespace perclab
