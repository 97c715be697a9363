#include "perclab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "perclab/errors.hpp"

namespace perclab {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  std::size_t pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  cfg.text_ = text;
  std::istringstream in(text);
  std::string line;
  std::string current;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    if (current.empty()) {
      // expect "name {" (brace may sit on the same line only)
      if (s.back() != '{')
        throw ParameterError("config line " + std::to_string(lineno) +
                             ": expected 'section {'");
      std::string name = trim(s.substr(0, s.size() - 1));
      if (name.empty() || name.find_first_of("{}=") != std::string::npos)
        throw ParameterError("config line " + std::to_string(lineno) +
                             ": bad section name");
      if (cfg.sections_.count(name))
        throw ParameterError("config line " + std::to_string(lineno) +
                             ": duplicate section '" + name + "'");
      cfg.sections_[name] = {};
      current = name;
      continue;
    }
    if (s == "}") {
      current.clear();
      continue;
    }
    std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ParameterError("config line " + std::to_string(lineno) +
                           ": expected 'key = value'");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ParameterError("config line " + std::to_string(lineno) +
                           ": empty key or value");
    auto& sec = cfg.sections_[current];
    if (sec.count(key))
      throw ParameterError("config line " + std::to_string(lineno) + ": duplicate key '" +
                           key + "' in section '" + current + "'");
    sec[key] = value;
  }
  if (!current.empty())
    throw ParameterError("config: unterminated section '" + current + "'");
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool Config::has_section(const std::string& section) const {
  return sections_.count(section) > 0;
}

bool Config::has(const std::string& section, const std::string& key) const {
  return lookup(section, key).has_value();
}

std::optional<std::string> Config::lookup(const std::string& section,
                                          const std::string& key) const {
  auto sit = sections_.find(section);
  if (sit == sections_.end()) return std::nullopt;
  auto kit = sit->second.find(key);
  if (kit == sit->second.end()) return std::nullopt;
  return kit->second;
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
  auto v = lookup(section, key);
  if (!v) throw ParameterError("config: missing " + section + "." + key);
  return *v;
}

std::string Config::get_string_or(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
  auto v = lookup(section, key);
  return v ? *v : fallback;
}

namespace {

double parse_double(const std::string& s, const std::string& where) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw ParameterError("config: cannot parse number '" + s + "' at " + where);
  return v;
}

long parse_long(const std::string& s, const std::string& where) {
  char* end = nullptr;
  long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw ParameterError("config: cannot parse integer '" + s + "' at " + where);
  return v;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == ' ' || ch == '\t' || ch == ',') {
      if (!cur.empty()) parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

}  // namespace

double Config::get_double(const std::string& section, const std::string& key) const {
  return parse_double(get_string(section, key), section + "." + key);
}

double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
  auto v = lookup(section, key);
  return v ? parse_double(*v, section + "." + key) : fallback;
}

long Config::get_long(const std::string& section, const std::string& key) const {
  return parse_long(get_string(section, key), section + "." + key);
}

long Config::get_long_or(const std::string& section, const std::string& key,
                         long fallback) const {
  auto v = lookup(section, key);
  return v ? parse_long(*v, section + "." + key) : fallback;
}

std::uint64_t Config::get_u64_or(const std::string& section, const std::string& key,
                                 std::uint64_t fallback) const {
  auto v = lookup(section, key);
  if (!v) return fallback;
  char* end = nullptr;
  std::uint64_t out = std::strtoull(v->c_str(), &end, 10);
  if (end == v->c_str() || *end != '\0')
    throw ParameterError("config: cannot parse seed '" + *v + "'");
  return out;
}

bool Config::get_bool_or(const std::string& section, const std::string& key,
                         bool fallback) const {
  auto v = lookup(section, key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw ParameterError("config: cannot parse boolean '" + *v + "' at " + section + "." + key);
}

std::vector<double> Config::get_doubles(const std::string& section,
                                        const std::string& key) const {
  std::vector<double> out;
  for (const auto& part : split_list(get_string(section, key)))
    out.push_back(parse_double(part, section + "." + key));
  return out;
}

std::vector<long> Config::get_longs(const std::string& section, const std::string& key) const {
  std::vector<long> out;
  for (const auto& part : split_list(get_string(section, key)))
    out.push_back(parse_long(part, section + "." + key));
  return out;
}

std::vector<std::string> Config::section_names() const {
  std::vector<std::string> names;
  for (const auto& [name, _] : sections_) names.push_back(name);
  return names;
}

std::vector<std::string> Config::keys(const std::string& section) const {
  std::vector<std::string> out;
  auto sit = sections_.find(section);
  if (sit == sections_.end()) return out;
  for (const auto& [k, _] : sit->second) out.push_back(k);
  return out;
}

}  // namespace perclab
