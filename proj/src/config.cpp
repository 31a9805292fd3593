#include "znqed/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace znqed {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

double parse_double(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw ConfigError(what + ": cannot parse number '" + text + "'");
  return v;
}

ConfigMap ConfigMap::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_text(buffer.str(), path.string());
}

ConfigMap ConfigMap::from_text(const std::string& text,
                               const std::string& source_name) {
  ConfigMap cfg;
  cfg.source_ = source_name;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source_name + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(source_name + ":" + std::to_string(line_no) +
                        ": empty key");
    if (cfg.entries_.count(key))
      throw ConfigError(source_name + ":" + std::to_string(line_no) +
                        ": duplicate key '" + key + "'");
    cfg.entries_[key] = Entry{value, line_no, false};
  }
  return cfg;
}

bool ConfigMap::has(const std::string& key) const {
  return entries_.count(key) != 0;
}

std::string ConfigMap::get_string(const std::string& key) {
  auto it = entries_.find(key);
  if (it == entries_.end())
    throw ConfigError(source_ + ": missing required key '" + key + "'");
  it->second.consumed = true;
  return it->second.value;
}

std::string ConfigMap::get_string(const std::string& key,
                                  const std::string& fallback) {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  it->second.consumed = true;
  return it->second.value;
}

double ConfigMap::get_double(const std::string& key, double fallback) {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  it->second.consumed = true;
  return parse_double(it->second.value, source_ + ": key '" + key + "'");
}

int ConfigMap::get_int(const std::string& key, int fallback) {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  it->second.consumed = true;
  const std::string& text = it->second.value;
  char* end = nullptr;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0')
    throw ConfigError(source_ + ": key '" + key + "': cannot parse integer '" +
                      text + "'");
  return static_cast<int>(v);
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  it->second.consumed = true;
  const std::string& v = it->second.value;
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError(source_ + ": key '" + key + "': expected a boolean, got '" +
                    v + "'");
}

std::optional<double> ConfigMap::get_optional_double(const std::string& key) {
  if (!has(key)) return std::nullopt;
  return get_double(key, 0.0);
}

std::optional<int> ConfigMap::get_optional_int(const std::string& key) {
  if (!has(key)) return std::nullopt;
  return get_int(key, 0);
}

std::vector<std::string> ConfigMap::get_string_list(
    const std::string& key, std::vector<std::string> fallback) {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  it->second.consumed = true;
  return split_list(it->second.value);
}

std::vector<double> ConfigMap::get_double_list(const std::string& key) {
  std::vector<double> out;
  for (const auto& item :
       get_string_list(key, {}))
    out.push_back(parse_double(item, source_ + ": key '" + key + "'"));
  return out;
}

void ConfigMap::set(const std::string& key, const std::string& value) {
  entries_[key] = Entry{value, 0, true};
}

void ConfigMap::set_double(const std::string& key, double value) {
  set(key, format_double(value));
}

void ConfigMap::set_int(const std::string& key, long long value) {
  set(key, std::to_string(value));
}

void ConfigMap::set_bool(const std::string& key, bool value) {
  set(key, value ? "true" : "false");
}

void ConfigMap::merge_from(const ConfigMap& other) {
  for (const auto& [key, entry] : other.entries_) entries_[key] = entry;
  source_ = other.source_;
}

void ConfigMap::require_all_consumed() const {
  std::string complaint;
  for (const auto& [key, entry] : entries_) {
    if (entry.consumed) continue;
    if (key.rfind("meta.", 0) == 0) continue;
    if (!complaint.empty()) complaint += "; ";
    complaint += source_ + ":" + std::to_string(entry.line) +
                 ": unknown key '" + key + "'";
  }
  if (!complaint.empty()) throw ConfigError(complaint);
}

std::string ConfigMap::serialize() const {
  std::string out;
  for (const auto& [key, entry] : entries_) {
    out += key;
    out += " = ";
    out += entry.value;
    out += '\n';
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> ConfigMap::items() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(entries_.size());
  for (const auto& [key, entry] : entries_) out.emplace_back(key, entry.value);
  return out;
}

}  // namespace znqed
