#pragma once

// Flat key-value run configuration: `section.key = value` lines, `#`
// comments. Values are scalars or comma lists. Unknown keys are rejected
// after a consumer has taken what it understands; `meta.*` keys carry
// provenance and are always ignored, which lets a run manifest be fed
// back in as a config.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "znqed/errors.hpp"

namespace znqed {

class ConfigMap {
 public:
  static ConfigMap from_file(const std::filesystem::path& path);
  static ConfigMap from_text(const std::string& text,
                             const std::string& source_name);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key);
  std::string get_string(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key, double fallback);
  int get_int(const std::string& key, int fallback);
  bool get_bool(const std::string& key, bool fallback);
  std::optional<double> get_optional_double(const std::string& key);
  std::optional<int> get_optional_int(const std::string& key);
  std::vector<std::string> get_string_list(const std::string& key,
                                           std::vector<std::string> fallback);
  std::vector<double> get_double_list(const std::string& key);

  // Setters used when composing manifests and presets.
  void set(const std::string& key, const std::string& value);
  void set_double(const std::string& key, double value);
  void set_int(const std::string& key, long long value);
  void set_bool(const std::string& key, bool value);

  // Overlays other's entries onto this map (other wins), preserving their
  // line numbers and consumption state for later unknown-key reporting.
  void merge_from(const ConfigMap& other);

  // Throws ConfigError naming every key (with its line number) that no
  // consumer asked for; meta.* keys are exempt.
  void require_all_consumed() const;

  // Deterministic `key = value` text, keys sorted.
  std::string serialize() const;

  // All (key, value) pairs in key order.
  std::vector<std::pair<std::string, std::string>> items() const;

  const std::string& source_name() const { return source_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool consumed = false;
  };
  std::map<std::string, Entry> entries_;
  std::string source_ = "<memory>";
};

// 17-significant-digit formatting used for every double that is written
// to disk; round-trips exactly.
std::string format_double(double value);
double parse_double(const std::string& text, const std::string& what);

}  // namespace znqed
