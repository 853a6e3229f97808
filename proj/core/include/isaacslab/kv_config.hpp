#pragma once

#include <string>
#include <utility>
#include <vector>

#include "isaacslab/types.hpp"

namespace isaacs {

// Flat key-value configuration text with [section] headers, '#' comments,
// and 'key = value' lines.  Keys are addressed as "section.key"; lines before
// any section header live in the "" section and are addressed by bare key.
class KvConfig {
 public:
  static KvConfig parse_file(const std::string& path);
  static KvConfig parse_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key) const;
  long get_int(const std::string& key, long fallback) const;

  void set(const std::string& key, const std::string& value);

  // Insertion-ordered items, for manifests.
  const std::vector<std::pair<std::string, std::string>>& items() const { return items_; }

  // Key-sorted single-string rendering, for hashing.
  std::string canonical_text() const;

 private:
  const std::string* find(const std::string& key) const;
  std::vector<std::pair<std::string, std::string>> items_;
};

}  // namespace isaacs
