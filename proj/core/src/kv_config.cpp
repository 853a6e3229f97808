#include "isaacslab/kv_config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace isaacs {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

KvConfig KvConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str());
}

KvConfig KvConfig::parse_string(const std::string& text) {
  KvConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line.substr(0, line.find('#')));
    if (stripped.empty()) continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']')
        throw ConfigError("config: malformed section header at line " + std::to_string(line_no));
      section = trim(stripped.substr(1, stripped.size() - 2));
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected 'key = value' at line " + std::to_string(line_no));
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw ConfigError("config: empty key at line " + std::to_string(line_no));
    cfg.set(section.empty() ? key : section + "." + key, value);
  }
  return cfg;
}

void KvConfig::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : items_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  items_.emplace_back(key, value);
}

const std::string* KvConfig::find(const std::string& key) const {
  for (const auto& [k, v] : items_)
    if (k == key) return &v;
  return nullptr;
}

bool KvConfig::has(const std::string& key) const { return find(key) != nullptr; }

std::string KvConfig::get_string(const std::string& key) const {
  const std::string* v = find(key);
  if (!v) throw ConfigError("config: missing key '" + key + "'");
  return *v;
}

std::string KvConfig::get_string(const std::string& key, const std::string& fallback) const {
  const std::string* v = find(key);
  return v ? *v : fallback;
}

double KvConfig::get_double(const std::string& key) const {
  const std::string text = get_string(key);
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw ConfigError("config: key '" + key + "' is not a number: '" + text + "'");
  return value;
}

double KvConfig::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long KvConfig::get_int(const std::string& key) const {
  const std::string text = get_string(key);
  char* end = nullptr;
  const long value = std::strtol(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0')
    throw ConfigError("config: key '" + key + "' is not an integer: '" + text + "'");
  return value;
}

long KvConfig::get_int(const std::string& key, long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::string KvConfig::canonical_text() const {
  std::vector<std::pair<std::string, std::string>> sorted = items_;
  std::sort(sorted.begin(), sorted.end());
  std::ostringstream os;
  for (const auto& [k, v] : sorted) os << k << "=" << v << "\n";
  return os.str();
}

}  // namespace isaacs
