#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace isaacs {

std::uint64_t fnv1a64(std::string_view text);

// Full-precision decimal rendering (17 significant digits, '.' decimal).
std::string format_double(double value);

// Record of one run: command, configuration items, seed, code version, wall
// time.  The hash covers everything except the wall time so identical inputs
// produce byte-identical artifacts.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> entries;
  std::string version;
  double wall_time_s = 0.0;

  RunManifest();
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
  std::uint64_t hash() const;
  std::string hash_hex() const;
  void write(const std::string& path) const;
};

// Comma-separated artifact with LF line endings.  The first line is a comment
// carrying the manifest hash, the second the header row.
class CsvFile {
 public:
  CsvFile(std::string path, const RunManifest& manifest);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& values);
  void close();  // writes the file; also triggered by the destructor
  ~CsvFile();

 private:
  std::string path_;
  std::string body_;
  bool written_ = false;
};

}  // namespace isaacs
