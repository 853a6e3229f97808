#include "isaacslab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "isaacslab/types.hpp"

namespace isaacs {

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const char ch : text) {
    hash ^= static_cast<unsigned char>(ch);
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

RunManifest::RunManifest() : version(ISAACSLAB_VERSION) {}

void RunManifest::add(const std::string& key, const std::string& value) {
  entries.emplace_back(key, value);
}

void RunManifest::add(const std::string& key, double value) {
  entries.emplace_back(key, format_double(value));
}

std::uint64_t RunManifest::hash() const {
  std::ostringstream os;
  os << "command=" << command << "\nversion=" << version << "\n";
  for (const auto& [k, v] : entries) os << k << "=" << v << "\n";
  return fnv1a64(os.str());
}

std::string RunManifest::hash_hex() const {
  char buffer[20];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash()));
  return buffer;
}

void RunManifest::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("manifest: cannot write '" + path + "'");
  out << "manifest_hash = " << hash_hex() << "\n";
  out << "command = " << command << "\n";
  out << "version = " << version << "\n";
  for (const auto& [k, v] : entries) out << k << " = " << v << "\n";
  out << "wall_time_s = " << format_double(wall_time_s) << "\n";
}

CsvFile::CsvFile(std::string path, const RunManifest& manifest) : path_(std::move(path)) {
  body_ = "# manifest " + manifest.hash_hex() + "\n";
}

void CsvFile::header(const std::vector<std::string>& columns) {
  for (size_t i = 0; i < columns.size(); ++i) {
    if (i) body_ += ',';
    body_ += columns[i];
  }
  body_ += '\n';
}

void CsvFile::row(const std::vector<double>& values) {
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) body_ += ',';
    body_ += format_double(values[i]);
  }
  body_ += '\n';
}

void CsvFile::row_mixed(const std::vector<std::string>& values) {
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) body_ += ',';
    body_ += values[i];
  }
  body_ += '\n';
}

void CsvFile::close() {
  if (written_) return;
  std::ofstream out(path_, std::ios::binary);
  if (!out) throw InputError("csv: cannot write '" + path_ + "'");
  out << body_;
  written_ = true;
}

CsvFile::~CsvFile() {
  try {
    close();
  } catch (...) {
  }
}

}  // namespace isaacs
