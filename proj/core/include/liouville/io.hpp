#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace liouville::io {

using nlohmann::json;

// Formats with 12 significant digits; all emitted numbers go through this so
// reruns are byte-identical.
std::string g12(double x);
double round12(double x);
json jnum(double x);  // number holding the rounded value

// RFC 4180 CSV: CRLF rows, mandatory header, '.' decimal point.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();
  void header(const std::vector<std::string>& cols);
  void row(const std::vector<std::string>& cells);
  void row_numeric(const std::vector<double>& cells);
  const std::string& path() const { return path_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string path_;
  size_t n_cols_ = 0;
};

struct Manifest {
  std::string command;
  json resolved_config;
  std::vector<std::string> files;
  double wall_time_s = 0.0;

  void add(const std::string& file) { files.push_back(file); }
  void save(const std::string& path) const;
};

std::string library_version();

void ensure_directory(const std::string& path);

}  // namespace liouville::io
