#include "liouville/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "liouville/errors.hpp"

namespace liouville::io {

std::string g12(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", x);
  return buf;
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(g12(x).c_str(), nullptr);
}

json jnum(double x) { return json(round12(x)); }

struct CsvWriter::Impl {
  std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path) : impl_(new Impl), path_(path) {
  impl_->out.open(path, std::ios::binary);
  if (!impl_->out) throw Error("cannot open " + path + " for writing");
}

CsvWriter::~CsvWriter() = default;

void CsvWriter::header(const std::vector<std::string>& cols) {
  n_cols_ = cols.size();
  row(cols);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (n_cols_ != 0 && cells.size() != n_cols_ && cells.size() != 0)
    throw Error("csv row width mismatch in " + path_);
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) impl_->out << ',';
    const std::string& c = cells[i];
    if (c.find_first_of(",\"\r\n") != std::string::npos) {
      impl_->out << '"';
      for (char ch : c) {
        if (ch == '"') impl_->out << '"';
        impl_->out << ch;
      }
      impl_->out << '"';
    } else {
      impl_->out << c;
    }
  }
  impl_->out << "\r\n";
}

void CsvWriter::row_numeric(const std::vector<double>& cells) {
  std::vector<std::string> s;
  s.reserve(cells.size());
  for (double v : cells) s.push_back(g12(v));
  row(s);
}

void Manifest::save(const std::string& path) const {
  json j;
  j["command"] = command;
  j["resolved_config"] = resolved_config;
  j["files"] = files;
  j["wall_time_s"] = wall_time_s;
  j["versions"] = {{"liouville", library_version()},
                   {"compiler", __VERSION__}};
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << j.dump(2) << "\n";
}

std::string library_version() { return "0.1.0"; }

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw Error("cannot create output directory " + path + ": " + ec.message());
}

}  // namespace liouville::io
