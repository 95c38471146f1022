#include "monocomp/io/csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace monocomp::io {

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
  if (!out_) throw std::runtime_error("csv: cannot open " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i)
    out_ << header[i] << (i + 1 < header.size() ? "," : "\n");
}

CsvWriter::~CsvWriter() {
  if (open_) close();
}

std::string CsvWriter::format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) abort_with("column count mismatch");
  for (double v : values)
    if (!std::isfinite(v)) abort_with("non-finite value");
  for (std::size_t i = 0; i < values.size(); ++i)
    out_ << format(values[i]) << (i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
  if (values.size() != columns_) abort_with("column count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i)
    out_ << values[i] << (i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::close() {
  out_.close();
  open_ = false;
}

void CsvWriter::abort_with(const std::string& reason) {
  out_.close();
  open_ = false;
  std::filesystem::remove(path_);
  std::ofstream err(path_.string() + ".error", std::ios::trunc);
  err << reason << "\n";
  throw std::runtime_error("csv " + path_.filename().string() + ": " + reason);
}

}  // namespace monocomp::io
