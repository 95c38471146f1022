#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace monocomp::io {

/// CSV writer: comma separator, '.' decimal, %.17g doubles so identical runs
/// produce identical bytes. Refuses to write non-finite values; on failure
/// the partial file is removed and a .error sidecar records the reason.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  ~CsvWriter();

  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& values);
  void close();

  static std::string format(double v);

 private:
  void abort_with(const std::string& reason);
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
  bool open_ = true;
};

}  // namespace monocomp::io
