#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace ampc {

// Numeric CSV with '#' comment lines. Values are printed as %.17g so a
// read-back reproduces every double bit-exactly.
class CsvWriter {
 public:
  // With atomic=true the data goes to "<path>.tmp" and is renamed into place
  // by close(); a writer destroyed without close() leaves no artifact.
  CsvWriter(const std::string& path, const std::vector<std::string>& columns,
            const std::vector<std::string>& comments, bool atomic = false);
  ~CsvWriter();

  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void write_comment(const std::string& text);
  void write_row(const std::vector<double>& values);
  void close();

 private:
  std::string path_;
  std::string write_path_;
  std::FILE* f_ = nullptr;
  std::size_t columns_ = 0;
  bool atomic_ = false;
  bool closed_ = false;
};

struct CsvFile {
  std::vector<std::string> comments;  // without the leading '#', trimmed
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // -1 when absent
  std::vector<double> column_values(const std::string& name) const;
};

CsvFile read_csv(const std::string& path);

}  // namespace ampc
