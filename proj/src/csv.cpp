#include "ampc/csv.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ampc {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns,
                     const std::vector<std::string>& comments, bool atomic)
    : path_(path), atomic_(atomic) {
  write_path_ = atomic ? path + ".tmp" : path;
  f_ = std::fopen(write_path_.c_str(), "w");
  if (!f_) throw std::runtime_error("cannot open for writing: " + write_path_);
  for (const auto& c : comments) write_comment(c);
  for (std::size_t i = 0; i < columns.size(); ++i)
    std::fprintf(f_, "%s%s", i ? "," : "", columns[i].c_str());
  std::fprintf(f_, "\n");
  columns_ = columns.size();
}

CsvWriter::~CsvWriter() {
  if (closed_) return;
  if (f_) std::fclose(f_);
  if (atomic_) std::remove(write_path_.c_str());
}

void CsvWriter::write_comment(const std::string& text) {
  std::fprintf(f_, "# %s\n", text.c_str());
}

void CsvWriter::write_row(const std::vector<double>& values) {
  if (values.size() != columns_)
    throw std::runtime_error("row width " + std::to_string(values.size()) +
                             " does not match header width " + std::to_string(columns_));
  for (std::size_t i = 0; i < values.size(); ++i)
    std::fprintf(f_, "%s%.17g", i ? "," : "", values[i]);
  std::fprintf(f_, "\n");
}

void CsvWriter::close() {
  if (closed_) return;
  std::fclose(f_);
  f_ = nullptr;
  if (atomic_ && std::rename(write_path_.c_str(), path_.c_str()) != 0)
    throw std::runtime_error("cannot move " + write_path_ + " to " + path_);
  closed_ = true;
}

int CsvFile::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  return -1;
}

std::vector<double> CsvFile::column_values(const std::string& name) const {
  const int c = column(name);
  if (c < 0) throw std::runtime_error("no such column: " + name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[static_cast<std::size_t>(c)]);
  return out;
}

CsvFile read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  CsvFile out;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::size_t b = 1;
      while (b < line.size() && line[b] == ' ') ++b;
      out.comments.push_back(line.substr(b));
      continue;
    }
    std::istringstream ls(line);
    std::string cell;
    if (!have_header) {
      while (std::getline(ls, cell, ',')) out.columns.push_back(cell);
      have_header = true;
      continue;
    }
    std::vector<double> row;
    row.reserve(out.columns.size());
    while (std::getline(ls, cell, ',')) {
      char* end = nullptr;
      row.push_back(std::strtod(cell.c_str(), &end));
      if (end == cell.c_str())
        throw std::runtime_error(path + ": non-numeric cell '" + cell + "'");
    }
    if (row.size() != out.columns.size())
      throw std::runtime_error(path + ": ragged row with " + std::to_string(row.size()) +
                               " cells");
    out.rows.push_back(std::move(row));
  }
  if (!have_header) throw std::runtime_error(path + ": missing header row");
  return out;
}

}  // namespace ampc
