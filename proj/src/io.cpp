#include "cqed/io.hpp"

#include <cstdio>

#include "cqed/errors.hpp"

namespace cqed {

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path), n_columns_(columns.size()) {
  if (!out_) throw ValidationError("cannot open output file '" + path + "'");
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out_ << columns[i];
    if (i + 1 < columns.size()) out_ << ",";
  }
  out_ << "\n";
}

std::string CsvWriter::format(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.10g", value);
  return buffer;
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != n_columns_) throw ValidationError("csv row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    out_ << format(values[i]);
    if (i + 1 < values.size()) out_ << ",";
  }
  out_ << "\n";
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
  if (values.size() != n_columns_) throw ValidationError("csv row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    out_ << values[i];
    if (i + 1 < values.size()) out_ << ",";
  }
  out_ << "\n";
}

}  // namespace cqed
