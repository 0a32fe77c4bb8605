#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace cqed {

inline constexpr const char* kToolVersion = "1.0.0";

// FNV-1a 64-bit hash; fingerprints the shipped default parameters
std::uint64_t fnv1a64(const std::string& text);

// CSV writer with fixed formatting so identical runs give identical bytes
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);

  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& values);
  static std::string format(double value);

 private:
  std::ofstream out_;
  std::size_t n_columns_;
};

}  // namespace cqed
