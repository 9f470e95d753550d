#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace intentsim::harness {

/// Shortest round-trip-exact decimal form of a double.
std::string fmt(double v);
std::string fmt(int64_t v);

/// One-line-header CSV writer with deterministic formatting.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);
  void close();

 private:
  std::ofstream out_;
  size_t columns_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

}  // namespace intentsim::harness
