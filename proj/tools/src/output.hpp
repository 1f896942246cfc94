#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace fucik::cli {

enum class Format { Csv, Json };

using Cell = std::variant<std::int64_t, double, std::string>;

/// Tabular records as CSV (header first) or JSON Lines (one object per
/// record, keys from the column names). Doubles print in shortest
/// round-trip form; non-finite values become `nan` in CSV and null in JSON.
class RecordWriter {
 public:
  RecordWriter(std::ostream& os, Format format, std::vector<std::string> columns);

  void write(const std::vector<Cell>& cells);

 private:
  std::ostream& os_;
  Format format_;
  std::vector<std::string> columns_;
};

std::string csv_escape(const std::string& field);

}  // namespace fucik::cli
