#include "output.hpp"

#include <cmath>
#include <json.hpp>
#include <stdexcept>

#include "fucik/numfmt.hpp"

namespace fucik::cli {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

RecordWriter::RecordWriter(std::ostream& os, Format format, std::vector<std::string> columns)
    : os_(os), format_(format), columns_(std::move(columns)) {
  if (format_ != Format::Csv) return;
  for (std::size_t i = 0; i < columns_.size(); ++i) os_ << (i ? "," : "") << csv_escape(columns_[i]);
  os_ << '\n';
}

void RecordWriter::write(const std::vector<Cell>& cells) {
  if (cells.size() != columns_.size()) throw std::logic_error("record width does not match the header");
  if (format_ == Format::Csv) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os_ << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              os_ << format_number(v);
            } else if constexpr (std::is_same_v<T, std::string>) {
              os_ << csv_escape(v);
            } else {
              os_ << v;
            }
          },
          cells[i]);
    }
    os_ << '\n';
    return;
  }
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            obj[columns_[i]] = std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
          } else {
            obj[columns_[i]] = v;
          }
        },
        cells[i]);
  }
  os_ << obj.dump() << '\n';
}

}  // namespace fucik::cli
