#include "evchain/report.hpp"

#include <fstream>

#include "json.hpp"

#include "evchain/csv.hpp"
#include "evchain/errors.hpp"

namespace evchain {

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw ArgumentError("table row width does not match its columns");
  rows.push_back(std::move(row));
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw ArgumentError("unknown output format '" + text + "' (expected csv or json)");
}

const char* format_extension(OutputFormat format) noexcept { return format == OutputFormat::Csv ? ".csv" : ".json"; }

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += csv::escape_field(table.columns[c]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
              out += csv::escape_field(v);
            } else if constexpr (std::is_same_v<T, double>) {
              out += csv::format_number(v);
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
              out += std::to_string(v);
            }
          },
          row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
              obj[table.columns[c]] = nullptr;
            } else {
              obj[table.columns[c]] = v;
            }
          },
          row[c]);
    }
    rows.push_back(std::move(obj));
  }
  return rows.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::filesystem::path write_table(const std::filesystem::path& dir, const std::string& stem, const Table& table,
                                  OutputFormat format) {
  auto path = dir / (stem + format_extension(format));
  write_text(path, format == OutputFormat::Csv ? to_csv(table) : to_json(table));
  return path;
}

}  // namespace evchain
