#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace evchain {

// A table cell. std::monostate is an empty CSV field and a JSON null.
using Cell = std::variant<std::monostate, std::string, double, std::int64_t>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(const std::string& text);
const char* format_extension(OutputFormat format) noexcept;

std::string to_csv(const Table& table);
// An array of row objects keyed by column name.
std::string to_json(const Table& table);

// Writes `<dir>/<stem>.csv` or `<dir>/<stem>.json`; returns the path.
// Throws IoError when the file cannot be written.
std::filesystem::path write_table(const std::filesystem::path& dir, const std::string& stem, const Table& table,
                                  OutputFormat format);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace evchain
