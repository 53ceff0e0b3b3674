#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace evchain::csv {

struct Row {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

// Comma-separated, header row first, optional double-quoted fields with ""
// escapes. Blank lines are skipped. The header must match `expected` exactly.
class Reader {
 public:
  Reader(const std::filesystem::path& path, std::vector<std::string> expected_header);

  const std::vector<Row>& rows() const noexcept { return rows_; }
  const std::string& file() const noexcept { return file_; }

  double number(const Row& row, std::size_t column) const;
  const std::string& text(const Row& row, std::size_t column, bool allow_empty = false) const;

  [[noreturn]] void fail(const Row& row, const std::string& reason) const;

 private:
  std::string file_;
  std::vector<std::string> header_;
  std::vector<Row> rows_;
};

std::vector<std::string> split_line(std::string_view line);

// Locale-independent shortest round-trip formatting.
std::string format_number(double value);

std::string escape_field(std::string_view field);

}  // namespace evchain::csv
