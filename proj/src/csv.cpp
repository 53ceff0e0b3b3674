#include "evchain/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "evchain/errors.hpp"

namespace evchain::csv {

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  out.push_back(std::move(field));
  return out;
}

Reader::Reader(const std::filesystem::path& path, std::vector<std::string> expected_header)
    : file_(path.filename().string()), header_(std::move(expected_header)) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError("cannot open " + path.string());

  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto fields = split_line(line);
    if (!have_header) {
      if (fields != header_) {
        std::string want;
        for (std::size_t i = 0; i < header_.size(); ++i) want += (i ? "," : "") + header_[i];
        throw ParseError(file_, line_no, "header must be exactly '" + want + "'");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != header_.size()) {
      throw ParseError(file_, line_no,
                       "expected " + std::to_string(header_.size()) + " fields, found " +
                           std::to_string(fields.size()));
    }
    rows_.push_back({line_no, std::move(fields)});
  }
  if (!have_header) throw ParseError(file_, line_no, "file is empty, header row missing");
}

double Reader::number(const Row& row, std::size_t column) const {
  const auto& s = row.fields.at(column);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    fail(row, "column '" + header_.at(column) + "': '" + s + "' is not a finite number");
  }
  return value;
}

const std::string& Reader::text(const Row& row, std::size_t column, bool allow_empty) const {
  const auto& s = row.fields.at(column);
  if (!allow_empty && s.empty()) fail(row, "column '" + header_.at(column) + "' must not be empty");
  return s;
}

void Reader::fail(const Row& row, const std::string& reason) const {
  throw ParseError(file_, row.line, reason);
}

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string escape_field(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace evchain::csv
