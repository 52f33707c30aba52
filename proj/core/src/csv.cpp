#include <charconv>
#include <string>
#include <vector>

#include "histoscope/error.hpp"
#include "histoscope/ingest.hpp"

namespace histoscope {
namespace {

std::string_view trim(std::string_view s) {
  const auto blank = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && blank(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char delimiter) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = s.find(delimiter, start);
    parts.push_back(s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (end == std::string_view::npos) return parts;
    start = end + 1;
  }
}

}  // namespace

ImageRecord ingest_csv(std::string_view text, std::string name, BitDepth declared_depth) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<std::vector<std::uint16_t>> rows;
  std::size_t line_number = 0;
  for (const std::string_view raw_line : split(text, '\n')) {
    ++line_number;
    const std::string_view line = trim(raw_line);
    if (line.empty()) continue;

    std::vector<std::uint16_t> row;
    for (const std::string_view raw_field : split(line, ',')) {
      std::string_view field = trim(raw_field);
      if (field.starts_with('+')) field.remove_prefix(1);
      long long value = 0;
      const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      const std::string where = name + ":" + std::to_string(line_number);
      if (field.empty() || end != field.data() + field.size()) {
        throw Error(ErrorCode::NonIntegerValue,
                    where + ": '" + std::string(trim(raw_field)) + "' is not an integer");
      }
      if (ec == std::errc::result_out_of_range || value < 0 || value > static_cast<long long>(max_intensity(declared_depth))) {
        throw Error(ErrorCode::OutOfDomain,
                    where + ": value " + std::string(field) + " is outside [0, " +
                        std::to_string(max_intensity(declared_depth)) + "]");
      }
      row.push_back(static_cast<std::uint16_t>(value));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::RaggedRows,
                  name + ":" + std::to_string(line_number) + ": row has " + std::to_string(row.size()) +
                      " values, expected " + std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyTable, name + ": CSV table is empty");

  const std::size_t columns = rows.front().size();
  std::vector<std::uint16_t> pixels;
  pixels.reserve(columns * rows.size());
  for (const auto& row : rows) pixels.insert(pixels.end(), row.begin(), row.end());

  if (columns == 1) {
    // A single column is a 1D series; store it as one row.
    const auto length = static_cast<std::uint32_t>(pixels.size());
    return ImageRecord(std::move(name), length, 1, declared_depth, std::move(pixels));
  }
  return ImageRecord(std::move(name), static_cast<std::uint32_t>(columns),
                     static_cast<std::uint32_t>(rows.size()), declared_depth, std::move(pixels));
}

}  // namespace histoscope
