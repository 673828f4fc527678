#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tripod {

/// A data cell; empty means "undefined" and is written as an empty field.
using Cell = std::optional<double>;

/// 12 significant digits. Non-finite values throw InternalConsistencyError.
std::string format_cell(double v);

/// Numeric CSV with a leading '#' comment block.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::string_view comment_block, std::vector<std::string> header);

  void row(std::span<const double> values);
  void row(std::span<const Cell> values);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t width_;
};

struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  std::size_t column(std::string_view name) const;
};

/// Reads what CsvWriter writes. Throws ValidationError on malformed input.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

/// Prefixes every line of `block` with "# ".
std::string comment_block(std::string_view block);

}  // namespace tripod
