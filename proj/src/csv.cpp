#include "tripod/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tripod/errors.hpp"

namespace tripod {

std::string format_cell(double v) {
  if (!std::isfinite(v)) throw InternalConsistencyError("refusing to write a non-finite value to CSV");
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::string comment_block(std::string_view block) {
  std::string out;
  while (!block.empty()) {
    const auto nl = block.find('\n');
    out += "# ";
    out += block.substr(0, nl);
    out += '\n';
    if (nl == std::string_view::npos) break;
    block.remove_prefix(nl + 1);
  }
  return out;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::string_view comments, std::vector<std::string> header)
    : path_(path), out_(path, std::ios::binary), width_(header.size()) {
  if (!out_) throw ValidationError("cannot write " + path.string());
  out_ << comment_block(comments);
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
  if (values.size() != width_) throw InternalConsistencyError("CSV row width mismatch in " + path_.string());
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_cell(values[i]);
  out_ << '\n';
}

void CsvWriter::row(std::span<const Cell> values) {
  if (values.size() != width_) throw InternalConsistencyError("CSV row width mismatch in " + path_.string());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    if (values[i]) out_ << format_cell(*values[i]);
  }
  out_ << '\n';
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw ValidationError("failed writing " + path_.string());
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ValidationError("no column '" + std::string(name) + "'");
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto comma = line.find(',');
    out.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) return out;
    line.remove_prefix(comma + 1);
  }
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
  CsvTable t;
  bool have_header = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      line.remove_prefix(1);
      if (!line.empty() && line.front() == ' ') line.remove_prefix(1);
      t.comments.emplace_back(line);
      continue;
    }
    const auto fields = split(line);
    if (!have_header) {
      for (auto f : fields) t.header.emplace_back(f);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw ValidationError("CSV line " + std::to_string(line_no) + ": expected " + std::to_string(t.header.size()) +
                            " fields");
    }
    std::vector<Cell> row;
    for (auto f : fields) {
      if (f.empty()) {
        row.emplace_back();
        continue;
      }
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc{} || ptr != f.data() + f.size() || !std::isfinite(v)) {
        throw ValidationError("CSV line " + std::to_string(line_no) + ": bad number '" + std::string(f) + "'");
      }
      row.emplace_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw ValidationError("CSV has no header");
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

}  // namespace tripod
