#include "fuzzkey/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "fuzzkey/errors.hpp"

namespace fuzzkey {

namespace {

constexpr std::string_view kTargetColumn = "target";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_number(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') {
    cell.remove_prefix(1);
    if (cell.empty() || cell.front() == '-' || cell.front() == '+') return std::nullopt;
  }
  // from_chars also accepts "inf"/"nan"; the dialect is decimal only.
  const bool decimal = std::all_of(cell.begin(), cell.end(), [](char ch) {
    return (ch >= '0' && ch <= '9') || ch == '.' || ch == 'e' || ch == 'E' || ch == '-' || ch == '+';
  });
  if (!decimal) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw FormatError("line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::vector<double> Dataset::column(std::size_t j) const {
  std::vector<double> col;
  col.reserve(rows.size());
  for (const auto& r : rows) col.push_back(r[j]);
  return col;
}

Dataset parse_table(std::string_view text, const LoadOptions& options) {
  Dataset d;
  std::size_t line_no = 0;
  std::optional<std::size_t> target_col;
  std::size_t width = 0;
  bool have_header = false;

  while (!text.empty()) {
    const auto eol = text.find('\n');
    auto line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;

    const auto cells = split_commas(line);
    if (!have_header) {
      have_header = true;
      width = cells.size();
      std::set<std::string_view> seen;
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (cells[c].empty()) fail(line_no, "empty column name in header (column " + std::to_string(c + 1) + ")");
        if (!seen.insert(cells[c]).second) fail(line_no, "duplicate column name '" + std::string(cells[c]) + "'");
        if (cells[c] == kTargetColumn) {
          target_col = c;
        } else {
          d.feature_names.emplace_back(cells[c]);
        }
      }
      if (d.feature_names.empty()) fail(line_no, "header has no feature columns");
      if (target_col) d.target.emplace();
      continue;
    }

    if (cells.size() != width) {
      fail(line_no, "ragged row: expected " + std::to_string(width) + " cells, found " + std::to_string(cells.size()));
    }
    const bool incomplete = std::any_of(cells.begin(), cells.end(), [](std::string_view c) { return c.empty(); });
    if (incomplete) {
      if (options.drop_incomplete_rows) {
        ++d.dropped_rows;
        continue;
      }
      const auto c = std::find_if(cells.begin(), cells.end(), [](std::string_view s) { return s.empty(); });
      fail(line_no, "missing value in column " + std::to_string(c - cells.begin() + 1) +
                        " (use --drop-incomplete-rows to skip such rows)");
    }

    std::vector<double> row;
    row.reserve(d.feature_names.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (target_col && c == *target_col) {
        d.target->emplace_back(cells[c]);
        continue;
      }
      const auto v = parse_number(cells[c]);
      if (!v) fail(line_no, "column " + std::to_string(c + 1) + ": not a finite number: '" + std::string(cells[c]) + "'");
      row.push_back(*v);
    }
    d.rows.push_back(std::move(row));
  }

  if (!have_header) throw FormatError("table is empty (no header line)");
  if (d.rows.empty()) throw FormatError("table has no data rows");
  return d;
}

Dataset load_table(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return parse_table(buf.str(), options);
}

NormalizedDataset normalize(const Dataset& d) {
  NormalizedDataset out;
  out.data = d;
  const std::size_t n = d.feature_count();
  out.ranges.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto& range = out.ranges[j];
    range.min = range.max = d.rows.front()[j];
    for (const auto& r : d.rows) {
      range.min = std::min(range.min, r[j]);
      range.max = std::max(range.max, r[j]);
    }
    // Halving is exact and keeps max - min finite for extreme magnitudes.
    const bool wide = !std::isfinite(range.max - range.min);
    const double lo = wide ? range.min / 2 : range.min;
    const double width = wide ? range.max / 2 - lo : range.max - range.min;
    for (auto& r : out.data.rows) {
      const double v = wide ? r[j] / 2 : r[j];
      r[j] = range.constant() ? 0.5 : std::clamp((v - lo) / width, 0.0, 1.0);
    }
  }
  return out;
}

}  // namespace fuzzkey
