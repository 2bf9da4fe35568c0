#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fuzzkey {

/// Rectangular numeric table. An optional column named exactly "target" is
/// split off and kept verbatim; it never influences relevance scores.
struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<std::vector<double>> rows;  ///< M rows of n values
  std::optional<std::vector<std::string>> target;
  std::size_t dropped_rows = 0;

  std::size_t feature_count() const { return feature_names.size(); }
  std::size_t row_count() const { return rows.size(); }
  std::vector<double> column(std::size_t j) const;
};

struct LoadOptions {
  /// Skip rows that contain an empty cell instead of failing.
  bool drop_incomplete_rows = false;
};

/**
 * Parses the CSV dialect: header line, comma separator, LF or CRLF, no
 * quoting. Cells are decimal numbers with optional sign and exponent;
 * surrounding spaces are ignored and blank lines are skipped.
 *
 * Errors carry 1-based line numbers (the header is line 1).
 */
Dataset parse_table(std::string_view text, const LoadOptions& options = {});

/// Throws IoError if the file cannot be read.
Dataset load_table(const std::filesystem::path& path, const LoadOptions& options = {});

struct ColumnRange {
  double min = 0.0;
  double max = 0.0;
  bool constant() const { return min == max; }
};

struct NormalizedDataset {
  Dataset data;                      ///< every value in [0,1]
  std::vector<ColumnRange> ranges;   ///< per-feature range before scaling
};

/// Min-max scaling per feature; constant columns map to 0.5.
NormalizedDataset normalize(const Dataset& d);

}  // namespace fuzzkey
