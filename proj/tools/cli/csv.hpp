#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "snts/series.hpp"

namespace snts::cli {

struct CsvOptions {
  /// Header name or 1-based column number. Empty: the last column.
  std::string value_column;
  /// Header name or 1-based column number of a label column (dates, years).
  /// Empty: a leading column is used as the index when the file has two or
  /// more columns and the value column is not the first.
  std::optional<std::string> index_column;
  bool has_header = true;
};

struct DataFrameIn {
  std::vector<double> values;
  /// One label per row when an index column is present.
  std::vector<std::string> index;
  std::string value_name;
  std::string index_name;
  std::string source;
  std::size_t skipped_blank_lines = 0;

  [[nodiscard]] TimeSeries series() const { return TimeSeries(values); }
  /// Label of 1-based row i, or the row number when there is no index.
  [[nodiscard]] std::string label(std::size_t i) const;
  /// Row (1-based) whose label equals `label`; falls back to a row number.
  [[nodiscard]] std::size_t find_label(const std::string& label) const;
};

/// Splits one CSV record, honoring double-quoted fields with "" escapes.
[[nodiscard]] std::vector<std::string> split_csv_record(const std::string& line);

[[nodiscard]] DataFrameIn parse_csv(const std::string& text, const CsvOptions& opts, const std::string& source);
/// Throws ParseError for a missing file, empty column or a non-numeric cell
/// (message names the data row).
[[nodiscard]] DataFrameIn ingest_csv(const std::string& path, const CsvOptions& opts);

/// Shortest text that parses back to exactly `v`.
[[nodiscard]] std::string format_double(double v);

/// `index,value` CSV with round-trip precision.
[[nodiscard]] std::string series_to_csv(const std::vector<double>& values, const std::string& value_name = "value");

}  // namespace snts::cli
