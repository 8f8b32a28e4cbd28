#pragma once

#include "fractalq/time_series.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fractalq {

// RFC-4180 table: first row is the header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of column `name`; throws DataError when absent.
  std::size_t column(std::string_view name) const;
  bool has_column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::filesystem::path& path);

/// Quotes a field when it contains a comma, quote or line break.
std::string csv_escape(std::string_view field);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

struct ColumnSpec {
  std::string time_column = "timestamp";
  std::string value_column = "value";
  // Offset assumed for timestamps that carry none (and for epoch seconds).
  int utc_offset_minutes = 0;
};

struct IngestStats {
  std::size_t rows = 0;
  std::size_t missing_values = 0;  // empty / NA / NaN cells
  std::size_t off_grid_rows = 0;   // rows further than 1% of dt from the grid
  std::size_t gap_samples = 0;     // NaN samples in the result
};

/// Reads a (timestamp, value) CSV onto a uniform grid. dt is the (lower)
/// median inter-row gap; grid slots without an on-grid row become NaN (gaps).
/// Throws IoError for unreadable files and DataError for malformed content,
/// non-monotone timestamps or fewer than two rows.
TimeSeries ingest_csv(const std::filesystem::path& path, const ColumnSpec& columns = {},
                      IngestStats* stats = nullptr);
TimeSeries ingest_csv(std::istream& in, const ColumnSpec& columns = {},
                      IngestStats* stats = nullptr);

/// Writes "timestamp,value" rows; gaps are written as empty cells. Series
/// without a wall-clock anchor use epoch seconds starting at 0.
void write_series_csv(std::ostream& out, const TimeSeries& series,
                      const ColumnSpec& columns = {});
void write_series_csv(const std::filesystem::path& path, const TimeSeries& series,
                      const ColumnSpec& columns = {});

} // namespace fractalq
