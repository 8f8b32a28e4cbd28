#include "fractalq/csv.hpp"

#include "fractalq/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>

namespace fractalq {

namespace {

bool is_missing_token(std::string_view s) {
  return s.empty() || s == "NA" || s == "NaN" || s == "nan" || s == "null" || s == "NULL";
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_value(std::string_view text, std::size_t row) {
  const char* first = text.data() + (!text.empty() && text.front() == '+' ? 1 : 0);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw DataError("row " + std::to_string(row) + ": cannot parse value '" + std::string(text) + "'");
  }
  if (std::isinf(v)) throw DataError("row " + std::to_string(row) + ": infinite value");
  return v;
}

} // namespace

std::size_t CsvTable::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw DataError("CSV has no column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - header.begin());
}

bool CsvTable::has_column(std::string_view name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

CsvTable read_csv(std::istream& in) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw IoError("error while reading CSV stream");
  if (text.rfind("\xEF\xBB\xBF", 0) == 0) text.erase(0, 3);

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;

  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    const bool blank = record.size() == 1 && record[0].empty() && !field_started;
    if (!blank) records.push_back(std::move(record));
    record.clear();
    field_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
    case '"':
      in_quotes = true;
      field_started = true;
      break;
    case ',':
      record.push_back(std::move(field));
      field.clear();
      field_started = true;
      break;
    case '\r':
      if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_record();
      break;
    case '\n':
      end_record();
      break;
    default:
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) throw DataError("CSV ends inside a quoted field");
  if (field_started || !field.empty() || !record.empty()) end_record();

  if (records.empty()) throw DataError("CSV is empty (header row required)");
  CsvTable table;
  table.header = std::move(records.front());
  for (auto& h : table.header) h = std::string(trim(h));
  table.rows.assign(std::make_move_iterator(records.begin() + 1),
                    std::make_move_iterator(records.end()));
  return table;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_csv(in);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(fields[i]);
  }
  out << '\n';
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

TimeSeries ingest_csv(std::istream& in, const ColumnSpec& columns, IngestStats* stats) {
  const CsvTable table = read_csv(in);
  const std::size_t tcol = table.column(columns.time_column);
  const std::size_t vcol = table.column(columns.value_column);

  IngestStats local;
  std::vector<WallClock> times;
  std::vector<double> values;
  times.reserve(table.rows.size());
  values.reserve(table.rows.size());

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = r + 2;
    if (row.size() <= std::max(tcol, vcol)) {
      throw DataError("row " + std::to_string(line) + " has too few fields");
    }
    times.push_back(parse_timestamp(row[tcol], columns.utc_offset_minutes));
    const std::string_view cell = trim(row[vcol]);
    if (is_missing_token(cell)) {
      values.push_back(std::numeric_limits<double>::quiet_NaN());
      ++local.missing_values;
    } else {
      values.push_back(parse_value(cell, line));
    }
    if (times.size() >= 2 && times.back().utc_ms <= times[times.size() - 2].utc_ms) {
      throw DataError("timestamps are not strictly increasing at row " + std::to_string(line));
    }
  }
  local.rows = times.size();
  if (times.size() < 2) throw DataError("CSV needs at least 2 data rows");

  std::vector<double> diffs;
  diffs.reserve(times.size() - 1);
  for (std::size_t i = 1; i < times.size(); ++i) {
    diffs.push_back(static_cast<double>(times[i].utc_ms - times[i - 1].utc_ms));
  }
  std::sort(diffs.begin(), diffs.end());
  // Lower median: missing rows only ever lengthen a gap.
  const double dt_ms = diffs[(diffs.size() - 1) / 2];
  if (!(dt_ms > 0.0)) throw DataError("inferred sampling interval is not positive");

  const std::int64_t origin = times.front().utc_ms;
  std::vector<std::int64_t> slot(times.size(), -1);
  std::int64_t last_slot = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double offset = static_cast<double>(times[i].utc_ms - origin);
    const auto p = static_cast<std::int64_t>(std::llround(offset / dt_ms));
    if (std::abs(offset - static_cast<double>(p) * dt_ms) > 0.01 * dt_ms) {
      ++local.off_grid_rows;
      continue;
    }
    slot[i] = p;
    last_slot = std::max(last_slot, p);
  }

  std::vector<double> grid(static_cast<std::size_t>(last_slot) + 1,
                           std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (slot[i] >= 0) grid[static_cast<std::size_t>(slot[i])] = values[i];
  }

  TimeSeries series(std::move(grid), dt_ms / 1000.0, times.front(), columns.value_column);
  local.gap_samples = series.missing_count();
  if (stats) *stats = local;
  return series;
}

TimeSeries ingest_csv(const std::filesystem::path& path, const ColumnSpec& columns,
                      IngestStats* stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  TimeSeries series = ingest_csv(in, columns, stats);
  return series.with_label(path.stem().string());
}

void write_series_csv(std::ostream& out, const TimeSeries& series, const ColumnSpec& columns) {
  write_csv_row(out, {columns.time_column, columns.value_column});
  const auto values = series.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::string stamp = series.t0()
                                  ? format_timestamp(series.t0()->at_index(i, series.dt_seconds()))
                                  : format_double(static_cast<double>(i) * series.dt_seconds());
    out << stamp << ',' << (std::isnan(values[i]) ? std::string() : format_double(values[i]))
        << '\n';
  }
}

void write_series_csv(const std::filesystem::path& path, const TimeSeries& series,
                      const ColumnSpec& columns) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_series_csv(out, series, columns);
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

} // namespace fractalq
