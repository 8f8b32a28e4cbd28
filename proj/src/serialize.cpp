#include "fractalq/serialize.hpp"

#include "fractalq/csv.hpp"
#include "fractalq/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace fractalq::io {

namespace {

std::string to_text(std::size_t v) { return std::to_string(v); }

double parse_number(const std::string& text, std::size_t row, std::string_view what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw DataError("pairs row " + std::to_string(row) + ": bad " + std::string(what) + " '" + text + "'");
  }
  return v;
}

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json("undefined");
}

} // namespace

void write_spectrum_csv(std::ostream& out, const spectral::Spectrum& spectrum,
                        const spectral::BandAnnotation* bands) {
  if (bands && bands->labels.size() != spectrum.size()) {
    throw UsageError("band annotation does not match the spectrum");
  }
  std::vector<std::string> header{"freq_hz", "period_s", "power"};
  if (bands) header.emplace_back("band");
  write_csv_row(out, header);
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    std::vector<std::string> row{format_double(spectrum.freqs[k]), format_double(1.0 / spectrum.freqs[k]),
                                 format_double(spectrum.power[k])};
    if (bands) row.emplace_back(spectral::to_string(bands->labels[k]));
    write_csv_row(out, row);
  }
}

Json to_json(const spectral::BandFit& fit) {
  Json j;
  j["beta"] = fit.beta;
  j["intercept"] = fit.intercept;
  j["r_squared"] = fit.r_squared;
  j["f_lo_hz"] = fit.f_lo;
  j["f_hi_hz"] = fit.f_hi;
  j["period_long_s"] = 1.0 / fit.f_lo;
  j["period_short_s"] = 1.0 / fit.f_hi;
  j["n_bins"] = fit.n_bins;
  j["dropped_zero_bins"] = fit.dropped_zero_bins;
  j["method"] = fit.method == spectral::FitMethod::lad ? "lad" : "ols";
  return j;
}

Json to_json(const spectral::BandAnnotation& bands) {
  Json j;
  j["low_frequency_bins"] = bands.count(spectral::Band::low_frequency);
  j["linear_decay_bins"] = bands.count(spectral::Band::linear_decay);
  j["high_frequency_bins"] = bands.count(spectral::Band::high_frequency);
  j["linear_f_lo_hz"] = bands.linear.f_lo;
  j["linear_f_hi_hz"] = bands.linear.f_hi;
  return j;
}

void write_curve_csv(std::ostream& out, const dfa::FluctuationCurve& curve) {
  write_csv_row(out, {"scale", "fluctuation", "segments"});
  for (std::size_t i = 0; i < curve.scales.size(); ++i) {
    write_csv_row(out, {to_text(curve.scales[i]), format_double(curve.fluctuation[i]),
                        to_text(curve.segments[i])});
  }
}

Json to_json(const dfa::FluctuationCurve& curve) {
  Json j;
  if (curve.fit) {
    j["alpha"] = curve.fit->alpha;
    j["intercept_log2"] = curve.fit->intercept;
    j["r_squared"] = curve.fit->r_squared;
  }
  j["detrend_order"] = curve.detrend_order;
  j["n_scales"] = curve.scales.size();
  if (!curve.scales.empty()) {
    j["min_scale"] = curve.scales.front();
    j["max_scale"] = curve.scales.back();
  }
  return j;
}

void write_trace_csv(std::ostream& out, const dfa::ScalingTrace& trace, std::span<const std::size_t> q) {
  if (!q.empty() && q.size() != trace.entries.size()) {
    throw UsageError("Q trace must have one value per alpha(t) entry");
  }
  const bool calendar = !trace.entries.empty() && trace.entries.front().day_type.has_value();
  std::vector<std::string> header{"timestamp", "start_index", "alpha", "r_squared"};
  if (calendar) header.emplace_back("day_type");
  if (!q.empty()) header.emplace_back("q");
  write_csv_row(out, header);
  for (std::size_t i = 0; i < trace.entries.size(); ++i) {
    const auto& e = trace.entries[i];
    std::vector<std::string> row{e.start_time ? format_timestamp(*e.start_time) : std::string(),
                                 to_text(e.start_index), format_double(e.alpha),
                                 format_double(e.r_squared)};
    if (calendar) row.emplace_back(e.day_type ? std::string(to_string(*e.day_type)) : std::string());
    if (!q.empty()) row.push_back(to_text(q[i]));
    write_csv_row(out, row);
  }
}

Json to_json(const dfa::ScalingTrace& trace) {
  Json j;
  j["window_len"] = trace.window_len;
  j["step"] = trace.step;
  j["candidate_windows"] = trace.candidate_windows;
  j["entries"] = trace.entries.size();
  Json skipped = Json::array();
  for (const auto& s : trace.skipped) {
    skipped.push_back({{"start_index", s.start_index}, {"reason", s.reason}});
  }
  j["skipped"] = std::move(skipped);
  return j;
}

void write_pairs_csv(std::ostream& out, const traffic::DailyAnalysis& daily) {
  write_csv_row(out, {"date", "day_type", "alpha", "q"});
  for (const auto& p : daily.pairs) {
    write_csv_row(out, {p.date, std::string(to_string(p.window.day_type.value_or(DayType::weekday))),
                        format_double(p.alpha), to_text(p.q)});
  }
}

std::vector<traffic::CorrelationPair> read_pairs_csv(std::istream& in) {
  const CsvTable table = read_csv(in);
  const std::size_t c_day = table.column("day_type");
  const std::size_t c_alpha = table.column("alpha");
  const std::size_t c_q = table.column("q");
  const bool has_date = table.has_column("date");
  const std::size_t c_date = has_date ? table.column("date") : 0;
  const bool has_start = table.has_column("start_index");
  const std::size_t c_start = has_start ? table.column("start_index") : 0;

  std::vector<traffic::CorrelationPair> pairs;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = r + 2;
    traffic::CorrelationPair p;
    const auto dt = parse_day_type(row[c_day]);
    if (!dt) throw DataError("pairs row " + std::to_string(line) + ": bad day_type '" + row[c_day] + "'");
    p.day_type = *dt;
    p.alpha = parse_number(row[c_alpha], line, "alpha");
    p.q = parse_number(row[c_q], line, "q");
    if (has_date) p.date = row[c_date];
    p.window_start = has_start ? static_cast<std::size_t>(parse_number(row[c_start], line, "start_index")) : r;
    pairs.push_back(std::move(p));
  }
  return pairs;
}

std::vector<traffic::CorrelationPair> read_pairs_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_pairs_csv(in);
}

Json to_json(const traffic::CorrelationReport& report) {
  Json j;
  j["r_all"] = optional_number(report.r_all);
  j["r_weekday"] = optional_number(report.r_weekday);
  j["r_weekend"] = optional_number(report.r_weekend);
  j["n_all"] = report.n_all;
  j["n_weekday"] = report.n_weekday;
  j["n_weekend"] = report.n_weekend;
  Json pairs = Json::array();
  for (const auto& p : report.pairs) {
    Json e;
    e["window_start"] = p.window_start;
    if (!p.date.empty()) e["date"] = p.date;
    e["day_type"] = to_string(p.day_type);
    e["alpha"] = p.alpha;
    e["q"] = p.q;
    pairs.push_back(std::move(e));
  }
  j["pairs"] = std::move(pairs);
  return j;
}

Json to_json(const traffic::WkCheck& check) {
  Json j;
  j["beta"] = check.beta;
  j["alpha"] = check.alpha;
  j["beta_tilde"] = check.beta_tilde;
  j["abs_diff"] = check.abs_diff;
  j["rel_diff_pct"] = optional_number(check.rel_diff_pct);
  return j;
}

namespace {

Json stats_json(const traffic::DayTypeStats& s) {
  Json j;
  j["n"] = s.n;
  if (s.n == 0) return j;
  j["alpha_mean"] = s.alpha_mean;
  j["alpha_std"] = s.n > 1 ? Json(s.alpha_std) : Json("undefined");
  j["alpha_min"] = s.alpha_min;
  j["alpha_max"] = s.alpha_max;
  if (s.q_mean) j["q_mean"] = *s.q_mean;
  return j;
}

} // namespace

Json to_json(const traffic::TraceSummary& summary) {
  Json j;
  j["all"] = stats_json(summary.all);
  j["weekday"] = stats_json(summary.weekday);
  j["weekend"] = stats_json(summary.weekend);
  j["fraction_alpha_above_1"] = summary.fraction_above_one;
  j["brownian_fraction"] = summary.brownian_fraction;
  return j;
}

Json to_json(const traffic::DailyAnalysis& daily) {
  Json j;
  j["pairs"] = daily.pairs.size();
  Json skipped = Json::array();
  for (const auto& s : daily.skipped) {
    skipped.push_back({{"date", s.date}, {"start_index", s.start_index}, {"reason", s.reason}});
  }
  j["skipped"] = std::move(skipped);
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

void write_json(const std::filesystem::path& path, const Json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

} // namespace fractalq::io
