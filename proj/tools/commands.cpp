#include "commands.hpp"

#include "params.hpp"

#include "fractalq/csv.hpp"
#include "fractalq/error.hpp"
#include "fractalq/preprocess.hpp"
#include "fractalq/serialize.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace fractalq::cli {

namespace {

using io::Json;

struct FileResult {
  std::vector<std::string> outputs;
  std::string summary;
};

struct Loaded {
  TimeSeries raw;
  SegmentedSeries series;
  Json meta;
};

std::string fmt(double v, int precision = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Value-only files carry no clock; the grid comes from --dt.
TimeSeries read_values(const fs::path& path, const InputParams& p) {
  const CsvTable table = read_csv_file(path);
  const std::size_t col = table.column(p.columns.value_column);
  std::vector<double> values;
  values.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string line = std::to_string(r + 2);
    if (row.size() <= col) throw DataError("row " + line + " has too few fields");
    const std::string_view cell = trim(row[col]);
    if (cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan" || cell == "null") {
      values.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size() || !std::isfinite(v)) {
      throw DataError("row " + line + ": bad value '" + std::string(cell) + "'");
    }
    values.push_back(v);
  }
  if (values.size() < 2) throw DataError("CSV needs at least 2 data rows");
  return TimeSeries(std::move(values), p.dt_seconds, std::nullopt, path.stem().string());
}

Loaded load(const fs::path& path, const InputParams& p) {
  IngestStats stats;
  TimeSeries x = p.timestamps ? ingest_csv(path, p.columns, &stats) : read_values(path, p);
  if (!p.timestamps) {
    stats.rows = x.size();
    stats.missing_values = x.missing_count();
    stats.gap_samples = x.missing_count();
  }

  std::size_t replaced = 0;
  if (p.hampel) {
    TimeSeries filtered = hampel_filter(x, p.hampel_opts);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!std::isnan(x[i]) && x[i] != filtered[i]) ++replaced;
    }
    x = std::move(filtered);
  }
  SegmentedSeries seg = fill_gaps(x, p.max_gap);

  Json meta;
  meta["file"] = path.filename().generic_string();
  meta["rows"] = stats.rows;
  meta["samples"] = x.size();
  meta["dt_seconds"] = x.dt_seconds();
  if (x.t0()) meta["t0"] = format_timestamp(*x.t0());
  meta["missing_values"] = stats.missing_values;
  meta["off_grid_rows"] = stats.off_grid_rows;
  meta["gap_samples"] = stats.gap_samples;
  if (p.hampel) meta["hampel_replaced"] = replaced;
  Json segments = Json::array();
  for (const auto& s : seg.segments()) segments.push_back({{"offset", s.offset}, {"length", s.series.size()}});
  meta["segments"] = std::move(segments);
  return {std::move(x), std::move(seg), std::move(meta)};
}

// Whole-record analyses run on the longest contiguous piece.
const SegmentedSeries::Segment& analysed_segment(const Loaded& in, Json& meta) {
  if (in.series.empty()) throw DataError("no usable samples after gap handling");
  const auto& s = in.series.longest();
  meta["analysed"] = {{"offset", s.offset}, {"length", s.series.size()}};
  return s;
}

bool want_csv(OutputFormat f) { return f != OutputFormat::json; }
bool want_json(OutputFormat f) { return f != OutputFormat::csv; }

template <class Writer>
void write_csv_file(const fs::path& path, Writer&& writer) {
  std::ostringstream os;
  writer(os);
  io::write_text(path, os.str());
}

std::string stem_of(const fs::path& input) { return input.stem().string(); }

// ---- per-file commands -----------------------------------------------------

FileResult run_psd(const fs::path& input, const fs::path& out, const PsdParams& p) {
  const Loaded in = load(input, p.input);
  Json doc;
  doc["input"] = in.meta;
  const auto& seg = analysed_segment(in, doc["input"]);
  const TimeSeries& x = seg.series;

  const spectral::Spectrum spec =
      p.welch_segment ? spectral::welch(x, p.welch_segment) : spectral::periodogram(x);
  const auto bands = spectral::segment_bands(spec, x.duration_seconds(), p.bands);
  const auto fit = spectral::fit_beta(spec, bands.linear, p.method);

  doc["spectrum"] = {{"estimator", p.welch_segment ? "welch" : "periodogram"},
                     {"bins", spec.freqs.size()}};
  if (p.welch_segment) doc["spectrum"]["segment_length"] = p.welch_segment;
  doc["bands"] = io::to_json(bands);
  doc["fit"] = io::to_json(fit);

  FileResult r;
  const std::string stem = stem_of(input);
  if (want_csv(p.format)) {
    r.outputs.push_back(stem + ".spectrum.csv");
    write_csv_file(out / r.outputs.back(), [&](std::ostream& os) { io::write_spectrum_csv(os, spec, &bands); });
  }
  if (want_json(p.format)) {
    r.outputs.push_back(stem + ".psd.json");
    io::write_json(out / r.outputs.back(), doc);
  }
  r.summary = "beta=" + fmt(fit.beta) + " r2=" + fmt(fit.r_squared) + " bins=" + std::to_string(fit.n_bins);
  return r;
}

FileResult run_dfa(const fs::path& input, const fs::path& out, const DfaParams& p) {
  const Loaded in = load(input, p.input);
  Json doc;
  doc["input"] = in.meta;
  FileResult r;
  const std::string stem = stem_of(input);

  switch (p.mode) {
  case DfaMode::global: {
    const auto& seg = analysed_segment(in, doc["input"]);
    const auto curve = dfa::dfa_global(seg.series, p.global);
    doc["dfa"] = io::to_json(curve);
    doc["beta_tilde"] = 2.0 * curve.fit->alpha - 1.0;
    if (want_csv(p.format)) {
      r.outputs.push_back(stem + ".dfa.csv");
      write_csv_file(out / r.outputs.back(), [&](std::ostream& os) { io::write_curve_csv(os, curve); });
    }
    if (want_json(p.format)) {
      r.outputs.push_back(stem + ".dfa.json");
      io::write_json(out / r.outputs.back(), doc);
    }
    r.summary = "alpha=" + fmt(curve.fit->alpha) + " r2=" + fmt(curve.fit->r_squared);
    break;
  }
  case DfaMode::daily: {
    traffic::DailyOptions opts;
    opts.anchor_minutes = p.anchor_minutes;
    opts.window_len = p.trace.window_len;
    opts.local = p.trace.local;
    const auto daily = traffic::daily_pairs(in.series, *p.congestion, opts);
    doc["daily"] = io::to_json(daily);
    doc["threshold"] = p.congestion->threshold();
    if (want_csv(p.format)) {
      r.outputs.push_back(stem + ".pairs.csv");
      write_csv_file(out / r.outputs.back(), [&](std::ostream& os) { io::write_pairs_csv(os, daily); });
    }
    if (want_json(p.format)) {
      r.outputs.push_back(stem + ".daily.json");
      io::write_json(out / r.outputs.back(), doc);
    }
    r.summary = "pairs=" + std::to_string(daily.pairs.size()) + " skipped=" + std::to_string(daily.skipped.size());
    break;
  }
  case DfaMode::trace: {
    if (in.series.empty()) throw DataError("no usable samples after gap handling");
    const auto trace = dfa::alpha_t(in.series, p.trace);
    std::vector<std::size_t> q;
    if (p.congestion) q = traffic::q_trace(in.series, trace, *p.congestion);
    doc["trace"] = io::to_json(trace);
    if (p.congestion) doc["threshold"] = p.congestion->threshold();
    doc["summary"] = trace.entries.empty() ? Json("undefined") : io::to_json(traffic::classify_trace(trace, q));
    if (want_csv(p.format)) {
      r.outputs.push_back(stem + ".trace.csv");
      write_csv_file(out / r.outputs.back(), [&](std::ostream& os) { io::write_trace_csv(os, trace, q); });
    }
    if (want_json(p.format)) {
      r.outputs.push_back(stem + ".trace.json");
      io::write_json(out / r.outputs.back(), doc);
    }
    r.summary = "windows=" + std::to_string(trace.entries.size()) + " skipped=" + std::to_string(trace.skipped.size());
    break;
  }
  }
  return r;
}

FileResult run_report(const fs::path& input, const fs::path& out, const ReportParams& p) {
  const auto pairs = io::read_pairs_csv(input);
  const auto report = traffic::correlate(pairs);
  Json doc;
  doc["input"] = input.filename().generic_string();
  doc["correlation"] = io::to_json(report);
  if (p.beta) doc["wk_check"] = io::to_json(traffic::wk_check(*p.beta, *p.alpha));

  std::string stem = stem_of(input);
  if (stem.size() > 6 && stem.ends_with(".pairs")) stem.resize(stem.size() - 6);
  FileResult r;
  r.outputs.push_back(stem + ".report.json");
  io::write_json(out / r.outputs.back(), doc);
  r.summary = "r_all=" + (report.r_all ? fmt(*report.r_all) : std::string("undefined")) +
              " n=" + std::to_string(report.n_all);
  return r;
}

FileResult run_clean(const fs::path& input, const fs::path& out, const CleanParams& p) {
  const Loaded in = load(input, p.input);

  // Interpolated segments back on the original grid; long gaps stay empty.
  std::vector<double> values(in.series.total_length(), std::numeric_limits<double>::quiet_NaN());
  std::size_t kept = 0;
  for (const auto& s : in.series.segments()) {
    std::copy(s.series.values().begin(), s.series.values().end(), values.begin() + static_cast<std::ptrdiff_t>(s.offset));
    kept += s.series.size();
  }
  const TimeSeries cleaned(std::move(values), in.series.dt_seconds(), in.series.t0(), in.series.label());

  Json doc;
  doc["input"] = in.meta;
  doc["samples_kept"] = kept;
  doc["samples_missing"] = cleaned.size() - kept;

  FileResult r;
  const std::string stem = stem_of(input);
  if (want_csv(p.format)) {
    r.outputs.push_back(stem + ".clean.csv");
    write_csv_file(out / r.outputs.back(), [&](std::ostream& os) { write_series_csv(os, cleaned); });
  }
  if (want_json(p.format)) {
    r.outputs.push_back(stem + ".clean.json");
    io::write_json(out / r.outputs.back(), doc);
  }
  r.summary = "kept=" + std::to_string(kept) + " segments=" + std::to_string(in.series.segments().size());
  return r;
}

std::vector<std::string> run_generate(const fs::path& out, const KeyValues& params, std::ostream& log) {
  std::vector<TimeSeries> series;
  const auto spec = generate_params(params);
  if (const auto* noise = std::get_if<synth::NoiseSpec>(&spec)) {
    series.push_back(synth::generate(*noise));
    if (series.back().label().empty()) series.back() = series.back().with_label(params.at("kind"));
  } else {
    series = synth::gen_corridor(std::get<synth::CorridorSpec>(spec));
  }
  std::vector<std::string> outputs;
  for (const auto& x : series) {
    outputs.push_back(x.label() + ".csv");
    write_csv_file(out / outputs.back(), [&](std::ostream& os) { write_series_csv(os, x); });
    log << outputs.back() << ": " << x.size() << " samples\n";
  }
  return outputs;
}

// ---- plumbing --------------------------------------------------------------

std::vector<fs::path> expand_inputs(const std::vector<fs::path>& given) {
  std::vector<fs::path> files;
  for (const auto& p : given) {
    std::error_code ec;
    const auto status = fs::status(p, ec);
    if (ec || !fs::exists(status)) throw IoError("input '" + p.string() + "' does not exist");
    if (fs::is_directory(status)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p, ec)) {
        if (e.is_regular_file() && e.path().extension() == ".csv") found.push_back(e.path());
      }
      if (ec) throw IoError("cannot list '" + p.string() + "': " + ec.message());
      if (found.empty()) throw UsageError("no .csv files in '" + p.string() + "'");
      std::sort(found.begin(), found.end(),
                [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  std::set<std::string> stems;
  for (const auto& f : files) {
    if (!stems.insert(f.stem().string()).second) {
      throw UsageError("two inputs share the name '" + f.stem().string() + "'");
    }
  }
  return files;
}

// Runs fn(i) for every input on a small thread pool; results keep input order.
template <class Fn>
std::vector<FileResult> for_each_input(std::size_t n, Fn&& fn) {
  std::vector<FileResult> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::string relative_to(const fs::path& target, const fs::path& base) {
  const auto abs_target = fs::absolute(target).lexically_normal();
  const auto rel = abs_target.lexically_relative(fs::absolute(base).lexically_normal());
  return (rel.empty() ? abs_target : rel).generic_string();
}

} // namespace

void execute(const Invocation& run, std::ostream& log) {
  const KeyValues params = resolve_params(run.command, run.params);

  if (run.command == "generate" && !run.inputs.empty()) throw UsageError("generate takes no inputs");
  const auto inputs = run.command == "generate" ? std::vector<fs::path>{} : expand_inputs(run.inputs);
  if (run.command != "generate" && inputs.empty()) throw UsageError(run.command + " needs an input");

  std::error_code ec;
  fs::create_directories(run.out, ec);
  if (ec || !fs::is_directory(run.out)) throw IoError("cannot create output directory '" + run.out.string() + "'");

  std::vector<std::string> outputs;
  if (run.command == "generate") {
    outputs = run_generate(run.out, params, log);
  } else {
    std::vector<FileResult> results;
    if (run.command == "psd") {
      const auto p = psd_params(params);
      results = for_each_input(inputs.size(), [&](std::size_t i) { return run_psd(inputs[i], run.out, p); });
    } else if (run.command == "dfa") {
      const auto p = dfa_params(params);
      results = for_each_input(inputs.size(), [&](std::size_t i) { return run_dfa(inputs[i], run.out, p); });
    } else if (run.command == "report") {
      const auto p = report_params(params);
      results = for_each_input(inputs.size(), [&](std::size_t i) { return run_report(inputs[i], run.out, p); });
    } else {
      const auto p = clean_params(params);
      results = for_each_input(inputs.size(), [&](std::size_t i) { return run_clean(inputs[i], run.out, p); });
    }
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      log << inputs[i].filename().generic_string() << ": " << results[i].summary << '\n';
      outputs.insert(outputs.end(), results[i].outputs.begin(), results[i].outputs.end());
    }
  }
  std::sort(outputs.begin(), outputs.end());

  Json manifest;
  manifest["tool"] = "fractalq";
  manifest["command"] = run.command;
  Json pj = Json::object();
  for (const auto& [k, v] : params) pj[k] = v;
  manifest["params"] = std::move(pj);
  Json in = Json::array();
  for (const auto& f : inputs) in.push_back(relative_to(f, run.out));
  manifest["inputs"] = std::move(in);
  manifest["outputs"] = outputs;
  io::write_json(run.out / kManifestName, manifest);
}

Invocation load_manifest(const fs::path& manifest) {
  const Json doc = io::read_json(manifest);
  const auto base = manifest.parent_path();
  Invocation run;
  try {
    if (doc.value("tool", "") != "fractalq") throw DataError("not a fractalq manifest");
    run.command = doc.at("command").get<std::string>();
    for (const auto& [k, v] : doc.at("params").items()) run.params[k] = v.get<std::string>();
    for (const auto& f : doc.at("inputs")) {
      const fs::path p = f.get<std::string>();
      run.inputs.push_back(p.is_absolute() ? p : (base / p).lexically_normal());
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed manifest '" + manifest.string() + "': " + e.what());
  }
  run.out = base.empty() ? fs::path(".") : base;
  return run;
}

} // namespace fractalq::cli
