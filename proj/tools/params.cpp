#include "params.hpp"

#include "fractalq/calendar.hpp"
#include "fractalq/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

namespace fractalq::cli {

namespace {

std::vector<ParamDef> input_defs(bool hampel) {
  return {
      {"time_column", "timestamp", "timestamp column; 'none' reads a value-only file"},
      {"value_column", "value", "value column"},
      {"utc_offset", "+00:00", "offset assumed for timestamps without one"},
      {"dt", "120", "sampling interval in seconds for value-only files"},
      {"hampel", hampel ? "true" : "false", "apply the Hampel outlier filter"},
      {"hampel_width", "15", "Hampel half-width in samples"},
      {"hampel_sigmas", "3", "Hampel threshold in robust standard deviations"},
      {"hampel_until_stable", "false", "repeat the Hampel pass until nothing changes"},
      {"max_gap", "15", "longest gap (samples) bridged by interpolation"},
  };
}

const ParamDef kFormat{"format", "both", "outputs to write: both, csv or json"};

std::vector<ParamDef> generate_defs() {
  std::vector<ParamDef> defs{{"kind", "white", "white, powerlaw, fgn, fbm or corridor"}};
  const auto noise = synth::to_kv(synth::NoiseSpec{});
  const auto corridor = synth::to_kv(synth::CorridorSpec{});
  const std::map<std::string, std::string> help{
      {"beta", "powerlaw spectral exponent"},
      {"hurst", "fgn/fbm Hurst exponent"},
      {"length", "samples"},
      {"seed", "random seed"},
      {"amplitude", "noise standard deviation"},
      {"dt", "sampling interval in seconds"},
      {"t0", "first timestamp (ISO-8601) or none"},
      {"label", "series label and file name (defaults to the kind)"},
      {"days", "corridor length in days"},
      {"capacity", "corridor queue capacity"},
      {"intersections", "corridor intersections"},
      {"start", "corridor start (local midnight)"},
      {"label_prefix", "corridor file name prefix"},
  };
  std::set<std::string> seen{"kind"};
  for (const auto* kv : {&noise, &corridor}) {
    for (const auto& [k, v] : *kv) {
      if (!seen.insert(k).second) continue;
      const auto h = help.find(k);
      defs.push_back({k, v, h == help.end() ? "corridor " + k : h->second});
    }
  }
  return defs;
}

std::vector<ParamDef> psd_defs() {
  auto defs = input_defs(false);
  defs.push_back({"band", "14d:32m", "linear-region edges as long:short periods, or full"});
  defs.push_back({"low_harmonics", "none", "delimit the low region by this many bins instead"});
  defs.push_back({"method", "ols", "fit method: ols or lad"});
  defs.push_back({"welch", "0", "Welch segment length (0: plain periodogram)"});
  defs.push_back(kFormat);
  return defs;
}

std::vector<ParamDef> dfa_defs() {
  auto defs = input_defs(false);
  defs.push_back({"mode", "global", "global, daily or trace"});
  defs.push_back({"min_scale", "16", "smallest global scale"});
  defs.push_back({"max_scale", "8192", "largest global scale"});
  defs.push_back({"order", "1", "detrending polynomial order"});
  defs.push_back({"window", "1024", "local window length (daily, trace)"});
  defs.push_back({"step", "15", "trace step in samples"});
  defs.push_back({"window_min_scale", "16", "smallest local scale"});
  defs.push_back({"window_max_scale", "256", "largest local scale"});
  defs.push_back({"anchor", "07:00", "local start time of daily windows"});
  defs.push_back({"capacity", "none", "queue capacity for Q (required in daily mode)"});
  defs.push_back({"threshold_fraction", "auto", "Q threshold as a fraction of capacity (auto: 0.6 daily, 0.5 trace)"});
  defs.push_back(kFormat);
  return defs;
}

std::vector<ParamDef> report_defs() {
  return {
      {"beta", "none", "spectral exponent for the Wiener-Khinchin check"},
      {"alpha", "none", "DFA exponent for the Wiener-Khinchin check"},
  };
}

std::vector<ParamDef> clean_defs() {
  auto defs = input_defs(true);
  defs.push_back(kFormat);
  return defs;
}

const std::map<std::string, std::vector<ParamDef>, std::less<>>& tables() {
  static const std::map<std::string, std::vector<ParamDef>, std::less<>> t{
      {"generate", generate_defs()}, {"psd", psd_defs()},   {"dfa", dfa_defs()},
      {"report", report_defs()},     {"clean", clean_defs()},
  };
  return t;
}

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view expected) {
  throw UsageError("--" + flag_name(key) + " expects " + std::string(expected) + ", got '" +
                   std::string(value) + "'");
}

bool is_none(const KeyValues& kv, std::string_view key) {
  const auto it = kv.find(key);
  return it == kv.end() || it->second == "none";
}

std::optional<double> optional_double(const KeyValues& kv, std::string_view key) {
  if (is_none(kv, key)) return std::nullopt;
  const double v = kv_double(kv, key, 0.0);
  if (!std::isfinite(v)) bad(key, kv.find(key)->second, "a finite number");
  return v;
}

std::size_t positive(const KeyValues& kv, std::string_view key) {
  const auto v = kv_uint(kv, key, 0);
  if (v == 0) bad(key, kv.find(key)->second, "a positive integer");
  return static_cast<std::size_t>(v);
}

OutputFormat parse_format(const KeyValues& kv) {
  const auto v = kv_string(kv, "format", "both");
  if (v == "both") return OutputFormat::both;
  if (v == "csv") return OutputFormat::csv;
  if (v == "json") return OutputFormat::json;
  bad("format", v, "both, csv or json");
}

int parse_clock(std::string_view key, std::string_view text) {
  int h = -1, m = -1;
  const char* end = text.data() + text.size();
  auto r = std::from_chars(text.data(), end, h);
  if (r.ec == std::errc{} && r.ptr != end && *r.ptr == ':') {
    r = std::from_chars(r.ptr + 1, end, m);
    if (r.ec == std::errc{} && r.ptr == end && h >= 0 && h < 24 && m >= 0 && m < 60) return h * 60 + m;
  }
  bad(key, text, "HH:MM");
}

InputParams input_params(const KeyValues& kv) {
  InputParams p;
  const auto time_column = kv_string(kv, "time_column", "timestamp");
  p.timestamps = time_column != "none";
  if (p.timestamps) p.columns.time_column = time_column;
  p.columns.value_column = kv_string(kv, "value_column", "value");
  p.columns.utc_offset_minutes = parse_utc_offset(kv_string(kv, "utc_offset", "+00:00"));
  p.dt_seconds = kv_double(kv, "dt", 120.0);
  if (!(p.dt_seconds > 0.0) || !std::isfinite(p.dt_seconds)) bad("dt", kv.find("dt")->second, "a positive number");
  p.hampel = kv_bool(kv, "hampel", false);
  p.hampel_opts.half_width = positive(kv, "hampel_width");
  p.hampel_opts.n_sigmas = kv_double(kv, "hampel_sigmas", 3.0);
  if (!(p.hampel_opts.n_sigmas > 0.0)) bad("hampel_sigmas", kv.find("hampel_sigmas")->second, "a positive number");
  p.hampel_opts.until_stable = kv_bool(kv, "hampel_until_stable", false);
  p.max_gap = static_cast<std::size_t>(kv_uint(kv, "max_gap", 15));
  return p;
}

} // namespace

const std::vector<ParamDef>& param_table(std::string_view command) {
  const auto it = tables().find(command);
  if (it == tables().end()) throw UsageError("unknown command '" + std::string(command) + "'");
  return it->second;
}

std::string flag_name(std::string_view key) {
  std::string s(key);
  std::replace(s.begin(), s.end(), '_', '-');
  return s;
}

double parse_duration(std::string_view text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto r = std::from_chars(text.data(), end, value);
  if (r.ec != std::errc{} || !(value > 0.0) || !std::isfinite(value)) {
    throw UsageError("bad duration '" + std::string(text) + "'");
  }
  const std::string_view unit(r.ptr, static_cast<std::size_t>(end - r.ptr));
  if (unit.empty() || unit == "s") return value;
  if (unit == "m") return value * 60.0;
  if (unit == "h") return value * 3600.0;
  if (unit == "d") return value * 86400.0;
  if (unit == "w") return value * 7.0 * 86400.0;
  throw UsageError("bad duration unit in '" + std::string(text) + "' (use s, m, h, d or w)");
}

spectral::BandPolicy parse_band(std::string_view text) {
  spectral::BandPolicy policy;
  if (text == "full") {
    policy.full = true;
    return policy;
  }
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw UsageError("--band expects LONG:SHORT (e.g. 14d:32m) or full");
  policy.low_cutoff_period = parse_duration(text.substr(0, colon));
  policy.high_cutoff_period = parse_duration(text.substr(colon + 1));
  if (!(policy.low_cutoff_period > policy.high_cutoff_period)) {
    throw UsageError("--band: the long period must exceed the short one");
  }
  return policy;
}

KeyValues resolve_params(std::string_view command, const KeyValues& given) {
  const auto& table = param_table(command);
  for (const auto& [k, v] : given) {
    const bool known = std::any_of(table.begin(), table.end(), [&](const ParamDef& d) { return d.key == k; });
    if (!known) throw UsageError("'" + k + "' is not a parameter of " + std::string(command));
  }

  if (command == "generate") {
    // The generators own their defaults; echo their canonical form.
    const auto kind = kv_string(given, "kind", "white");
    KeyValues spec_kv(given);
    spec_kv.erase("kind");
    KeyValues out;
    try {
      if (kind == "corridor") {
        out = synth::to_kv(synth::corridor_spec_from_kv(spec_kv));
      } else {
        spec_kv["kind"] = kind;
        out = synth::to_kv(synth::noise_spec_from_kv(spec_kv));
      }
    } catch (const DataError& e) {
      throw UsageError(e.what());
    }
    out["kind"] = kind;
    return out;
  }

  KeyValues out;
  for (const auto& d : table) out[d.key] = d.default_value;
  for (const auto& [k, v] : given) out[k] = v;

  if (command == "dfa") {
    if (out["threshold_fraction"] == "auto") {
      out["threshold_fraction"] = out["mode"] == "trace" ? "0.5" : "0.6";
    }
    dfa_params(out);
  } else if (command == "psd") {
    psd_params(out);
  } else if (command == "report") {
    report_params(out);
  } else if (command == "clean") {
    clean_params(out);
  }
  return out;
}

GenerateParams generate_params(const KeyValues& resolved) {
  KeyValues kv(resolved);
  if (kv_string(kv, "kind", "white") == "corridor") {
    kv.erase("kind");
    return synth::corridor_spec_from_kv(kv);
  }
  return synth::noise_spec_from_kv(kv);
}

PsdParams psd_params(const KeyValues& kv) {
  PsdParams p;
  p.input = input_params(kv);
  p.bands = parse_band(kv_string(kv, "band", "14d:32m"));
  if (!is_none(kv, "low_harmonics")) {
    p.bands.low = spectral::LowPolicy::harmonics;
    p.bands.low_harmonics = positive(kv, "low_harmonics");
  }
  const auto method = kv_string(kv, "method", "ols");
  if (method == "ols") {
    p.method = spectral::FitMethod::ols;
  } else if (method == "lad") {
    p.method = spectral::FitMethod::lad;
  } else {
    bad("method", method, "ols or lad");
  }
  p.welch_segment = static_cast<std::size_t>(kv_uint(kv, "welch", 0));
  if (p.welch_segment == 1) bad("welch", "1", "0 or a segment length >= 2");
  p.format = parse_format(kv);
  return p;
}

DfaParams dfa_params(const KeyValues& kv) {
  DfaParams p;
  p.input = input_params(kv);
  const auto mode = kv_string(kv, "mode", "global");
  if (mode == "global") {
    p.mode = DfaMode::global;
  } else if (mode == "daily") {
    p.mode = DfaMode::daily;
  } else if (mode == "trace") {
    p.mode = DfaMode::trace;
  } else {
    bad("mode", mode, "global, daily or trace");
  }

  const auto order = kv_int(kv, "order", 1);
  if (order < 1 || order > 5) bad("order", kv.find("order")->second, "an order between 1 and 5");
  p.global.detrend_order = static_cast<int>(order);
  p.global.min_scale = positive(kv, "min_scale");
  p.global.max_scale = positive(kv, "max_scale");
  if (p.global.min_scale < static_cast<std::size_t>(order) + 2) {
    throw UsageError("--min-scale must be at least order + 2");
  }
  if (p.global.min_scale >= p.global.max_scale) throw UsageError("--min-scale must be below --max-scale");

  p.trace.window_len = positive(kv, "window");
  p.trace.step = positive(kv, "step");
  p.trace.local.detrend_order = p.global.detrend_order;
  p.trace.local.min_scale = positive(kv, "window_min_scale");
  p.trace.local.max_scale = positive(kv, "window_max_scale");
  if (p.trace.local.min_scale < static_cast<std::size_t>(order) + 2) {
    throw UsageError("--window-min-scale must be at least order + 2");
  }
  if (p.trace.local.min_scale >= p.trace.local.max_scale) {
    throw UsageError("--window-min-scale must be below --window-max-scale");
  }
  if (p.trace.window_len < 4 * p.trace.local.max_scale) {
    throw UsageError("--window must hold at least 4 x --window-max-scale samples");
  }
  p.anchor_minutes = parse_clock("anchor", kv_string(kv, "anchor", "07:00"));

  if (const auto capacity = optional_double(kv, "capacity")) {
    const auto fraction = kv_double(kv, "threshold_fraction", 0.6);
    traffic::CongestionConfig cfg{*capacity, fraction};
    cfg.validate();
    p.congestion = cfg;
  } else if (p.mode == DfaMode::daily) {
    throw UsageError("daily mode needs --capacity");
  }
  p.format = parse_format(kv);
  return p;
}

ReportParams report_params(const KeyValues& kv) {
  ReportParams p{optional_double(kv, "beta"), optional_double(kv, "alpha")};
  if (p.beta.has_value() != p.alpha.has_value()) {
    throw UsageError("the Wiener-Khinchin check needs both --beta and --alpha");
  }
  return p;
}

CleanParams clean_params(const KeyValues& kv) {
  return {input_params(kv), parse_format(kv)};
}

} // namespace fractalq::cli
