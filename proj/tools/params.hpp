#pragma once

#include "fractalq/csv.hpp"
#include "fractalq/dfa.hpp"
#include "fractalq/kv.hpp"
#include "fractalq/preprocess.hpp"
#include "fractalq/spectral.hpp"
#include "fractalq/synth.hpp"
#include "fractalq/traffic.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fractalq::cli {

// One flag of a command. The flag "--max-scale" maps to the key "max_scale",
// which is also the spelling used by --config files and manifests.
struct ParamDef {
  std::string key;
  std::string default_value;
  std::string help;
};

const std::vector<ParamDef>& param_table(std::string_view command);
std::string flag_name(std::string_view key);

/// Fills every key the command knows with its default, overlays `given` and
/// resolves derived defaults, giving the canonical set echoed in manifests.
/// Unknown keys and invalid values throw UsageError.
KeyValues resolve_params(std::string_view command, const KeyValues& given);

/// "14d", "32m", "2h", "90s", "1.5w"; a bare number is seconds.
double parse_duration(std::string_view text);

/// "14d:32m" (long and short period edges of the linear region) or "full".
spectral::BandPolicy parse_band(std::string_view text);

enum class OutputFormat { both, csv, json };

struct InputParams {
  ColumnSpec columns;
  bool timestamps = true;  // time_column = none reads a value-only file
  double dt_seconds = 120.0;
  bool hampel = false;
  HampelOptions hampel_opts;
  std::size_t max_gap = 15;
};

using GenerateParams = std::variant<synth::NoiseSpec, synth::CorridorSpec>;

struct PsdParams {
  InputParams input;
  spectral::BandPolicy bands;
  spectral::FitMethod method = spectral::FitMethod::ols;
  std::size_t welch_segment = 0;  // 0: plain periodogram
  OutputFormat format = OutputFormat::both;
};

enum class DfaMode { global, daily, trace };

struct DfaParams {
  InputParams input;
  DfaMode mode = DfaMode::global;
  dfa::GlobalOptions global;
  dfa::TraceOptions trace;
  int anchor_minutes = 7 * 60;
  std::optional<traffic::CongestionConfig> congestion;
  OutputFormat format = OutputFormat::both;
};

struct ReportParams {
  std::optional<double> beta;
  std::optional<double> alpha;
};

struct CleanParams {
  InputParams input;
  OutputFormat format = OutputFormat::both;
};

// Typed views of a resolved key set.
GenerateParams generate_params(const KeyValues& resolved);
PsdParams psd_params(const KeyValues& resolved);
DfaParams dfa_params(const KeyValues& resolved);
ReportParams report_params(const KeyValues& resolved);
CleanParams clean_params(const KeyValues& resolved);

} // namespace fractalq::cli
