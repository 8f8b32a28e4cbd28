#pragma once

#include "fractalq/dfa.hpp"
#include "fractalq/spectral.hpp"
#include "fractalq/traffic.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

// Plot-ready CSV and JSON forms of the analysis products.
namespace fractalq::io {

using Json = nlohmann::ordered_json;

/// freq_hz, period_s, power[, band]
void write_spectrum_csv(std::ostream& out, const spectral::Spectrum& spectrum,
                        const spectral::BandAnnotation* bands = nullptr);
Json to_json(const spectral::BandFit& fit);
Json to_json(const spectral::BandAnnotation& bands);

/// scale, fluctuation, segments
void write_curve_csv(std::ostream& out, const dfa::FluctuationCurve& curve);
Json to_json(const dfa::FluctuationCurve& curve);

/// timestamp, start_index, alpha, r_squared[, day_type][, q]. `q` is empty
/// or holds one value per entry.
void write_trace_csv(std::ostream& out, const dfa::ScalingTrace& trace,
                     std::span<const std::size_t> q = {});
Json to_json(const dfa::ScalingTrace& trace);  // counts and skipped windows only

/// date, day_type, alpha, q
void write_pairs_csv(std::ostream& out, const traffic::DailyAnalysis& daily);
/// Reads a pairs CSV; needs the day_type, alpha and q columns (date is
/// optional). Malformed rows are a DataError.
std::vector<traffic::CorrelationPair> read_pairs_csv(std::istream& in);
std::vector<traffic::CorrelationPair> read_pairs_csv(const std::filesystem::path& path);

/// Undefined coefficients are written as the string "undefined".
Json to_json(const traffic::CorrelationReport& report);
Json to_json(const traffic::WkCheck& check);
Json to_json(const traffic::TraceSummary& summary);
Json to_json(const traffic::DailyAnalysis& daily);  // counts and skipped days

/// Pretty-printed with a trailing newline; IoError on failure.
void write_json(const std::filesystem::path& path, const Json& doc);
Json read_json(const std::filesystem::path& path);
/// Writes `text` to `path`, throwing IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace fractalq::io
