#pragma once

#include "fractalq/kv.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace fractalq::cli {

namespace fs = std::filesystem;

// One run of a command: explicit parameters (flags merged with --config),
// input files or directories, and the output directory.
struct Invocation {
  std::string command;
  KeyValues params;
  std::vector<fs::path> inputs;
  fs::path out;
};

inline constexpr const char* kManifestName = "manifest.json";

/// Runs the command, writes its outputs and manifest.json into `out`, and
/// prints one summary line per input to `log`. Throws fractalq::Error.
void execute(const Invocation& run, std::ostream& log);

/// Rebuilds the invocation recorded in a manifest. Relative input paths are
/// resolved against the manifest's directory; the output directory defaults
/// to that directory too.
Invocation load_manifest(const fs::path& manifest);

} // namespace fractalq::cli
