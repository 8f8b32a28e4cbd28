// fractalq: command-line front end.
//
//   fractalq generate --kind fgn --hurst 0.9 --length 32768 --seed 7 --out data
//   fractalq psd data/fgn.csv --band 14d:32m --out psd
//   fractalq dfa data --mode trace --capacity 40 --out trace
//   fractalq report trace/x.pairs.csv --beta 0.9 --alpha 0.96 --out report
//   fractalq replay psd/manifest.json --out again
//
// Exit codes: 0 success, 2 usage, 3 data, 4 I/O.

#include "commands.hpp"
#include "params.hpp"

#include "fractalq/error.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <memory>

namespace {

using namespace fractalq;
using namespace fractalq::cli;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitIo = 4;

struct CommandSlot {
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::vector<std::string> inputs;
  std::string out;
  std::string config;
};

const char* describe(const std::string& name) {
  if (name == "generate") return "write synthetic series (white, powerlaw, fgn, fbm, corridor)";
  if (name == "psd") return "periodogram and spectral exponent beta";
  if (name == "dfa") return "DFA exponent: global curve, daily (alpha, Q) pairs or alpha(t) trace";
  if (name == "report") return "alpha-Q correlation report from a pairs CSV";
  return "Hampel filter and gap interpolation";
}

void add_command(CLI::App& app, const std::string& name, CommandSlot& slot) {
  slot.app = app.add_subcommand(name, describe(name));
  if (name != "generate") {
    slot.app->add_option("inputs", slot.inputs, "input CSV files or directories")->required();
  }
  slot.app->add_option("-o,--out", slot.out, "output directory")->required();
  slot.app->add_option("--config", slot.config, "key = value file; its entries override flags");
  for (const auto& def : param_table(name)) {
    auto* opt = slot.app->add_option("--" + flag_name(def.key), slot.values[def.key], def.help);
    opt->default_str(def.default_value);
    slot.options[def.key] = opt;
  }
}

Invocation invocation(const std::string& name, const CommandSlot& slot) {
  Invocation run;
  run.command = name;
  for (const auto& [key, opt] : slot.options) {
    if (opt->count() > 0) run.params[key] = slot.values.at(key);
  }
  if (!slot.config.empty()) {
    for (const auto& [k, v] : parse_kv_file(slot.config)) run.params[k] = v;
  }
  run.inputs.assign(slot.inputs.begin(), slot.inputs.end());
  run.out = slot.out;
  return run;
}

int fail(int code, const std::string& what) {
  std::cerr << "fractalq: error: " << what << '\n';
  return code;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractal scaling analysis of uniformly sampled time series"};
  app.require_subcommand(1);

  std::map<std::string, CommandSlot> slots;
  for (const char* name : {"generate", "psd", "dfa", "report", "clean"}) add_command(app, name, slots[name]);

  std::string manifest;
  std::string replay_out;
  auto* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  replay->add_option("manifest", manifest, "manifest.json")->required();
  replay->add_option("-o,--out", replay_out, "output directory (default: the manifest's)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    Invocation run;
    if (replay->parsed()) {
      run = load_manifest(manifest);
      if (!replay_out.empty()) run.out = replay_out;
    } else {
      for (const auto& [name, slot] : slots) {
        if (slot.app->parsed()) run = invocation(name, slot);
      }
    }
    execute(run, std::cout);
  } catch (const UsageError& e) {
    return fail(kExitUsage, e.what());
  } catch (const DataError& e) {
    return fail(kExitData, e.what());
  } catch (const IoError& e) {
    return fail(kExitIo, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(kExitIo, e.what());
  } catch (const std::exception& e) {
    return fail(1, std::string("internal error: ") + e.what());
  }
  return 0;
}
