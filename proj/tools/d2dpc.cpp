// Command-line front end: parses flags and config files, runs one scenario and
// writes its table as CSV or JSON.
//
// Exit codes: 0 success, 1 configuration error, 2 infeasible densities,
// 3 numerical failure or non-convergence.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "d2dpc/error.hpp"
#include "d2dpc/experiment.hpp"

namespace {

struct FlagSpec {
  const char* key;
  const char* help;
};

constexpr FlagSpec kFlags[] = {
    {"lambda-c", "cellular user density"},
    {"lambda-d", "D2D user density"},
    {"alpha", "path-loss exponent (> 2)"},
    {"theta-c", "cellular SIR threshold (linear)"},
    {"theta-d", "D2D SIR threshold (linear)"},
    {"theta-c-db", "cellular SIR threshold in dB"},
    {"theta-d-db", "D2D SIR threshold in dB"},
    {"theta-db", "both SIR thresholds in dB"},
    {"eps-c", "cellular outage target"},
    {"eps-d", "D2D outage target"},
    {"rc", "cellular link distance"},
    {"rd", "D2D link distance"},
    {"pc", "cellular power law: const:p or frac:k,s (optional @peak)"},
    {"pd", "D2D power law for simulate: const:p or frac:k,s"},
    {"pdmax", "D2D peak power (inf for none)"},
    {"n-grid", "grid segments for the dependent optimization"},
    {"m-trunc", "channel-gain truncation M (auto: e^-M < 1e-9)"},
    {"trials", "Monte-Carlo trials"},
    {"seed", "random seed"},
    {"control", "simulate: independent or dependent"},
    {"window", "simulation window radius (auto by default)"},
    {"lambda-d-range", "compare sweep start:stop:steps"},
    {"s-range", "feasibility-dependent exponent sweep start:stop:steps"},
    {"n-list", "convergence grid sizes, comma separated"},
    {"points", "points per boundary or power curve"},
    {"h-max", "largest channel gain for optimize-independent"},
    {"out", "output path (default: standard output)"},
    {"format", "csv or json (default: from the output extension)"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"D2D underlay power control: feasibility regions, optimal power and simulation"};
  std::string scenario;
  std::string config_path;
  app.add_option("scenario", scenario,
                 "feasibility-independent | feasibility-dependent | optimize-independent | "
                 "optimize-dependent | simulate | compare | convergence | run");
  app.add_option("--config", config_path, "flat key = value file, or an earlier output file");
  std::map<std::string, std::string> given;
  std::vector<CLI::Option*> options;
  for (const FlagSpec& f : kFlags) {
    options.push_back(app.add_option(std::string("--") + f.key, given[f.key], f.help));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  d2dpc::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) d2dpc::apply(cfg, d2dpc::read_config_file(config_path));
    d2dpc::KeyValues overrides;
    for (std::size_t i = 0; i < options.size(); ++i) {
      if (options[i]->count() > 0) overrides.emplace_back(kFlags[i].key, given[kFlags[i].key]);
    }
    d2dpc::apply(cfg, overrides);
    if (!scenario.empty() && scenario != "run") {
      cfg.scenario = d2dpc::parse_scenario(scenario);
    } else if (config_path.empty()) {
      std::cerr << "error: a scenario (or run --config FILE) is required\n";
      return 1;
    }
  } catch (const d2dpc::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  try {
    const d2dpc::Table table = d2dpc::run_experiment(cfg);
    const std::string text = cfg.resolved_format() == "json" ? d2dpc::format_json(cfg, table)
                                                             : d2dpc::format_csv(cfg, table);
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(cfg.out, std::ios::binary);
      out << text;
      if (!out) {
        std::cerr << "error: cannot write '" << cfg.out << "'\n";
        return 1;
      }
    }
    for (const std::string& line : table.notes) std::cerr << line << "\n";
  } catch (const d2dpc::Error& e) {
    std::cerr << d2dpc::to_string(e.kind()) << ": " << e.what() << "\n";
    return d2dpc::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
