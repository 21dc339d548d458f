#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "d2dpc/error.hpp"
#include "d2dpc/model.hpp"
#include "d2dpc/simulator.hpp"

namespace d2dpc {

enum class Scenario {
  feasibility_independent,
  feasibility_dependent,
  optimize_independent,
  optimize_dependent,
  simulate,
  compare,
  convergence,
};

const char* to_string(Scenario scenario);
Scenario parse_scenario(std::string_view text);

/// Inclusive linear sweep "start:stop:steps"; start <= stop, steps >= 1
/// (steps == 1 requires start == stop).
struct Range {
  double start = 0.0;
  double stop = 0.0;
  std::size_t steps = 1;

  std::vector<double> values() const;
  std::string describe() const;
};

/// Throws InvalidParameter naming `field` on malformed or reversed input.
Range parse_range(std::string_view text, std::string_view field);

using KeyValues = std::vector<std::pair<std::string, std::string>>;

struct ExperimentConfig {
  Scenario scenario = Scenario::compare;
  LayerParams cellular{0.001, 1.0, 0.1, 0.01};
  LayerParams d2d{0.001, 1.0, 0.1, 0.01};
  double alpha = 2.0 / 0.75;
  std::string policy_c = "const:1";
  std::string policy_d = "const:1";  // simulate only
  double pd_max = std::numeric_limits<double>::infinity();
  std::size_t n_grid = 5000;
  double m_trunc = 0.0;  // 0 selects the default truncation
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  ControlMode control = ControlMode::independent;
  double window = 0.0;  // 0 selects the default window radius
  Range lambda_d_range{0.001, 0.01, 10};
  Range s_range{0.5, 0.5, 1};
  bool s_sweep = false;
  std::vector<std::size_t> n_list{500, 1000, 2500, 5000};
  std::size_t points = 101;
  double h_max = 5.0;
  std::string out;      // empty: standard output
  std::string format;   // csv or json; empty: from the extension, else csv

  NetworkParams network() const;
  PowerPolicy cellular_policy() const;
  PowerPolicy d2d_policy() const;
  double truncation() const;
  std::string resolved_format() const;
};

/// Overrides fields from key/value pairs. Keys use the long flag names
/// (lambda-c, eps-d, pc, ...); '_' and '-' are interchangeable. Throws
/// InvalidParameter with the offending key and value.
void apply(ExperimentConfig& cfg, const KeyValues& values);

/// Every parameter (including scenario and seed) in a fixed order with
/// round-trippable values.
KeyValues to_key_values(const ExperimentConfig& cfg);

/// Parses config text: flat "key = value" lines ('#' comments), a CSV file
/// produced by this tool (its "# key=value ..." header line), or a JSON file
/// with a "parameters" object. Diagnostics carry the line number.
KeyValues parse_config_text(std::string_view text);
KeyValues read_config_file(const std::string& path);

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> notes;  // human-readable summary lines
};

/// Runs one scenario. Throws the library errors (InfeasibleDensities,
/// NonConvergence, ...) for the caller to map onto exit codes.
Table run_experiment(const ExperimentConfig& cfg);

/// CSV: "# key=value ..." header, column row, numbers at 12 significant digits.
std::string format_csv(const ExperimentConfig& cfg, const Table& table);
std::string format_json(const ExperimentConfig& cfg, const Table& table);

/// Process exit code for a library error: 1 for configuration and modelling
/// errors, 2 for infeasible densities, 3 for numerical failures.
int exit_code(ErrorKind kind);

/// Rows of the compare sweep: lambda_d, independent mean power, dependent
/// mean power, ratio; NaN where a scheme is infeasible.
Table compare_sweep(const ExperimentConfig& cfg);

/// Minimized dependent mean power for each grid size in cfg.n_list.
Table convergence_sweep(const ExperimentConfig& cfg);

}  // namespace d2dpc
