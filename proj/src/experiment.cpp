#include "d2dpc/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "d2dpc/error.hpp"
#include "d2dpc/feasibility.hpp"
#include "d2dpc/gp.hpp"
#include "d2dpc/outage.hpp"

namespace d2dpc {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ScenarioName {
  Scenario scenario;
  const char* name;
};

constexpr ScenarioName kScenarios[] = {
    {Scenario::feasibility_independent, "feasibility-independent"},
    {Scenario::feasibility_dependent, "feasibility-dependent"},
    {Scenario::optimize_independent, "optimize-independent"},
    {Scenario::optimize_dependent, "optimize-dependent"},
    {Scenario::simulate, "simulate"},
    {Scenario::compare, "compare"},
    {Scenario::convergence, "convergence"},
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return key;
}

[[noreturn]] void bad_field(std::string_view key, std::string_view value, std::string_view why) {
  throw InvalidParameter("field '" + std::string(key) + "' = '" + std::string(value) +
                         "': " + std::string(why));
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (!t.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (t.empty() || ec != std::errc() || ptr != end || std::isnan(v)) {
    bad_field(key, text, "expected a number");
  }
  return v;
}

std::uint64_t parse_count(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    bad_field(key, text, "expected a non-negative integer");
  }
  return v;
}

// Shortest text that parses back to the same double.
std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string short_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  if (n > 1) out.back() = b;
  return out;
}

std::string note(std::string_view label, double value) {
  return std::string(label) + " = " + short_number(value);
}

Table boundary_table(const FeasibilityRegion& region, std::size_t points) {
  Table t;
  t.columns = {"lambda_c", "lambda_d"};
  for (auto [lc, ld] : region.boundary(points)) t.rows.push_back({lc, ld});
  t.notes.push_back(region.describe());
  t.notes.push_back(note("lambda_c intercept", region.lambda_c_intercept()));
  t.notes.push_back(note("lambda_d intercept", region.lambda_d_intercept()));
  return t;
}

Table feasibility_dependent_table(const ExperimentConfig& cfg) {
  const NetworkParams net = cfg.network();
  const PowerPolicy pc = cfg.cellular_policy();
  if (!cfg.s_sweep) return boundary_table(feasibility_dependent(net, pc), cfg.points);
  Table t;
  t.columns = {"s", "lambda_c", "lambda_d"};
  for (double s : cfg.s_range.values()) {
    const FeasibilityRegion region = feasibility_dependent_fractional(net, pc, s);
    for (auto [lc, ld] : region.boundary(cfg.points)) t.rows.push_back({s, lc, ld});
    t.notes.push_back("s = " + short_number(s) + ": " + region.describe());
  }
  return t;
}

Table optimize_independent_table(const ExperimentConfig& cfg) {
  const NetworkParams net = cfg.network();
  const IndependentSolution sol = optimal_power_independent(net, cfg.cellular_policy(), cfg.pd_max);
  sol.require_feasible();
  Table t;
  t.columns = {"h", "power"};
  for (double h : linspace(0.0, cfg.h_max, cfg.points)) t.rows.push_back({h, sol.p_d0});
  t.notes.push_back(note("p_d0", sol.p_d0));
  t.notes.push_back(note("E[P_d^delta]", sol.y0));
  t.notes.push_back(note("cellular cap R_c", sol.r_c));
  return t;
}

Table optimize_dependent_table(const ExperimentConfig& cfg) {
  const NetworkParams net = cfg.network();
  const PowerPolicy pc = cfg.cellular_policy();
  const DependentPowerResult res = dependent_minimum_power(net, pc, cfg.n_grid, cfg.truncation());
  const IndependentSolution indep = optimal_power_independent(net, pc, cfg.pd_max);
  const double p_indep = indep.feasible ? indep.p_d0 : kNaN;
  const auto& grid = std::get<PiecewisePower>(res.policy.kind()).grid;
  Table t;
  t.columns = {"h_low", "h_high", "power_dependent", "power_independent"};
  for (std::size_t i = 0; i < res.solution.levels.size(); ++i) {
    t.rows.push_back({grid[i], grid[i + 1], res.solution.levels[i], p_indep});
  }
  t.notes.push_back(note("mean power (dependent)", res.solution.objective));
  t.notes.push_back(note("mean power (independent)", p_indep));
  t.notes.push_back(note("newton steps", static_cast<double>(res.solution.iterations)));
  t.notes.push_back(note("kkt residual", res.solution.kkt_residual));
  if (res.solution.floor_active) t.notes.push_back("power floor active");
  if (!indep.feasible) t.notes.push_back("independent control infeasible: " + indep.reason);
  return t;
}

Table simulate_table(const ExperimentConfig& cfg) {
  const NetworkParams net = cfg.network();
  const PowerPolicy pc = cfg.cellular_policy();
  const PowerPolicy pd = cfg.d2d_policy();
  Table t;
  t.columns = {"layer",          "p_hat",           "half_width_95", "trials", "outages",
               "window_radius",  "analytic_exact",  "lower_bound",   "approx"};
  for (Layer which : {Layer::cellular, Layer::d2d}) {
    SimConfig sim{net, pc, pd, cfg.control, cfg.trials, cfg.seed, cfg.window};
    const OutageEstimate est = simulate_outage(sim, which);
    double exact = kNaN, lower = kNaN, approx = kNaN;
    if (cfg.control == ControlMode::independent) {
      exact = outage_independent_general(net, pc, pd, which);
    } else {
      lower = outage_dependent_lower_bound(net, pc, pd, which);
      approx = outage_dependent_approx(net, pc, pd, which);
    }
    t.rows.push_back({std::string(to_string(which)), est.p_hat, est.half_width_95,
                      static_cast<double>(est.trials), static_cast<double>(est.outages),
                      est.window_radius, exact, lower, approx});
  }
  return t;
}

}  // namespace

const char* to_string(Scenario scenario) {
  for (const auto& s : kScenarios) {
    if (s.scenario == scenario) return s.name;
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view text) {
  const std::string key = normalize_key(trim(text));
  for (const auto& s : kScenarios) {
    if (key == s.name) return s.scenario;
  }
  bad_field("scenario", text, "unknown scenario");
}

std::vector<double> Range::values() const { return linspace(start, stop, steps); }

std::string Range::describe() const {
  return number(start) + ":" + number(stop) + ":" + std::to_string(steps);
}

Range parse_range(std::string_view text, std::string_view field) {
  const std::string t = trim(text);
  const auto c1 = t.find(':');
  const auto c2 = c1 == std::string::npos ? c1 : t.find(':', c1 + 1);
  if (c2 == std::string::npos || t.find(':', c2 + 1) != std::string::npos) {
    bad_field(field, text, "expected start:stop:steps");
  }
  Range r;
  r.start = parse_double(field, t.substr(0, c1));
  r.stop = parse_double(field, t.substr(c1 + 1, c2 - c1 - 1));
  const std::uint64_t steps = parse_count(field, t.substr(c2 + 1));
  if (!std::isfinite(r.start) || !std::isfinite(r.stop)) {
    bad_field(field, text, "range bounds must be finite");
  }
  if (steps < 1) bad_field(field, text, "steps must be >= 1");
  if (r.start > r.stop) bad_field(field, text, "start exceeds stop (reversed range)");
  if (steps == 1 && r.start != r.stop) bad_field(field, text, "one step needs start == stop");
  if (steps > 1 && r.start == r.stop) bad_field(field, text, "empty range with several steps");
  r.steps = static_cast<std::size_t>(steps);
  return r;
}

NetworkParams ExperimentConfig::network() const { return NetworkParams(cellular, d2d, alpha); }
PowerPolicy ExperimentConfig::cellular_policy() const { return parse_policy(policy_c); }
PowerPolicy ExperimentConfig::d2d_policy() const { return parse_policy(policy_d); }
double ExperimentConfig::truncation() const {
  return m_trunc > 0.0 ? m_trunc : default_truncation();
}

std::string ExperimentConfig::resolved_format() const {
  if (!format.empty()) return format;
  if (out.size() >= 5 && out.substr(out.size() - 5) == ".json") return "json";
  return "csv";
}

void apply(ExperimentConfig& cfg, const KeyValues& values) {
  for (const auto& [raw_key, raw_value] : values) {
    const std::string key = normalize_key(trim(raw_key));
    const std::string value = trim(raw_value);
    auto positive = [&](double v) {
      if (!(v > 0.0) || !std::isfinite(v)) bad_field(key, value, "must be finite and > 0");
      return v;
    };
    auto nonneg = [&](double v) {
      if (!(v >= 0.0) || !std::isfinite(v)) bad_field(key, value, "must be finite and >= 0");
      return v;
    };
    auto probability = [&](double v) {
      if (!(v > 0.0 && v < 1.0)) bad_field(key, value, "must lie in (0, 1)");
      return v;
    };
    auto d = [&] { return parse_double(key, value); };
    if (key == "scenario") {
      cfg.scenario = parse_scenario(value);
    } else if (key == "lambda-c") {
      cfg.cellular.density = nonneg(d());
    } else if (key == "lambda-d") {
      cfg.d2d.density = nonneg(d());
    } else if (key == "alpha") {
      cfg.alpha = positive(d());
    } else if (key == "theta-c") {
      cfg.cellular.sir_threshold = positive(d());
    } else if (key == "theta-d") {
      cfg.d2d.sir_threshold = positive(d());
    } else if (key == "theta-c-db") {
      cfg.cellular.sir_threshold = std::pow(10.0, d() / 10.0);
    } else if (key == "theta-d-db") {
      cfg.d2d.sir_threshold = std::pow(10.0, d() / 10.0);
    } else if (key == "theta-db") {
      cfg.cellular.sir_threshold = cfg.d2d.sir_threshold = std::pow(10.0, d() / 10.0);
    } else if (key == "eps-c") {
      cfg.cellular.outage_target = probability(d());
    } else if (key == "eps-d") {
      cfg.d2d.outage_target = probability(d());
    } else if (key == "rc") {
      cfg.cellular.link_distance = positive(d());
    } else if (key == "rd") {
      cfg.d2d.link_distance = positive(d());
    } else if (key == "pc" || key == "pd") {
      try {
        parse_policy(value);
      } catch (const Error& e) {
        bad_field(key, value, e.what());
      }
      (key == "pc" ? cfg.policy_c : cfg.policy_d) = value;
    } else if (key == "pdmax") {
      const double v = d();
      if (!(v > 0.0)) bad_field(key, value, "must be > 0 (inf for no peak)");
      cfg.pd_max = v;
    } else if (key == "n-grid") {
      const std::uint64_t n = parse_count(key, value);
      if (n < 2 || n % 2 != 0) bad_field(key, value, "must be an even number >= 2");
      cfg.n_grid = static_cast<std::size_t>(n);
    } else if (key == "m-trunc") {
      cfg.m_trunc = value == "auto" ? 0.0 : positive(d());
    } else if (key == "trials") {
      cfg.trials = parse_count(key, value);
      if (cfg.trials == 0) bad_field(key, value, "must be >= 1");
    } else if (key == "seed") {
      cfg.seed = parse_count(key, value);
    } else if (key == "control") {
      if (value == "independent") cfg.control = ControlMode::independent;
      else if (value == "dependent") cfg.control = ControlMode::dependent;
      else bad_field(key, value, "expected independent or dependent");
    } else if (key == "window") {
      cfg.window = value == "auto" ? 0.0 : positive(d());
    } else if (key == "lambda-d-range") {
      cfg.lambda_d_range = parse_range(value, key);
      if (cfg.lambda_d_range.start < 0.0) bad_field(key, value, "densities must be >= 0");
    } else if (key == "s-range") {
      cfg.s_range = parse_range(value, key);
      if (cfg.s_range.start < 0.0) bad_field(key, value, "exponents must be >= 0");
      cfg.s_sweep = true;
    } else if (key == "n-list") {
      std::vector<std::size_t> list;
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const std::uint64_t n = parse_count(key, item);
        if (n < 2 || n % 2 != 0) bad_field(key, value, "grid sizes must be even and >= 2");
        list.push_back(static_cast<std::size_t>(n));
      }
      if (list.empty()) bad_field(key, value, "needs at least one grid size");
      cfg.n_list = std::move(list);
    } else if (key == "points") {
      const std::uint64_t n = parse_count(key, value);
      if (n < 2) bad_field(key, value, "must be >= 2");
      cfg.points = static_cast<std::size_t>(n);
    } else if (key == "h-max") {
      cfg.h_max = positive(d());
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "format") {
      if (value != "csv" && value != "json") bad_field(key, value, "expected csv or json");
      cfg.format = value;
    } else {
      bad_field(key, value, "unknown key");
    }
  }
}

KeyValues to_key_values(const ExperimentConfig& cfg) {
  KeyValues kv = {
      {"scenario", to_string(cfg.scenario)},
      {"lambda-c", number(cfg.cellular.density)},
      {"lambda-d", number(cfg.d2d.density)},
      {"alpha", number(cfg.alpha)},
      {"theta-c", number(cfg.cellular.sir_threshold)},
      {"theta-d", number(cfg.d2d.sir_threshold)},
      {"eps-c", number(cfg.cellular.outage_target)},
      {"eps-d", number(cfg.d2d.outage_target)},
      {"rc", number(cfg.cellular.link_distance)},
      {"rd", number(cfg.d2d.link_distance)},
      {"pc", cfg.policy_c},
      {"pd", cfg.policy_d},
      {"pdmax", number(cfg.pd_max)},
      {"n-grid", std::to_string(cfg.n_grid)},
      {"m-trunc", number(cfg.truncation())},
      {"trials", std::to_string(cfg.trials)},
      {"seed", std::to_string(cfg.seed)},
      {"control", to_string(cfg.control)},
      {"window", cfg.window > 0.0 ? number(cfg.window) : "auto"},
      {"lambda-d-range", cfg.lambda_d_range.describe()},
  };
  if (cfg.s_sweep) kv.emplace_back("s-range", cfg.s_range.describe());
  std::string list;
  for (std::size_t n : cfg.n_list) list += (list.empty() ? "" : ",") + std::to_string(n);
  kv.emplace_back("n-list", list);
  kv.emplace_back("points", std::to_string(cfg.points));
  kv.emplace_back("h-max", number(cfg.h_max));
  return kv;
}

KeyValues parse_config_text(std::string_view text) {
  const std::string body = trim(text);
  KeyValues kv;
  if (!body.empty() && body.front() == '{') {
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw InvalidParameter(std::string("config JSON: ") + e.what());
    }
    const auto& params = j.contains("parameters") ? j["parameters"] : j;
    if (!params.is_object()) throw InvalidParameter("config JSON: expected an object");
    for (const auto& [key, value] : params.items()) {
      if (value.is_string()) {
        kv.emplace_back(key, value.get<std::string>());
      } else if (value.is_number_integer() || value.is_number_unsigned()) {
        kv.emplace_back(key, value.dump());
      } else if (value.is_number()) {
        kv.emplace_back(key, number(value.get<double>()));
      } else {
        throw InvalidParameter("config JSON: field '" + key + "' must be a string or number");
      }
    }
    return kv;
  }

  std::vector<std::string> lines;
  {
    std::stringstream ss{std::string(text)};
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
  }
  // Output of this tool: parameters live on the "# key=value ..." line.
  for (const std::string& line : lines) {
    const std::string t = trim(line);
    if (t.rfind('#', 0) == 0 && t.find("scenario=") != std::string::npos) {
      std::stringstream ss(t.substr(1));
      std::string token;
      while (ss >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) {
          throw InvalidParameter("header token '" + token + "' is not key=value");
        }
        kv.emplace_back(token.substr(0, eq), token.substr(eq + 1));
      }
      return kv;
    }
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string t = lines[i];
    if (const auto hash = t.find('#'); hash != std::string::npos) t.resize(hash);
    t = trim(t);
    if (t.empty() || t.front() == '[') continue;  // blank, comment or section header
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw InvalidParameter("config line " + std::to_string(i + 1) + ": expected key = value");
    }
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
        value.back() == value.front()) {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty()) {
      throw InvalidParameter("config line " + std::to_string(i + 1) + ": empty key");
    }
    kv.emplace_back(std::move(key), std::move(value));
  }
  return kv;
}

KeyValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config_text(ss.str());
  } catch (const InvalidParameter& e) {
    throw InvalidParameter(path + ": " + e.what());
  }
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::infeasible_densities:
    case ErrorKind::infeasible_discretization:
      return 2;
    case ErrorKind::numeric_failure:
    case ErrorKind::non_convergence:
    case ErrorKind::bound_violation:
      return 3;
    default:
      return 1;
  }
}

Table compare_sweep(const ExperimentConfig& cfg) {
  const PowerPolicy pc = cfg.cellular_policy();
  const NetworkParams base = cfg.network();
  Table t;
  t.columns = {"lambda_d", "mean_power_independent", "mean_power_dependent", "ratio"};
  for (double lambda_d : cfg.lambda_d_range.values()) {
    const NetworkParams net = base.with_densities(base.lambda_c(), lambda_d);
    const IndependentSolution indep = optimal_power_independent(net, pc, cfg.pd_max);
    const double p_indep = indep.feasible ? indep.p_d0 : kNaN;
    double p_dep = kNaN;
    try {
      p_dep = dependent_minimum_power(net, pc, cfg.n_grid, cfg.truncation()).solution.objective;
    } catch (const InfeasibleDensities& e) {
      t.notes.push_back("lambda_d = " + short_number(lambda_d) + ": dependent infeasible: " +
                        e.what());
    } catch (const InfeasibleDiscretization& e) {
      t.notes.push_back("lambda_d = " + short_number(lambda_d) + ": dependent infeasible: " +
                        e.what());
    }
    if (!indep.feasible) {
      t.notes.push_back("lambda_d = " + short_number(lambda_d) +
                        ": independent infeasible: " + indep.reason);
    }
    t.rows.push_back({lambda_d, p_indep, p_dep, p_dep / p_indep});
  }
  return t;
}

Table convergence_sweep(const ExperimentConfig& cfg) {
  const NetworkParams net = cfg.network();
  const PowerPolicy pc = cfg.cellular_policy();
  Table t;
  t.columns = {"n", "objective", "relative_change", "newton_steps", "kkt_residual"};
  double previous = kNaN;
  for (std::size_t n : cfg.n_list) {
    const GpSolution sol = dependent_minimum_power(net, pc, n, cfg.truncation()).solution;
    const double change = std::isnan(previous) ? kNaN : (sol.objective - previous) / previous;
    t.rows.push_back({static_cast<double>(n), sol.objective, change,
                      static_cast<double>(sol.iterations), sol.kkt_residual});
    previous = sol.objective;
  }
  return t;
}

Table run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.scenario) {
    case Scenario::feasibility_independent:
      return boundary_table(
          feasibility_independent(cfg.network(), cfg.cellular_policy(), cfg.pd_max),
          cfg.points);
    case Scenario::feasibility_dependent: return feasibility_dependent_table(cfg);
    case Scenario::optimize_independent: return optimize_independent_table(cfg);
    case Scenario::optimize_dependent: return optimize_dependent_table(cfg);
    case Scenario::simulate: return simulate_table(cfg);
    case Scenario::compare: return compare_sweep(cfg);
    case Scenario::convergence: return convergence_sweep(cfg);
  }
  throw InvalidParameter("unknown scenario");
}

std::string format_csv(const ExperimentConfig& cfg, const Table& table) {
  std::string out = "#";
  for (const auto& [k, v] : to_key_values(cfg)) out += " " + k + "=" + v;
  out += "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out += (i ? "," : "") + table.columns[i];
  }
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      if (const double* v = std::get_if<double>(&row[i])) out += short_number(*v);
      else out += std::get<std::string>(row[i]);
    }
    out += "\n";
  }
  return out;
}

std::string format_json(const ExperimentConfig& cfg, const Table& table) {
  nlohmann::ordered_json j;
  j["parameters"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : to_key_values(cfg)) j["parameters"][k] = v;
  j["columns"] = table.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const Cell& c : row) {
      if (const double* v = std::get_if<double>(&c)) {
        if (std::isfinite(*v)) r.push_back(*v);
        else r.push_back(nullptr);
      } else {
        r.push_back(std::get<std::string>(c));
      }
    }
    j["rows"].push_back(std::move(r));
  }
  j["notes"] = table.notes;
  return j.dump(2) + "\n";
}

}  // namespace d2dpc
