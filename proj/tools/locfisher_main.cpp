// Copyright 2026 The LocFisher Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: fisher-sweep, composite, montecarlo, validate.
// Exit codes: 0 success, 1 validation failure, 2 configuration error,
// 3 numeric failure (message names the offending grid point).

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "locfisher/acceptance.hpp"
#include "locfisher/composite.hpp"
#include "locfisher/montecarlo.hpp"
#include "locfisher/numerics.hpp"
#include "locfisher/scenarios.hpp"
#include "locfisher/serialization.hpp"

namespace {

using namespace locfisher;
using serialization::format_double;
using serialization::json;

constexpr int kExitValidationFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericError = 3;

struct GridSpec {
  double start = 0.05;
  double stop = 3.0;
  int points = 50;
  std::string scale = "lin";

  std::vector<double> build() const {
    if (points < 1) throw InvalidInput("t grid must have at least one point");
    if (scale == "lin") return numerics::linear_grid(start, stop, points);
    if (scale == "log") return numerics::log_grid(start, stop, points);
    throw InvalidInput("t-scale must be 'lin' or 'log'");
  }
};

// Effective configuration echoed into every output; re-running from the echo
// reproduces the output byte for byte.
struct RunConfig {
  std::string command;
  json model = {{"type", "two_level_decay"},
                {"params", {{"gamma_plus", 2.0}, {"gamma_minus", 1.0}}}};
  double g = 1e-4;
  GridSpec grid;
  int n_subsystems = 1;
  std::string initial = "iid";
  std::string estimator = "optimal";
  double t = -1.0;  // montecarlo: <0 means the model's optimal time
  std::size_t shots = 100000;
  int repeats = 10;
  std::uint64_t seed = 1;
  std::string out_path;  // empty = stdout
  std::string format = "csv";

  json to_json() const {
    return json{{"command", command},
                {"model", model},
                {"g", g},
                {"t_grid",
                 {{"start", grid.start},
                  {"stop", grid.stop},
                  {"points", grid.points},
                  {"scale", grid.scale}}},
                {"N", n_subsystems},
                {"initial", initial},
                {"estimator", estimator},
                {"t", t},
                {"shots", shots},
                {"repeats", repeats},
                {"seed", seed},
                {"format", format}};
  }

  static RunConfig from_json(const json& j) {
    RunConfig config;
    config.command = j.at("command").get<std::string>();
    config.model = j.at("model");
    config.g = serialization::parse_double(j.at("g"));
    const json& grid = j.at("t_grid");
    config.grid.start = serialization::parse_double(grid.at("start"));
    config.grid.stop = serialization::parse_double(grid.at("stop"));
    config.grid.points = grid.at("points").get<int>();
    config.grid.scale = grid.at("scale").get<std::string>();
    config.n_subsystems = j.at("N").get<int>();
    config.initial = j.at("initial").get<std::string>();
    config.estimator = j.at("estimator").get<std::string>();
    config.t = serialization::parse_double(j.at("t"));
    config.shots = j.at("shots").get<std::size_t>();
    config.repeats = j.at("repeats").get<int>();
    config.seed = j.at("seed").get<std::uint64_t>();
    config.format = j.at("format").get<std::string>();
    return config;
  }
};

json load_model_argument(const std::string& arg) {
  if (arg == "two_level_single" || arg == "two_level_iid2" ||
      arg == "two_level_ent2" || arg == "two_level_decay") {
    return json{{"type", "two_level_decay"},
                {"params", {{"gamma_plus", 2.0}, {"gamma_minus", 1.0}}}};
  }
  std::ifstream in(arg);
  if (!in) throw InvalidInput("cannot open model file '" + arg + "'");
  json parsed;
  in >> parsed;
  return parsed;
}

// Preset names fix the composite options; explicit flags still win.
void apply_preset(const std::string& name, CLI::App* active,
                  RunConfig& config) {
  const auto unset = [&](const char* option) {
    const CLI::Option* o = active->get_option_no_throw(option);
    return o == nullptr || o->count() == 0;
  };
  if (name == "two_level_single") {
    if (unset("--N")) config.n_subsystems = 1;
  } else if (name == "two_level_iid2") {
    if (unset("--N")) config.n_subsystems = 2;
    if (unset("--initial")) config.initial = "iid";
  } else if (name == "two_level_ent2") {
    if (unset("--N")) config.n_subsystems = 2;
    if (unset("--initial")) config.initial = "entangled";
  }
}

int worker_count(std::size_t n_items) {
  unsigned count = std::thread::hardware_concurrency();
  if (count == 0) count = 1;
  if (const char* env = std::getenv("LOCFISHER_THREADS")) {
    // LOCFISHER_THREADS caps the pool; the row order of the output never
    // depends on the worker count.
    const long requested = std::strtol(env, nullptr, 10);
    if (requested >= 1) count = static_cast<unsigned>(requested);
  }
  return static_cast<int>(std::min<std::size_t>(count, n_items));
}

// Runs fn(i) for i in [0, n) on a small worker pool; results land in index
// order, so output is independent of scheduling.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const int workers = worker_count(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  for (auto& thread : pool) thread.join();
  if (error) std::rethrow_exception(error);
}

void ensure_finite(double value, const std::string& what, double g, double t) {
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << "non-finite value for " << what << " at (g=" << g << ", t=" << t
        << ")";
    throw NumericError(msg.str());
  }
}

// Failures inside a grid-point evaluation are numeric errors annotated with
// the offending (g, t), per the exit-code contract.
template <typename Fn>
void with_numeric_context(double g, double t, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    std::ostringstream msg;
    msg << "at (g=" << g << ", t=" << t << "): " << e.what();
    throw NumericError(msg.str());
  }
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;  // double or integer cells
};

std::string format_cell(const json& cell) {
  if (cell.is_number_float()) return format_double(cell.get<double>());
  return cell.dump();
}

void write_output(const Table& table, const RunConfig& config) {
  std::ostringstream body;
  if (config.format == "csv") {
    body << "# config " << config.to_json().dump() << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c)
      body << table.columns[c]
           << (c + 1 < table.columns.size() ? "," : "\n");
    for (const auto& row : table.rows)
      for (std::size_t c = 0; c < row.size(); ++c)
        body << format_cell(row[c]) << (c + 1 < row.size() ? "," : "\n");
  } else if (config.format == "json") {
    json rows = json::array();
    for (const auto& row : table.rows) {
      json entry = json::object();
      for (std::size_t c = 0; c < row.size(); ++c)
        entry[table.columns[c]] = row[c];
      rows.push_back(entry);
    }
    body << json{{"config", config.to_json()}, {"rows", rows}}.dump(2) << "\n";
  } else {
    throw InvalidInput("format must be 'csv' or 'json'");
  }
  if (config.out_path.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(config.out_path, std::ios::binary);
    if (!out)
      throw InvalidInput("cannot open output file '" + config.out_path + "'");
    out << body.str();
  }
}

serialization::ScenarioDefinition scenario_definition(const RunConfig& config) {
  serialization::ScenarioDefinition def;
  def.n_subsystems = config.n_subsystems;
  def.model = serialization::model_from_json(config.model);
  def.g = config.g;
  if (config.initial == "iid")
    def.initial_state = "iid";
  else if (config.initial == "entangled")
    def.initial_state = "entangled_pair";
  else {
    std::ifstream in(config.initial);
    if (!in)
      throw InvalidInput("cannot open initial-state file '" + config.initial +
                         "'");
    json parsed;
    in >> parsed;
    def.initial_state = parsed;
  }
  return def;
}

fisher::StateFamily single_family_for(const serialization::ModelDefinition& model,
                                      double t) {
  if (model.is_two_level()) return model.two_level().single_system_family(t);
  const auto channel_family = model.channel_family();
  const int dim = model.local_dim();
  fisher::StateFamily family;
  family.eval = [channel_family, dim, t](double g) {
    ComplexMatrix rho0 = ComplexMatrix::Zero(dim, dim);
    rho0(0, 0) = 1.0;
    const ComplexMatrix evolved =
        linalg::hermitian_part(channel_family(g, t).apply(rho0));
    return states::extend_with_blank(states::DensityOperator(
        evolved, states::TraceClass::Subnormalized));
  };
  return family;
}

int cmd_fisher_sweep(const RunConfig& config) {
  const auto model = serialization::model_from_json(config.model);
  const std::vector<double> grid = config.grid.build();
  const std::optional<composite::CompositeScenario> scenario =
      config.n_subsystems >= 2
          ? std::optional<composite::CompositeScenario>(
                scenario_definition(config).build())
          : std::nullopt;

  Table table;
  table.columns = {"t",          "J_single", "j_N",
                   "J_N",        "blank_term", "trace_rho_par"};
  table.rows.assign(grid.size(), {});
  parallel_for(grid.size(), [&](std::size_t i) {
    const double t = grid[i];
    with_numeric_context(config.g, t, [&] {
      const auto family = single_family_for(model, t);
      const auto report = family.local_fisher_at(config.g);
      const auto state = family.eval(config.g);
      double j_n = report.value;
      double j_big = report.value;
      if (scenario) {
        j_n = composite::j_N(*scenario, config.g, t).value;
        j_big = composite::J_N(*scenario, config.g, t).value;
      }
      for (double v : {t, report.value, j_n, j_big, report.blank_term,
                       state.accessible_block.trace()})
        ensure_finite(v, "fisher sweep row", config.g, t);
      table.rows[i] = {t,     report.value,      j_n,
                       j_big, report.blank_term,
                       state.accessible_block.trace()};
    });
  });
  write_output(table, config);
  return 0;
}

int cmd_composite(const RunConfig& config, const std::string& dump_state_path) {
  if (config.n_subsystems < 1)
    throw InvalidInput("composite: need N >= 1");
  const auto scenario = scenario_definition(config).build();
  const std::vector<double> grid = config.grid.build();

  Table table;
  table.columns = {"t", "trace_rho_par", "j_N", "J_N"};
  const unsigned n_masks = 1u << config.n_subsystems;
  for (unsigned mask = 0; mask < n_masks; ++mask) {
    std::string label = serialization::mask_to_key(mask, config.n_subsystems);
    for (char& c : label)
      if (c == ',') c = '_';
    table.columns.push_back("J_block_" +
                            (mask == 0 ? std::string("acc") : label));
  }
  table.rows.assign(grid.size(), {});
  parallel_for(grid.size(), [&](std::size_t i) {
    const double t = grid[i];
    with_numeric_context(config.g, t, [&] {
      const auto small = composite::j_N(scenario, config.g, t);
      const auto big = composite::J_N(scenario, config.g, t);
      std::vector<double> values{
          t, big.descendants.blocks.at(0u).trace().real(), small.value,
          big.value};
      for (unsigned mask = 0; mask < n_masks; ++mask)
        values.push_back(big.per_block.at(mask));
      std::vector<json> row;
      for (double v : values) {
        ensure_finite(v, "composite row", config.g, t);
        row.push_back(v);
      }
      table.rows[i] = row;
    });
  });
  write_output(table, config);
  if (!dump_state_path.empty()) {
    // Evolved local state at the last grid point, in the block schema.
    const double t = grid.back();
    const auto state = composite::blocks_via_channels(scenario, config.g, t);
    std::ofstream out(dump_state_path, std::ios::binary);
    if (!out)
      throw InvalidInput("cannot open state dump file '" + dump_state_path +
                         "'");
    out << serialization::to_json(state).dump(2) << "\n";
  }
  return 0;
}

int cmd_montecarlo(const RunConfig& config) {
  if (config.repeats < 1) throw InvalidInput("montecarlo: need repeats >= 1");
  if (config.shots < 1) throw InvalidInput("montecarlo: need shots >= 1");
  const auto model = serialization::model_from_json(config.model);
  double t = config.t;
  if (t < 0.0) {
    if (!model.is_two_level())
      throw InvalidInput("montecarlo: --t is required for custom models");
    t = model.two_level().optimal_time().t_star;
  }
  const auto family = single_family_for(model, t);
  const auto report = family.local_fisher_at(config.g);

  states::LocalEstimator estimator = report.optimal_estimator;
  if (config.estimator == "optimal") {
    // keep
  } else if (config.estimator == "sigma_y") {
    if (!model.is_two_level())
      throw InvalidInput("montecarlo: sigma_y estimator needs the two-level model");
    estimator = model.two_level().sigma_y_estimator();
  } else {
    throw InvalidInput("montecarlo: estimator must be 'optimal' or 'sigma_y'");
  }

  const auto check = montecarlo::empirical_cr_check(
      family, estimator, config.g, config.shots, config.repeats, config.seed);

  Table table;
  table.columns = {"seed", "n_shots", "mean", "variance", "g_hat",
                   "delta_g_sq"};
  const auto calibration =
      fisher::calibrate_linear(family, estimator, config.g);
  for (const auto& stats : check.repeats) {
    const double dg_sq =
        stats.sample_variance * calibration.scale * calibration.scale;
    for (double v : {stats.sample_mean, stats.sample_variance,
                     stats.g_estimate, dg_sq})
      ensure_finite(v, "montecarlo row", config.g, t);
    table.rows.push_back({json(stats.rng_seed), json(stats.n_shots),
                          json(stats.sample_mean),
                          json(stats.sample_variance), json(stats.g_estimate),
                          json(dg_sq)});
  }
  write_output(table, config);
  return 0;
}

int cmd_validate(bool as_json, const std::string& out_path,
                 const std::vector<std::string>& inject_failures) {
  acceptance::BatteryOptions options;
  options.inject_failures = inject_failures;
  const auto results = acceptance::run_battery(options);
  bool all_pass = true;
  for (const auto& r : results) all_pass = all_pass && r.pass;

  std::ostringstream body;
  if (as_json) {
    json criteria = json::array();
    for (const auto& r : results)
      criteria.push_back({{"id", r.id},
                          {"name", r.name},
                          {"pass", r.pass},
                          {"detail", r.detail}});
    body << json{{"criteria", criteria}, {"all_pass", all_pass}}.dump(2)
         << "\n";
  } else {
    for (const auto& r : results)
      body << (r.pass ? "PASS" : "FAIL") << "  " << r.id << ". " << r.name
           << ": " << r.detail << "\n";
    body << (all_pass ? "all criteria passed" : "validation FAILED") << "\n";
  }
  if (out_path.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw InvalidInput("cannot open output file '" + out_path + "'");
    out << body.str();
  }
  return all_pass ? 0 : kExitValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum parameter estimation with locally accessible "
               "observables"};
  app.require_subcommand(1);

  RunConfig config;
  std::string model_arg = "two_level_single";
  std::string config_path;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--model", model_arg,
                    "preset name or model JSON file");
    cmd->add_option("--g", config.g, "coupling parameter");
    cmd->add_option("--t-start", config.grid.start, "grid start");
    cmd->add_option("--t-stop", config.grid.stop, "grid stop");
    cmd->add_option("--t-points", config.grid.points, "grid size");
    cmd->add_option("--t-scale", config.grid.scale, "lin or log");
    cmd->add_option("--out", config.out_path, "output path (default stdout)");
    cmd->add_option("--format", config.format, "csv or json");
    cmd->add_option("--config", config_path,
                    "run from an echoed config JSON file (overrides flags)");
  };

  CLI::App* sweep = app.add_subcommand("fisher-sweep",
                                       "information functionals over a t grid");
  add_common(sweep);
  sweep->add_option("--N", config.n_subsystems, "number of subsystems");
  sweep->add_option("--initial", config.initial,
                    "iid, entangled, or a state JSON file");

  CLI::App* comp = app.add_subcommand("composite",
                                      "block-decomposed composite information");
  add_common(comp);
  comp->add_option("--N", config.n_subsystems, "number of subsystems");
  comp->add_option("--initial", config.initial,
                   "iid, entangled, or a state JSON file");
  comp->add_option("--scenario", config_path,
                   "scenario JSON file {N, model, initial_state, g}");
  std::string dump_state_path;
  comp->add_option("--dump-state", dump_state_path,
                   "write the evolved local state at the last grid point");

  CLI::App* mc = app.add_subcommand("montecarlo",
                                    "sampled measurement statistics");
  add_common(mc);
  mc->add_option("--t", config.t, "measurement time (default: optimal time)");
  mc->add_option("--shots", config.shots, "shots per repeat");
  mc->add_option("--repeats", config.repeats, "number of repeats");
  mc->add_option("--seed", config.seed, "master RNG seed");
  mc->add_option("--estimator", config.estimator, "optimal or sigma_y");

  bool validate_json = false;
  std::string validate_out;
  std::vector<std::string> inject;
  CLI::App* validate = app.add_subcommand("validate",
                                          "run the validation battery");
  validate->add_flag("--json", validate_json, "machine-readable report");
  validate->add_option("--out", validate_out, "output path (default stdout)");
  validate
      ->add_option("--inject-failure", inject,
                   "mark a criterion failed (harness self-test)")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (validate->parsed())
      return cmd_validate(validate_json, validate_out, inject);

    CLI::App* active = sweep->parsed() ? sweep : comp->parsed() ? comp : mc;
    config.command = active->get_name();

    if (!config_path.empty() && comp->parsed() &&
        comp->count("--scenario") > 0) {
      // Scenario file: N, model, initial_state, g (flags still override).
      std::ifstream in(config_path);
      if (!in)
        throw InvalidInput("cannot open scenario file '" + config_path + "'");
      json parsed;
      in >> parsed;
      const auto def = serialization::scenario_from_json(parsed);
      if (comp->count("--N") == 0) config.n_subsystems = def.n_subsystems;
      if (comp->count("--g") == 0) config.g = def.g;
      config.model = serialization::model_to_json(def.model);
      if (def.initial_state.is_string())
        config.initial = def.initial_state.get<std::string>() ==
                                 "entangled_pair"
                             ? "entangled"
                             : "iid";
    } else if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in)
        throw InvalidInput("cannot open config file '" + config_path + "'");
      json parsed;
      in >> parsed;
      const RunConfig loaded = RunConfig::from_json(parsed);
      const std::string out_override = config.out_path;
      config = loaded;
      if (!out_override.empty()) config.out_path = out_override;
    } else {
      config.model = load_model_argument(model_arg);
      if (comp->parsed() && comp->count("--N") == 0) config.n_subsystems = 2;
      apply_preset(model_arg, active, config);
    }

    if (config.command == "fisher-sweep") return cmd_fisher_sweep(config);
    if (config.command == "composite")
      return cmd_composite(config, dump_state_path);
    if (config.command == "montecarlo") return cmd_montecarlo(config);
    throw InvalidInput("unknown command '" + config.command + "'");
  } catch (const InvalidInput& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumericError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericError;
  }
}
