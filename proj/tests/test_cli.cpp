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

// End-to-end checks of the command-line binary: output shapes, exit-code
// contract, determinism, and config-echo round trips.

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#ifndef LOCFISHER_CLI_PATH
#error "LOCFISHER_CLI_PATH must be defined by the build"
#endif
#ifndef LOCFISHER_SOURCE_DIR
#error "LOCFISHER_SOURCE_DIR must be defined by the build"
#endif

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

CommandResult run_cli(const std::string& args, bool raw_command = false) {
  const fs::path dir = fs::temp_directory_path() / "locfisher_cli_tests";
  fs::create_directories(dir);
  static int counter = 0;
  const fs::path capture = dir / ("out_" + std::to_string(counter++) + ".txt");
  const std::string command =
      (raw_command ? args : std::string(LOCFISHER_CLI_PATH) + " " + args) +
      " > " + capture.string() + " 2>&1";
  const int raw = std::system(command.c_str());
  CommandResult result;
  result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(capture);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  result.output = buffer.str();
  return result;
}

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "locfisher_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream cols(line);
    std::string cell;
    while (std::getline(cols, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("fisher-sweep emits the expected table with a peak near ln 2") {
  const fs::path out = temp_file("sweep.csv");
  const auto result = run_cli(
      "fisher-sweep --model two_level_single --g 1e-4 --t-start 0.05 "
      "--t-stop 3 --t-points 50 --t-scale log --format csv --out " +
      out.string());
  REQUIRE(result.exit_code == 0);
  const auto rows = parse_csv(read_file(out));
  REQUIRE(rows.size() == 51);  // header + 50 points
  CHECK(rows[0] == std::vector<std::string>{"t", "J_single", "j_N", "J_N",
                                            "blank_term", "trace_rho_par"});
  double best_t = 0.0, best_j = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double t = std::stod(rows[i][0]);
    const double j = std::stod(rows[i][1]);
    CHECK(std::isfinite(j));
    if (j > best_j) {
      best_j = j;
      best_t = t;
    }
  }
  // The grid resolution bounds how close the maximum lands to ln 2.
  CHECK(std::abs(best_t - std::log(2.0)) < 0.1);
  CHECK(best_j == doctest::Approx(0.25).epsilon(0.01));
}

TEST_CASE("identical configs produce byte-identical files") {
  const fs::path a = temp_file("repeat_a.csv");
  const fs::path b = temp_file("repeat_b.csv");
  const std::string flags =
      "fisher-sweep --model two_level_single --g 1e-4 --t-points 7 --out ";
  REQUIRE(run_cli(flags + a.string()).exit_code == 0);
  REQUIRE(run_cli(flags + b.string()).exit_code == 0);
  const std::string contents = read_file(a);
  CHECK(contents == read_file(b));
  CHECK(!contents.empty());
}

TEST_CASE("config echo reproduces the run") {
  const fs::path first = temp_file("echo_first.csv");
  REQUIRE(run_cli("fisher-sweep --model two_level_ent2 --g 2e-4 --t-points 5 "
                  "--out " +
                  first.string())
              .exit_code == 0);
  const std::string original = read_file(first);
  // Extract the echoed config line.
  std::istringstream in(original);
  std::string line;
  std::getline(in, line);
  REQUIRE(line.rfind("# config ", 0) == 0);
  const fs::path config_file = temp_file("echo_config.json");
  {
    std::ofstream out(config_file);
    out << line.substr(9) << "\n";
  }
  const fs::path second = temp_file("echo_second.csv");
  REQUIRE(run_cli("fisher-sweep --config " + config_file.string() + " --out " +
                  second.string())
              .exit_code == 0);
  CHECK(read_file(second) == original);
}

TEST_CASE("composite accepts a scenario file") {
  const fs::path scenario = temp_file("scenario.json");
  {
    std::ofstream out(scenario);
    out << R"({"N": 2,
               "model": {"type": "two_level_decay",
                         "params": {"gamma_plus": 2.0, "gamma_minus": 1.0}},
               "initial_state": "entangled_pair",
               "g": 1e-4})";
  }
  const fs::path out_path = temp_file("scenario_out.csv");
  const auto result =
      run_cli("composite --scenario " + scenario.string() +
              " --t-points 3 --out " + out_path.string());
  REQUIRE(result.exit_code == 0);
  const auto rows = parse_csv(read_file(out_path));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0][0] == "t");
  CHECK(rows[0][4] == "J_block_acc");
  // j_N <= J_N on every row (monotonicity, visible in the table).
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(std::stod(rows[i][2]) <= std::stod(rows[i][3]) + 1e-12);
}

TEST_CASE("dumped local states parse back through the block schema") {
  const fs::path dump = temp_file("dump_state.json");
  const auto result =
      run_cli("composite --model two_level_ent2 --g 1e-4 --t-points 2 "
              "--t-stop 1.0 --dump-state " +
              dump.string() + " --out " + temp_file("dump_table.csv").string());
  REQUIRE(result.exit_code == 0);
  const json parsed = json::parse(read_file(dump));
  CHECK(parsed.at("n_subsystems").get<int>() == 2);
  CHECK(parsed.at("local_dim").get<int>() == 2);
  REQUIRE(parsed.at("blocks").size() == 4);
  // Block traces sum to one: "" is 4x4, "1"/"2" are 2x2, "1,2" is 1x1;
  // entries are [re, im] decimal strings in row-major order.
  double total = 0.0;
  for (const auto& [key, block] : parsed.at("blocks").items()) {
    const int dim = key.empty() ? 4 : (key == "1,2" ? 1 : 2);
    for (int d = 0; d < dim; ++d)
      total += std::stod(
          block.at(d * dim + d).at(0).get<std::string>());
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("custom model files drive the sweep") {
  const fs::path model = temp_file("custom_model.json");
  {
    // 3-level Hermitian model with a 2-dim accessible subspace:
    // H(g) = H0 + g H1 with coupling into the third level.
    std::ofstream out(model);
    out << R"({"type": "custom", "dim": 3, "accessible_dim": 2,
               "hermitian": true,
               "hamiltonian_coefficients": [
                 [["1","0"],["0","0"],["0.4","0"],
                  ["0","0"],["-1","0"],["0.7","0"],
                  ["0.4","0"],["0.7","0"],["0.2","0"]],
                 [["0","0"],["1","0"],["0","0"],
                  ["1","0"],["0","0"],["0.3","0"],
                  ["0","0"],["0.3","0"],["0","0"]]
               ]})";
  }
  const auto result = run_cli("fisher-sweep --model " + model.string() +
                              " --g 0.05 --t-points 4 --t-start 0.2 "
                              "--t-stop 1.4");
  REQUIRE(result.exit_code == 0);
  const auto rows = parse_csv(result.output);
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][1]) >= 0.0);
    CHECK(std::stod(rows[i][5]) <= 1.0 + 1e-9);
  }
}

TEST_CASE("montecarlo is reproducible and follows the CSV contract") {
  const fs::path a = temp_file("mc_a.csv");
  const fs::path b = temp_file("mc_b.csv");
  const std::string flags =
      "montecarlo --g 1e-3 --shots 5000 --repeats 3 --seed 11 --out ";
  REQUIRE(run_cli(flags + a.string()).exit_code == 0);
  REQUIRE(run_cli(flags + b.string()).exit_code == 0);
  CHECK(read_file(a) == read_file(b));
  const auto rows = parse_csv(read_file(a));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"seed", "n_shots", "mean",
                                            "variance", "g_hat",
                                            "delta_g_sq"});
  // Distinct per-repeat substream seeds.
  CHECK(rows[1][0] != rows[2][0]);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][1] == "5000");
    CHECK(std::isfinite(std::stod(rows[i][5])));
  }
}

TEST_CASE("worker count does not change the output") {
  const fs::path serial = temp_file("threads_1.csv");
  const fs::path pooled = temp_file("threads_4.csv");
  const std::string flags =
      "composite --model two_level_iid2 --g 1e-4 --t-points 6 --out ";
  REQUIRE(run_cli("env LOCFISHER_THREADS=1 " + std::string(LOCFISHER_CLI_PATH) +
                  " " + flags + serial.string(),
                  /*raw=*/true)
              .exit_code == 0);
  REQUIRE(run_cli("env LOCFISHER_THREADS=4 " + std::string(LOCFISHER_CLI_PATH) +
                  " " + flags + pooled.string(),
                  /*raw=*/true)
              .exit_code == 0);
  CHECK(read_file(serial) == read_file(pooled));
}

TEST_CASE("error exit codes: 2 for config, 3 for numeric") {
  CHECK(run_cli("fisher-sweep --t-points 0").exit_code == 2);
  CHECK(run_cli("montecarlo --repeats 0").exit_code == 2);
  CHECK(run_cli("fisher-sweep --model /nonexistent.json").exit_code == 2);
  CHECK(run_cli("fisher-sweep --t-scale cubic").exit_code == 2);
  CHECK(run_cli("nonsense-subcommand").exit_code == 2);
  // Numeric failure: the evolution norm guard trips at very large t.
  const auto numeric = run_cli(
      "fisher-sweep --model two_level_single --g 1e-4 --t-start 300 "
      "--t-stop 320 --t-points 2");
  CHECK(numeric.exit_code == 3);
  CHECK(numeric.output.find("t=") != std::string::npos);
}

TEST_CASE("validate --json matches the bundled report schema") {
  const auto result = run_cli("validate --json");
  REQUIRE(result.exit_code == 0);
  const json report = json::parse(result.output);

  // Structural validation against schemas/validate_report.schema.json.
  const json schema = json::parse(read_file(
      fs::path(LOCFISHER_SOURCE_DIR) / "schemas/validate_report.schema.json"));
  for (const auto& required : schema.at("required"))
    CHECK(report.contains(required.get<std::string>()));
  CHECK(report.at("all_pass").is_boolean());
  CHECK(report.at("all_pass").get<bool>());
  const json& criteria = report.at("criteria");
  CHECK(criteria.is_array());
  CHECK(criteria.size() >=
        schema.at("properties").at("criteria").at("minItems").get<std::size_t>());
  const json item_schema =
      schema.at("properties").at("criteria").at("items");
  for (const auto& criterion : criteria) {
    for (const auto& required : item_schema.at("required"))
      CHECK(criterion.contains(required.get<std::string>()));
    CHECK(criterion.at("pass").is_boolean());
    CHECK(criterion.at("id").is_number_integer());
    CHECK(criterion.at("name").is_string());
  }
}

TEST_CASE("validate failure injection names the criterion and exits 1") {
  const auto result = run_cli("validate --inject-failure oracle_equivalence");
  CHECK(result.exit_code == 1);
  CHECK(result.output.find("FAIL") != std::string::npos);
  CHECK(result.output.find("oracle_equivalence") != std::string::npos);
}

TEST_SUITE_END();
