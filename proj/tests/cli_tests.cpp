#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarmnes/checkpoint.hpp"
#include "swarmnes/io.hpp"
#include "swarmnes/network.hpp"

using namespace swarmnes;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = SWARMNES_CLI_PATH;

int run_cli(const std::string& args) {
  const std::string cmd = "\"" + kCli + "\" " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  if (rc == -1) {
    return -1;
  }
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("swarmnes_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

void check_all_numeric(const CsvTable& table,
                       const std::vector<std::string>& expected_header) {
  REQUIRE(table.header == expected_header);
  for (const auto& row : table.rows) {
    for (const std::string& field : row) {
      CHECK_NOTHROW(parse_double(field));
    }
  }
}

// A genome whose velocity output is saturated at zero: the robot never
// moves (it may still rotate via the zero rotation bias, which stays 0).
fs::path write_parked_genome(const fs::path& dir) {
  Eigen::VectorXd params = Eigen::VectorXd::Zero(47);
  params(46) = -1000.0;
  const fs::path path = dir / "parked_genome.json";
  save_genome(path, NetworkSpec{}, params, 0.0);
  return path;
}

const fs::path& smoke_train_dir() {
  static const fs::path dir = [] {
    const fs::path d = fresh_dir("train_smoke");
    REQUIRE(run_cli("train --config default --evals 30 --seed 7 --out-dir " +
                    q(d)) == 0);
    return d;
  }();
  return dir;
}

}  // namespace

TEST_CASE("cli: help and usage errors") {
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("train --help") == 0);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("bogus-subcommand") == 2);
  CHECK(run_cli("eval") == 2);  // missing required arguments
}

TEST_CASE("cli: train smoke run produces all artifacts") {
  const fs::path dir = smoke_train_dir();
  CHECK(fs::exists(dir / "checkpoint.json"));
  CHECK(fs::exists(dir / "train_log.csv"));
  CHECK(fs::exists(dir / "best_genome.json"));
  CHECK(fs::exists(dir / "manifest.json"));

  const CsvTable log = read_csv(dir / "train_log.csv");
  check_all_numeric(log, {"generation", "evaluations_so_far", "best_fitness",
                          "mean_fitness", "sigma"});
  REQUIRE(log.rows.size() == 2);  // 30 evaluations at lambda = 15
  CHECK(log.rows[0][1] == "15");
  CHECK(log.rows[1][1] == "30");

  const json manifest = json::parse(read_file(dir / "manifest.json"));
  CHECK(manifest.at("command") == "train");
  CHECK(manifest.at("inputs").at("seed") == 7);
  CHECK(manifest.at("tool") == "swarmnes");

  const GenomeFile best = load_genome(dir / "best_genome.json");
  CHECK(best.params.size() == 47);
}

TEST_CASE("cli: repeated train runs are byte-identical") {
  const fs::path a = fresh_dir("train_det_a");
  const fs::path b = fresh_dir("train_det_b");
  const std::string args = "train --config default --evals 30 --seed 7 --out-dir ";
  REQUIRE(run_cli(args + q(a)) == 0);
  REQUIRE(run_cli(args + q(b)) == 0);
  CHECK(read_file(a / "train_log.csv") == read_file(b / "train_log.csv"));
  CHECK(read_file(a / "checkpoint.json") == read_file(b / "checkpoint.json"));
  CHECK(read_file(a / "best_genome.json") == read_file(b / "best_genome.json"));
}

TEST_CASE("cli: train rejects a zero evaluation budget") {
  const fs::path dir = fresh_dir("train_zero");
  CHECK(run_cli("train --config default --evals 0 --out-dir " + q(dir)) == 2);
}

TEST_CASE("cli: train rejects bad config files") {
  const fs::path dir = fresh_dir("train_badcfg");
  const fs::path cfg = dir / "bad.json";
  write_file_atomic(cfg, "{\"no_such_field\": 1}");
  CHECK(run_cli("train --config " + q(cfg) + " --out-dir " + q(dir)) == 2);
  CHECK(run_cli("train --config " + q(dir / "missing.json") + " --out-dir " +
                q(dir)) == 2);
}

TEST_CASE("cli: eval writes schema-clean trace and metrics") {
  const fs::path train_dir = smoke_train_dir();
  const fs::path dir = fresh_dir("eval_basic");
  REQUIRE(run_cli("eval " + q(train_dir / "best_genome.json") +
                  " --w1 1 --robots 3 --duration 10 --seed 3 --out-dir " +
                  q(dir)) == 0);

  const CsvTable trace = read_csv(dir / "trace.csv");
  check_all_numeric(
      trace, {"time_s", "robot_id", "x_m", "y_m", "heading_rad", "dx_m", "dy_m",
              "sensor_front", "sensor_right", "sensor_back", "sensor_left",
              "rotation_cmd_rad", "velocity_cmd_mps"});
  CHECK(trace.rows.size() == 30);  // 10 steps x 3 robots

  const CsvTable metrics = read_csv(dir / "metrics.csv");
  check_all_numeric(metrics, {"time_s", "mean_l1_distance_m", "mean_speed_mps"});
  CHECK(metrics.rows.size() == 10);

  const json manifest = json::parse(read_file(dir / "manifest.json"));
  CHECK(manifest.at("command") == "eval");
}

TEST_CASE("cli: eval determinism and degenerate duration") {
  const fs::path train_dir = smoke_train_dir();
  const fs::path a = fresh_dir("eval_det_a");
  const fs::path b = fresh_dir("eval_det_b");
  const std::string args = "eval " + q(train_dir / "best_genome.json") +
                           " --w1 0.5 --robots 4 --duration 15 --seed 9 "
                           "--out-dir ";
  REQUIRE(run_cli(args + q(a)) == 0);
  REQUIRE(run_cli(args + q(b)) == 0);
  CHECK(read_file(a / "trace.csv") == read_file(b / "trace.csv"));
  CHECK(read_file(a / "metrics.csv") == read_file(b / "metrics.csv"));

  const fs::path zero = fresh_dir("eval_zero");
  REQUIRE(run_cli("eval " + q(train_dir / "best_genome.json") +
                  " --w1 1 --duration 0 --out-dir " + q(zero)) == 0);
  CHECK(read_csv(zero / "metrics.csv").rows.empty());
  CHECK(read_csv(zero / "trace.csv").rows.empty());
}

TEST_CASE("cli: eval argument and capacity errors") {
  const fs::path train_dir = smoke_train_dir();
  const fs::path dir = fresh_dir("eval_errors");
  const std::string genome = q(train_dir / "best_genome.json");
  CHECK(run_cli("eval " + genome + " --w1 1.5 --out-dir " + q(dir)) == 2);
  CHECK(run_cli("eval " + genome + " --w1 -0.5 --out-dir " + q(dir)) == 2);
  CHECK(run_cli("eval " + q(dir / "missing.json") + " --w1 1 --out-dir " +
                q(dir)) == 3);
  CHECK(run_cli("eval " + genome + " --w1 1 --robots 500 --out-dir " + q(dir)) ==
        4);

  // genome whose spec does not fit the controller interface
  NetworkSpec odd;
  odd.layer_sizes = {2, 3, 1};
  save_genome(dir / "odd.json", odd, Eigen::VectorXd::Zero(13), 0.0);
  CHECK(run_cli("eval " + q(dir / "odd.json") + " --w1 1 --out-dir " + q(dir)) ==
        2);
}

TEST_CASE("cli: sweep row counts follow the schedule") {
  const fs::path train_dir = smoke_train_dir();
  const std::string genome = q(train_dir / "best_genome.json");

  const fs::path half = fresh_dir("sweep_half");
  REQUIRE(run_cli("sweep " + genome + " --dw 0.5 --duration 10 --out-dir " +
                  q(half)) == 0);
  const CsvTable pareto = read_csv(half / "pareto.csv");
  check_all_numeric(pareto, {"w1", "w2", "mean_obj1_m", "mean_obj2_mps"});
  REQUIRE(pareto.rows.size() == 3);
  CHECK(pareto.rows[0][0] == "1");
  CHECK(pareto.rows[2][1] == "1");

  const fs::path tenth = fresh_dir("sweep_tenth");
  REQUIRE(run_cli("sweep " + genome + " --dw 0.1 --duration 5 --out-dir " +
                  q(tenth)) == 0);
  CHECK(read_csv(tenth / "pareto.csv").rows.size() == 11);

  CHECK(run_cli("sweep " + genome + " --dw 0.3 --out-dir " + q(tenth)) == 2);
}

TEST_CASE("cli: stats compares metrics columns") {
  const fs::path train_dir = smoke_train_dir();
  const std::string genome = q(train_dir / "best_genome.json");

  const fs::path a = fresh_dir("stats_a");
  const fs::path b = fresh_dir("stats_b");
  REQUIRE(run_cli("eval " + genome +
                  " --w1 1 --robots 3 --duration 20 --seed 5 --out-dir " +
                  q(a)) == 0);
  REQUIRE(run_cli("eval " + genome +
                  " --w1 0 --robots 3 --duration 20 --seed 5 --out-dir " +
                  q(b)) == 0);

  const fs::path out = fresh_dir("stats_out");
  REQUIRE(run_cli("stats " + q(a / "metrics.csv") + " " + q(b / "metrics.csv") +
                  " --column mean_speed_mps --out-dir " + q(out)) == 0);
  const json report = json::parse(read_file(out / "stats_report.json"));
  CHECK(report.at("column") == "mean_speed_mps");
  CHECK(report.at("n_pairs") == 20);
  const double p = report.at("p_value").get<double>();
  CHECK(p >= 0.0);
  CHECK(p <= 1.0);

  // identical inputs: degenerate case
  REQUIRE(run_cli("stats " + q(a / "metrics.csv") + " " + q(a / "metrics.csv") +
                  " --column mean_speed_mps --out-dir " + q(out)) == 0);
  const json degenerate = json::parse(read_file(out / "stats_report.json"));
  CHECK(degenerate.at("p_value") == 1.0);
  CHECK(degenerate.at("method") == "degenerate");

  CHECK(run_cli("stats " + q(a / "metrics.csv") + " " + q(b / "metrics.csv") +
                " --column no_such_column --out-dir " + q(out)) == 2);

  const fs::path shorter = fresh_dir("stats_short");
  REQUIRE(run_cli("eval " + genome +
                  " --w1 0 --robots 3 --duration 10 --seed 5 --out-dir " +
                  q(shorter)) == 0);
  CHECK(run_cli("stats " + q(a / "metrics.csv") + " " +
                q(shorter / "metrics.csv") + " --column mean_speed_mps "
                "--out-dir " + q(out)) == 2);
}

TEST_CASE("cli: heatmap bins and conserves counts") {
  const fs::path dir = fresh_dir("heatmap");
  const fs::path genome = write_parked_genome(dir);

  // stationary robot: everything lands in one cell
  REQUIRE(run_cli("eval " + q(genome) +
                  " --w1 1 --robots 1 --duration 60 --seed 2 --out-dir " +
                  q(dir)) == 0);
  REQUIRE(run_cli("heatmap " + q(dir / "trace.csv") +
                  " --resolution 10 --out-dir " + q(dir)) == 0);
  {
    const std::string grid_text = read_file(dir / "heatmap.csv");
    std::int64_t total = 0, max_cell = 0;
    int rows = 0;
    std::size_t start = 0;
    while (start < grid_text.size()) {
      std::size_t end = grid_text.find('\n', start);
      if (end == std::string::npos) end = grid_text.size();
      const std::string line = grid_text.substr(start, end - start);
      if (!line.empty()) {
        ++rows;
        std::size_t fstart = 0;
        int cols = 0;
        while (fstart <= line.size()) {
          std::size_t comma = line.find(',', fstart);
          if (comma == std::string::npos) comma = line.size();
          const std::int64_t v = std::stoll(line.substr(fstart, comma - fstart));
          total += v;
          max_cell = std::max(max_cell, v);
          ++cols;
          if (comma == line.size()) break;
          fstart = comma + 1;
        }
        CHECK(cols == 10);
      }
      start = end + 1;
    }
    CHECK(rows == 10);
    CHECK(total == 60);
    CHECK(max_cell == 60);  // single occupied cell
  }

  // 10 robots x 60 steps conserve 600 samples
  const fs::path train_dir = smoke_train_dir();
  const fs::path multi = fresh_dir("heatmap_multi");
  REQUIRE(run_cli("eval " + q(train_dir / "best_genome.json") +
                  " --w1 0 --robots 10 --duration 60 --seed 4 --out-dir " +
                  q(multi)) == 0);
  REQUIRE(run_cli("heatmap " + q(multi / "trace.csv") +
                  " --resolution 12 --out-dir " + q(multi)) == 0);
  std::int64_t total = 0;
  for (const std::string& line_or : {read_file(multi / "heatmap.csv")}) {
    std::size_t pos = 0;
    std::string token;
    for (char c : line_or) {
      if (c == ',' || c == '\n') {
        if (!token.empty()) total += std::stoll(token);
        token.clear();
      } else {
        token += c;
      }
      (void)pos;
    }
  }
  CHECK(total == 600);

  // out-of-arena samples are a data-integrity error
  const fs::path bad = fresh_dir("heatmap_bad");
  write_file_atomic(bad / "trace.csv",
                    "time_s,robot_id,x_m,y_m\n1,0,5.0,0.0\n");
  CHECK(run_cli("heatmap " + q(bad / "trace.csv") + " --out-dir " + q(bad)) ==
        3);
}

TEST_CASE("cli: resume extends a run identically") {
  const fs::path first = fresh_dir("resume_first");
  REQUIRE(run_cli("train --config default --evals 30 --seed 11 --out-dir " +
                  q(first)) == 0);

  const fs::path resumed = fresh_dir("resume_second");
  REQUIRE(run_cli("train --resume " + q(first / "checkpoint.json") +
                  " --evals 60 --out-dir " + q(resumed)) == 0);

  const fs::path straight = fresh_dir("resume_straight");
  REQUIRE(run_cli("train --config default --evals 60 --seed 11 --out-dir " +
                  q(straight)) == 0);

  CHECK(read_file(resumed / "checkpoint.json") ==
        read_file(straight / "checkpoint.json"));
  CHECK(read_file(resumed / "train_log.csv") ==
        read_file(straight / "train_log.csv"));
  CHECK(read_file(resumed / "best_genome.json") ==
        read_file(straight / "best_genome.json"));

  // resume refuses contradictory overrides and corrupt checkpoints
  CHECK(run_cli("train --resume " + q(first / "checkpoint.json") +
                " --robots 5 --out-dir " + q(resumed)) == 2);
  const fs::path broken = fresh_dir("resume_broken");
  const std::string full = read_file(first / "checkpoint.json");
  write_file_atomic(broken / "checkpoint.json", full.substr(0, full.size() / 3));
  CHECK(run_cli("train --resume " + q(broken / "checkpoint.json") +
                " --out-dir " + q(broken)) == 3);
}

TEST_CASE("cli: every command emits a manifest") {
  const fs::path train_dir = smoke_train_dir();
  for (const char* name : {"train_smoke"}) {
    (void)name;
  }
  CHECK(json::parse(read_file(train_dir / "manifest.json")).contains("version"));
}
