#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "swarmnes/checkpoint.hpp"
#include "swarmnes/episode.hpp"
#include "swarmnes/errors.hpp"
#include "swarmnes/io.hpp"
#include "swarmnes/objectives.hpp"
#include "swarmnes/sim.hpp"
#include "swarmnes/stats.hpp"
#include "swarmnes/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace swarmnes;

namespace {

constexpr const char* kTraceHeader =
    "time_s,robot_id,x_m,y_m,heading_rad,dx_m,dy_m,sensor_front,sensor_right,"
    "sensor_back,sensor_left,rotation_cmd_rad,velocity_cmd_mps";
constexpr const char* kMetricsHeader = "time_s,mean_l1_distance_m,mean_speed_mps";
constexpr const char* kParetoHeader = "w1,w2,mean_obj1_m,mean_obj2_mps";
constexpr const char* kTrainLogHeader =
    "generation,evaluations_so_far,best_fitness,mean_fitness,sigma";

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const json& inputs, const std::vector<std::string>& outputs) {
  json m;
  m["tool"] = "swarmnes";
  m["version"] = std::string(kToolVersion);
  m["command"] = command;
  m["inputs"] = inputs;
  m["outputs"] = outputs;
  write_file_atomic(out_dir / "manifest.json", m.dump(2) + "\n");
}

std::string trace_csv(const std::vector<TraceRow>& rows) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const TraceRow& r : rows) {
    out += csv_join({format_double(r.time_s), std::to_string(r.robot_id),
                     format_double(r.x_m), format_double(r.y_m),
                     format_double(r.heading_rad), format_double(r.dx_m),
                     format_double(r.dy_m), format_double(r.sensors[0]),
                     format_double(r.sensors[1]), format_double(r.sensors[2]),
                     format_double(r.sensors[3]),
                     format_double(r.rotation_cmd_rad),
                     format_double(r.velocity_cmd_mps)});
    out += '\n';
  }
  return out;
}

std::string metrics_csv(const std::vector<StepObjectives>& per_step,
                        int num_robots, double dt) {
  std::string out = kMetricsHeader;
  out += '\n';
  for (std::size_t i = 0; i < per_step.size(); ++i) {
    const double time_s = static_cast<double>(i + 1) * dt;
    const double n = static_cast<double>(num_robots);
    out += csv_join({format_double(time_s),
                     format_double(per_step[i].obj1_distance / n),
                     format_double(per_step[i].obj2_velocity / n)});
    out += '\n';
  }
  return out;
}

std::string train_log_csv(const std::vector<TrainLogRecord>& log) {
  std::string out = kTrainLogHeader;
  out += '\n';
  for (const TrainLogRecord& rec : log) {
    out += csv_join({std::to_string(rec.generation),
                     std::to_string(rec.evaluations_so_far),
                     format_double(rec.best_fitness),
                     format_double(rec.mean_fitness),
                     format_double(rec.sigma)});
    out += '\n';
  }
  return out;
}

int episode_steps(double duration_s, double dt) {
  if (!(duration_s >= 0.0)) {
    throw UsageError("duration must be non-negative");
  }
  return static_cast<int>(std::lround(duration_s / dt));
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string config_path = "default";
  std::string resume_path;
  std::string out_dir = ".";
  int threads = 0;

  std::uint64_t seed = 0;
  std::int64_t evals = 0;
  int robots = 0;
  double tmax = 0.0;
  double dw = 0.0;
  int lambda = 0;
  double eta_mu = 0.0, eta_sigma = 0.0, eta_b = 0.0;
  std::uint64_t strategy_seed = 0;
  double arena_side = 0.0, robot_radius = 0.0, sensor_range = 0.0, dt = 0.0;
  std::vector<int> layers;

  CLI::Option *o_config = nullptr, *o_seed = nullptr, *o_evals = nullptr,
              *o_robots = nullptr, *o_tmax = nullptr, *o_dw = nullptr,
              *o_lambda = nullptr, *o_eta_mu = nullptr, *o_eta_sigma = nullptr,
              *o_eta_b = nullptr, *o_strategy_seed = nullptr,
              *o_arena_side = nullptr, *o_robot_radius = nullptr,
              *o_sensor_range = nullptr, *o_dt = nullptr, *o_layers = nullptr;
};

TrainConfig train_config_from_args(const TrainArgs& a) {
  TrainConfig cfg;
  if (a.config_path != "default") {
    cfg = load_train_config(a.config_path);
  }
  if (a.o_seed->count()) cfg.seed = a.seed;
  if (a.o_evals->count()) cfg.max_evaluations = a.evals;
  if (a.o_robots->count()) cfg.num_robots = a.robots;
  if (a.o_tmax->count()) cfg.t_max_s = a.tmax;
  if (a.o_dw->count()) cfg.dw_increment = a.dw;
  if (a.o_lambda->count()) cfg.strategy.population_size = a.lambda;
  if (a.o_eta_mu->count()) cfg.strategy.eta_mu = a.eta_mu;
  if (a.o_eta_sigma->count()) cfg.strategy.eta_sigma = a.eta_sigma;
  if (a.o_eta_b->count()) cfg.strategy.eta_b = a.eta_b;
  if (a.o_strategy_seed->count()) cfg.strategy.seed = a.strategy_seed;
  if (a.o_arena_side->count()) cfg.arena.side_length = a.arena_side;
  if (a.o_robot_radius->count()) cfg.arena.robot_radius = a.robot_radius;
  if (a.o_sensor_range->count()) cfg.arena.sensor_max_range = a.sensor_range;
  if (a.o_dt->count()) cfg.arena.dt = a.dt;
  if (a.o_layers->count()) cfg.network.layer_sizes = a.layers;
  return cfg;
}

void run_train(const TrainArgs& args) {
  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);

  TrainState state;
  if (!args.resume_path.empty()) {
    for (const CLI::Option* opt :
         {args.o_config, args.o_seed, args.o_robots, args.o_tmax, args.o_dw,
          args.o_lambda, args.o_eta_mu, args.o_eta_sigma, args.o_eta_b,
          args.o_strategy_seed, args.o_arena_side, args.o_robot_radius,
          args.o_sensor_range, args.o_dt, args.o_layers}) {
      if (opt->count()) {
        throw ConfigError("train: only --evals/--out-dir/--threads may be "
                          "combined with --resume");
      }
    }
    state = load_checkpoint(args.resume_path);
    if (args.o_evals->count()) {
      state.config.max_evaluations = args.evals;
    }
  } else {
    state = init_train_state(train_config_from_args(args));
  }

  TrainOptions options;
  options.num_threads = args.threads;
  options.on_abort = [&](const TrainState& s) {
    save_checkpoint(out_dir / "checkpoint.json", s);
    write_file_atomic(out_dir / "train_log.csv", train_log_csv(s.log));
    std::cerr << "train: aborted; checkpoint flushed to "
              << (out_dir / "checkpoint.json").string() << "\n";
  };
  train(state, options);

  save_checkpoint(out_dir / "checkpoint.json", state);
  write_file_atomic(out_dir / "train_log.csv", train_log_csv(state.log));
  save_genome(out_dir / "best_genome.json", state.config.network,
              state.best_genome, state.best_fitness);

  json inputs;
  inputs["config"] = json::parse(train_config_to_json(state.config));
  inputs["seed"] = state.config.seed;
  inputs["resume"] = args.resume_path;
  inputs["threads"] = args.threads;
  write_manifest(out_dir, "train", inputs,
                 {"checkpoint.json", "train_log.csv", "best_genome.json"});

  std::cout << "train: generations=" << state.dist.generation
            << " evaluations=" << state.evaluations
            << " best_fitness=" << format_double(state.best_fitness) << "\n";
}

// ----------------------------------------------------------- eval/sweep

struct RolloutArgs {
  std::string genome_path;
  double w1 = 1.0;
  double dw = 0.1;
  int robots = 3;
  double duration = 60.0;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  double arena_side = 0.0, robot_radius = 0.0, sensor_range = 0.0, dt = 0.0;
  CLI::Option *o_arena_side = nullptr, *o_robot_radius = nullptr,
              *o_sensor_range = nullptr, *o_dt = nullptr;
};

ArenaSpec arena_from_args(const RolloutArgs& a) {
  ArenaSpec arena;
  if (a.o_arena_side && a.o_arena_side->count()) arena.side_length = a.arena_side;
  if (a.o_robot_radius && a.o_robot_radius->count())
    arena.robot_radius = a.robot_radius;
  if (a.o_sensor_range && a.o_sensor_range->count())
    arena.sensor_max_range = a.sensor_range;
  if (a.o_dt && a.o_dt->count()) arena.dt = a.dt;
  return arena;
}

void run_eval(const RolloutArgs& args) {
  if (!(args.w1 >= 0.0 && args.w1 <= 1.0)) {
    throw UsageError("eval: --w1 must lie in [0, 1]");
  }
  const GenomeFile genome = load_genome(args.genome_path);
  const ArenaSpec arena = arena_from_args(args);
  const ObjectiveWeights weights(args.w1, 1.0 - args.w1);
  const int steps = episode_steps(args.duration, arena.dt);

  Rng rng(derive_seed(args.seed, kStreamReset, 0));
  WorldState world = reset_world(arena, args.robots, rng);

  std::vector<TraceRow> trace;
  std::vector<StepObjectives> per_step;
  run_episode(genome.params, genome.spec, weights, world, steps, &trace,
              &per_step);

  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);
  write_file_atomic(out_dir / "trace.csv", trace_csv(trace));
  write_file_atomic(out_dir / "metrics.csv",
                    metrics_csv(per_step, args.robots, arena.dt));

  json inputs;
  inputs["genome"] = args.genome_path;
  inputs["w1"] = args.w1;
  inputs["robots"] = args.robots;
  inputs["duration_s"] = args.duration;
  inputs["seed"] = args.seed;
  write_manifest(out_dir, "eval", inputs, {"trace.csv", "metrics.csv"});

  std::cout << "eval: steps=" << steps << " robots=" << args.robots
            << " w1=" << format_double(args.w1) << " wrote trace.csv metrics.csv\n";
}

void run_sweep(const RolloutArgs& args) {
  const GenomeFile genome = load_genome(args.genome_path);
  const ArenaSpec arena = arena_from_args(args);
  const std::vector<ObjectiveWeights> schedule = weight_schedule(args.dw);
  const int steps = episode_steps(args.duration, arena.dt);

  std::string out = kParetoHeader;
  out += '\n';
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    Rng rng(derive_seed(args.seed, kStreamReset, k));
    WorldState world = reset_world(arena, args.robots, rng);
    std::vector<StepObjectives> per_step;
    run_episode(genome.params, genome.spec, schedule[k], world, steps, nullptr,
                &per_step);

    double mean_obj1 = 0.0, mean_obj2 = 0.0;
    for (const StepObjectives& step : per_step) {
      mean_obj1 += step.obj1_distance;
      mean_obj2 += step.obj2_velocity;
    }
    if (!per_step.empty()) {
      mean_obj1 /= static_cast<double>(per_step.size());
      mean_obj2 /= static_cast<double>(per_step.size());
    }
    out += csv_join({format_double(schedule[k].w1()),
                     format_double(schedule[k].w2()), format_double(mean_obj1),
                     format_double(mean_obj2)});
    out += '\n';
  }

  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);
  write_file_atomic(out_dir / "pareto.csv", out);

  json inputs;
  inputs["genome"] = args.genome_path;
  inputs["dw"] = args.dw;
  inputs["robots"] = args.robots;
  inputs["duration_s"] = args.duration;
  inputs["seed"] = args.seed;
  write_manifest(out_dir, "sweep", inputs, {"pareto.csv"});

  std::cout << "sweep: rows=" << schedule.size() << " wrote pareto.csv\n";
}

// ----------------------------------------------------------------- stats

struct StatsArgs {
  std::string metrics_a, metrics_b, column;
  std::string out_dir = ".";
};

void run_stats(const StatsArgs& args) {
  const CsvTable a = read_csv(args.metrics_a);
  const CsvTable b = read_csv(args.metrics_b);

  bool a_has = false, b_has = false;
  for (const std::string& h : a.header) a_has |= (h == args.column);
  for (const std::string& h : b.header) b_has |= (h == args.column);
  if (!a_has || !b_has) {
    throw UsageError("stats: column '" + args.column +
                     "' missing from one of the inputs");
  }
  if (a.rows.empty() || b.rows.empty()) {
    throw UsageError("stats: empty series");
  }
  if (a.rows.size() != b.rows.size()) {
    throw UsageError("stats: series lengths differ (" +
                     std::to_string(a.rows.size()) + " vs " +
                     std::to_string(b.rows.size()) + ")");
  }

  const std::size_t col_a = a.column(args.column);
  const std::size_t col_b = b.column(args.column);
  std::vector<double> series_a, series_b;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    series_a.push_back(parse_double(a.rows[i][col_a]));
    series_b.push_back(parse_double(b.rows[i][col_b]));
  }

  const WilcoxonResult res = wilcoxon_signed_rank(series_a, series_b);

  json report;
  report["column"] = args.column;
  report["n_pairs"] = a.rows.size();
  report["n_effective"] = res.n_effective;
  report["w_plus"] = res.w_plus;
  report["w_minus"] = res.w_minus;
  report["w"] = res.w;
  report["p_value"] = res.p_value;
  report["method"] = res.method;
  report["alpha"] = 0.01;
  report["significant"] = res.significant(0.01);

  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);
  write_file_atomic(out_dir / "stats_report.json", report.dump(2) + "\n");

  json inputs;
  inputs["metrics_a"] = args.metrics_a;
  inputs["metrics_b"] = args.metrics_b;
  inputs["column"] = args.column;
  write_manifest(out_dir, "stats", inputs, {"stats_report.json"});

  if (res.method == "degenerate") {
    std::cout << "stats: no nonzero differences; p = 1.0 by convention\n";
  } else {
    std::cout << "stats: column=" << args.column << " W="
              << format_double(res.w) << " n_effective=" << res.n_effective
              << " p=" << format_double(res.p_value) << " method=" << res.method
              << " significant_at_1pct=" << (res.significant(0.01) ? "yes" : "no")
              << "\n";
  }
}

// --------------------------------------------------------------- heatmap

struct HeatmapArgs {
  std::string trace_path;
  int resolution = 37;
  double arena_side = 3.7;
  std::string out_dir = ".";
};

void run_heatmap(const HeatmapArgs& args) {
  if (args.resolution < 1) {
    throw UsageError("heatmap: --resolution must be positive");
  }
  const CsvTable trace = read_csv(args.trace_path);
  const std::size_t col_x = trace.column("x_m");
  const std::size_t col_y = trace.column("y_m");

  const double half = args.arena_side / 2.0;
  const int res = args.resolution;
  std::vector<std::vector<std::int64_t>> grid(
      res, std::vector<std::int64_t>(res, 0));

  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    const double x = parse_double(trace.rows[i][col_x]);
    const double y = parse_double(trace.rows[i][col_y]);
    if (std::abs(x) > half || std::abs(y) > half) {
      throw DataError("heatmap: sample outside arena at data row " +
                      std::to_string(i + 1));
    }
    const int ix = std::min(res - 1, static_cast<int>(std::floor(
                                         (x + half) / args.arena_side * res)));
    const int iy = std::min(res - 1, static_cast<int>(std::floor(
                                         (y + half) / args.arena_side * res)));
    grid[iy][ix] += 1;
  }

  // Row 0 holds the lowest-y bin; columns run from -x to +x.
  std::string out;
  for (int iy = 0; iy < res; ++iy) {
    std::vector<std::string> fields;
    fields.reserve(res);
    for (int ix = 0; ix < res; ++ix) {
      fields.push_back(std::to_string(grid[iy][ix]));
    }
    out += csv_join(fields);
    out += '\n';
  }

  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);
  write_file_atomic(out_dir / "heatmap.csv", out);

  json inputs;
  inputs["trace"] = args.trace_path;
  inputs["resolution"] = args.resolution;
  inputs["arena_side_m"] = args.arena_side;
  write_manifest(out_dir, "heatmap", inputs, {"heatmap.csv"});

  std::cout << "heatmap: " << res << "x" << res << " grid with "
            << trace.rows.size() << " samples\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"swarmnes: evolves and evaluates multi-objective neural swarm "
               "controllers in a 2D kinematic simulator"};
  app.require_subcommand(1);

  TrainArgs train_args;
  CLI::App* train_cmd = app.add_subcommand(
      "train", "Evolve a controller with xNES and write checkpoint artifacts");
  train_args.o_config = train_cmd->add_option(
      "--config", train_args.config_path,
      "Config file path, or 'default' for built-in defaults");
  train_cmd->add_option("--resume", train_args.resume_path,
                        "Resume from a checkpoint file");
  train_cmd->add_option("--out-dir", train_args.out_dir, "Output directory");
  train_cmd->add_option("--threads", train_args.threads,
                        "Evaluation threads (0 = hardware)");
  train_args.o_seed = train_cmd->add_option("--seed", train_args.seed, "Master seed");
  train_args.o_evals =
      train_cmd->add_option("--evals", train_args.evals, "Evaluation budget");
  train_args.o_robots =
      train_cmd->add_option("--robots", train_args.robots, "Robots per episode");
  train_args.o_tmax = train_cmd->add_option("--tmax", train_args.tmax,
                                            "Episode length in seconds");
  train_args.o_dw = train_cmd->add_option("--dw", train_args.dw,
                                          "Weight schedule increment");
  train_args.o_lambda =
      train_cmd->add_option("--lambda", train_args.lambda,
                            "Population size (0 = derive from dimension)");
  train_args.o_eta_mu =
      train_cmd->add_option("--eta-mu", train_args.eta_mu, "Center learning rate");
  train_args.o_eta_sigma = train_cmd->add_option(
      "--eta-sigma", train_args.eta_sigma, "Step-size learning rate (0 = auto)");
  train_args.o_eta_b = train_cmd->add_option("--eta-b", train_args.eta_b,
                                             "Covariance learning rate (0 = auto)");
  train_args.o_strategy_seed = train_cmd->add_option(
      "--strategy-seed", train_args.strategy_seed,
      "Optimizer stream seed (0 = derive from master seed)");
  train_args.o_arena_side = train_cmd->add_option(
      "--arena-side", train_args.arena_side, "Arena side length in meters");
  train_args.o_robot_radius = train_cmd->add_option(
      "--robot-radius", train_args.robot_radius, "Robot radius in meters");
  train_args.o_sensor_range = train_cmd->add_option(
      "--sensor-range", train_args.sensor_range, "Sensor max range in meters");
  train_args.o_dt =
      train_cmd->add_option("--dt", train_args.dt, "Simulator time step in seconds");
  train_args.o_layers = train_cmd->add_option(
      "--layers", train_args.layers, "Network layer sizes, e.g. --layers 6 5 2");

  RolloutArgs eval_args;
  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "Roll out a genome at fixed weights; write trace and metrics");
  eval_cmd->add_option("genome", eval_args.genome_path, "Genome file")->required();
  eval_cmd->add_option("--w1", eval_args.w1, "Distance-objective weight (w2 = 1 - w1)")
      ->required();
  eval_cmd->add_option("--robots", eval_args.robots, "Swarm size");
  eval_cmd->add_option("--duration", eval_args.duration, "Episode seconds");
  eval_cmd->add_option("--seed", eval_args.seed, "World seed");
  eval_cmd->add_option("--out-dir", eval_args.out_dir, "Output directory");
  eval_args.o_arena_side =
      eval_cmd->add_option("--arena-side", eval_args.arena_side, "Arena side (m)");
  eval_args.o_robot_radius = eval_cmd->add_option(
      "--robot-radius", eval_args.robot_radius, "Robot radius (m)");
  eval_args.o_sensor_range = eval_cmd->add_option(
      "--sensor-range", eval_args.sensor_range, "Sensor max range (m)");
  eval_args.o_dt = eval_cmd->add_option("--dt", eval_args.dt, "Time step (s)");

  RolloutArgs sweep_args;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Sweep the weight schedule; write per-weight objective means");
  sweep_cmd->add_option("genome", sweep_args.genome_path, "Genome file")->required();
  sweep_cmd->add_option("--dw", sweep_args.dw, "Schedule increment");
  sweep_cmd->add_option("--robots", sweep_args.robots, "Swarm size");
  sweep_cmd->add_option("--duration", sweep_args.duration, "Episode seconds");
  sweep_cmd->add_option("--seed", sweep_args.seed, "World seed");
  sweep_cmd->add_option("--out-dir", sweep_args.out_dir, "Output directory");
  sweep_args.o_arena_side =
      sweep_cmd->add_option("--arena-side", sweep_args.arena_side, "Arena side (m)");
  sweep_args.o_robot_radius = sweep_cmd->add_option(
      "--robot-radius", sweep_args.robot_radius, "Robot radius (m)");
  sweep_args.o_sensor_range = sweep_cmd->add_option(
      "--sensor-range", sweep_args.sensor_range, "Sensor max range (m)");
  sweep_args.o_dt = sweep_cmd->add_option("--dt", sweep_args.dt, "Time step (s)");

  StatsArgs stats_args;
  CLI::App* stats_cmd = app.add_subcommand(
      "stats", "Two-tailed Wilcoxon signed-rank test over paired metrics");
  stats_cmd->add_option("metrics_a", stats_args.metrics_a, "First metrics CSV")
      ->required();
  stats_cmd->add_option("metrics_b", stats_args.metrics_b, "Second metrics CSV")
      ->required();
  stats_cmd->add_option("--column", stats_args.column, "Metrics column to compare")
      ->required();
  stats_cmd->add_option("--out-dir", stats_args.out_dir, "Output directory");

  HeatmapArgs heatmap_args;
  CLI::App* heatmap_cmd = app.add_subcommand(
      "heatmap", "Bin trace positions into an occupancy grid");
  heatmap_cmd->add_option("trace", heatmap_args.trace_path, "Trace CSV")->required();
  heatmap_cmd->add_option("--resolution", heatmap_args.resolution,
                          "Cells per side");
  heatmap_cmd->add_option("--arena-side", heatmap_args.arena_side,
                          "Arena side length in meters");
  heatmap_cmd->add_option("--out-dir", heatmap_args.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (train_cmd->parsed()) run_train(train_args);
    if (eval_cmd->parsed()) run_eval(eval_args);
    if (sweep_cmd->parsed()) run_sweep(sweep_args);
    if (stats_cmd->parsed()) run_stats(stats_args);
    if (heatmap_cmd->parsed()) run_heatmap(heatmap_args);
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const EvalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
