#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "swarmnes/network.hpp"
#include "swarmnes/rng.hpp"
#include "swarmnes/sim.hpp"
#include "swarmnes/xnes.hpp"

namespace swarmnes {

// Sub-stream tags for derive_seed.
inline constexpr std::uint64_t kStreamStrategy = 1;
inline constexpr std::uint64_t kStreamEpisode = 2;
inline constexpr std::uint64_t kStreamReset = 4;

struct TrainConfig {
  int num_robots = 3;
  double t_max_s = 30.0;
  double dw_increment = 0.5;
  std::int64_t max_evaluations = 20000;
  std::uint64_t seed = 2023;
  StrategyConfig strategy;
  ArenaSpec arena;
  NetworkSpec network;

  int steps_per_episode() const;
  // Throws ConfigError; requires max_evaluations >= lambda.
  void validate() const;
};

struct TrainLogRecord {
  std::int64_t generation = 0;
  std::int64_t evaluations_so_far = 0;
  double best_fitness = 0.0;  // best-ever networkFit
  double mean_fitness = 0.0;  // mean of the generation
  double sigma = 0.0;
};

// networkFit of one genome: one episode per weight-schedule entry, each
// world seeded from (episode_seed, schedule index). Pure given
// (genome, config, episode_seed), so candidates may be evaluated in any
// order or in parallel.
double evaluate_genome(const Eigen::VectorXd& genome, const TrainConfig& config,
                       std::uint64_t episode_seed);

// Complete resumable training state. A checkpointed state continues
// identically to an uninterrupted run.
struct TrainState {
  TrainConfig config;
  SearchDistribution dist;
  Rng strategy_rng{0};
  Eigen::VectorXd best_genome;
  double best_fitness = -std::numeric_limits<double>::infinity();
  std::int64_t evaluations = 0;
  std::vector<TrainLogRecord> log;
};

struct TrainOptions {
  int num_threads = 0;  // 0 -> hardware concurrency
  std::function<void(const TrainLogRecord&)> on_generation;
  // Called with the last consistent state before a mid-run error
  // propagates, so callers can flush a checkpoint.
  std::function<void(const TrainState&)> on_abort;
};

// mu = 0, sigma = 1, B = I at the controller genome dimension.
TrainState init_train_state(const TrainConfig& config);

// Runs generation-synchronous xNES until evaluations >= max_evaluations.
// All candidates of a generation share one episode seed (common random
// numbers); episode seeds advance every generation.
void train(TrainState& state, const TrainOptions& options = {});

}  // namespace swarmnes
