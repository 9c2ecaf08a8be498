#include "swarmnes/trainer.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "swarmnes/episode.hpp"
#include "swarmnes/errors.hpp"
#include "swarmnes/objectives.hpp"

namespace swarmnes {

int TrainConfig::steps_per_episode() const {
  return static_cast<int>(std::lround(t_max_s / arena.dt));
}

void TrainConfig::validate() const {
  if (num_robots < 1) {
    throw ConfigError("config: num_robots must be positive");
  }
  if (!(t_max_s >= 0.0)) {
    throw ConfigError("config: t_max_s must be non-negative");
  }
  arena.validate();
  weight_schedule(dw_increment);  // validates the increment
  const int dim = static_cast<int>(genome_size(network));
  const StrategyConfig resolved = strategy.resolved(dim);
  if (max_evaluations < resolved.population_size) {
    throw ConfigError("config: max_evaluations must cover at least one "
                      "generation (lambda = " +
                      std::to_string(resolved.population_size) + ")");
  }
}

double evaluate_genome(const Eigen::VectorXd& genome, const TrainConfig& config,
                       std::uint64_t episode_seed) {
  if (genome.size() != genome_size(config.network)) {
    throw ConfigError("evaluate_genome: genome does not match network spec");
  }
  const std::vector<ObjectiveWeights> schedule =
      weight_schedule(config.dw_increment);
  const int steps = config.steps_per_episode();

  double total = 0.0;
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    Rng rng(derive_seed(episode_seed, kStreamReset, k));
    WorldState world = reset_world(config.arena, config.num_robots, rng);
    total += run_episode(genome, config.network, schedule[k], world, steps);
  }
  return total;
}

TrainState init_train_state(const TrainConfig& config) {
  config.validate();
  const int dim = static_cast<int>(genome_size(config.network));

  TrainState state;
  state.config = config;
  state.dist = init_distribution(dim, Eigen::VectorXd::Zero(dim), 1.0,
                                 config.strategy);
  const std::uint64_t strategy_seed =
      config.strategy.seed != 0 ? config.strategy.seed
                                : derive_seed(config.seed, kStreamStrategy);
  state.strategy_rng = Rng(strategy_seed);
  return state;
}

namespace {

void evaluate_generation(std::vector<Candidate>& population,
                         const TrainConfig& config, std::uint64_t episode_seed,
                         int num_threads) {
  const int lambda = static_cast<int>(population.size());
  int threads = num_threads > 0
                    ? num_threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, lambda));

  if (threads == 1) {
    for (Candidate& cand : population) {
      cand.fitness = evaluate_genome(cand.x, config, episode_seed);
    }
    return;
  }

  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= lambda) {
          return;
        }
        try {
          population[i].fitness =
              evaluate_genome(population[i].x, config, episode_seed);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) {
            first_error = std::current_exception();
          }
          return;
        }
      }
    });
  }
  for (std::thread& worker : workers) {
    worker.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

}  // namespace

void train(TrainState& state, const TrainOptions& options) {
  state.config.validate();
  const TrainConfig& config = state.config;
  const StrategyConfig strategy =
      config.strategy.resolved(static_cast<int>(state.dist.dim()));

  try {
    while (state.evaluations < config.max_evaluations) {
      const std::uint64_t episode_seed = derive_seed(
          config.seed, kStreamEpisode,
          static_cast<std::uint64_t>(state.dist.generation));

      std::vector<Candidate> population =
          sample_population(state.dist, strategy, state.strategy_rng);
      evaluate_generation(population, config, episode_seed,
                          options.num_threads);

      double sum = 0.0;
      for (std::size_t i = 0; i < population.size(); ++i) {
        const double fit = *population[i].fitness;
        sum += fit;
        if (fit > state.best_fitness) {
          state.best_fitness = fit;
          state.best_genome = population[i].x;
        }
      }

      state.dist = update_distribution(state.dist, strategy, population);
      state.evaluations += static_cast<std::int64_t>(population.size());

      TrainLogRecord record;
      record.generation = state.dist.generation;
      record.evaluations_so_far = state.evaluations;
      record.best_fitness = state.best_fitness;
      record.mean_fitness = sum / static_cast<double>(population.size());
      record.sigma = state.dist.sigma;
      state.log.push_back(record);
      if (options.on_generation) {
        options.on_generation(record);
      }
    }
  } catch (...) {
    if (options.on_abort) {
      options.on_abort(state);
    }
    throw;
  }
}

}  // namespace swarmnes
