#include "swarmnes/xnes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "swarmnes/errors.hpp"
#include "swarmnes/matexp.hpp"

namespace swarmnes {

int default_population_size(int dim) {
  return 4 + static_cast<int>(std::floor(3.0 * std::log(static_cast<double>(dim))));
}

double default_eta_sigma(int dim) {
  const double d = static_cast<double>(dim);
  return 0.6 * (3.0 + std::log(d)) / (d * std::sqrt(d));
}

StrategyConfig StrategyConfig::resolved(int dim) const {
  if (dim < 1) {
    throw ConfigError("strategy: dimension must be positive");
  }
  StrategyConfig out = *this;
  if (out.population_size == 0) {
    out.population_size = default_population_size(dim);
  }
  if (out.eta_sigma == 0.0) {
    out.eta_sigma = default_eta_sigma(dim);
  }
  if (out.eta_b == 0.0) {
    out.eta_b = default_eta_sigma(dim);
  }
  if (out.population_size < 2) {
    throw ConfigError("strategy: population_size must be >= 2, got " +
                      std::to_string(out.population_size));
  }
  if (out.eta_mu <= 0.0 || out.eta_sigma <= 0.0 || out.eta_b <= 0.0) {
    throw ConfigError("strategy: learning rates must be positive");
  }
  return out;
}

SearchDistribution init_distribution(int dim, const Eigen::VectorXd& initial_mu,
                                     double initial_sigma,
                                     const StrategyConfig& config) {
  if (dim < 1 || initial_mu.size() != dim) {
    throw ConfigError("init_distribution: mu length " +
                      std::to_string(initial_mu.size()) +
                      " does not match dim " + std::to_string(dim));
  }
  if (!(initial_sigma > 0.0)) {
    throw ConfigError("init_distribution: sigma must be positive");
  }
  config.resolved(dim);  // surfaces config errors at init time

  SearchDistribution dist;
  dist.mu = initial_mu;
  dist.sigma = initial_sigma;
  dist.b_matrix = Eigen::MatrixXd::Identity(dim, dim);
  dist.generation = 0;
  return dist;
}

Eigen::VectorXd compute_utilities(int population_size) {
  if (population_size < 1) {
    throw ConfigError("compute_utilities: population_size must be >= 1");
  }
  const int lambda = population_size;
  Eigen::VectorXd raw(lambda);
  const double shift = std::log(lambda / 2.0 + 1.0);
  for (int i = 0; i < lambda; ++i) {
    raw(i) = std::max(0.0, shift - std::log(static_cast<double>(i + 1)));
  }
  const double total = raw.sum();
  return (raw / total).array() - 1.0 / lambda;
}

Eigen::VectorXd transform_sample(const SearchDistribution& dist,
                                 const Eigen::VectorXd& z) {
  if (z.size() != dist.dim()) {
    throw ConfigError("transform_sample: z length does not match dim");
  }
  return dist.mu + dist.sigma * (dist.b_matrix * z);
}

std::vector<Candidate> sample_population(const SearchDistribution& dist,
                                         const StrategyConfig& config,
                                         Rng& rng) {
  const StrategyConfig cfg = config.resolved(static_cast<int>(dist.dim()));
  const Eigen::Index d = dist.dim();

  std::vector<Candidate> population;
  population.reserve(cfg.population_size);
  for (int i = 0; i < cfg.population_size; ++i) {
    Candidate cand;
    cand.z.resize(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      cand.z(j) = rng.normal();
    }
    cand.x = transform_sample(dist, cand.z);
    population.push_back(std::move(cand));
  }
  return population;
}

Eigen::VectorXd ranked_utilities(const std::vector<Candidate>& population) {
  const int lambda = static_cast<int>(population.size());
  for (int i = 0; i < lambda; ++i) {
    if (!population[i].fitness.has_value()) {
      throw EvalError("candidate " + std::to_string(i) + ": fitness unset");
    }
    if (!std::isfinite(*population[i].fitness)) {
      throw EvalError("candidate " + std::to_string(i) + ": fitness not finite");
    }
  }

  std::vector<int> order(lambda);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return *population[a].fitness > *population[b].fitness;
  });

  const Eigen::VectorXd u = compute_utilities(lambda);
  Eigen::VectorXd by_candidate(lambda);
  int rank = 0;
  while (rank < lambda) {
    int end = rank + 1;
    while (end < lambda &&
           *population[order[end]].fitness == *population[order[rank]].fitness) {
      ++end;
    }
    const double shared = u.segment(rank, end - rank).mean();
    for (int r = rank; r < end; ++r) {
      by_candidate(order[r]) = shared;
    }
    rank = end;
  }
  return by_candidate;
}

SearchGradients compute_search_gradients(
    const std::vector<Candidate>& population,
    const Eigen::VectorXd& per_candidate_utility) {
  const Eigen::Index d = population.front().z.size();
  const Eigen::Index lambda = static_cast<Eigen::Index>(population.size());

  SearchGradients g;
  g.g_delta = Eigen::VectorXd::Zero(d);
  g.g_m = Eigen::MatrixXd::Zero(d, d);
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(d, d);
  for (Eigen::Index i = 0; i < lambda; ++i) {
    const Eigen::VectorXd& z = population[i].z;
    const double u = per_candidate_utility(i);
    g.g_delta += u * z;
    g.g_m += u * (z * z.transpose() - identity);
  }
  g.g_sigma = g.g_m.trace() / static_cast<double>(d);
  g.g_b = g.g_m - g.g_sigma * identity;
  return g;
}

SearchDistribution update_distribution(const SearchDistribution& dist,
                                       const StrategyConfig& config,
                                       const std::vector<Candidate>& population,
                                       SearchGradients* diagnostics) {
  const StrategyConfig cfg = config.resolved(static_cast<int>(dist.dim()));
  if (static_cast<int>(population.size()) != cfg.population_size) {
    throw EvalError("update_distribution: expected " +
                    std::to_string(cfg.population_size) + " candidates, got " +
                    std::to_string(population.size()));
  }

  const Eigen::VectorXd utility = ranked_utilities(population);
  const SearchGradients g = compute_search_gradients(population, utility);

  SearchDistribution next = dist;
  next.mu = dist.mu + cfg.eta_mu * dist.sigma * (dist.b_matrix * g.g_delta);
  next.sigma = dist.sigma * std::exp(0.5 * cfg.eta_sigma * g.g_sigma);
  next.b_matrix = dist.b_matrix * expm(0.5 * cfg.eta_b * g.g_b);
  next.generation = dist.generation + 1;

  if (diagnostics != nullptr) {
    *diagnostics = g;
  }
  return next;
}

}  // namespace swarmnes
