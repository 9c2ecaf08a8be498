#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "swarmnes/rng.hpp"

namespace swarmnes {

// Strategy constants. population_size / eta_sigma / eta_b default to 0,
// meaning "derive from the search dimension" via resolved().
struct StrategyConfig {
  int population_size = 0;  // 0 -> 4 + floor(3 ln d)
  double eta_mu = 1.0;
  double eta_sigma = 0.0;  // 0 -> 0.6 (3 + ln d) / (d sqrt(d))
  double eta_b = 0.0;      // 0 -> same default as eta_sigma
  std::uint64_t seed = 0;

  // Fills the derived fields for dimension d and validates. Throws
  // ConfigError on population_size < 2 or non-positive learning rates.
  StrategyConfig resolved(int dim) const;
};

int default_population_size(int dim);
double default_eta_sigma(int dim);

// Search distribution state: center mu, scalar step size sigma and the
// normalized covariance factor B with |det B| = 1.
struct SearchDistribution {
  Eigen::VectorXd mu;
  double sigma = 1.0;
  Eigen::MatrixXd b_matrix;
  std::int64_t generation = 0;

  Eigen::Index dim() const { return mu.size(); }
};

struct Candidate {
  Eigen::VectorXd z;  // standard normal draw
  Eigen::VectorXd x;  // mu + sigma * B * z, fixed at sample time
  std::optional<double> fitness;
};

// Natural-gradient components of one generation, exposed for diagnostics:
// g_b is trace-free by construction, which is what keeps det(B) at 1.
struct SearchGradients {
  Eigen::VectorXd g_delta;
  Eigen::MatrixXd g_m;
  double g_sigma = 0.0;
  Eigen::MatrixXd g_b;
};

SearchDistribution init_distribution(int dim, const Eigen::VectorXd& initial_mu,
                                     double initial_sigma,
                                     const StrategyConfig& config);

// Rank utilities u_i = max(0, ln(l/2+1) - ln(i)) / sum_j(...) - 1/l for
// rank i in 1..l (best first). Non-increasing and summing to zero.
Eigen::VectorXd compute_utilities(int population_size);

// x = mu + sigma * B * z for one standard-normal draw.
Eigen::VectorXd transform_sample(const SearchDistribution& dist,
                                 const Eigen::VectorXd& z);

std::vector<Candidate> sample_population(const SearchDistribution& dist,
                                         const StrategyConfig& config,
                                         Rng& rng);

// Utility value for each candidate, aligned with the population order.
// Candidates are ranked by fitness descending with ties broken by index;
// candidates with exactly equal fitness share the mean utility of their
// rank span, so an all-tied generation produces a zero update.
Eigen::VectorXd ranked_utilities(const std::vector<Candidate>& population);

SearchGradients compute_search_gradients(
    const std::vector<Candidate>& population,
    const Eigen::VectorXd& per_candidate_utility);

// One full xNES update (maximization). Requires all fitnesses set and
// finite; throws EvalError naming the offending candidate index otherwise.
// Pass a SearchGradients pointer to capture the gradients actually used.
SearchDistribution update_distribution(const SearchDistribution& dist,
                                       const StrategyConfig& config,
                                       const std::vector<Candidate>& population,
                                       SearchGradients* diagnostics = nullptr);

// Stateful ask/tell wrapper owning the distribution and the sampling stream.
class XnesOptimizer {
 public:
  XnesOptimizer(SearchDistribution dist, StrategyConfig config)
      : dist_(std::move(dist)),
        config_(config.resolved(static_cast<int>(dist_.dim()))),
        rng_(config_.seed) {}

  XnesOptimizer(SearchDistribution dist, StrategyConfig config, Rng rng)
      : dist_(std::move(dist)),
        config_(config.resolved(static_cast<int>(dist_.dim()))),
        rng_(rng) {}

  const SearchDistribution& distribution() const { return dist_; }
  const StrategyConfig& config() const { return config_; }
  Rng& rng() { return rng_; }
  const Rng& rng() const { return rng_; }

  std::vector<Candidate> ask() {
    return sample_population(dist_, config_, rng_);
  }

  SearchGradients tell(const std::vector<Candidate>& population) {
    SearchGradients diag;
    dist_ = update_distribution(dist_, config_, population, &diag);
    return diag;
  }

 private:
  SearchDistribution dist_;
  StrategyConfig config_;
  Rng rng_;
};

}  // namespace swarmnes
