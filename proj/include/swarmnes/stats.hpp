#pragma once

#include <span>
#include <string>

namespace swarmnes {

// Exact enumeration is used up to this many nonzero differences.
inline constexpr int kWilcoxonExactLimit = 25;

struct WilcoxonResult {
  double w_plus = 0.0;
  double w_minus = 0.0;
  double w = 0.0;  // min(w_plus, w_minus), the reported statistic
  int n_effective = 0;
  double p_value = 1.0;  // two-tailed
  std::string method;    // "exact", "normal-approx" or "degenerate"

  bool significant(double alpha = 0.01) const { return p_value < alpha; }
};

// Two-tailed Wilcoxon signed-rank test on paired series. Zero differences
// are dropped and ties in |difference| receive mean ranks. For
// n_effective <= kWilcoxonExactLimit the p-value comes from the exact
// null distribution over all 2^n sign assignments; beyond that, from the
// normal approximation with tie correction and continuity correction.
// With no nonzero differences the result is "degenerate" with p = 1.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a,
                                    std::span<const double> b);

}  // namespace swarmnes
