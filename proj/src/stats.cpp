#include "swarmnes/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "swarmnes/errors.hpp"

namespace swarmnes {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a,
                                    std::span<const double> b) {
  if (a.size() != b.size()) {
    throw UsageError("wilcoxon: paired series must have equal length (" +
                     std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }

  std::vector<double> diffs;
  diffs.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
      throw UsageError("wilcoxon: non-finite value at row " + std::to_string(i));
    }
    const double d = a[i] - b[i];
    if (d != 0.0) {
      diffs.push_back(d);
    }
  }

  WilcoxonResult result;
  result.n_effective = static_cast<int>(diffs.size());
  if (diffs.empty()) {
    result.method = "degenerate";
    result.p_value = 1.0;
    return result;
  }

  const int n = result.n_effective;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return std::abs(diffs[x]) < std::abs(diffs[y]);
  });

  // Mean ranks over ties; collect tie group sizes for the variance
  // correction of the normal branch.
  std::vector<double> rank(n);
  std::vector<int> tie_sizes;
  int pos = 0;
  while (pos < n) {
    int end = pos + 1;
    while (end < n &&
           std::abs(diffs[order[end]]) == std::abs(diffs[order[pos]])) {
      ++end;
    }
    const double mean_rank = (pos + 1 + end) / 2.0;  // 1-based positions
    for (int k = pos; k < end; ++k) {
      rank[order[k]] = mean_rank;
    }
    tie_sizes.push_back(end - pos);
    pos = end;
  }

  for (int i = 0; i < n; ++i) {
    if (diffs[i] > 0.0) {
      result.w_plus += rank[i];
    } else {
      result.w_minus += rank[i];
    }
  }
  result.w = std::min(result.w_plus, result.w_minus);

  if (n <= kWilcoxonExactLimit) {
    // Exact null distribution of W+ over all 2^n sign assignments, tallied
    // over doubled ranks so every sum is an integer even with mean ranks.
    const std::int64_t total2 = static_cast<std::int64_t>(n) * (n + 1);
    std::vector<std::uint64_t> count(total2 + 1, 0);
    count[0] = 1;
    for (int i = 0; i < n; ++i) {
      const auto r2 = static_cast<std::int64_t>(std::llround(2.0 * rank[i]));
      for (std::int64_t s = total2; s >= r2; --s) {
        count[s] += count[s - r2];
      }
    }
    const auto t2 = static_cast<std::int64_t>(std::llround(2.0 * result.w));
    std::uint64_t extreme = 0;
    for (std::int64_t s = 0; s <= t2; ++s) {
      extreme += count[s];
    }
    for (std::int64_t s = total2 - t2; s <= total2; ++s) {
      extreme += count[s];
    }
    const double denom = std::ldexp(1.0, n);  // 2^n
    result.p_value = std::min(1.0, static_cast<double>(extreme) / denom);
    result.method = "exact";
  } else {
    const double nn = static_cast<double>(n);
    const double mean = nn * (nn + 1.0) / 4.0;
    double tie_term = 0.0;
    for (int t : tie_sizes) {
      const double td = static_cast<double>(t);
      tie_term += td * td * td - td;
    }
    const double variance =
        nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
    const double z = (result.w - mean + 0.5) / std::sqrt(variance);
    result.p_value = std::min(1.0, 2.0 * normal_cdf(z));
    result.method = "normal-approx";
  }
  return result;
}

}  // namespace swarmnes
