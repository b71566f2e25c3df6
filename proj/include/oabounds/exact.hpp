#pragma once

#include "oabounds/bigcount.hpp"
#include "oabounds/core.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace oabounds {

namespace detail {

// Up-step cost per factor j (1-based): s_{block_of(j)} - 1.
inline std::vector<long long> up_costs(const ArraySpec& spec) {
  std::vector<long long> c;
  c.reserve(spec.factors());
  for (int b = 0; b < spec.sigma(); ++b)
    c.insert(c.end(), spec.block_lengths[b], spec.alphabet_sizes[b] - 1);
  return c;
}

}  // namespace detail

// Sum over all up/flat paths of `horizon` steps ending at height <= threshold
// of the product of the per-step up costs. Backward recursion over a single
// column: M[x] <- c_{k+1} * M[x+1] + M[x], with M[x] = 1 at the horizon for
// x <= threshold and height capped at threshold throughout.
inline BigCount walk_sum(const ArraySpec& spec, int horizon, int threshold) {
  if (horizon < 0 || horizon > spec.factors()) throw std::invalid_argument("walk horizon out of range");
  if (threshold < 0) return 0;
  const int cap = std::min(threshold, horizon);
  const auto costs = detail::up_costs(spec);
  std::vector<BigCount> m(cap + 1, 1);
  for (int k = horizon - 1; k >= 0; --k) {
    const long long c = costs[k];
    for (int x = 0; x <= cap; ++x)
      m[x] += c * (x + 1 <= cap ? m[x + 1] : 0);
  }
  return m[0];
}

// Same recursion in log space; returns log of the walk sum (or -inf for an
// empty event). Each step does one log1p, so the drift off the exact value
// stays around horizon * 1e-16 relative.
inline double walk_sum_log(const ArraySpec& spec, int horizon, int threshold) {
  if (horizon < 0 || horizon > spec.factors()) throw std::invalid_argument("walk horizon out of range");
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (threshold < 0) return kNegInf;
  const int cap = std::min(threshold, horizon);
  const auto costs = detail::up_costs(spec);
  std::vector<double> m(cap + 1, 0.0);
  for (int k = horizon - 1; k >= 0; --k) {
    const double logc = std::log(static_cast<double>(costs[k]));
    for (int x = 0; x <= cap; ++x) {
      const double up = x + 1 <= cap ? logc + m[x + 1] : kNegInf;
      if (up == kNegInf) continue;
      const double hi = std::max(up, m[x]), lo = std::min(up, m[x]);
      m[x] = hi + std::log1p(std::exp(lo - hi));
    }
  }
  return m[0];
}

// Full grid of the log recursion: grid[k][x] = log M(x, k) for
// k = 0..horizon, x = 0..threshold. Used for the prelimit value surface.
inline std::vector<std::vector<double>> walk_log_grid(const ArraySpec& spec, int horizon, int threshold) {
  if (horizon < 0 || horizon > spec.factors()) throw std::invalid_argument("walk horizon out of range");
  if (threshold < 0) throw std::invalid_argument("walk threshold must be >= 0");
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const auto costs = detail::up_costs(spec);
  std::vector<std::vector<double>> grid(horizon + 1, std::vector<double>(threshold + 1, 0.0));
  for (int k = horizon - 1; k >= 0; --k) {
    const double logc = std::log(static_cast<double>(costs[k]));
    for (int x = 0; x <= threshold; ++x) {
      const double flat = grid[k + 1][x];
      const double up = x + 1 <= threshold ? logc + grid[k + 1][x + 1] : kNegInf;
      if (up == kNegInf) { grid[k][x] = flat; continue; }
      const double hi = std::max(up, flat), lo = std::min(up, flat);
      grid[k][x] = hi + std::log1p(std::exp(lo - hi));
    }
  }
  return grid;
}

// Evaluate a bound target through the walk recursion.
// GvSum is not a single prefactor * walk: its identity is
// 1 + s_sigma * walk over n-1 steps (one final-block step is consumed by the
// mandatory last-block coordinate) with shells up to t-2.
inline BigCount dp_bound(const ArraySpec& spec, const BoundTarget& target) {
  if (target.kind == BoundKind::GvSum)
    return 1 + spec.last_alphabet() * walk_sum(spec, spec.factors() - 1, spec.strength - 2);
  return target.prefactor * walk_sum(spec, target.horizon, target.threshold);
}

inline double dp_bound_log(const ArraySpec& spec, const BoundTarget& target) {
  if (target.kind == BoundKind::GvSum)
    throw std::invalid_argument("dp_bound_log covers walk-shaped targets only");
  return std::log(static_cast<double>(target.prefactor)) + walk_sum_log(spec, target.horizon, target.threshold);
}

namespace detail {

// Recurse over compositions (u_1,...,u_sigma) with sum = shell, u_m <= l_m,
// accumulating prod C(l_m, u_m) (s_m - 1)^{u_m}. last_free trims the last
// block for the Gv variant (u_sigma - 1 <= l_sigma - 1 there).
inline void rao_shell_terms(const ArraySpec& spec, int block, int remaining, const BigCount& partial,
                            BigCount& total) {
  const int sigma = spec.sigma();
  if (block == sigma - 1) {
    const int l = spec.block_lengths[block];
    if (remaining > l) return;
    BigCount binom = 1;
    // C(l, remaining) incrementally
    for (int r = 1; r <= remaining; ++r) binom = binom * (l - r + 1) / r;
    BigCount pw = 1;
    for (int r = 0; r < remaining; ++r) pw *= spec.alphabet_sizes[block] - 1;
    total += partial * binom * pw;
    return;
  }
  const int l = spec.block_lengths[block];
  BigCount binom = 1, pw = 1;
  for (int u = 0; u <= std::min(remaining, l); ++u) {
    if (u > 0) {
      binom = binom * (l - u + 1) / u;
      pw *= spec.alphabet_sizes[block] - 1;
    }
    rao_shell_terms(spec, block + 1, remaining - u, partial * binom * pw, total);
  }
}

inline void gv_shell_terms(const ArraySpec& spec, int block, int remaining, const BigCount& partial,
                           BigCount& total) {
  const int sigma = spec.sigma();
  if (block == sigma - 1) {
    // u_sigma >= 1 and u_sigma - 1 <= l_sigma - 1
    const int l = spec.block_lengths[block];
    const int s = spec.alphabet_sizes[block];
    if (remaining < 1 || remaining - 1 > l - 1) return;
    BigCount binom = 1;
    for (int r = 1; r <= remaining - 1; ++r) binom = binom * (l - r) / r;  // C(l-1, remaining-1)
    BigCount pw = 1;
    for (int r = 0; r < remaining - 1; ++r) pw *= s - 1;
    total += partial * s * binom * pw;
    return;
  }
  const int l = spec.block_lengths[block];
  BigCount binom = 1, pw = 1;
  for (int u = 0; u <= std::min(remaining, l); ++u) {
    if (u > 0) {
      binom = binom * (l - u + 1) / u;
      pw *= spec.alphabet_sizes[block] - 1;
    }
    gv_shell_terms(spec, block + 1, remaining - u, partial * binom * pw, total);
  }
}

}  // namespace detail

// Term-by-term evaluation of the combinatorial sums. RaoSum runs shells
// i = 0..t/2; GvSum is 1 plus shells i = 1..t-1 with the last block pinned
// to at least one coordinate. GvExpectation has no direct-sum form.
inline BigCount direct_bound(const ArraySpec& spec, const BoundTarget& target) {
  if (target.kind == BoundKind::GvExpectation)
    throw std::invalid_argument("direct_bound covers RaoSum and GvSum only");
  BigCount total = 0;
  if (target.kind == BoundKind::RaoSum) {
    for (int shell = 0; shell <= spec.strength / 2; ++shell)
      detail::rao_shell_terms(spec, 0, shell, 1, total);
  } else {
    total = 1;
    for (int shell = 1; shell <= spec.strength - 1; ++shell)
      detail::gv_shell_terms(spec, 0, shell, 1, total);
  }
  return total;
}

// Number of composition terms the Rao direct sum visits:
// sum_{i=0}^{t/2} sigma * C(sigma + i - 1, sigma - 1).
inline BigCount direct_op_count(const ArraySpec& spec) {
  const int sigma = spec.sigma();
  BigCount total = 0;
  for (int shell = 0; shell <= spec.strength / 2; ++shell) {
    BigCount binom = 1;
    for (int r = 1; r <= sigma - 1; ++r) binom = binom * (sigma + shell - r) / r;
    total += sigma * binom;
  }
  return total;
}

namespace detail {

// Depth-first enumeration of all 2^horizon paths, bucketing each path's
// up-cost product by its endpoint height. uint64 fast path when every
// product provably fits.
inline void enumerate_paths_u64(const std::vector<long long>& costs, int step, int horizon,
                                int ups, unsigned long long product, std::vector<BigCount>& buckets) {
  if (step == horizon) {
    buckets[ups] += product;
    return;
  }
  enumerate_paths_u64(costs, step + 1, horizon, ups, product, buckets);
  enumerate_paths_u64(costs, step + 1, horizon, ups + 1, product * costs[step], buckets);
}

inline void enumerate_paths_big(const std::vector<long long>& costs, int step, int horizon,
                                int ups, const BigCount& product, std::vector<BigCount>& buckets) {
  if (step == horizon) {
    buckets[ups] += product;
    return;
  }
  enumerate_paths_big(costs, step + 1, horizon, ups, product, buckets);
  enumerate_paths_big(costs, step + 1, horizon, ups + 1, product * costs[step], buckets);
}

inline std::vector<BigCount> path_products_by_endpoint(const ArraySpec& spec, int horizon) {
  const auto costs = detail::up_costs(spec);
  std::vector<BigCount> buckets(horizon + 1, 0);
  double log2max = 0;
  for (int k = 0; k < horizon; ++k) log2max += std::log2(static_cast<double>(std::max(1LL, costs[k])));
  if (log2max < 62)
    enumerate_paths_u64(costs, 0, horizon, 0, 1, buckets);
  else
    enumerate_paths_big(costs, 0, horizon, 0, 1, buckets);
  return buckets;
}

}  // namespace detail

// Independent check of dp_bound/direct_bound by total enumeration of the
// 2^horizon paths. Refuses horizons past 24 steps.
inline BigCount brute_force_oracle(const ArraySpec& spec, const BoundTarget& target) {
  const int horizon = target.kind == BoundKind::GvSum ? spec.factors() - 1 : target.horizon;
  const int threshold = target.kind == BoundKind::GvSum ? spec.strength - 2 : target.threshold;
  if (horizon > 24) throw std::invalid_argument("brute_force_oracle is limited to horizons <= 24");
  BigCount total = 0;
  if (threshold >= 0) {
    const auto buckets = detail::path_products_by_endpoint(spec, horizon);
    for (int x = 0; x <= std::min(threshold, horizon); ++x) total += buckets[x];
  }
  if (target.kind == BoundKind::GvSum) return 1 + spec.last_alphabet() * total;
  return target.prefactor * total;
}

}  // namespace oabounds
