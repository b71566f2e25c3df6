#pragma once

#include "oabounds/asymptotics.hpp"
#include "oabounds/core.hpp"
#include "oabounds/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace oabounds {

struct IsConfig {
  long long samples = 0;
  std::uint64_t seed = 0;
  bool use_tilt = true;  // false = plain Monte Carlo with fair coins
};

// Monte Carlo estimate of a walk-shaped bound, carried in log space.
// mantissa/exponent10, std_error and the CI ends are all at the 10^exponent10
// scale, matching how such tables are usually printed.
struct IsResult {
  double log_estimate = -std::numeric_limits<double>::infinity();
  double mantissa = 0;
  long long exponent10 = 0;
  double std_error = 0;
  double ci_low = 0;
  double ci_high = 0;
  double log_second_moment = -std::numeric_limits<double>::infinity();
  double hit_fraction = 0;
  long long samples = 0;
  std::uint64_t seed = 0;
  std::string method;  // "is" or "mc"
  std::optional<TiltProfile> tilt;
};

namespace detail {

inline int thread_count(long long jobs) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("OABOUNDS_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) hw = static_cast<unsigned>(v);
  }
  return static_cast<int>(std::min<long long>(hw, std::max<long long>(1, jobs)));
}

struct StepTables {
  std::vector<double> theta;       // up probability per step
  std::vector<double> log_up;      // log weight contribution of an up step
  std::vector<double> log_flat;    // log weight contribution of a flat step
};

// Per-step sampling and weighting tables. Tilted: draw up with prob
// theta*_block, weight (s-1)/theta on up and 1/(1-theta) on flat. Plain:
// fair coin, weight 2(s-1) on up and 2 on flat.
inline StepTables make_step_tables(const ArraySpec& spec, const TiltProfile* tilt) {
  StepTables t;
  const int n = spec.factors();
  t.theta.reserve(n);
  t.log_up.reserve(n);
  t.log_flat.reserve(n);
  for (int b = 0; b < spec.sigma(); ++b) {
    const double logc = std::log(static_cast<double>(spec.alphabet_sizes[b] - 1));
    const double th = tilt ? tilt->thetas[b] : 0.5;
    for (int r = 0; r < spec.block_lengths[b]; ++r) {
      t.theta.push_back(th);
      t.log_up.push_back(logc - std::log(th));
      t.log_flat.push_back(-std::log1p(-th));
    }
  }
  return t;
}

}  // namespace detail

// Importance-sampling / Monte Carlo estimator for RaoSum and GvExpectation
// targets. Path k is driven by its own SplitMix64 stream keyed by
// (seed, k); per-path results land in a k-indexed buffer and are reduced
// sequentially, so the estimate is bit-identical for any thread count.
inline IsResult is_estimate(const ArraySpec& spec, const BoundTarget& target, const IsConfig& cfg) {
  if (cfg.samples < 2) throw std::invalid_argument("need at least 2 samples");
  if (target.kind == BoundKind::GvSum)
    throw std::invalid_argument("GvSum is not walk-shaped; simulate RaoSum or GvExpectation");

  std::optional<TiltProfile> tilt;
  if (cfg.use_tilt) tilt = optimal_tilt(spec, target.kind);
  const detail::StepTables tables = detail::make_step_tables(spec, cfg.use_tilt ? &*tilt : nullptr);

  const long long K = cfg.samples;
  const int m = target.horizon;
  const int T = target.threshold;
  std::vector<double> logw(K);
  std::vector<unsigned char> hit(K);

  const int workers = detail::thread_count(K);
  auto run_range = [&](long long from, long long to) {
    for (long long k = from; k < to; ++k) {
      SplitMix64 rng(path_stream_seed(cfg.seed, static_cast<std::uint64_t>(k)));
      int height = 0;
      double lw = 0;
      for (int j = 0; j < m; ++j) {
        if (rng.next_double() < tables.theta[j]) {
          ++height;
          lw += tables.log_up[j];
        } else {
          lw += tables.log_flat[j];
        }
      }
      logw[k] = lw;
      hit[k] = height <= T ? 1 : 0;
    }
  };
  if (workers <= 1) {
    run_range(0, K);
  } else {
    std::vector<std::thread> pool;
    const long long chunk = (K + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const long long from = w * chunk;
      const long long to = std::min(K, from + chunk);
      if (from < to) pool.emplace_back(run_range, from, to);
    }
    for (auto& th : pool) th.join();
  }

  IsResult res;
  res.samples = K;
  res.seed = cfg.seed;
  res.method = cfg.use_tilt ? "is" : "mc";
  res.tilt = tilt;

  long long hits = 0;
  double mx = -std::numeric_limits<double>::infinity();
  for (long long k = 0; k < K; ++k)
    if (hit[k]) {
      ++hits;
      mx = std::max(mx, logw[k]);
    }
  res.hit_fraction = static_cast<double>(hits) / static_cast<double>(K);
  if (hits == 0) return res;  // estimate is exactly zero, log fields stay -inf

  // log-sum-exp with the max shifted out, then moments of the shifted weights
  double sum1 = 0, sum2 = 0;
  for (long long k = 0; k < K; ++k) {
    if (!hit[k]) continue;
    const double w = std::exp(logw[k] - mx);
    sum1 += w;
    sum2 += w * w;
  }
  const double logpre = std::log(static_cast<double>(target.prefactor));
  res.log_estimate = logpre + mx + std::log(sum1 / K);
  res.log_second_moment = 2 * logpre + 2 * mx + std::log(sum2 / K);

  const double mean_sh = sum1 / K;
  const double var_sh = std::max(0.0, sum2 / K - mean_sh * mean_sh) * K / std::max<long long>(1, K - 1);
  const double se_sh = std::sqrt(var_sh / K);

  const SciParts sci = to_sci(res.log_estimate);
  res.mantissa = sci.mantissa;
  res.exponent10 = sci.exponent10;
  // rescale the standard error to the 10^exponent10 scale of the mantissa
  const double log_se = logpre + mx + std::log(se_sh);
  res.std_error = se_sh > 0 ? std::exp(log_se - sci.exponent10 * std::numbers::ln10) : 0.0;
  res.ci_low = res.mantissa - 2 * res.std_error;
  res.ci_high = res.mantissa + 2 * res.std_error;
  return res;
}

// Log weight of a tilted path as a function of its endpoint alone:
// lambda* (S_m - m') + sum over blocks of (steps of that block within the
// horizon) * log(e^lambda* + s_i - 1), where m' counts... the horizon steps.
// Every tilted path with the same endpoint carries exactly this weight.
inline double weight_of_endpoint(const ArraySpec& spec, const TiltProfile& tilt, int endpoint, int horizon) {
  if (horizon < 0 || horizon > spec.factors()) throw std::invalid_argument("horizon out of range");
  if (endpoint < 0 || endpoint > horizon) throw std::domain_error("endpoint must lie in [0, horizon]");
  double lw = tilt.lambda_star * (endpoint - horizon);
  int consumed = 0;
  for (int b = 0; b < spec.sigma() && consumed < horizon; ++b) {
    const int steps = std::min(spec.block_lengths[b], horizon - consumed);
    consumed += steps;
    lw += steps * std::log(std::exp(tilt.lambda_star) + spec.alphabet_sizes[b] - 1.0);
  }
  return lw;
}

inline double weight_of_endpoint(const ArraySpec& spec, const TiltProfile& tilt, int endpoint) {
  return weight_of_endpoint(spec, tilt, endpoint, spec.factors());
}

// One row per n: the sample-based second-moment rate (1/n) log M2_hat against
// the twice-rate floor 2 * rate, with a delta-method standard error on the
// first of the two.
struct DiagnosticRow {
  int n = 0;
  double second_moment_rate = 0;
  double twice_rate = 0;
  double std_error = 0;
};

// Scale the base spec by each factor, rerun the tilted estimator, and report
// how fast (1/n) log M2_hat closes on 2 * rate. The gap shrinking to zero is
// the asymptotic-optimality signature.
inline std::vector<DiagnosticRow> optimality_diagnostic(const ArraySpec& base, BoundKind kind,
                                                        const std::vector<int>& scale_factors,
                                                        long long samples, std::uint64_t seed) {
  if (kind == BoundKind::GvSum) throw std::invalid_argument("GvSum is not walk-shaped");
  std::vector<DiagnosticRow> rows;
  rows.reserve(scale_factors.size());
  for (int f : scale_factors) {
    const ArraySpec spec = scale_spec(base, f);
    const BoundTarget target = kind == BoundKind::RaoSum
                                   ? BoundTarget::rao_sum(spec)
                                   : BoundTarget::gv_expectation(spec, spec.factors(), 1);
    IsConfig cfg;
    cfg.samples = samples;
    cfg.seed = seed;
    cfg.use_tilt = true;
    const IsResult r = is_estimate(spec, target, cfg);
    DiagnosticRow row;
    row.n = spec.factors();
    row.twice_rate = 2.0 * r.tilt->rate;
    row.second_moment_rate = r.log_second_moment / spec.factors();

    // delta method: SE(log M2_hat) = SD(w^2) / (sqrt(K) * M2_hat)
    // recomputed from the same stream to keep this self-contained
    const detail::StepTables tables = detail::make_step_tables(spec, &*r.tilt);
    const int m = target.horizon;
    double mx = -std::numeric_limits<double>::infinity();
    std::vector<double> lw2(samples, -std::numeric_limits<double>::infinity());
    for (long long k = 0; k < samples; ++k) {
      SplitMix64 rng(path_stream_seed(seed, static_cast<std::uint64_t>(k)));
      int height = 0;
      double lw = 0;
      for (int j = 0; j < m; ++j) {
        if (rng.next_double() < tables.theta[j]) { ++height; lw += tables.log_up[j]; }
        else lw += tables.log_flat[j];
      }
      if (height <= target.threshold) {
        lw2[k] = 2 * lw;
        mx = std::max(mx, lw2[k]);
      }
    }
    double s1 = 0, s2 = 0;
    for (double v : lw2)
      if (v > -std::numeric_limits<double>::infinity()) {
        const double w = std::exp(v - mx);
        s1 += w;
        s2 += w * w;
      }
    const double mean = s1 / samples;
    const double var = std::max(0.0, s2 / samples - mean * mean) * samples / std::max<long long>(1, samples - 1);
    row.std_error = mean > 0 ? std::sqrt(var / samples) / mean / spec.factors() : 0.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace oabounds
