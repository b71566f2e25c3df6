#pragma once

#include "oabounds/core.hpp"
#include "oabounds/exact.hpp"

#include <cmath>
#include <vector>

namespace oabounds {

// Binary entropy in nats; exact 0 at the endpoints, throws outside [0,1].
inline double entropy(double theta) {
  if (theta < 0.0 || theta > 1.0) throw std::domain_error("entropy needs theta in [0,1]");
  if (theta == 0.0 || theta == 1.0) return 0.0;
  return -theta * std::log(theta) - (1.0 - theta) * std::log(1.0 - theta);
}

namespace detail {

// Mean up-step fraction under tilt lambda: g(lambda) = sum a_i theta_i(lambda)
// with theta_i(lambda) = (s_i - 1) / (e^lambda + s_i - 1). Strictly
// decreasing from g(0) = sum a_i (s_i - 1)/s_i to 0.
inline double tilt_mean(const ArraySpec& spec, const ScaledParams& p, double lambda) {
  const double e = std::exp(lambda);
  double g = 0;
  for (int i = 0; i < spec.sigma(); ++i) {
    const double sm1 = spec.alphabet_sizes[i] - 1;
    g += p.a[i] * sm1 / (e + sm1);
  }
  return g;
}

}  // namespace detail

// Solve g(lambda) = budget for lambda >= 0 by bisection; residual driven
// below 1e-12. Returns 0 when the constraint is slack at lambda = 0.
inline double solve_lambda(const ArraySpec& spec, double budget) {
  if (budget <= 0.0 || budget >= 1.0) throw std::invalid_argument("budget must lie strictly in (0,1)");
  const ScaledParams p = scaled(spec);
  if (detail::tilt_mean(spec, p, 0.0) <= budget) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (detail::tilt_mean(spec, p, hi) > budget) hi *= 2.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double g = detail::tilt_mean(spec, p, mid);
    if (std::abs(g - budget) <= 1e-12) return mid;
    (g > budget ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Solution of the rate maximization for one bound family: the tilt
// parameter, the per-block up probabilities, whether the mean constraint is
// active, the budget it was solved against, and the rate value.
struct TiltProfile {
  double lambda_star = 0;
  std::vector<double> thetas;
  bool constrained = false;
  double budget = 0;
  double rate = 0;
};

namespace detail {

inline double clamp_unit(double x) {
  const double eps = 1e-15;
  return x < eps ? eps : (x > 1.0 - eps ? 1.0 - eps : x);
}

inline double rate_from_thetas(const ArraySpec& spec, const ScaledParams& p, const std::vector<double>& th) {
  double r = 0;
  for (int i = 0; i < spec.sigma(); ++i) {
    const double t = clamp_unit(th[i]);
    r += p.a[i] * (t * std::log(static_cast<double>(spec.alphabet_sizes[i] - 1)) + entropy(t));
  }
  return r;
}

}  // namespace detail

// Maximize sum a_i (theta_i log(s_i - 1) + H(theta_i)) subject to
// <a, theta> = budget (RaoSum, budget mu/2, equality always binds) or
// <a, theta> <= budget (Gv*, budget mu). On the slack branch the maximizer
// is theta_i = (s_i - 1)/s_i and the value collapses to sum a_i log s_i.
inline TiltProfile optimal_tilt(const ArraySpec& spec, BoundKind kind) {
  const ScaledParams p = scaled(spec);
  TiltProfile tp;
  tp.budget = kind == BoundKind::RaoSum ? p.mu / 2.0 : p.mu;
  const double g0 = detail::tilt_mean(spec, p, 0.0);
  if (kind == BoundKind::RaoSum && g0 < tp.budget)
    throw std::logic_error("rao mean constraint cannot be slack: g(0) >= 1/2 >= mu/2");
  tp.constrained = g0 > tp.budget;
  tp.lambda_star = tp.constrained ? solve_lambda(spec, tp.budget) : 0.0;
  const double e = std::exp(tp.lambda_star);
  tp.thetas.reserve(spec.sigma());
  for (int s : spec.alphabet_sizes) tp.thetas.push_back((s - 1) / (e + s - 1));
  if (tp.constrained) {
    tp.rate = detail::rate_from_thetas(spec, p, tp.thetas);
  } else {
    tp.rate = 0;  // plateau value, exact by construction
    for (int i = 0; i < spec.sigma(); ++i)
      tp.rate += p.a[i] * std::log(static_cast<double>(spec.alphabet_sizes[i]));
  }
  return tp;
}

// Rate as a function of the mean budget alone (shape fixed): 0 at budget 0,
// the plateau sum a_i log s_i once the constraint goes slack, tilted value
// in between. Drives the sweep command.
inline double rate_for_budget(const ArraySpec& spec, double budget, bool equality_constraint) {
  if (budget < 0.0 || budget > 1.0) throw std::domain_error("budget must lie in [0,1]");
  const ScaledParams p = scaled(spec);
  if (budget == 0.0) return 0.0;
  const double g0 = detail::tilt_mean(spec, p, 0.0);
  if (!equality_constraint && budget >= g0) {
    double r = 0;
    for (int i = 0; i < spec.sigma(); ++i)
      r += p.a[i] * std::log(static_cast<double>(spec.alphabet_sizes[i]));
    return r;
  }
  if (equality_constraint && budget > g0)
    throw std::domain_error("equality budget exceeds the reachable mean g(0)");
  const double lambda = budget >= g0 ? 0.0 : solve_lambda(spec, budget);
  const double e = std::exp(lambda);
  std::vector<double> th;
  th.reserve(spec.sigma());
  for (int s : spec.alphabet_sizes) th.push_back((s - 1) / (e + s - 1));
  return detail::rate_from_thetas(spec, p, th);
}

// Rate scaled back to the n of the spec, with a scientific rendering of
// exp(n * rate).
struct LdEstimate {
  double rate = 0;
  double log_value = 0;  // n * rate, nats
  double mantissa = 0;
  long long exponent10 = 0;
};

inline LdEstimate ld_estimate(const ArraySpec& spec, BoundKind kind) {
  LdEstimate est;
  const TiltProfile tp = optimal_tilt(spec, kind);
  est.rate = tp.rate;
  est.log_value = spec.factors() * tp.rate;
  const SciParts sci = to_sci(est.log_value);
  est.mantissa = sci.mantissa;
  est.exponent10 = sci.exponent10;
  return est;
}

// Limiting value surface V(x, tau): the remaining maximization over steps
// tau..1 with mean budget (kind budget) - x. At tau inside block i+1 the
// effective weights are (A_{i+1} - tau, a_{i+2}, ..., a_sigma).
inline double value_function(const ArraySpec& spec, double x, double tau, BoundKind kind) {
  const ScaledParams p = scaled(spec);
  const double budget = kind == BoundKind::RaoSum ? p.mu / 2.0 : p.mu;
  if (tau < 0.0 || tau > 1.0) throw std::domain_error("tau must lie in [0,1]");
  if (x < 0.0 || x > budget) throw std::domain_error("x must lie in [0, budget]");
  const double remaining = budget - x;
  if (tau >= 1.0 || remaining <= 0.0) return 0.0;

  const int sigma = spec.sigma();
  int block = sigma - 1;
  for (int i = 0; i < sigma; ++i)
    if (tau < p.A[i + 1]) { block = i; break; }
  std::vector<double> w;
  std::vector<int> s;
  w.push_back(p.A[block + 1] - tau);
  s.push_back(spec.alphabet_sizes[block]);
  for (int i = block + 1; i < sigma; ++i) {
    w.push_back(p.a[i]);
    s.push_back(spec.alphabet_sizes[i]);
  }

  auto mean_at = [&](double lambda) {
    const double e = std::exp(lambda);
    double g = 0;
    for (size_t i = 0; i < w.size(); ++i) g += w[i] * (s[i] - 1) / (e + s[i] - 1.0);
    return g;
  };
  const double g0 = mean_at(0.0);
  if (g0 <= remaining) {
    double v = 0;
    for (size_t i = 0; i < w.size(); ++i) v += w[i] * std::log(static_cast<double>(s[i]));
    return v;
  }
  double lo = 0.0, hi = 1.0;
  while (mean_at(hi) > remaining) hi *= 2.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (std::abs(mean_at(mid) - remaining) <= 1e-12) { lo = hi = mid; break; }
    (mean_at(mid) > remaining ? lo : hi) = mid;
  }
  const double lambda = 0.5 * (lo + hi);
  const double e = std::exp(lambda);
  double v = 0;
  for (size_t i = 0; i < w.size(); ++i) {
    const double th = detail::clamp_unit((s[i] - 1) / (e + s[i] - 1.0));
    v += w[i] * (th * std::log(s[i] - 1.0) + entropy(th));
  }
  return v;
}

// Finite-n value surface (1/n) log M(x, k) on the walk grid of the kind's
// target (RaoSum: horizon n, threshold t/2; Gv: horizon n, threshold t).
struct PrelimitGrid {
  int horizon = 0;
  int threshold = 0;
  // values[k][x] = (1/n) log M(x, k)
  std::vector<std::vector<double>> values;
};

inline PrelimitGrid prelimit_grid(const ArraySpec& spec, BoundKind kind) {
  PrelimitGrid g;
  g.horizon = spec.factors();
  g.threshold = kind == BoundKind::RaoSum ? spec.strength / 2 : spec.strength;
  g.values = walk_log_grid(spec, g.horizon, g.threshold);
  const double n = spec.factors();
  for (auto& row : g.values)
    for (double& v : row) v /= n;
  return g;
}

}  // namespace oabounds
