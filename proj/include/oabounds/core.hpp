#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace oabounds {

// Mixed-level design parameters: sigma alphabet blocks, block m holding
// block_lengths[m] factors over an alphabet of size alphabet_sizes[m],
// plus the strength t. Factors are numbered 1..n with block 1 first.
struct ArraySpec {
  std::vector<int> alphabet_sizes;
  std::vector<int> block_lengths;
  int strength = 0;

  ArraySpec() = default;
  ArraySpec(std::vector<int> sizes, std::vector<int> lengths, int t)
      : alphabet_sizes(std::move(sizes)), block_lengths(std::move(lengths)), strength(t) {
    validate();
    boundaries_.resize(block_lengths.size());
    std::partial_sum(block_lengths.begin(), block_lengths.end(), boundaries_.begin());
  }

  int sigma() const { return static_cast<int>(alphabet_sizes.size()); }
  int factors() const { return boundaries_.empty() ? 0 : boundaries_.back(); }
  int last_alphabet() const { return alphabet_sizes.back(); }

  // 1-based factor index -> 1-based block index.
  int block_of(int j) const {
    if (j < 1 || j > factors()) throw std::domain_error("factor index out of range: " + std::to_string(j));
    auto it = std::lower_bound(boundaries_.begin(), boundaries_.end(), j);
    return static_cast<int>(it - boundaries_.begin()) + 1;
  }

  // Per-step cost of the walk: staying flat costs 1, stepping up at factor j
  // costs alphabet_sizes[block_of(j)] - 1.
  int running_cost(int x, int j) const {
    if (x != 0 && x != 1) throw std::domain_error("running_cost expects x in {0,1}");
    return x == 0 ? 1 : alphabet_sizes[block_of(j) - 1] - 1;
  }

 private:
  void validate() const {
    if (alphabet_sizes.empty()) throw std::invalid_argument("spec needs at least one block");
    if (alphabet_sizes.size() != block_lengths.size())
      throw std::invalid_argument("alphabet_sizes and block_lengths must have equal length");
    for (int s : alphabet_sizes)
      if (s < 2) throw std::invalid_argument("alphabet sizes must be >= 2");
    for (int l : block_lengths)
      if (l < 1) throw std::invalid_argument("block lengths must be >= 1");
    int n = std::accumulate(block_lengths.begin(), block_lengths.end(), 0);
    if (strength < 1 || strength > n) throw std::invalid_argument("strength must satisfy 1 <= t <= n");
  }

  std::vector<int> boundaries_;
};

// Scaled view of a spec: mu = t/n, a[i] = l_i/n, A[i] = cumulative a
// with A[0] = 0 and A[sigma] = 1.
struct ScaledParams {
  double mu = 0;
  std::vector<double> a;
  std::vector<double> A;
};

inline ScaledParams scaled(const ArraySpec& spec) {
  ScaledParams p;
  const double n = spec.factors();
  p.mu = spec.strength / n;
  p.a.reserve(spec.sigma());
  p.A.resize(spec.sigma() + 1, 0.0);
  for (int i = 0; i < spec.sigma(); ++i) {
    p.a.push_back(spec.block_lengths[i] / n);
    p.A[i + 1] = p.A[i] + p.a.back();
  }
  p.A.back() = 1.0;  // kill the last rounding crumb
  return p;
}

// Multiply every block length and the strength by the same factor,
// preserving the scaled parameters exactly.
inline ArraySpec scale_spec(const ArraySpec& spec, int factor) {
  if (factor < 1) throw std::invalid_argument("scale factor must be >= 1");
  std::vector<int> lengths = spec.block_lengths;
  for (int& l : lengths) l *= factor;
  return ArraySpec(spec.alphabet_sizes, std::move(lengths), spec.strength * factor);
}

enum class BoundKind { RaoSum, GvSum, GvExpectation };

inline const char* to_string(BoundKind k) {
  switch (k) {
    case BoundKind::RaoSum: return "rao";
    case BoundKind::GvSum: return "gv";
    case BoundKind::GvExpectation: return "gv-expectation";
  }
  return "?";
}

// Which walk expectation a bound maps to. For RaoSum and GvExpectation the
// value is prefactor * E[...] over `horizon` steps with endpoint threshold
// `threshold`; GvSum keeps the tag values below but is evaluated through its
// own identity (see exact.hpp).
struct BoundTarget {
  BoundKind kind = BoundKind::RaoSum;
  int threshold = 0;
  int horizon = 0;
  long long prefactor = 1;

  static BoundTarget rao_sum(const ArraySpec& spec) {
    return {BoundKind::RaoSum, spec.strength / 2, spec.factors(), 1};
  }
  static BoundTarget gv_sum(const ArraySpec& spec) {
    return {BoundKind::GvSum, spec.strength - 1, spec.factors(), 1};
  }
  // Two published shapes: the short-horizon form drops one step and one
  // shell, the full-horizon form keeps both. Prefactor is 1 or s_sigma.
  static BoundTarget gv_expectation(const ArraySpec& spec, int horizon, long long prefactor) {
    const int n = spec.factors();
    if (horizon != n && horizon != n - 1)
      throw std::invalid_argument("gv expectation horizon must be n or n-1");
    if (prefactor != 1 && prefactor != spec.last_alphabet())
      throw std::invalid_argument("gv expectation prefactor must be 1 or the last alphabet size");
    const int threshold = horizon == n ? spec.strength : spec.strength - 1;
    return {BoundKind::GvExpectation, threshold, horizon, prefactor};
  }
};

}  // namespace oabounds
