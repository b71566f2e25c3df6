#include "oabounds/simulate.hpp"

#include "oabounds/exact.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>

using namespace oabounds;

namespace {

const ArraySpec ex1({13, 10, 7, 5}, {20, 20, 20, 20}, 4);

IsResult run(const ArraySpec& spec, const BoundTarget& t, long long k, std::uint64_t seed, bool tilt = true) {
  IsConfig cfg;
  cfg.samples = k;
  cfg.seed = seed;
  cfg.use_tilt = tilt;
  return is_estimate(spec, t, cfg);
}

}  // namespace

TEST_CASE("estimates are bit-identical across thread counts", "[simulate]") {
  const BoundTarget rao = BoundTarget::rao_sum(ex1);

  setenv("OABOUNDS_THREADS", "1", 1);
  const IsResult one = run(ex1, rao, 4000, 42);
  setenv("OABOUNDS_THREADS", "4", 1);
  const IsResult four = run(ex1, rao, 4000, 42);
  unsetenv("OABOUNDS_THREADS");

  CHECK(one.log_estimate == four.log_estimate);
  CHECK(one.log_second_moment == four.log_second_moment);
  CHECK(one.std_error == four.std_error);
  CHECK(one.hit_fraction == four.hit_fraction);

  const IsResult other = run(ex1, rao, 4000, 43);
  CHECK(one.log_estimate != other.log_estimate);
}

TEST_CASE("endpoint determines the tilted weight", "[simulate]") {
  const ArraySpec spec({3, 5}, {3, 4}, 4);
  const TiltProfile tilt = optimal_tilt(spec, BoundKind::RaoSum);

  // exhaustive: every up/flat string's accumulated log-weight, rebuilt from
  // the tilt alone, must collapse to a function of the endpoint
  for (int horizon : {7, 6}) {
    for (unsigned mask = 0; mask < (1U << horizon); ++mask) {
      double lw = 0;
      int endpoint = 0;
      for (int j = 1; j <= horizon; ++j) {
        const double th = tilt.thetas[spec.block_of(j) - 1];
        if (mask >> (j - 1) & 1U) {
          ++endpoint;
          lw += std::log(spec.running_cost(1, j) / th);
        } else {
          lw += std::log(1.0 / (1.0 - th));
        }
      }
      REQUIRE(lw == Catch::Approx(weight_of_endpoint(spec, tilt, endpoint, horizon)).margin(1e-9));
    }
  }

  // linearity in the endpoint
  const double w0 = weight_of_endpoint(spec, tilt, 0);
  const double w2 = weight_of_endpoint(spec, tilt, 2);
  CHECK(w2 - w0 == Catch::Approx(2 * tilt.lambda_star).margin(1e-12));

  // default horizon is the full walk
  CHECK(weight_of_endpoint(spec, tilt, 1) == weight_of_endpoint(spec, tilt, 1, 7));

  CHECK_THROWS_AS(weight_of_endpoint(spec, tilt, -1, 7), std::domain_error);
  CHECK_THROWS_AS(weight_of_endpoint(spec, tilt, 8, 7), std::domain_error);
}

TEST_CASE("zero tilt collapses the weight to a constant", "[simulate]") {
  const ArraySpec spec({3, 5}, {2, 2}, 4);  // t = n makes the gv budget 1: constraint slack
  const TiltProfile tilt = optimal_tilt(spec, BoundKind::GvExpectation);
  REQUIRE(tilt.lambda_star == 0.0);
  const double expect = 2 * std::log(3.0) + 2 * std::log(5.0);
  for (int e : {0, 1, 2, 3, 4})
    CHECK(weight_of_endpoint(spec, tilt, e) == Catch::Approx(expect).margin(1e-12));
}

TEST_CASE("certain event with slack tilt has zero variance", "[simulate]") {
  const ArraySpec spec({3, 5}, {2, 2}, 4);
  const BoundTarget t = BoundTarget::gv_expectation(spec, 4, 1);  // threshold = horizon
  const IsResult r = run(spec, t, 500, 9);
  CHECK(r.hit_fraction == 1.0);
  CHECK(std::exp(r.log_estimate) == Catch::Approx(225.0).epsilon(1e-12));
  CHECK(r.std_error <= 1e-8);
  // constant weights: second moment equals the squared estimate
  CHECK(r.log_second_moment == Catch::Approx(2 * r.log_estimate).margin(1e-12));
}

TEST_CASE("tilted estimate agrees with the exact value", "[simulate]") {
  const ArraySpec spec({3, 2}, {4, 4}, 4);
  const BoundTarget rao = BoundTarget::rao_sum(spec);
  const double exact = static_cast<double>(dp_bound(spec, rao));

  const IsResult is = run(spec, rao, 100000, 11);
  const double est = std::exp(is.log_estimate);
  const double se = is.std_error * std::pow(10.0, static_cast<double>(is.exponent10));
  CHECK(std::abs(est - exact) <= 3 * se);
  CHECK(is.method == "is");
  REQUIRE(is.tilt.has_value());
  CHECK(is.tilt->thetas.size() == 2);
  CHECK(is.ci_low <= is.mantissa);
  CHECK(is.mantissa <= is.ci_high);

  const IsResult mc = run(spec, rao, 100000, 11, false);
  const double mc_se = mc.std_error * std::pow(10.0, static_cast<double>(mc.exponent10));
  CHECK(std::abs(std::exp(mc.log_estimate) - exact) <= 4 * mc_se);
  CHECK(mc.method == "mc");
  CHECK_FALSE(mc.tilt.has_value());

  // the tilt earns its keep
  CHECK(se < mc_se);
}

TEST_CASE("sampled weights never exceed the threshold weight", "[simulate]") {
  const TiltProfile tilt = optimal_tilt(ex1, BoundKind::RaoSum);
  const double cap = weight_of_endpoint(ex1, tilt, 2);
  // replay the estimator's own streams
  for (long long k = 0; k < 2000; ++k) {
    SplitMix64 rng(path_stream_seed(31, static_cast<std::uint64_t>(k)));
    double lw = 0;
    int endpoint = 0;
    for (int j = 1; j <= 80; ++j) {
      const double th = tilt.thetas[ex1.block_of(j) - 1];
      if (rng.next_double() < th) {
        ++endpoint;
        lw += std::log(ex1.running_cost(1, j) / th);
      } else {
        lw += std::log(1.0 / (1.0 - th));
      }
    }
    if (endpoint <= 2) REQUIRE(lw <= cap + 1e-9);
  }
}

TEST_CASE("plain monte carlo misses the rare event", "[simulate]") {
  const IsResult r = run(ex1, BoundTarget::rao_sum(ex1), 64, 3, false);
  CHECK(r.hit_fraction == 0.0);
  CHECK(std::isinf(r.log_estimate));
  CHECK(r.mantissa == 0.0);
  CHECK(r.std_error == 0.0);
  CHECK(r.ci_low == 0.0);
  CHECK(r.ci_high == 0.0);
}

TEST_CASE("input validation", "[simulate]") {
  CHECK_THROWS_AS(run(ex1, BoundTarget::rao_sum(ex1), 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(run(ex1, BoundTarget::gv_sum(ex1), 100, 1), std::invalid_argument);
}

TEST_CASE("second-moment gap shrinks with n", "[simulate]") {
  const ArraySpec base({13, 10, 7, 5}, {10, 10, 10, 10}, 2);
  const auto rows = optimality_diagnostic(base, BoundKind::RaoSum, {1, 2}, 1500, 5);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].n == 40);
  CHECK(rows[1].n == 80);
  CHECK(rows[0].twice_rate == Catch::Approx(rows[1].twice_rate).margin(1e-12));
  CHECK(std::abs(rows[1].second_moment_rate - rows[1].twice_rate) <
        std::abs(rows[0].second_moment_rate - rows[0].twice_rate));
  CHECK(rows[0].std_error > 0);
}
