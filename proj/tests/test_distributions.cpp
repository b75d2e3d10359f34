#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "ifsp/cantor.hpp"
#include "ifsp/distribution.hpp"
#include "ifsp/errors.hpp"
#include "ifsp/rng.hpp"

using ifsp::cantor_cdf;
using ifsp::cantor_quantile;
using ifsp::ConstructionError;
using ifsp::Distribution;
using ifsp::DomainError;
using ifsp::RngStream;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Independent reference for the Cantor function via its self-similarity
// F(x) = F(3x)/2 on the left third, 1/2 in the middle, 1/2 + F(3x-2)/2 on
// the right third. Different algorithm from the production digit scan.
double cantor_ref(double x, int depth = 150) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (depth == 0) return 0.5;
  if (x < 1.0 / 3.0) return 0.5 * cantor_ref(3.0 * x, depth - 1);
  if (x > 2.0 / 3.0) return 0.5 + 0.5 * cantor_ref(3.0 * x - 2.0, depth - 1);
  return 0.5;
}

void check_galois(const Distribution& d, double x_lo, double x_hi,
                  std::uint64_t seed) {
  RngStream rng(seed, 0);
  std::size_t violations = 0;
  for (int k = 0; k < 100000; ++k) {
    double u = rng.uniform();
    if (u == 0.0) u = 0.5;
    const double x = x_lo + rng.uniform() * (x_hi - x_lo);
    const bool quantile_below = d.quantile(u) <= x;
    const bool u_below = u <= d.cdf(x);
    if (quantile_below != u_below) ++violations;
  }
  CHECK(violations == 0);
}

double max_roundtrip_error(const Distribution& d, std::uint64_t seed) {
  RngStream rng(seed, 0);
  double worst = 0.0;
  for (int k = 0; k < 20000; ++k) {
    double u = rng.uniform();
    if (u == 0.0) u = 0.5;
    worst = std::max(worst, std::abs(d.cdf(d.quantile(u)) - u));
  }
  return worst;
}

Distribution square_grid_dist() {
  // F(x) = x^2 sampled on 33 nodes; strictly increasing with exact 0/1 ends.
  std::vector<double> xs, us;
  for (int k = 0; k <= 32; ++k) {
    const double x = static_cast<double>(k) / 32.0;
    xs.push_back(x);
    us.push_back(x * x);
  }
  return Distribution::tabulated(xs, us);
}

Distribution sample_empirical(std::uint64_t seed, int count) {
  RngStream rng(seed, 0);
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) samples.push_back(rng.uniform() * 3.0 - 1.0);
  return Distribution::empirical_smoothed(samples);
}

}  // namespace

TEST_CASE("uniform01 is the identity pair on [0,1]") {
  const Distribution d = Distribution::uniform01();
  CHECK(d.cdf(0.25) == 0.25);
  CHECK(d.cdf(-1.0) == 0.0);
  CHECK(d.cdf(7.0) == 1.0);
  CHECK(d.quantile(0.25) == 0.25);
  CHECK(d.quantile(0.0) == 0.0);
  CHECK(d.quantile(1.0) == 1.0);
  CHECK(d.support_lo() == 0.0);
  CHECK(d.support_hi() == 1.0);
}

TEST_CASE("exponential cdf and quantile match the closed forms") {
  const Distribution d = Distribution::exponential(1.0);
  CHECK(d.cdf(0.0) == 0.0);
  CHECK(d.cdf(-3.0) == 0.0);
  CHECK(d.cdf(1.0) == doctest::Approx(0.6321205588285577).epsilon(1e-15));
  CHECK(d.quantile(0.6321205588285577) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d.quantile(0.0) == 0.0);
  CHECK(d.quantile(1.0) == kInf);
  CHECK(d.support_hi() == kInf);

  const Distribution half = Distribution::exponential(0.5);
  for (double x : {0.1, 0.7, 2.0, 9.0})
    CHECK(half.cdf(x) == doctest::Approx(d.cdf(0.5 * x)).epsilon(1e-15));

  CHECK_THROWS_AS(Distribution::exponential(0.0), ConstructionError);
  CHECK_THROWS_AS(Distribution::exponential(-2.0), ConstructionError);
  CHECK_THROWS_AS(Distribution::exponential(kInf), ConstructionError);
}

TEST_CASE("triangular cdf, quantile, and symmetry") {
  const Distribution d = Distribution::triangular();
  CHECK(d.cdf(1.0) == 0.5);
  CHECK(d.cdf(0.5) == 0.125);
  CHECK(d.cdf(0.0) == 0.0);
  CHECK(d.cdf(2.0) == 1.0);
  CHECK(d.quantile(0.5) == 1.0);
  CHECK(d.quantile(0.875) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(d.quantile(0.125) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(d.quantile(0.0) == 0.0);
  CHECK(d.quantile(1.0) == 2.0);
  for (int k = 0; k <= 40; ++k) {
    const double x = 2.0 * static_cast<double>(k) / 40.0;
    CHECK(d.cdf(x) + d.cdf(2.0 - x) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("cantor cdf agrees with the self-similarity reference") {
  // 1.0/3.0 sits just below the exact third, on the climbing side of the
  // staircase, so F there is a hair under 1/2. 2.0/3.0 rounds into the
  // flat middle gap and hits 1/2 exactly.
  CHECK(cantor_cdf(1.0 / 3.0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(cantor_cdf(1.0 / 3.0) <= 0.5);
  CHECK(cantor_cdf(2.0 / 3.0) == 0.5);
  CHECK(cantor_cdf(0.25) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(cantor_cdf(0.0) == 0.0);
  CHECK(cantor_cdf(1.0) == 1.0);
  CHECK(cantor_cdf(-0.5) == 0.0);
  CHECK(cantor_cdf(1.5) == 1.0);
  CHECK(cantor_cdf(1.0 / 9.0) == doctest::Approx(0.25).epsilon(1e-9));
  // flat across the removed middle third
  CHECK(cantor_cdf(0.4) == 0.5);
  CHECK(cantor_cdf(0.6) == 0.5);

  RngStream rng(101, 0);
  double worst = 0.0;
  for (int k = 0; k < 5000; ++k) {
    const double x = rng.uniform();
    worst = std::max(worst, std::abs(cantor_cdf(x) - cantor_ref(x)));
  }
  CHECK(worst <= 1e-9);

  double prev = -1.0;
  for (int k = 0; k <= 3000; ++k) {
    const double f = cantor_cdf(static_cast<double>(k) / 3000.0);
    CHECK(f >= prev);
    prev = f;
  }
}

TEST_CASE("cantor quantile hits the infimum of each plateau") {
  CHECK(cantor_quantile(0.5) == 1.0 / 3.0);
  CHECK(cantor_quantile(1.0) == 1.0);
  CHECK(cantor_quantile(0.0) == 0.0);
  CHECK(cantor_quantile(1.0 / 3.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(cantor_quantile(0.25) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
  double prev = -1.0;
  for (int k = 0; k <= 4096; ++k) {
    const double q = cantor_quantile(static_cast<double>(k) / 4096.0);
    CHECK(q >= prev);
    prev = q;
  }
}

TEST_CASE("cantor round trips") {
  // The quantile of any u < 1 is an infimum whose ternary expansion ends in
  // repeating 2s; rounding that point to a double costs up to ~2^-33 in F.
  // That quantization floor applies to dyadic u as much as to generic u.
  RngStream rng(202, 0);
  for (int k = 0; k < 4000; ++k) {
    const double u =
        static_cast<double>(1 + (rng.next_u64() % ((1u << 20) - 1))) /
        static_cast<double>(1u << 20);
    CHECK(std::abs(cantor_cdf(cantor_quantile(u)) - u) <= 2e-10);
  }
  for (int j = 0; j < 729; ++j) {
    const double x = (static_cast<double>(j) + 0.5) / 729.0;
    const double f = cantor_cdf(x);
    CHECK(std::abs(cantor_cdf(cantor_quantile(f)) - f) <= 2e-10);
  }
  for (int k = 0; k < 20000; ++k) {
    double u = rng.uniform();
    if (u == 0.0) u = 0.5;
    CHECK(std::abs(cantor_cdf(cantor_quantile(u)) - u) <= 1e-9);
  }
  // Downward rounding guarantees the one-sided inequality everywhere.
  for (int k = 0; k <= 20000; ++k) {
    const double x = static_cast<double>(k) / 20000.0;
    CHECK(cantor_quantile(cantor_cdf(x)) <= x);
  }
  for (int k = 0; k < 5000; ++k) {
    const double x = rng.uniform();
    CHECK(cantor_quantile(cantor_cdf(x)) <= x);
  }
}

TEST_CASE("galois equivalence holds for every kind") {
  check_galois(Distribution::uniform01(), -0.2, 1.2, 11);
  check_galois(Distribution::exponential(1.0), -0.5, 45.0, 12);
  check_galois(Distribution::exponential(0.5), -0.5, 90.0, 13);
  check_galois(Distribution::triangular(), -0.2, 2.2, 14);
  check_galois(Distribution::cantor_uniform(), -0.2, 1.2, 15);
  check_galois(square_grid_dist(), -0.2, 1.2, 16);
  check_galois(sample_empirical(17, 200), -1.5, 2.5, 18);
}

TEST_CASE("quantile-then-cdf round trip tolerances") {
  CHECK(max_roundtrip_error(Distribution::uniform01(), 21) <= 1e-9);
  CHECK(max_roundtrip_error(Distribution::exponential(1.0), 22) <= 1e-9);
  CHECK(max_roundtrip_error(Distribution::exponential(0.5), 23) <= 1e-9);
  CHECK(max_roundtrip_error(Distribution::triangular(), 24) <= 1e-9);
  CHECK(max_roundtrip_error(Distribution::cantor_uniform(), 25) <= 1e-9);
  // piecewise-linear kinds invert segment-exactly
  CHECK(max_roundtrip_error(square_grid_dist(), 26) <= 1e-12);
  CHECK(max_roundtrip_error(sample_empirical(27, 150), 28) <= 1e-12);
}

TEST_CASE("cdf and quantile are monotone on sorted grids") {
  const Distribution kinds[] = {
      Distribution::uniform01(),      Distribution::exponential(0.7),
      Distribution::triangular(),     Distribution::cantor_uniform(),
      square_grid_dist(),             sample_empirical(31, 120)};
  RngStream rng(32, 0);
  for (const Distribution& d : kinds) {
    std::vector<double> xs, us;
    for (int k = 0; k < 1000; ++k) {
      xs.push_back(rng.uniform() * 6.0 - 2.0);
      us.push_back(rng.uniform());
    }
    std::sort(xs.begin(), xs.end());
    std::sort(us.begin(), us.end());
    for (std::size_t k = 1; k < xs.size(); ++k)
      CHECK(d.cdf(xs[k]) >= d.cdf(xs[k - 1]));
    for (std::size_t k = 1; k < us.size(); ++k)
      CHECK(d.quantile(us[k]) >= d.quantile(us[k - 1]));
  }
}

TEST_CASE("domain errors for bad evaluator inputs") {
  const Distribution d = Distribution::triangular();
  CHECK_THROWS_AS(d.cdf(kInf), DomainError);
  CHECK_THROWS_AS(d.cdf(std::nan("")), DomainError);
  CHECK_THROWS_AS(d.quantile(-0.1), DomainError);
  CHECK_THROWS_AS(d.quantile(1.1), DomainError);
  CHECK_THROWS_AS(d.quantile(std::nan("")), DomainError);
}

TEST_CASE("tabulated grids validate and interpolate") {
  const Distribution d = square_grid_dist();
  CHECK(d.cdf(0.25) == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK(d.quantile(0.0625) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(d.cdf(0.0) == 0.0);
  CHECK(d.cdf(1.0) == 1.0);
  CHECK(d.quantile(0.0) == 0.0);
  CHECK(d.quantile(1.0) == 1.0);
  // interpolation is exact at the nodes
  for (int k = 0; k <= 32; ++k) {
    const double x = static_cast<double>(k) / 32.0;
    CHECK(d.cdf(x) == x * x);
    CHECK(d.quantile(x * x) == x);
  }

  CHECK_THROWS_AS(Distribution::tabulated({0.0, 1.0}, {0.0}),
                  ConstructionError);
  CHECK_THROWS_AS(Distribution::tabulated({0.0}, {0.0}), ConstructionError);
  CHECK_THROWS_AS(Distribution::tabulated({0.0, 0.0, 1.0}, {0.0, 0.5, 1.0}),
                  ConstructionError);
  CHECK_THROWS_AS(Distribution::tabulated({0.0, 0.5, 1.0}, {0.0, 0.5, 0.5}),
                  ConstructionError);
  CHECK_THROWS_AS(Distribution::tabulated({0.0, 1.0}, {0.1, 1.0}),
                  ConstructionError);
  CHECK_THROWS_AS(Distribution::tabulated({0.0, 1.0}, {0.0, 0.9}),
                  ConstructionError);
  CHECK_THROWS_AS(Distribution::tabulated({0.0, kInf}, {0.0, 1.0}),
                  DomainError);
}

TEST_CASE("empirical smoothing reproduces hand-computed values") {
  const Distribution two = Distribution::empirical_smoothed({0.0, 1.0});
  CHECK(two.cdf(0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(two.cdf(0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(two.support_lo() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(two.support_hi() == doctest::Approx(2.0).epsilon(1e-12));

  const Distribution four =
      Distribution::empirical_smoothed({0.0, 1.0, 2.0, 3.0});
  CHECK(four.cdf(1.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(four.support_lo() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(four.support_hi() == doctest::Approx(4.0).epsilon(1e-12));

  // ties collapse to one node at the averaged rank position
  const Distribution tied =
      Distribution::empirical_smoothed({0.0, 1.0, 1.0, 2.0});
  CHECK(tied.cdf(1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(tied.quantile(0.5) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(Distribution::empirical_smoothed({5.0}), ConstructionError);
  CHECK_THROWS_AS(Distribution::empirical_smoothed({2.0, 2.0, 2.0}),
                  ConstructionError);
  CHECK_THROWS_AS(Distribution::empirical_smoothed({1.0, std::nan("")}),
                  DomainError);
  CHECK_THROWS_AS(
      Distribution::empirical_smoothed({0.0, 1.0, 2.0}, 5),
      ConstructionError);
}

TEST_CASE("bisection inversion returns leftmost points") {
  const double ln2 = 0.6931471805599453;
  CHECK(std::abs(ifsp::quantile_by_bisection(Distribution::exponential(1.0),
                                             0.5) -
                 ln2) <= 1e-10);
  CHECK(std::abs(ifsp::quantile_by_bisection(Distribution::triangular(),
                                             0.875) -
                 1.5) <= 1e-9);
  CHECK(std::abs(ifsp::quantile_by_bisection(Distribution::uniform01(), 0.25) -
                 0.25) <= 1e-11);
  // plateau: the infimum of {F >= 1/2} for the staircase is the left gap edge
  CHECK(std::abs(ifsp::quantile_by_bisection(Distribution::cantor_uniform(),
                                             0.5) -
                 1.0 / 3.0) <= 1e-11);
  CHECK_THROWS_AS(
      ifsp::quantile_by_bisection(Distribution::uniform01(), 0.0),
      DomainError);
  CHECK_THROWS_AS(
      ifsp::quantile_by_bisection(Distribution::uniform01(), 1.0),
      DomainError);
  CHECK_THROWS_AS(
      ifsp::quantile_by_bisection(Distribution::uniform01(), 0.5, 0.0),
      DomainError);
}

TEST_CASE("extended cdf handles the infinities") {
  const Distribution d = Distribution::exponential(2.0);
  CHECK(ifsp::cdf_extended(d, kInf) == 1.0);
  CHECK(ifsp::cdf_extended(d, -kInf) == 0.0);
  CHECK(ifsp::cdf_extended(d, 1.0) == d.cdf(1.0));
  CHECK_THROWS_AS(ifsp::cdf_extended(d, std::nan("")), DomainError);
}
