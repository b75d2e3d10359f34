#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ifsp {

enum class DistKind {
  uniform01,
  exponential,
  triangular,
  cantor_uniform,
  tabulated,
  empirical,
};

// A continuous probability distribution on the real line, presented by the
// pair (F, F^-1) where F is the CDF and F^-1(u) = inf{x : F(x) >= u} is the
// generalized inverse. The pair satisfies the Galois equivalence
//
//   F^-1(u) <= x   <=>   u <= F(x)        for u in (0,1),
//
// and, because every representable kind is continuous (atoms are rejected at
// construction), F(F^-1(u)) = u on (0,1).
//
// Values are immutable after construction; cdf/quantile are pure and safe to
// call concurrently.
//
// Kinds:
//   uniform01       U[0,1]; F and F^-1 are the identity on [0,1].
//   exponential     rate lambda > 0 on [0, +inf); F(x) = 1 - exp(-lambda*x).
//   triangular      density x on [0,1], 2-x on [1,2]; F(x) = x^2/2 then
//                   2x - x^2/2 - 1.
//   cantor_uniform  uniform measure on the middle-third Cantor set; see
//                   cantor.hpp.
//   tabulated       piecewise-linear F through a strictly increasing grid of
//                   (x, F) nodes; the F column must start at exactly 0 and end
//                   at exactly 1 (anything else would plant an atom at a
//                   support endpoint).
//   empirical       continuous piecewise-linear CDF smoothed from samples,
//                   see Distribution::empirical_smoothed.
//
// Conventions: quantile(0) = support_lo (the essential support infimum, not
// -inf); quantile(1) = support_hi, which is +inf for the exponential and is
// returned as an extended real.
class Distribution {
public:
  static Distribution uniform01();
  static Distribution exponential(double rate);
  static Distribution triangular();
  static Distribution cantor_uniform();

  // xs strictly increasing, us strictly increasing with us.front() == 0 and
  // us.back() == 1. `source` is the CLI specifier payload (a CSV path) kept
  // for serialization; in-memory grids without one cannot be serialized.
  static Distribution tabulated(std::vector<double> xs, std::vector<double> us,
                                std::string source = {});

  // Continuous CDF interpolating the order statistics at plotting positions
  // i/(N+1), extended linearly past the extreme samples (with the adjacent
  // segment's slope) down to F=0 and up to F=1; those extension points become
  // the support endpoints. Tied samples are merged into one node at the mean
  // of their plotting positions, keeping F strictly increasing. Requires at
  // least min_count samples and at least two distinct values.
  static Distribution empirical_smoothed(std::vector<double> samples,
                                         std::size_t min_count = 2,
                                         std::string source = {});

  DistKind kind() const { return kind_; }
  bool continuous() const { return true; }
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  double rate() const { return rate_; }  // exponential only
  const std::string& source() const { return source_; }
  const std::vector<double>& grid_x() const { return xs_; }
  const std::vector<double>& grid_u() const { return us_; }

  double cdf(double x) const;
  double quantile(double u) const;

private:
  Distribution() = default;

  DistKind kind_ = DistKind::uniform01;
  double lo_ = 0.0;
  double hi_ = 1.0;
  double rate_ = 0.0;
  std::vector<double> xs_, us_;  // tabulated / empirical nodes
  std::string source_;
};

// cdf that accepts the extended reals produced by quantile(1) and preimage
// suprema: -inf -> 0, +inf -> 1, finite -> dist.cdf.
double cdf_extended(const Distribution& dist, double x);

// Generic leftmost inversion of F by bisection on the bracket width:
// maintains F(hi) >= u and returns hi once hi - lo <= tol, which converges to
// the left edge of any plateau (the infimum). Unbounded supports are bracketed
// by doubling expansion first. Throws IntegrityError if no bracket is found.
double quantile_by_bisection(const Distribution& dist, double u,
                             double tol = 1e-12);

}  // namespace ifsp
