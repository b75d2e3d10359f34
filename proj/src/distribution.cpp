#include "ifsp/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ifsp/cantor.hpp"
#include "ifsp/errors.hpp"

namespace ifsp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Piecewise-linear evaluation of the map a -> b at t, where a is strictly
// increasing. Exact at the nodes: t == a[j] lands on b[j] with zero rounding.
double interp_nodes(const std::vector<double>& a, const std::vector<double>& b,
                    double t) {
  if (t <= a.front()) return b.front();
  if (t >= a.back()) return b.back();
  const auto it = std::upper_bound(a.begin(), a.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - a.begin());
  const double w = (t - a[j - 1]) / (a[j] - a[j - 1]);
  return b[j - 1] + w * (b[j] - b[j - 1]);
}

void check_strictly_increasing(const std::vector<double>& v,
                               const char* what) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (!(v[i] < v[i + 1]))
      throw ConstructionError(std::string(what) +
                              " must be strictly increasing");
  }
}

void check_all_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x))
      throw DomainError(std::string(what) + " contains a non-finite value");
  }
}

}  // namespace

Distribution Distribution::uniform01() {
  Distribution d;
  d.kind_ = DistKind::uniform01;
  d.lo_ = 0.0;
  d.hi_ = 1.0;
  return d;
}

Distribution Distribution::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw ConstructionError("exponential rate must be finite and > 0");
  Distribution d;
  d.kind_ = DistKind::exponential;
  d.rate_ = rate;
  d.lo_ = 0.0;
  d.hi_ = kInf;
  return d;
}

Distribution Distribution::triangular() {
  Distribution d;
  d.kind_ = DistKind::triangular;
  d.lo_ = 0.0;
  d.hi_ = 2.0;
  return d;
}

Distribution Distribution::cantor_uniform() {
  Distribution d;
  d.kind_ = DistKind::cantor_uniform;
  d.lo_ = 0.0;
  d.hi_ = 1.0;
  return d;
}

Distribution Distribution::tabulated(std::vector<double> xs,
                                     std::vector<double> us,
                                     std::string source) {
  if (xs.size() != us.size())
    throw ConstructionError("tabulated grid: x and F columns differ in size");
  if (xs.size() < 2)
    throw ConstructionError("tabulated grid needs at least two nodes");
  check_all_finite(xs, "tabulated x column");
  check_all_finite(us, "tabulated F column");
  check_strictly_increasing(xs, "tabulated x column");
  check_strictly_increasing(us, "tabulated F column");
  // Anything other than exact 0 and 1 at the ends would put an atom at a
  // support endpoint, and the construction requires a continuous law.
  if (us.front() != 0.0 || us.back() != 1.0)
    throw ConstructionError(
        "tabulated F column must start at exactly 0 and end at exactly 1");
  Distribution d;
  d.kind_ = DistKind::tabulated;
  d.lo_ = xs.front();
  d.hi_ = xs.back();
  d.xs_ = std::move(xs);
  d.us_ = std::move(us);
  d.source_ = std::move(source);
  return d;
}

Distribution Distribution::empirical_smoothed(std::vector<double> samples,
                                              std::size_t min_count,
                                              std::string source) {
  const std::size_t floor_count = std::max<std::size_t>(min_count, 2);
  if (samples.size() < floor_count)
    throw ConstructionError("empirical smoothing needs at least " +
                            std::to_string(floor_count) + " samples, got " +
                            std::to_string(samples.size()));
  check_all_finite(samples, "empirical samples");
  std::sort(samples.begin(), samples.end());

  // Order statistics at plotting positions i/(N+1). Tied runs collapse to a
  // single node at the mean of their positions so F stays strictly
  // increasing across nodes.
  const double denom = static_cast<double>(samples.size()) + 1.0;
  std::vector<double> xs, us;
  std::size_t i = 0;
  while (i < samples.size()) {
    std::size_t j = i;
    while (j + 1 < samples.size() && samples[j + 1] == samples[i]) ++j;
    const double p_first = static_cast<double>(i + 1) / denom;
    const double p_last = static_cast<double>(j + 1) / denom;
    xs.push_back(samples[i]);
    us.push_back(0.5 * (p_first + p_last));
    i = j + 1;
  }
  if (xs.size() < 2)
    throw ConstructionError(
        "empirical samples are all identical; the smoothed CDF would not be "
        "invertible");

  // Extend past the extreme samples with the adjacent segment's slope, down
  // to F=0 and up to F=1. Those crossings become the support endpoints.
  const double slope_lo = (us[1] - us[0]) / (xs[1] - xs[0]);
  const double slope_hi =
      (us[us.size() - 1] - us[us.size() - 2]) /
      (xs[xs.size() - 1] - xs[xs.size() - 2]);
  const double x_lo = xs.front() - us.front() / slope_lo;
  const double x_hi = xs.back() + (1.0 - us.back()) / slope_hi;
  xs.insert(xs.begin(), x_lo);
  us.insert(us.begin(), 0.0);
  xs.push_back(x_hi);
  us.push_back(1.0);

  Distribution d;
  d.kind_ = DistKind::empirical;
  d.lo_ = xs.front();
  d.hi_ = xs.back();
  d.xs_ = std::move(xs);
  d.us_ = std::move(us);
  d.source_ = std::move(source);
  return d;
}

double Distribution::cdf(double x) const {
  if (!std::isfinite(x)) throw DomainError("cdf: x must be finite");
  switch (kind_) {
    case DistKind::uniform01:
      return std::clamp(x, 0.0, 1.0);
    case DistKind::exponential:
      return x <= 0.0 ? 0.0 : -std::expm1(-rate_ * x);
    case DistKind::triangular:
      if (x <= 0.0) return 0.0;
      if (x <= 1.0) return 0.5 * x * x;
      if (x < 2.0) return 2.0 * x - 0.5 * x * x - 1.0;
      return 1.0;
    case DistKind::cantor_uniform:
      return cantor_cdf(x);
    case DistKind::tabulated:
    case DistKind::empirical:
      return interp_nodes(xs_, us_, x);
  }
  throw IntegrityError("cdf: unknown distribution kind");
}

double Distribution::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0))
    throw DomainError("quantile: u must lie in [0,1]");
  switch (kind_) {
    case DistKind::uniform01:
      return u;
    case DistKind::exponential:
      if (u == 0.0) return 0.0;
      if (u == 1.0) return kInf;
      return -std::log1p(-u) / rate_;
    case DistKind::triangular:
      return u <= 0.5 ? std::sqrt(2.0 * u) : 2.0 - std::sqrt(2.0 * (1.0 - u));
    case DistKind::cantor_uniform:
      return cantor_quantile(u);
    case DistKind::tabulated:
    case DistKind::empirical:
      return interp_nodes(us_, xs_, u);
  }
  throw IntegrityError("quantile: unknown distribution kind");
}

double cdf_extended(const Distribution& dist, double x) {
  if (std::isnan(x)) throw DomainError("cdf_extended: x is NaN");
  if (x == kInf) return 1.0;
  if (x == -kInf) return 0.0;
  return dist.cdf(x);
}

double quantile_by_bisection(const Distribution& dist, double u, double tol) {
  if (!(u > 0.0 && u < 1.0))
    throw DomainError("quantile_by_bisection: u must lie in (0,1)");
  if (!(tol > 0.0))
    throw DomainError("quantile_by_bisection: tol must be > 0");

  // Establish lo with F(lo) < u or lo at the support infimum, and hi with
  // F(hi) >= u. Infinite endpoints are replaced by doubling expansion.
  double lo = dist.support_lo();
  double hi = dist.support_hi();
  if (!std::isfinite(lo)) {
    double c = std::isfinite(hi) ? hi - 1.0 : -1.0;
    double step = 1.0;
    int tries = 0;
    while (dist.cdf(c) >= u) {
      c -= step;
      step *= 2.0;
      if (++tries > 200)
        throw IntegrityError(
            "quantile_by_bisection: no lower bracket; F(x) >= u down to x=" +
            std::to_string(c));
    }
    lo = c;
  }
  if (!std::isfinite(hi)) {
    double c = lo + 1.0;
    double step = 1.0;
    int tries = 0;
    while (dist.cdf(c) < u) {
      c += step;
      step *= 2.0;
      if (++tries > 200)
        throw IntegrityError(
            "quantile_by_bisection: no upper bracket; F(x) < u up to x=" +
            std::to_string(c));
    }
    hi = c;
  }
  if (!(lo <= hi))
    throw IntegrityError("quantile_by_bisection: inverted bracket");

  // Bisect on the bracket; keep the invariant F(hi) >= u so hi converges to
  // the left edge of any plateau. No early exit on |F(mid) - u|: stopping
  // there could return the middle of a flat stretch instead of its infimum.
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (dist.cdf(mid) >= u)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace ifsp
