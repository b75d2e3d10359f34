#include "ifsp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "ifsp/errors.hpp"

namespace ifsp {

namespace {

void require_finite(const std::vector<double>& v, const char* who) {
  for (double x : v) {
    if (!std::isfinite(x))
      throw DomainError(std::string(who) + ": non-finite sample");
  }
}

}  // namespace

double ks_critical(double alpha, std::size_t n) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("ks_critical: alpha must lie in (0,1)");
  if (n == 0) throw DomainError("ks_critical: n must be >= 1");
  const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
  return c / std::sqrt(static_cast<double>(n));
}

double two_sample_ks_critical(double alpha, std::size_t na, std::size_t nb) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("two_sample_ks_critical: alpha must lie in (0,1)");
  if (na == 0 || nb == 0)
    throw DomainError("two_sample_ks_critical: empty sample");
  const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
  const double a = static_cast<double>(na);
  const double b = static_cast<double>(nb);
  return c * std::sqrt((a + b) / (a * b));
}

KsReport make_ks_report(double statistic, std::size_t n, double alpha) {
  KsReport r;
  r.statistic = statistic;
  r.sample_size = n;
  r.alpha = alpha;
  r.critical_value = ks_critical(alpha, n);
  r.pass = statistic <= r.critical_value;
  return r;
}

KsReport make_two_sample_ks_report(double statistic, std::size_t na,
                                   std::size_t nb, double alpha) {
  KsReport r;
  r.statistic = statistic;
  r.sample_size = na;
  r.alpha = alpha;
  r.critical_value = two_sample_ks_critical(alpha, na, nb);
  r.pass = statistic <= r.critical_value;
  return r;
}

double ecdf_eval(const std::vector<double>& sorted_samples, double x) {
  if (sorted_samples.empty())
    throw DomainError("ecdf_eval: samples must be nonempty");
  if (!std::is_sorted(sorted_samples.begin(), sorted_samples.end()))
    throw IntegrityError("ecdf_eval: samples are not sorted");
  const auto it =
      std::upper_bound(sorted_samples.begin(), sorted_samples.end(), x);
  return static_cast<double>(it - sorted_samples.begin()) /
         static_cast<double>(sorted_samples.size());
}

double ks_distance(const std::vector<double>& samples,
                   const Distribution& dist) {
  if (samples.empty()) throw DomainError("ks_distance: empty sample");
  require_finite(samples, "ks_distance");
  std::vector<double> s = samples;
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = dist.cdf(s[i]);
    const double hi = static_cast<double>(i + 1) / n - f;
    const double lo = f - static_cast<double>(i) / n;
    d = std::max(d, std::max(hi, lo));
  }
  return d;
}

double two_sample_ks(const std::vector<double>& a,
                     const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw DomainError("two_sample_ks: empty sample");
  require_finite(a, "two_sample_ks");
  require_finite(b, "two_sample_ks");
  std::vector<double> sa = a, sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == v) ++i;
    while (j < sb.size() && sb[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

double Histogram::bin_lo(std::size_t k) const {
  return lo + (hi - lo) * (static_cast<double>(k) /
                           static_cast<double>(counts.size()));
}

double Histogram::bin_hi(std::size_t k) const {
  return lo + (hi - lo) * (static_cast<double>(k + 1) /
                           static_cast<double>(counts.size()));
}

Histogram histogram(const std::vector<double>& samples, double lo, double hi,
                    std::size_t bins) {
  if (!(lo < hi)) throw DomainError("histogram: needs lo < hi");
  if (bins < 1) throw DomainError("histogram: needs at least one bin");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(bins, 0);
  h.total = samples.size();
  const double width = hi - lo;
  for (double x : samples) {
    if (!(x >= lo && x <= hi)) continue;  // also drops NaN
    std::size_t k = static_cast<std::size_t>(
        (x - lo) / width * static_cast<double>(bins));
    if (k >= bins) k = bins - 1;  // x == hi joins the closed last bin
    ++h.counts[k];
    ++h.in_range;
  }
  h.frequencies.resize(bins);
  const double denom = h.total > 0 ? static_cast<double>(h.total) : 1.0;
  for (std::size_t k = 0; k < bins; ++k)
    h.frequencies[k] = static_cast<double>(h.counts[k]) / denom;
  return h;
}

KsReport one_step_stationarity(const Ifsp& ifsp, const Distribution& dist,
                               std::size_t grid_size) {
  if (grid_size < 2)
    throw DomainError("one_step_stationarity: grid_size must be >= 2");
  const double g = static_cast<double>(grid_size);
  std::vector<std::pair<double, double>> pool;  // (value, weight)
  pool.reserve(grid_size * ifsp.maps.size());
  for (std::size_t j = 1; j <= grid_size; ++j) {
    const double u = (static_cast<double>(j) - 0.5) / g;
    const double x = dist.quantile(u);
    for (std::size_t i = 0; i < ifsp.maps.size(); ++i) {
      const double v = ifsp.maps[i].apply(x);
      if (!std::isfinite(v))
        throw IntegrityError(
            "one_step_stationarity: map " + std::to_string(i + 1) +
            " produced a non-finite value at grid point " + std::to_string(j));
      pool.emplace_back(v, ifsp.probs[i] / g);
    }
  }
  std::sort(pool.begin(), pool.end());

  // Weighted-ECDF sup-distance to F, with tied values grouped so the step
  // heights add up before comparing.
  double d = 0.0;
  double acc = 0.0;
  std::size_t k = 0;
  while (k < pool.size()) {
    const double v = pool[k].first;
    const double before = acc;
    while (k < pool.size() && pool[k].first == v) {
      acc += pool[k].second;
      ++k;
    }
    const double f = dist.cdf(v);
    d = std::max(d, std::max(acc - f, f - before));
  }

  KsReport r;
  r.statistic = d;
  r.sample_size = pool.size();
  r.alpha = 0.0;  // deterministic test, no significance level involved
  r.critical_value =
      1.0 / (static_cast<double>(ifsp.n()) * g) + 1e-9;
  r.pass = r.statistic <= r.critical_value;
  return r;
}

}  // namespace ifsp
