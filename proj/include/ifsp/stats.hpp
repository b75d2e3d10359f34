#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ifsp/distribution.hpp"
#include "ifsp/ifs.hpp"

namespace ifsp {

struct KsReport {
  double statistic = 0.0;
  std::size_t sample_size = 0;
  double alpha = 0.0;
  double critical_value = 0.0;
  bool pass = false;
};

// Asymptotic critical value c(alpha)/sqrt(n) with c = sqrt(-ln(alpha/2)/2);
// c(0.05) ~ 1.358, c(0.01) ~ 1.628. Fine for the n >= 1000 used here.
double ks_critical(double alpha, std::size_t n);

// Two-sample analogue c(alpha) * sqrt((na + nb) / (na * nb)).
double two_sample_ks_critical(double alpha, std::size_t na, std::size_t nb);

KsReport make_ks_report(double statistic, std::size_t n, double alpha);
// sample_size reports na (all callers here compare equal-sized batches); the
// critical value accounts for both sizes either way.
KsReport make_two_sample_ks_report(double statistic, std::size_t na,
                                   std::size_t nb, double alpha);

// (# samples <= x) / N over an already-sorted sample. Sortedness is checked
// on every call (IntegrityError), which keeps this O(N); use the scan-based
// functions below for bulk work.
double ecdf_eval(const std::vector<double>& sorted_samples, double x);

// Exact sup |ECDF - F| via the order-statistics formula
// max_i max(i/N - F(x_(i)), F(x_(i)) - (i-1)/N). Sorts a private copy.
double ks_distance(const std::vector<double>& samples,
                   const Distribution& dist);

// Exact sup |ECDF_a - ECDF_b| by merge scan over both sorted copies.
double two_sample_ks(const std::vector<double>& a,
                     const std::vector<double>& b);

struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::uint64_t> counts;
  // count / (total samples given), so the frequencies sum to the in-range
  // fraction, not necessarily to 1.
  std::vector<double> frequencies;
  std::uint64_t total = 0;
  std::uint64_t in_range = 0;

  double bin_lo(std::size_t k) const;
  double bin_hi(std::size_t k) const;
};

// Equal-width bins on [lo, hi), left-closed right-open, except the last bin
// which also includes hi. Out-of-range and non-finite samples are skipped
// (they still count in `total`).
Histogram histogram(const std::vector<double>& samples, double lo, double hi,
                    std::size_t bins);

// Deterministic push-forward invariance test. Takes the quantile-stratified
// grid x_j = F^-1((j - 0.5)/G), applies every map to every x_j, pools the
// n*G images with weights p_i/G, and returns the weighted-ECDF sup-distance
// to F. If the target really is stationary for the system, the pooled cloud
// is a near-stratified sample and the distance stays at stratification
// resolution: the report's critical value is the theorem-level bound
// 1/(n*G) + 1e-9 and alpha is 0 (nothing stochastic here).
KsReport one_step_stationarity(const Ifsp& ifsp, const Distribution& dist,
                               std::size_t grid_size);

}  // namespace ifsp
