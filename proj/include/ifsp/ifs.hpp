#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ifsp/distribution.hpp"

namespace ifsp {

// Cell map u_i(u) = u/n + (i-1)/n, the quantile-space skeleton every
// constructed system shares. Maps [0,1] onto [(i-1)/n, i/n].
double digit_map(int n, int i, double u);

enum class MapVariant { theorem, affine, triangular_closed_form, composed };

// A nondecreasing self-map of a real interval. Four variants:
//
//   theorem                 F^-1(u_i(F(x))) for a stored distribution; the
//                           canonical construction. Where F(x) = 0 this
//                           evaluates to F^-1((i-1)/n), the continuous
//                           extension from the right.
//   affine                  a*x + b on an explicit domain.
//   triangular_closed_form  the two branch formulas matching the theorem
//                           maps of the triangular target with n = 2.
//   composed                outer(inner(x)).
//
// Inputs outside the domain are clamped to the nearer endpoint; apply(x, &f)
// reports that through the flag instead of erroring, so endpoint drift in
// long simulations is survivable. The member apply accepts +-inf (continuous
// extension; useful mid-composition on unbounded supports), while the
// apply_map free function below enforces finite input.
class MonotoneMap {
public:
  static MonotoneMap theorem(std::shared_ptr<const Distribution> dist, int n,
                             int i);
  static MonotoneMap affine(double a, double b, double domain_lo = 0.0,
                            double domain_hi = 1.0);
  static MonotoneMap triangular_closed_form(int branch);
  static MonotoneMap composed(MonotoneMap outer, MonotoneMap inner);

  MapVariant variant() const { return variant_; }
  double domain_lo() const { return lo_; }
  double domain_hi() const { return hi_; }

  double apply(double x) const;
  double apply(double x, bool* clamped) const;

  // sup{x : f(x) <= y} as an extended real: -inf when even the left domain
  // endpoint maps above y, +inf when nothing in the domain maps above y.
  // Computed by bisection to bracket width tol; the returned point sits at or
  // below the true supremum. Throws IntegrityError if the samples taken
  // contradict monotonicity.
  double preimage_sup(double y, double tol = 1e-12) const;

  // theorem accessors
  const std::shared_ptr<const Distribution>& dist() const { return dist_; }
  int cells() const { return n_; }
  int index() const { return i_; }
  // affine accessors
  double a() const { return a_; }
  double b() const { return b_; }
  // closed-form accessor
  int branch() const { return branch_; }
  // composition accessors
  const MonotoneMap& outer() const { return *outer_; }
  const MonotoneMap& inner() const { return *inner_; }

private:
  MonotoneMap() = default;

  MapVariant variant_ = MapVariant::affine;
  std::shared_ptr<const Distribution> dist_;
  int n_ = 0;
  int i_ = 0;
  double a_ = 1.0;
  double b_ = 0.0;
  int branch_ = 0;
  std::shared_ptr<const MonotoneMap> outer_, inner_;
  double lo_ = 0.0;
  double hi_ = 1.0;
};

// Spec-level entry point: finite x only.
double apply_map(const MonotoneMap& map, double x);

// A finite list of maps with selection probabilities. Immutable by
// convention once built; construct through make_ifsp or the builders below,
// which validate the probability vector and the shared domain.
struct Ifsp {
  std::string label;
  std::vector<MonotoneMap> maps;
  std::vector<double> probs;
  double support_lo = 0.0;
  double support_hi = 1.0;

  int n() const { return static_cast<int>(maps.size()); }
};

Ifsp make_ifsp(std::string label, std::vector<MonotoneMap> maps,
               std::vector<double> probs, double support_lo,
               double support_hi);

// The central construction: n maps F^-1 o u_i o F with equal probabilities
// 1/n. The target distribution is then the unique stationary law of the
// induced chain.
Ifsp build_theorem_ifsp(std::shared_ptr<const Distribution> dist, int n);

// Two equally likely affine maps {ax+b, ax+1-a-b} on [0,1], the mirror-
// symmetric family. Requires 0 <= b <= 1/2, 0 <= a+b <= 1/2, a != 0; a
// violated inequality is named in the error.
Ifsp symmetry_affine_ifsp(double a, double b);

// The closed-form two-map system for the triangular target on [0,2].
Ifsp triangular_ifsp();

// All n_outer * n_inner compositions outer_j o inner_i with product
// probabilities, enumerated inner-fastest: (j=1,i=1), (j=1,i=2), ...
// Requires both systems to share one support.
Ifsp compose_ifsp(const Ifsp& outer, const Ifsp& inner);

struct InvarianceReport {
  std::vector<double> grid;
  std::vector<double> residuals;
  double max_residual = 0.0;
};

// Checks the invariance equation mu(-inf, y] = sum_i p_i mu(f_i^-1(-inf, y])
// through the CDF: residual(y) = |F(y) - sum_i p_i F(sup{x : f_i(x) <= y})|.
// Preimage suprema come from preimage_sup; for a theorem map evaluated
// against its own distribution the analytic form
// F(preimage) = clamp(n F(y) - (i-1), 0, 1) is used and cross-checked
// against the bisection value (IntegrityError if they disagree beyond 1e-6,
// which indicates a broken map).
InvarianceReport invariance_residual(const Ifsp& ifsp,
                                     const Distribution& dist,
                                     const std::vector<double>& grid);

}  // namespace ifsp
