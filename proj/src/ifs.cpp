#include "ifsp/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ifsp/errors.hpp"

namespace ifsp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPreimageTol = 1e-12;
constexpr double kShortcutAgreementTol = 1e-6;

}  // namespace

double digit_map(int n, int i, double u) {
  if (n < 2) throw DomainError("digit_map: n must be >= 2");
  if (i < 1 || i > n)
    throw DomainError("digit_map: i must lie in 1.." + std::to_string(n));
  if (!(u >= 0.0 && u <= 1.0))
    throw DomainError("digit_map: u must lie in [0,1]");
  return (u + static_cast<double>(i - 1)) / static_cast<double>(n);
}

MonotoneMap MonotoneMap::theorem(std::shared_ptr<const Distribution> dist,
                                 int n, int i) {
  if (!dist) throw ConstructionError("theorem map: null distribution");
  if (n < 2) throw ConstructionError("theorem map: n must be >= 2");
  if (i < 1 || i > n)
    throw ConstructionError("theorem map: i must lie in 1.." +
                            std::to_string(n));
  MonotoneMap m;
  m.variant_ = MapVariant::theorem;
  m.lo_ = dist->support_lo();
  m.hi_ = dist->support_hi();
  m.dist_ = std::move(dist);
  m.n_ = n;
  m.i_ = i;
  return m;
}

MonotoneMap MonotoneMap::affine(double a, double b, double domain_lo,
                                double domain_hi) {
  if (a == 0.0 || !std::isfinite(a) || !std::isfinite(b))
    throw ConstructionError("affine map: a must be finite nonzero, b finite");
  if (!(domain_lo < domain_hi) || !std::isfinite(domain_lo) ||
      !std::isfinite(domain_hi))
    throw ConstructionError("affine map: domain must be a finite interval");
  MonotoneMap m;
  m.variant_ = MapVariant::affine;
  m.a_ = a;
  m.b_ = b;
  m.lo_ = domain_lo;
  m.hi_ = domain_hi;
  return m;
}

MonotoneMap MonotoneMap::triangular_closed_form(int branch) {
  if (branch != 1 && branch != 2)
    throw ConstructionError("triangular closed form: branch must be 1 or 2");
  MonotoneMap m;
  m.variant_ = MapVariant::triangular_closed_form;
  m.branch_ = branch;
  m.lo_ = 0.0;
  m.hi_ = 2.0;
  return m;
}

MonotoneMap MonotoneMap::composed(MonotoneMap outer, MonotoneMap inner) {
  MonotoneMap m;
  m.variant_ = MapVariant::composed;
  m.lo_ = inner.lo_;
  m.hi_ = inner.hi_;
  m.outer_ = std::make_shared<const MonotoneMap>(std::move(outer));
  m.inner_ = std::make_shared<const MonotoneMap>(std::move(inner));
  return m;
}

double MonotoneMap::apply(double x) const { return apply(x, nullptr); }

double MonotoneMap::apply(double x, bool* clamped) const {
  if (std::isnan(x)) throw DomainError("apply: x is NaN");
  const double xc = std::clamp(x, lo_, hi_);
  if (clamped != nullptr && xc != x) *clamped = true;
  switch (variant_) {
    case MapVariant::theorem:
      return dist_->quantile(digit_map(n_, i_, cdf_extended(*dist_, xc)));
    case MapVariant::affine:
      return a_ * xc + b_;
    case MapVariant::triangular_closed_form:
      if (branch_ == 1) {
        if (xc <= 1.0) return xc / std::sqrt(2.0);
        return std::sqrt(2.0 * xc - 0.5 * xc * xc - 1.0);
      }
      if (xc <= 1.0) return 2.0 - std::sqrt(1.0 - 0.5 * xc * xc);
      return 2.0 - std::sqrt(2.0 - 2.0 * xc + 0.5 * xc * xc);
    case MapVariant::composed:
      return outer_->apply(inner_->apply(xc, clamped), clamped);
  }
  throw IntegrityError("apply: unknown map variant");
}

double apply_map(const MonotoneMap& map, double x) {
  if (!std::isfinite(x)) throw DomainError("apply_map: x must be finite");
  return map.apply(x);
}

double MonotoneMap::preimage_sup(double y, double tol) const {
  if (std::isnan(y)) throw DomainError("preimage_sup: y is NaN");
  if (!(tol > 0.0)) throw DomainError("preimage_sup: tol must be > 0");
  if (y == kInf) return kInf;
  if (y == -kInf) return -kInf;

  // With input clamping, f is constant at f(lo_) below the domain and at
  // f(hi_) above it, so the preimage of (-inf, y] is empty or all of R when
  // the endpoint values say so.
  double lo = lo_;
  if (!std::isfinite(lo)) {
    // No built-in support reaches -inf, but stay generic: march down looking
    // for a point that maps at or below y.
    double c = std::isfinite(hi_) ? hi_ - 1.0 : -1.0;
    double step = 1.0;
    bool found = false;
    for (int k = 0; k < 200; ++k) {
      if (apply(c) <= y) {
        found = true;
        break;
      }
      c -= step;
      step *= 2.0;
    }
    if (!found) return -kInf;
    lo = c;
  } else if (apply(lo) > y) {
    if (apply(hi_) <= y)
      throw IntegrityError(
          "preimage_sup: map decreases across its domain (non-monotone)");
    return -kInf;
  }

  double hi = hi_;
  if (!std::isfinite(hi)) {
    double c = lo + 1.0;
    double step = 1.0;
    bool bracketed = false;
    for (int k = 0; k < 200; ++k) {
      if (apply(c) > y) {
        bracketed = true;
        break;
      }
      lo = c;
      c += step;
      step *= 2.0;
    }
    if (!bracketed) return kInf;
    hi = c;
  } else if (apply(hi) <= y) {
    return kInf;
  }

  // Invariant: f(lo) <= y < f(hi). The returned lo approximates the supremum
  // from below within tol.
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (apply(mid) <= y)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

Ifsp make_ifsp(std::string label, std::vector<MonotoneMap> maps,
               std::vector<double> probs, double support_lo,
               double support_hi) {
  if (maps.empty()) throw ConstructionError("ifsp: needs at least one map");
  if (maps.size() != probs.size())
    throw ConstructionError("ifsp: maps and probs differ in size");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0))
      throw ConstructionError("ifsp: probabilities must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw ConstructionError("ifsp: probabilities sum to " +
                            std::to_string(sum) + ", expected 1");
  for (const MonotoneMap& m : maps) {
    if (m.domain_lo() != support_lo || m.domain_hi() != support_hi)
      throw ConstructionError("ifsp: map domain does not match the support");
  }
  Ifsp s;
  s.label = std::move(label);
  s.maps = std::move(maps);
  s.probs = std::move(probs);
  s.support_lo = support_lo;
  s.support_hi = support_hi;
  return s;
}

Ifsp build_theorem_ifsp(std::shared_ptr<const Distribution> dist, int n) {
  if (!dist) throw ConstructionError("theorem ifsp: null distribution");
  if (n < 2) throw ConstructionError("theorem ifsp: n must be >= 2");
  if (!dist->continuous())
    throw ConstructionError(
        "theorem ifsp: the target distribution must be continuous; the "
        "construction has no stationary-law guarantee with atoms");
  std::vector<MonotoneMap> maps;
  std::vector<double> probs;
  maps.reserve(static_cast<std::size_t>(n));
  probs.reserve(static_cast<std::size_t>(n));
  const double p = 1.0 / static_cast<double>(n);
  for (int i = 1; i <= n; ++i) {
    maps.push_back(MonotoneMap::theorem(dist, n, i));
    probs.push_back(p);
  }
  return make_ifsp("theorem-n" + std::to_string(n), std::move(maps),
                   std::move(probs), dist->support_lo(), dist->support_hi());
}

Ifsp symmetry_affine_ifsp(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b))
    throw ConstructionError("symmetry ifsp: a and b must be finite");
  if (!(b >= 0.0 && b <= 0.5))
    throw ConstructionError("symmetry ifsp: constraint violated: 0 <= b <= 1/2");
  if (!(a + b >= 0.0 && a + b <= 0.5))
    throw ConstructionError(
        "symmetry ifsp: constraint violated: 0 <= a+b <= 1/2");
  if (a == 0.0)
    throw ConstructionError("symmetry ifsp: constraint violated: a != 0");
  std::vector<MonotoneMap> maps;
  maps.push_back(MonotoneMap::affine(a, b, 0.0, 1.0));
  maps.push_back(MonotoneMap::affine(a, 1.0 - a - b, 0.0, 1.0));
  return make_ifsp("symmetry-affine", std::move(maps), {0.5, 0.5}, 0.0, 1.0);
}

Ifsp triangular_ifsp() {
  std::vector<MonotoneMap> maps;
  maps.push_back(MonotoneMap::triangular_closed_form(1));
  maps.push_back(MonotoneMap::triangular_closed_form(2));
  return make_ifsp("triangular-closed-form", std::move(maps), {0.5, 0.5}, 0.0,
                   2.0);
}

Ifsp compose_ifsp(const Ifsp& outer, const Ifsp& inner) {
  if (outer.support_lo != inner.support_lo ||
      outer.support_hi != inner.support_hi)
    throw ConstructionError("compose: support mismatch between systems");
  std::vector<MonotoneMap> maps;
  std::vector<double> probs;
  maps.reserve(outer.maps.size() * inner.maps.size());
  probs.reserve(maps.capacity());
  for (std::size_t j = 0; j < outer.maps.size(); ++j) {
    for (std::size_t i = 0; i < inner.maps.size(); ++i) {
      maps.push_back(MonotoneMap::composed(outer.maps[j], inner.maps[i]));
      probs.push_back(outer.probs[j] * inner.probs[i]);
    }
  }
  return make_ifsp(outer.label + " o " + inner.label, std::move(maps),
                   std::move(probs), inner.support_lo, inner.support_hi);
}

InvarianceReport invariance_residual(const Ifsp& ifsp,
                                     const Distribution& dist,
                                     const std::vector<double>& grid) {
  if (grid.empty())
    throw DomainError("invariance_residual: grid must be nonempty");
  InvarianceReport rep;
  rep.grid = grid;
  rep.residuals.reserve(grid.size());
  for (double y : grid) {
    if (!std::isfinite(y))
      throw DomainError("invariance_residual: grid point is not finite");
    double pushforward = 0.0;
    for (std::size_t i = 0; i < ifsp.maps.size(); ++i) {
      const MonotoneMap& m = ifsp.maps[i];
      const double s = m.preimage_sup(y, kPreimageTol);
      const double f_bisect = cdf_extended(dist, s);
      double f_pre = f_bisect;
      if (m.variant() == MapVariant::theorem && m.dist().get() == &dist) {
        const double c =
            std::clamp(static_cast<double>(m.cells()) * dist.cdf(y) -
                           static_cast<double>(m.index() - 1),
                       0.0, 1.0);
        if (std::abs(c - f_bisect) > kShortcutAgreementTol)
          throw IntegrityError(
              "invariance_residual: analytic preimage and bisection disagree "
              "(map " +
              std::to_string(i + 1) + ", y=" + std::to_string(y) + ")");
        f_pre = c;
      }
      pushforward += ifsp.probs[i] * f_pre;
    }
    rep.residuals.push_back(std::abs(dist.cdf(y) - pushforward));
  }
  rep.max_residual =
      *std::max_element(rep.residuals.begin(), rep.residuals.end());
  return rep;
}

}  // namespace ifsp
