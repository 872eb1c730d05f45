#pragma once

#include <map>
#include <vector>

#include "mahler/operator.hpp"

namespace mahler {

struct NewtonVertex {
  long index;      // α: the power of φ
  Rational x;      // p^α
  Rational y;      // val a_α
  friend bool operator==(const NewtonVertex&, const NewtonVertex&) = default;
};

struct Slope {
  Rational mu;
  long r;
  friend bool operator==(const Slope&, const Slope&) = default;
};

struct Exponent {
  Rational c;
  int m;
  friend bool operator==(const Exponent&, const Exponent&) = default;
};

struct NewtonData {
  long radix = 2;
  std::vector<NewtonVertex> vertices;
  std::vector<Slope> slopes;
  std::vector<Poly> charpolys;                 // one per slope, X^v stripped
  std::vector<std::vector<Exponent>> exponents; // rational roots per slope
  std::vector<Poly> residuals;                  // non-split part per slope

  bool all_rational() const {
    for (const auto& r : residuals)
      if (r.degree() > 0) return false;
    return true;
  }
  long order() const {
    long n = 0;
    for (const auto& s : slopes) n += s.r;
    return n;
  }
};

namespace detail {

struct HullInput {
  long index;
  Rational x;
  Bound y;       // exact valuation, or a lower bound when uncertain
  bool certain;
};

inline std::vector<HullInput> hull_inputs(const Operator& L) {
  std::vector<HullInput> pts;
  Rational x(1);
  for (std::size_t i = 0; i < L.coeffs().size(); ++i, x *= Rational(L.radix())) {
    const Series& a = L[i];
    if (a.is_exact_zero()) continue;
    if (a.has_certified_leading())
      pts.push_back({static_cast<long>(i), x, Bound(a.terms().front().first), true});
    else
      pts.push_back({static_cast<long>(i), x, a.support_floor(), false});
  }
  return pts;
}

}  // namespace detail

// Lower convex hull of {(p^i, val a_i)}. Coefficients without a certified
// leading term are accepted only if their support lower bound lies strictly
// above the hull (they then influence neither slopes nor χ).
inline NewtonData newton_polygon(const Operator& L) {
  if (L.coeffs().empty()) throw Error(ErrorKind::ZeroSeries, "empty operator");
  if (!L.coeffs().front().has_certified_leading() || !L.coeffs().back().has_certified_leading())
    throw Error(ErrorKind::UnknownLeadingTerm, "a_0 and a_n need certified leading terms");
  auto pts = detail::hull_inputs(L);
  std::vector<detail::HullInput> hull;
  for (const auto& pt : pts) {
    if (!pt.certain) continue;
    // Pop while the last turn is not strictly convex (drops collinear points too).
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      Rational cross = (b.x - a.x) * (pt.y.value() - a.y.value()) - (b.y.value() - a.y.value()) * (pt.x - a.x);
      if (cross.sign() <= 0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(pt);
  }
  NewtonData nd;
  nd.radix = L.radix();
  for (const auto& h : hull) nd.vertices.push_back({h.index, h.x, h.y.value()});
  for (std::size_t j = 1; j < hull.size(); ++j) {
    Rational mu = (hull[j].y.value() - hull[j - 1].y.value()) / (hull[j].x - hull[j - 1].x);
    nd.slopes.push_back({mu, hull[j].index - hull[j - 1].index});
  }
  for (const auto& pt : pts) {
    if (pt.certain) continue;
    if (pt.y.is_neg_inf())
      throw Error(ErrorKind::UnknownLeadingTerm, "coefficient a_" + std::to_string(pt.index) + " has no certified prefix");
    // Hull ordinate at pt.x.
    std::size_t j = 1;
    while (j + 1 < hull.size() && hull[j].x < pt.x) ++j;
    Rational t = (pt.x - hull[j - 1].x) / (hull[j].x - hull[j - 1].x);
    Rational yh = hull[j - 1].y.value() + t * (hull[j].y.value() - hull[j - 1].y.value());
    if (!(Bound(yh) < pt.y))
      throw Error(ErrorKind::UnknownLeadingTerm,
                  "leading term of a_" + std::to_string(pt.index) + " is not certified and may touch the polygon");
  }
  return nd;
}

// χ(μ, L; X) with the X^v factor stripped and raw coefficients kept.
inline Poly char_poly(const Operator& L, const Rational& mu) {
  Operator M = gauge_theta(L, -Rational(L.radix() - 1) * mu);
  std::optional<Rational> v;
  for (const auto& b : M.coeffs()) {
    if (b.is_exact_zero() || !b.has_certified_leading()) continue;
    Rational e = b.terms().front().first;
    if (!v || e < *v) v = e;
  }
  if (!v) throw Error(ErrorKind::UnknownLeadingTerm, "no certified coefficient");
  std::vector<Rational> c(M.coeffs().size());
  for (std::size_t i = 0; i < M.coeffs().size(); ++i) {
    const Series& b = M[i];
    if (b.is_exact_zero()) continue;
    if (!(Bound(*v) < b.mask().prefix_end()))
      throw Error(ErrorKind::UnknownLeadingTerm, "coefficient of z^val not certified in a_" + std::to_string(i));
    c[i] = b.coeff(*v);
  }
  std::size_t low = 0;
  while (low < c.size() && c[low].is_zero()) ++low;
  c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(low));
  return Poly(std::move(c));
}

inline void attach_exponents(NewtonData& nd, const Operator& L) {
  nd.charpolys.clear();
  nd.exponents.clear();
  nd.residuals.clear();
  for (const auto& s : nd.slopes) {
    Poly chi = char_poly(L, s.mu);
    RootSet rs = rational_roots(chi);
    std::vector<Exponent> ex;
    for (const auto& [c, m] : rs.roots) ex.push_back({c, m});
    nd.charpolys.push_back(std::move(chi));
    nd.exponents.push_back(std::move(ex));
    nd.residuals.push_back(rs.residual);
  }
}

// Vertices, slopes, χ per slope and rational exponents.
inline NewtonData analyze(const Operator& L) {
  NewtonData nd = newton_polygon(L);
  attach_exponents(nd, L);
  return nd;
}

struct PlanEntry {
  std::size_t j;  // 0-based slope index
  Rational c;
  int s;
  int m;
  Rational nu;
  Rational val_a0;
};

struct FrobeniusPlan {
  std::vector<Rational> nu;  // per slope
  std::vector<PlanEntry> entries;

  const PlanEntry* find(const Rational& c, std::size_t j) const {
    for (const auto& e : entries)
      if (e.j == j && e.c == c) return &e;
    return nullptr;
  }
};

// ν_j = (p-1)(Σ_{i=2}^{j} p^{r_1+…+r_{i-1}}(μ_i - μ_{i-1}) + μ_1).
inline std::vector<Rational> twist_exponents(long p, const std::vector<Slope>& slopes) {
  std::vector<Rational> nu;
  Rational acc;
  long R = 0;
  for (std::size_t j = 0; j < slopes.size(); ++j) {
    if (j == 0)
      acc = slopes[0].mu;
    else
      acc += pow(Rational(p), R) * (slopes[j].mu - slopes[j - 1].mu);
    R += slopes[j].r;
    nu.push_back(Rational(p - 1) * acc);
  }
  return nu;
}

inline FrobeniusPlan frobenius_plan(const NewtonData& nd, const Operator& L) {
  FrobeniusPlan plan;
  plan.nu = twist_exponents(nd.radix, nd.slopes);
  Rational v0 = val(L[0]);
  std::map<Rational, int> seen;  // running Σ_{i<j} m_{c,i}
  for (std::size_t j = 0; j < nd.slopes.size(); ++j) {
    for (const auto& e : nd.exponents[j]) plan.entries.push_back({j, e.c, seen[e.c], e.m, plan.nu[j], v0});
    for (const auto& e : nd.exponents[j]) seen[e.c] += e.m;
  }
  return plan;
}

}  // namespace mahler
