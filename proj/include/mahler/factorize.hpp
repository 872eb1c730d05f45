#pragma once

#include <map>
#include <set>
#include <vector>

#include "mahler/newton.hpp"

namespace mahler {

struct FirstOrderFactor {
  Rational nu;
  Rational c;
  Series h;  // tangent to the identity
};

// L = a · L_k ⋯ L_1. layers[i] holds the factors of L_{i+1} in the order
// they were split off, so layers[i][0] is the rightmost factor of L_{i+1}.
struct Factorization {
  long radix = 2;
  Series a;
  std::vector<std::vector<FirstOrderFactor>> layers;
  std::vector<Operator> remainders;  // one per division; each ≡ 0 on its mask
  Operator remainder_operator{2, {}};  // order > 0 only for a partial factorization
  bool complete = true;
};

// The operator (z^ν φ - c) h^{-1} = -c h^{-1} + z^ν φ(h^{-1}) φ.
inline Operator factor_operator(long p, const FirstOrderFactor& f, const Rational& ceiling) {
  Series hinv = invert(f.h, ceiling);
  return Operator(p, {scale(hinv, -f.c), shift(mal(hinv, p, 1), f.nu)});
}

// h tangent to the identity with M^{[e_c]}(h) = 0, for M whose smallest
// slope is 0 and c a root of χ(0, M). After normalizing by z^{-val a_0},
// the coefficient at γ reads
//   Σ_{i,δ} c^i b_{i,δ} h_{(γ-δ)/p^i} = 0,
// and the (0,0) term isolates h_γ; every other index is strictly smaller.
inline Series slope_zero_unit_solution(const Operator& M, const Rational& c, const Rational& ceiling) {
  NewtonData nd = newton_polygon(M);
  if (nd.slopes.empty() || !nd.slopes.front().mu.is_zero())
    throw Error(ErrorKind::PlanMismatch, "smallest slope is not 0");
  if (!char_poly(M, Rational(0)).eval(c).is_zero())
    throw Error(ErrorKind::PlanMismatch, c.to_string() + " is not a root of the slope-0 characteristic polynomial");
  const long p = M.radix();
  const Rational v = val(M[0]);

  Bound limit(ceiling);
  std::vector<Series> b;
  for (const auto& a : M.coeffs()) {
    b.push_back(shift(a, -v));
    limit = min(limit, b.back().mask().prefix_end());
  }
  const Rational b00 = b[0].coeff(Rational(0));

  struct Pair {
    Rational scale;  // p^i
    Rational delta;
    Rational coeff;  // c^i b_{i,δ}
  };
  std::vector<Pair> pairs;
  Rational ci(1), pi(1);
  for (std::size_t i = 0; i < b.size(); ++i, ci *= c, pi *= Rational(p)) {
    for (const auto& [d, coef] : b[i].terms()) {
      if (!(Bound(d) < limit)) break;
      if (i == 0 && d.is_zero()) continue;
      pairs.push_back({pi, d, ci * coef});
    }
  }

  std::set<Rational> cand;
  if (Bound(0) < limit) {
    cand.insert(Rational(0));
    std::vector<Rational> work{Rational(0)};
    while (!work.empty()) {
      Rational s = std::move(work.back());
      work.pop_back();
      for (const auto& pr : pairs) {
        Rational g = pr.delta + pr.scale * s;
        if (g.is_zero() || !(Bound(g) < limit)) continue;
        if (cand.insert(g).second) work.push_back(std::move(g));
      }
    }
  }

  std::map<Rational, Rational> h;
  const Rational inv00 = Rational(1) / b00;
  for (const auto& g : cand) {
    if (g.is_zero()) {
      h.emplace(g, Rational(1));
      continue;
    }
    Rational acc;
    for (const auto& pr : pairs) {
      if (pr.delta > g) continue;
      auto it = h.find((g - pr.delta) / pr.scale);
      if (it != h.end()) acc += pr.coeff * it->second;
    }
    h.emplace(g, -inv00 * acc);
  }
  return Series(std::vector<Series::Term>(h.begin(), h.end()), GuaranteeMask::below(limit));
}

namespace detail {

inline bool remainder_vanishes(const Operator& R) {
  for (const auto& a : R.coeffs())
    if (!a.empty()) return false;
  return true;
}

}  // namespace detail

// Peels first-order right factors off L slope by slope (smallest first,
// exponents ascending with multiplicity). Stops early, with complete = false,
// when the current smallest slope has exponents outside Q.
inline Factorization factorize_partial(const Operator& L, const Rational& ceiling) {
  const long p = L.radix();
  Factorization F;
  F.radix = p;
  Operator N = L;
  while (N.order() > 0) {
    NewtonData nd = newton_polygon(N);
    const Rational mu = nd.slopes.front().mu;
    RootSet rs = rational_roots(char_poly(N, mu));
    if (rs.roots.empty()) {
      F.complete = false;
      break;
    }
    const Rational c = rs.roots.front().first;
    const Rational nu = Rational(p - 1) * mu;
    Operator M = gauge_theta(N, -nu);
    Series h = slope_zero_unit_solution(M, c, ceiling);
    FirstOrderFactor fac{nu, c, h};
    // The quotient's coefficients sit near val(a_d) - p^{d-1}ν, which can be
    // far above `ceiling` on steep polygons; keep `ceiling` worth of terms
    // beyond the highest of them.
    Rational top(0), pk(1);
    for (std::size_t d = 1; d < N.coeffs().size(); ++d, pk *= Rational(p))
      if (N[d].has_certified_leading()) top = std::max(top, val(N[d]) - pk * nu);
    auto [Q, R] = right_divide(N, factor_operator(p, fac, ceiling + top), ceiling + top);
    F.remainders.push_back(R);
    if (F.layers.empty() || F.layers.back().front().nu != nu) F.layers.emplace_back();
    F.layers.back().push_back(std::move(fac));
    N = std::move(Q);
  }
  if (F.complete) {
    F.a = N[0];
    F.remainder_operator = Operator(p, {N[0]});
  } else {
    F.remainder_operator = N;
  }
  return F;
}

inline Factorization factorize(const Operator& L, const Rational& ceiling) {
  Factorization F = factorize_partial(L, ceiling);
  if (!F.complete) throw Error(ErrorKind::NonRationalExponent, "characteristic polynomial has no rational root");
  return F;
}

// a · L_k ⋯ L_1 expanded; when the factorization is partial the remaining
// operator takes the place of a.
inline Operator factor_reconstruct(const Factorization& F, const Rational& ceiling) {
  Operator R = F.complete ? Operator(F.radix, {F.a}) : F.remainder_operator;
  for (auto layer = F.layers.rbegin(); layer != F.layers.rend(); ++layer)
    for (auto f = layer->rbegin(); f != layer->rend(); ++f) R = R * factor_operator(F.radix, *f, ceiling);
  return R;
}

struct FactorizationCheck {
  bool val_ok = false;
  bool cld_ok = false;
  bool nu_ok = false;
  bool tangent_ok = false;
  bool remainders_ok = false;
  bool reconstruct_ok = false;
  bool ok() const { return val_ok && cld_ok && nu_ok && tangent_ok && remainders_ok && reconstruct_ok; }
};

inline FactorizationCheck check_factorization(const Operator& L, const Factorization& F, const FrobeniusPlan& plan,
                                              const Rational& ceiling) {
  FactorizationCheck chk;
  Rational prod(1);
  bool tangent = true;
  for (const auto& layer : F.layers)
    for (const auto& f : layer) {
      prod *= -f.c;
      tangent = tangent && f.h.has_certified_leading() && val(f.h).is_zero() && cld(f.h) == Rational(1);
    }
  chk.tangent_ok = tangent;
  // For a partial factorization the remaining operator's a_0 plays the role of a.
  const Series& a = F.complete ? F.a : F.remainder_operator[0];
  if (a.has_certified_leading()) {
    chk.val_ok = val(a) == val(L[0]);
    chk.cld_ok = cld(a) * prod == cld(L[0]);
  }
  chk.nu_ok = F.layers.size() <= plan.nu.size();
  for (std::size_t i = 0; chk.nu_ok && i < F.layers.size(); ++i)
    chk.nu_ok = F.layers[i].front().nu == plan.nu[i];
  chk.remainders_ok = true;
  for (const auto& R : F.remainders) chk.remainders_ok = chk.remainders_ok && detail::remainder_vanishes(R);
  chk.reconstruct_ok = eq_on_mask(factor_reconstruct(F, ceiling), L);
  return chk;
}

}  // namespace mahler
