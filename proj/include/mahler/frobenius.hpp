#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mahler/factorize.hpp"

namespace mahler {

// ---------------------------------------------------------------------------
// Order-1 parametric solver

// Largest pole order at c over all stored coefficients.
inline int max_pole_order(const ParametricSeries& f, const Rational& c) {
  int r = 0;
  for (const auto& [e, q] : f.terms()) r = std::max(r, q.pole_order(c));
  return r;
}

// The unique f with (z^{-μ} λ φ - c)(f) = g, truncated at `ceiling`.
//
// With G = θ_{-μ} c^{-1} g(cλ, z) split as G_- + G_0 + G_+ by the sign of the
// exponent, f(λ) = θ_μ F(λ/c) where
//   F = Σ_{k=-1}^{-depth} λ^k φ^k(G_-) + G_0/(λ-1) - Σ_{k≥0} λ^k φ^k(G_+).
// The omitted k < -depth terms live in [p^{-depth-1}·floor(G_-), 0), which is
// removed from the mask.
inline ParametricSeries solve_order1_param(long p, const Rational& mu, const Rational& c, const ParametricSeries& g,
                                           const Rational& ceiling, long depth) {
  if (c.is_zero()) throw Error(ErrorKind::ZeroDivisor, "order-1 solver needs c != 0");
  const Rational sh = mu / Rational(p - 1);
  const Rational cinv = Rational(1) / c;
  const Rational top = ceiling - sh;  // ceiling in the frame of F

  ParametricSeries G = shift(map_coeffs(g, [&](const RatFun& q) { return q.scale_var(c).scaled(cinv); }), -sh);
  G = G.truncated(Bound(top));

  // k ≤ -1
  ParametricSeries neg;
  {
    ParametricSeries Gm = part_below(G, Rational(0));
    Bound fl = Gm.support_floor();
    if (fl < Bound(0)) {
      for (long k = 1; k <= depth; ++k) neg = neg + scale(mal(Gm, p, -k), lambda_pow(-k));
      Bound gap_lo = fl.scaled(pow(Rational(p), -(depth + 1)));
      neg = neg.restricted(GuaranteeMask::from({{gap_lo, Bound(0)}}).complement());
    }
  }

  // k = 0 (the exponent exactly at the accumulation point)
  ParametricSeries zero;
  if (G.mask().contains(Rational(0))) {
    RatFun g0 = G.coeff(Rational(0));
    if (!g0.is_zero()) zero = ParametricSeries::constant(g0 / RatFun::lambda_minus(Rational(1)));
  } else {
    // Unknown at 0: nothing is claimed on the uncertified interval around it.
    Bound hi = Bound::pos_infinity();
    for (const auto& iv : G.mask().complement().intervals())
      if (iv.lo <= Bound(0) && Bound(0) < iv.hi) hi = iv.hi;
    zero = ParametricSeries({}, GuaranteeMask::below(Bound(0)).unite(GuaranteeMask::from({{hi, Bound::pos_infinity()}})));
  }

  // k ≥ 0
  ParametricSeries pos;
  {
    ParametricSeries Gp = part_above(G, Rational(0));
    Bound fl = Gp.support_floor();
    if (fl <= Bound(0)) {
      // Uncertainty reaching 0 spreads over all of (0, ∞) under φ^k.
      pos = ParametricSeries({}, GuaranteeMask::below(Bound(0)));
    } else if (fl.is_finite()) {
      Rational lead = fl.value();
      RatFun lk(Rational(1));
      for (long k = 0; Bound(lead) < Bound(top); ++k) {
        pos = pos + scale(mal(Gp, p, k), lk);
        lk = lk * RatFun::lambda();
        lead *= Rational(p);
      }
      pos = pos.truncated(Bound(top));
    }
  }

  ParametricSeries F = (neg + zero - pos).truncated(Bound(top));
  return shift(map_coeffs(F, [&](const RatFun& q) { return q.scale_var(cinv); }), sh);
}

// ---------------------------------------------------------------------------
// Solutions in R: finite combinations Σ f_{c,u}(z) ℓ_{c,u}, e_c = ℓ_{c,0}.

struct SolutionObject {
  long radix = 2;
  std::map<std::pair<Rational, int>, Series> parts;

  const Series* part(const Rational& c, int u) const {
    auto it = parts.find({c, u});
    return it == parts.end() ? nullptr : &it->second;
  }
  void add(const Rational& c, int u, const Series& f) {
    auto key = std::make_pair(c, u);
    auto it = parts.find(key);
    if (it == parts.end())
      parts.emplace(key, f);
    else
      it->second = it->second + f;
  }
  // Drops parts that are exactly zero.
  void prune() {
    std::erase_if(parts, [](const auto& kv) { return kv.second.is_exact_zero(); });
  }
};

// φ^i(ℓ_{c,u}) = Σ_{t=0}^{min(i,u)} C(i,t) c^{i-t} ℓ_{c,u-t}.
inline SolutionObject apply_to_solution(const Operator& L, const SolutionObject& y) {
  SolutionObject out;
  out.radix = L.radix();
  for (const auto& [key, f] : y.parts) {
    const auto& [c, u] = key;
    for (std::size_t i = 0; i < L.coeffs().size(); ++i) {
      const long ii = static_cast<long>(i);
      Series t = L[i] * mal(f, L.radix(), ii);
      for (long s = 0; s <= std::min<long>(ii, u); ++s)
        out.add(c, u - static_cast<int>(s), scale(t, binomial(ii, s) * pow(c, ii - s)));
    }
  }
  out.prune();
  return out;
}

inline RatFun derivative(const RatFun& f, long k) {
  RatFun r = f;
  for (long i = 0; i < k; ++i) r = r.derivative();
  return r;
}

// y_{c,m} = ev_c ∂_λ^{s+m}(g e_λ) = Σ_u u!·C(s+m,u)·ev_c(∂^{s+m-u} g) ℓ_{c,u}.
// With t_k the Taylor coefficients of a coefficient of g at c, the weight
// u!·C(N,u)·(N-u)!·t_{N-u} is N!·t_{N-u}.
inline std::vector<SolutionObject> specialize_solutions(long p, const ParametricSeries& g, const Rational& c, int s,
                                                        int m_count) {
  const std::size_t top = static_cast<std::size_t>(std::max(0, s + m_count - 1));
  std::vector<std::pair<Rational, std::vector<Rational>>> taylor;
  taylor.reserve(g.terms().size());
  for (const auto& [e, q] : g.terms()) taylor.emplace_back(e, q.taylor(c, top));

  std::vector<SolutionObject> out;
  for (int m = 0; m < m_count; ++m) {
    const long N = s + m;
    const Rational w = factorial(N);
    SolutionObject y;
    y.radix = p;
    for (long u = 0; u <= N; ++u) {
      std::vector<Series::Term> t;
      for (const auto& [e, tc] : taylor) {
        Rational v = tc[static_cast<std::size_t>(N - u)] * w;
        if (!v.is_zero()) t.emplace_back(e, std::move(v));
      }
      y.parts.emplace(std::make_pair(c, static_cast<int>(u)), Series(std::move(t), g.mask()));
    }
    y.prune();
    out.push_back(std::move(y));
  }
  return out;
}

// ---------------------------------------------------------------------------
// g_{c,j}

struct GcjChecks {
  bool val_ok = false;
  bool cld_ok = false;
  bool regular_ok = false;  // no pole at λ = c
  bool equation_ok = false;
  RatFun expected_cld;
  bool ok() const { return val_ok && cld_ok && regular_ok && equation_ok; }
};

struct GcjBlock {
  PlanEntry entry;
  Rational mu;
  ParametricSeries g;
  GcjChecks checks;
  std::vector<SolutionObject> solutions;
};

// Unique x with support in [0, ∞) solving B(x) = y, for B whose order-0
// coefficient strictly dominates: val b_i > val b_0 = v for i ≥ 1, and
// val y ≥ v. Writing b_i = Σ_δ b_{i,δ} z^{v+δ}, the coefficient at z^{v+γ}
// gives b_{0,0} x_γ = y_{v+γ} - Σ_{(i,δ)≠(0,0)} b_{i,δ} x_{(γ-δ)/p^i},
// and every index on the right is strictly below γ.
inline ParametricSeries solve_dominant(const ParametricOperator& B, const ParametricSeries& y,
                                       const Rational& ceiling) {
  const long p = B.radix();
  const Rational v = val(B[0]);
  for (std::size_t i = 1; i < B.coeffs().size(); ++i)
    if (!B[i].is_exact_zero() && !(Bound(v) < B[i].support_floor()))
      throw Error(ErrorKind::PlanMismatch, "order-0 coefficient does not dominate");
  if (y.support_floor() < Bound(v)) throw Error(ErrorKind::PlanMismatch, "right-hand side below val b_0");

  Bound limit(ceiling);
  for (const auto& b : B.coeffs()) limit = min(limit, b.mask().prefix_end() - v);
  limit = min(limit, y.mask().prefix_end() - v);

  struct Pair {
    Rational scale, delta;
    RatFun coeff;
  };
  std::vector<Pair> pairs;
  Rational pi(1);
  for (std::size_t i = 0; i < B.coeffs().size(); ++i, pi *= Rational(p))
    for (const auto& [e, q] : B[i].terms()) {
      Rational d = e - v;
      if (!(Bound(d) < limit)) break;
      if (i == 0 && d.is_zero()) continue;
      pairs.push_back({pi, d, q});
    }

  std::set<Rational> cand;
  std::vector<Rational> work;
  for (const auto& [e, q] : y.terms()) {
    Rational g = e - v;
    if (Bound(g) < limit && cand.insert(g).second) work.push_back(g);
  }
  while (!work.empty()) {
    Rational s = std::move(work.back());
    work.pop_back();
    for (const auto& pr : pairs) {
      Rational g = pr.delta + pr.scale * s;
      if (!(Bound(g) < limit)) continue;
      if (cand.insert(g).second) work.push_back(std::move(g));
    }
  }

  const RatFun inv00 = RatFun(Rational(1)) / B[0].coeff(v);
  std::map<Rational, RatFun> x;
  for (const auto& g : cand) {
    RatFun acc = y.coeff(g + v);
    for (const auto& pr : pairs) {
      if (pr.delta > g) continue;
      auto it = x.find((g - pr.delta) / pr.scale);
      if (it != x.end()) acc = acc - pr.coeff * it->second;
    }
    x.emplace(g, acc * inv00);
  }
  return ParametricSeries(std::vector<ParametricSeries::Term>(x.begin(), x.end()), GuaranteeMask::below(limit));
}

namespace detail {

inline const std::vector<FirstOrderFactor>& layer_at(const Factorization& F, std::size_t i) {
  if (i >= F.layers.size()) throw Error(ErrorKind::PlanMismatch, "factorization has too few layers");
  return F.layers[i];
}

}  // namespace detail

// Solves M_k ⋯ M_1 (f) = z^{val a_0} a^{-1} (λ-c)^m with
// M_i = Π_l (z^{ν_i-ν_j} λ φ - c_{i,l}) h_{i,l}^{-1}, from the outside in,
// then g = (λ-c)^s θ_{-ν_j} f.
inline ParametricSeries solve_gcj(const Operator& L, const PlanEntry& e, const Factorization& F,
                                  const Rational& ceiling, long depth) {
  const long p = L.radix();
  if (!F.complete && e.j + 1 > F.layers.size())
    throw Error(ErrorKind::PlanMismatch, "slope not covered by the factorization");
  const Rational nuj = detail::layer_at(F, e.j).front().nu;
  if (nuj != e.nu) throw Error(ErrorKind::PlanMismatch, "plan and factorization disagree on nu");
  const Rational shj = nuj / Rational(p - 1);
  const Rational top = ceiling + shj;

  const Rational v0 = e.val_a0;
  const RatFun lc_m = pow(RatFun::lambda_minus(e.c), static_cast<unsigned>(e.m));
  ParametricSeries cur;
  if (F.complete) {
    cur = scale(lift(shift(invert(F.a, top - v0), v0)), lc_m);
  } else {
    // The unfactored part has only slopes > 0 in this frame.
    ParametricOperator top_op = gauge_exp_param(gauge_theta(F.remainder_operator, -nuj));
    cur = solve_dominant(top_op, ParametricSeries::monomial(lc_m, v0), top);
  }

  for (std::size_t i = F.layers.size(); i-- > 0;) {
    const auto& layer = F.layers[i];
    const Rational mu = nuj - layer.front().nu;
    for (auto f = layer.rbegin(); f != layer.rend(); ++f) {
      ParametricSeries w = solve_order1_param(p, mu, f->c, cur, top, depth);
      cur = (w * lift(f->h)).truncated(Bound(top));
    }
  }
  ParametricSeries g = shift(cur, -shj);
  if (e.s > 0) g = scale(g, pow(RatFun::lambda_minus(e.c), static_cast<unsigned>(e.s)));
  return g.truncated(Bound(ceiling));
}

// λ^{-(r_1+…+r_{j-1})} Π_{i≤j,l}(-c_{i,l}) / cld(a_0) · (λ-c)^{s+m} / Π_l(λ-c_{j,l}).
inline RatFun expected_cld(const Operator& L, const PlanEntry& e, const Factorization& F) {
  long R = 0;
  Rational prod(1);
  RatFun den(Rational(1));
  for (std::size_t i = 0; i <= e.j; ++i)
    for (const auto& f : F.layers[i]) {
      prod *= -f.c;
      if (i < e.j)
        ++R;
      else
        den = den * RatFun::lambda_minus(f.c);
    }
  RatFun num = lambda_pow(-R).scaled(prod / cld(L[0])) *
               pow(RatFun::lambda_minus(e.c), static_cast<unsigned>(e.s + e.m));
  return num / den;
}

inline GcjChecks check_gcj(const Operator& L, const PlanEntry& e, const Rational& mu, const Factorization& F,
                           const ParametricSeries& g) {
  GcjChecks chk;
  chk.expected_cld = expected_cld(L, e, F);
  if (g.has_certified_leading()) {
    chk.val_ok = val(g) == -mu;
    chk.cld_ok = cld(g) == chk.expected_cld;
  }
  chk.regular_ok = max_pole_order(g, e.c) == 0;
  const long p = L.radix();
  ParametricSeries lhs = apply(gauge_exp_param(L), g);
  ParametricSeries rhs = ParametricSeries::monomial(pow(RatFun::lambda_minus(e.c), static_cast<unsigned>(e.s + e.m)),
                                                    e.val_a0 - e.nu / Rational(p - 1));
  // Agreement must include the right-hand side's own exponent, else the check is vacuous.
  MaskComparison cmp = eq_on_mask(lhs, rhs);
  chk.equation_ok = cmp.equal && cmp.common.contains(e.val_a0 - e.nu / Rational(p - 1));
  return chk;
}

// ---------------------------------------------------------------------------
// Verification

struct ResidualReport {
  bool zero = false;             // no stored residual term inside the certified region
  GuaranteeMask certified;       // intersection of the residual parts' masks
  Bound certified_up_to = Bound::neg_infinity();  // start of the final uncertified ray
  std::vector<Interval> gaps;    // bounded uncertified intervals below it
  bool gaps_ok = false;          // every gap has width ≤ ε
};

inline ResidualReport residual_report(const Operator& L, const SolutionObject& y, const Rational& epsilon) {
  ResidualReport rep;
  SolutionObject r = apply_to_solution(L, y);
  rep.zero = true;
  rep.certified = GuaranteeMask::full();
  for (const auto& [k, f] : r.parts) {
    rep.zero = rep.zero && f.empty();
    rep.certified = rep.certified.intersect(f.mask());
  }
  const auto& iv = rep.certified.intervals();
  rep.certified_up_to = iv.empty() ? Bound::neg_infinity() : iv.back().hi;
  Bound cur = Bound::neg_infinity();
  for (const auto& i : iv) {
    if (!cur.is_neg_inf()) rep.gaps.push_back({cur, i.lo});
    cur = i.hi;
  }
  if (!iv.empty() && !iv.front().lo.is_neg_inf()) rep.gaps.insert(rep.gaps.begin(), {Bound::neg_infinity(), iv.front().lo});
  rep.gaps_ok = true;
  for (const auto& g : rep.gaps)
    rep.gaps_ok = rep.gaps_ok && g.lo.is_finite() && g.hi.is_finite() && g.hi.value() - g.lo.value() <= epsilon;
  return rep;
}

struct IndependenceReport {
  bool ok = false;
  std::vector<std::string> failures;
};

struct FrobeniusOutput {
  NewtonData newton;
  FrobeniusPlan plan;
  Factorization factorization;
  std::vector<GcjBlock> blocks;
  bool partial = false;  // some exponents are not rational

  std::size_t solution_count() const {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.solutions.size();
    return n;
  }
};

// Triangular valuation pattern of the ℓ-components, per exponent c:
// for y_{c,j,m}: val(part u) ≥ -μ_j for u < m, = -μ_j at u = m, > -μ_j for u > m.
inline IndependenceReport verify_independence(const FrobeniusOutput& out) {
  IndependenceReport rep;
  std::map<Rational, std::set<std::pair<std::size_t, int>>> labels;
  for (const auto& b : out.blocks) {
    const Rational target = -b.mu;
    if (b.solutions.size() != static_cast<std::size_t>(b.entry.m))
      rep.failures.push_back("wrong number of solutions for c = " + b.entry.c.to_string());
    for (std::size_t m = 0; m < b.solutions.size(); ++m) {
      const auto& y = b.solutions[m];
      std::string tag = "y[c=" + b.entry.c.to_string() + ",j=" + std::to_string(b.entry.j + 1) + ",m=" + std::to_string(m) + "]";
      if (!labels[b.entry.c].insert({b.entry.j, static_cast<int>(m)}).second) rep.failures.push_back(tag + " duplicated");
      for (long u = 0; u <= b.entry.s + static_cast<long>(m); ++u) {
        const Series* h = y.part(b.entry.c, static_cast<int>(u));
        bool lower_bound_only = u < static_cast<long>(m);
        if (!h) {
          if (u == static_cast<long>(m)) rep.failures.push_back(tag + ": missing part u=" + std::to_string(u));
          continue;
        }
        if (h->is_exact_zero()) continue;
        Bound fl = h->support_floor();
        if (!h->has_certified_leading()) {
          // Only the lower bound is available.
          if (u == static_cast<long>(m) || !(Bound(target) < fl || (lower_bound_only && Bound(target) <= fl)))
            rep.failures.push_back(tag + ": part u=" + std::to_string(u) + " has uncertified leading term");
          continue;
        }
        Rational v = val(*h);
        bool good = lower_bound_only ? v >= target : (u == static_cast<long>(m) ? v == target : v > target);
        if (!good)
          rep.failures.push_back(tag + ": val(part u=" + std::to_string(u) + ") = " + v.to_string() + ", expected relation to " +
                                 target.to_string() + " violated");
      }
    }
  }
  rep.ok = rep.failures.empty();
  return rep;
}

struct BasisOptions {
  Rational ceiling{8};
  long depth = 8;
  // Extra precision for the factorization relative to the solution ceiling.
  Rational factor_slack{0};
};

// Plan → factorization → g_{c,j} → specialized solutions, for every
// rational exponent. Non-rational exponents leave the basis partial.
inline FrobeniusOutput frobenius_basis(const Operator& L, const BasisOptions& opt = {}) {
  MaskBudgetScope budget(mask_islands_for_depth(opt.depth));
  FrobeniusOutput out;
  out.newton = analyze(L);
  out.partial = !out.newton.all_rational();
  out.plan = frobenius_plan(out.newton, L);
  const long p = L.radix();

  Rational fc = opt.ceiling + opt.factor_slack;
  for (const auto& nu : out.plan.nu) fc = std::max(fc, opt.ceiling + opt.factor_slack + nu / Rational(p - 1));
  out.factorization = factorize_partial(L, fc);

  // With non-rational exponents only the slopes strictly below the first
  // offending one can be solved.
  std::size_t j0 = out.newton.slopes.size();
  for (std::size_t j = 0; j < out.newton.residuals.size(); ++j)
    if (out.newton.residuals[j].degree() > 0) {
      j0 = j;
      break;
    }
  for (const auto& e : out.plan.entries) {
    if (e.j >= j0) continue;
    GcjBlock b;
    b.entry = e;
    b.mu = out.newton.slopes[e.j].mu;
    b.g = solve_gcj(L, e, out.factorization, opt.ceiling, opt.depth);
    b.checks = check_gcj(L, e, b.mu, out.factorization, b.g);
    b.solutions = specialize_solutions(p, b.g, e.c, e.s, e.m);
    out.blocks.push_back(std::move(b));
  }
  return out;
}

}  // namespace mahler
