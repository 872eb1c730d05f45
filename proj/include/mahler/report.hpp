#pragma once

// JSON encodings of the library's values. All rationals are strings.

#include <json.hpp>

#include "mahler/frobenius.hpp"

namespace mahler::json {

using nlohmann::json;

inline json encode(const Rational& q) { return q.to_string(); }
inline json encode(const Bound& b) { return b.to_string(); }

inline json encode(const Poly& p) {
  json a = json::array();
  for (const auto& c : p.coeffs()) a.push_back(c.to_string());
  return a;
}

inline json encode(const RatFun& f) { return json{{"num", encode(f.num())}, {"den", encode(f.den())}}; }

// The certified prefix (-∞, h) is written with lo = val(f) when f has a
// certified leading term (nothing lives below it), else "-inf".
inline json encode(const GuaranteeMask& m, const std::optional<Rational>& floor = std::nullopt) {
  json a = json::array();
  for (std::size_t i = 0; i < m.intervals().size(); ++i) {
    const auto& iv = m.intervals()[i];
    json lo = encode(iv.lo);
    if (i == 0 && iv.lo.is_neg_inf() && floor && Bound(*floor) < iv.hi) lo = encode(*floor);
    a.push_back({{"lo", lo}, {"hi", encode(iv.hi)}});
  }
  return a;
}

template <CoefficientField K>
json encode(const HahnSeries<K>& f) {
  json terms = json::array();
  for (const auto& [e, c] : f.terms()) terms.push_back({{"exp", encode(e)}, {"coeff", encode(c)}});
  std::optional<Rational> floor;
  if (f.has_certified_leading()) floor = f.terms().front().first;
  return json{{"terms", terms}, {"mask", encode(f.mask(), floor)}};
}

template <CoefficientField K>
json encode(const MahlerOperator<K>& L) {
  json c = json::array();
  for (const auto& a : L.coeffs()) c.push_back(encode(a));
  return json{{"p", L.radix()}, {"coeffs", c}};
}

inline json encode(const NewtonData& nd) {
  json v = json::array(), s = json::array(), cp = json::array(), ex = json::array(), res = json::array();
  for (const auto& x : nd.vertices) v.push_back({{"x", encode(x.x)}, {"y", encode(x.y)}, {"i", x.index}});
  for (const auto& x : nd.slopes) s.push_back({{"mu", encode(x.mu)}, {"r", x.r}});
  for (const auto& x : nd.charpolys) cp.push_back(encode(x));
  for (const auto& list : nd.exponents) {
    json l = json::array();
    for (const auto& e : list) l.push_back({{"c", encode(e.c)}, {"m", e.m}});
    ex.push_back(l);
  }
  for (const auto& r : nd.residuals) res.push_back(encode(r));
  return json{{"vertices", v}, {"slopes", s}, {"charpolys", cp}, {"exponents", ex}, {"nonrational_residuals", res}};
}

inline json encode(const FrobeniusPlan& plan) {
  json nu = json::array(), entries = json::array();
  for (const auto& x : plan.nu) nu.push_back(encode(x));
  for (const auto& e : plan.entries)
    entries.push_back({{"j", e.j + 1}, {"c", encode(e.c)}, {"s", e.s}, {"m", e.m}, {"nu", encode(e.nu)},
                       {"val_a0", encode(e.val_a0)}});
  return json{{"nu", nu}, {"entries", entries}};
}

inline json encode(const Factorization& F) {
  json layers = json::array();
  for (const auto& layer : F.layers) {
    json l = json::array();
    for (const auto& f : layer) l.push_back({{"nu", encode(f.nu)}, {"c", encode(f.c)}, {"h", encode(f.h)}});
    layers.push_back(l);
  }
  json out{{"complete", F.complete}, {"layers", layers}};
  if (F.complete)
    out["a"] = encode(F.a);
  else
    out["remaining_operator"] = encode(F.remainder_operator);
  return out;
}

inline json encode(const FactorizationCheck& c) {
  return json{{"val_a", c.val_ok},          {"cld_product", c.cld_ok},     {"nu", c.nu_ok},
              {"tangent_to_identity", c.tangent_ok}, {"remainders_vanish", c.remainders_ok},
              {"reconstruction", c.reconstruct_ok},  {"pass", c.ok()}};
}

inline json encode(const SolutionObject& y) {
  json terms = json::array();
  std::optional<Rational> c;
  for (const auto& [k, f] : y.parts) {
    c = k.first;
    terms.push_back({{"u", k.second}, {"series", encode(f)}});
  }
  return json{{"c", c ? encode(*c) : json(nullptr)}, {"terms", terms}};
}

inline json encode(const GcjChecks& c) {
  return json{{"val", c.val_ok},
              {"cld", c.cld_ok},
              {"expected_cld", encode(c.expected_cld)},
              {"regular_at_c", c.regular_ok},
              {"equation", c.equation_ok},
              {"pass", c.ok()}};
}

inline json encode(const ResidualReport& r) {
  json gaps = json::array();
  for (const auto& g : r.gaps) gaps.push_back({{"lo", encode(g.lo)}, {"hi", encode(g.hi)}});
  return json{{"zero_on_mask", r.zero},
              {"certified", encode(r.certified)},
              {"certified_up_to", encode(r.certified_up_to)},
              {"gaps", gaps},
              {"gaps_within_epsilon", r.gaps_ok}};
}

inline json encode(const IndependenceReport& r) { return json{{"pass", r.ok}, {"failures", r.failures}}; }

}  // namespace mahler::json
