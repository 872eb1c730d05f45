#pragma once

#include <algorithm>
#include <concepts>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mahler/mask.hpp"
#include "mahler/ratfun.hpp"

namespace mahler {

template <class K>
concept CoefficientField = requires(const K& a, const K& b, const Rational& q) {
  { a + b } -> std::convertible_to<K>;
  { a - b } -> std::convertible_to<K>;
  { a * b } -> std::convertible_to<K>;
  { a / b } -> std::convertible_to<K>;
  { -a } -> std::convertible_to<K>;
  { a == b } -> std::convertible_to<bool>;
  { is_zero(a) } -> std::convertible_to<bool>;
  { to_string(a) } -> std::convertible_to<std::string>;
  K(q);
};

// Masks of products keep at most this many certified islands; the rest (the
// highest ones) are forgotten. Each nested ladder of depth D multiplies the
// island count by about D, so callers scale the budget with depth.
inline constexpr std::size_t kDefaultMaskIslands = 64;

namespace detail {
inline std::size_t& mask_island_budget() {
  thread_local std::size_t n = kDefaultMaskIslands;
  return n;
}
}  // namespace detail

inline std::size_t mask_island_budget() { return detail::mask_island_budget(); }

// Sets the island budget for the current thread until destroyed.
class MaskBudgetScope {
 public:
  explicit MaskBudgetScope(std::size_t n) : saved_(detail::mask_island_budget()) {
    detail::mask_island_budget() = std::max<std::size_t>(n, 1);
  }
  ~MaskBudgetScope() { detail::mask_island_budget() = saved_; }
  MaskBudgetScope(const MaskBudgetScope&) = delete;
  MaskBudgetScope& operator=(const MaskBudgetScope&) = delete;

 private:
  std::size_t saved_;
};

// 64 islands at depth 8, growing with the cube of the depth (three levels of
// nested ladders) and never below the default.
inline std::size_t mask_islands_for_depth(long depth) {
  const double r = static_cast<double>(std::max(depth, 1L)) / 8.0;
  return std::max(kDefaultMaskIslands, static_cast<std::size_t>(static_cast<double>(kDefaultMaskIslands) * r * r * r));
}

// Truncated Hahn series Σ f_γ z^γ: finitely many stored terms plus the mask
// of exponents where the stored data (absent = 0) is the exact coefficient.
template <CoefficientField K>
class HahnSeries {
 public:
  using Term = std::pair<Rational, K>;

  // The exact zero series.
  HahnSeries() : mask_(GuaranteeMask::full()) {}

  HahnSeries(std::vector<Term> terms, GuaranteeMask mask) : terms_(std::move(terms)), mask_(std::move(mask)) {
    canonicalize();
  }

  static HahnSeries constant(const K& c) { return monomial(c, Rational(0)); }
  static HahnSeries monomial(const K& c, const Rational& e) {
    return HahnSeries({{e, c}}, GuaranteeMask::full());
  }
  // Exact series from a finite term list.
  static HahnSeries exact(std::vector<Term> terms) { return HahnSeries(std::move(terms), GuaranteeMask::full()); }

  const std::vector<Term>& terms() const noexcept { return terms_; }
  const GuaranteeMask& mask() const noexcept { return mask_; }

  // No stored terms (it may still be nonzero outside the mask).
  bool empty() const noexcept { return terms_.empty(); }
  bool is_exact_zero() const { return terms_.empty() && mask_.is_full(); }

  K coeff(const Rational& e) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                               [](const Term& t, const Rational& x) { return t.first < x; });
    if (it != terms_.end() && it->first == e) return it->second;
    return K(Rational(0));
  }

  // True iff the smallest support element is certified.
  bool has_certified_leading() const {
    Bound pe = mask_.prefix_end();
    if (terms_.empty()) return false;
    return Bound(terms_.front().first) < pe;
  }

  // Lower bound for the true support: min of first stored term and the
  // start of the uncertified region (+∞ for the exact zero).
  Bound support_floor() const {
    Bound b = mask_.prefix_end();
    if (!terms_.empty() && Bound(terms_.front().first) < b) return Bound(terms_.front().first);
    return b;
  }

  HahnSeries restricted(const GuaranteeMask& m) const { return HahnSeries(terms_, mask_.intersect(m)); }
  HahnSeries truncated(const Bound& c) const { return restricted(GuaranteeMask::below(c)); }

  friend bool operator==(const HahnSeries& a, const HahnSeries& b) {
    return a.mask_ == b.mask_ && a.terms_ == b.terms_;
  }

 private:
  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().first == t.first)
        out.back().second = out.back().second + t.second;
      else
        out.push_back(std::move(t));
    }
    std::erase_if(out, [&](const Term& t) { return is_zero(t.second) || !mask_.contains(t.first); });
    terms_ = std::move(out);
  }

  std::vector<Term> terms_;
  GuaranteeMask mask_;
};

using Series = HahnSeries<Rational>;
using ParametricSeries = HahnSeries<RatFun>;

template <CoefficientField K>
HahnSeries<K> operator+(const HahnSeries<K>& f, const HahnSeries<K>& g) {
  std::vector<typename HahnSeries<K>::Term> t;
  t.reserve(f.terms().size() + g.terms().size());
  // Merge of two sorted lists.
  auto i = f.terms().begin(), j = g.terms().begin();
  while (i != f.terms().end() || j != g.terms().end()) {
    if (j == g.terms().end() || (i != f.terms().end() && i->first < j->first))
      t.push_back(*i++);
    else if (i == f.terms().end() || j->first < i->first)
      t.push_back(*j++);
    else {
      t.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    }
  }
  return HahnSeries<K>(std::move(t), f.mask().intersect(g.mask()));
}

template <CoefficientField K>
HahnSeries<K> operator-(const HahnSeries<K>& f) {
  auto t = f.terms();
  for (auto& x : t) x.second = -x.second;
  return HahnSeries<K>(std::move(t), f.mask());
}

template <CoefficientField K>
HahnSeries<K> operator-(const HahnSeries<K>& f, const HahnSeries<K>& g) {
  return f + (-g);
}

template <CoefficientField K>
HahnSeries<K> scale(const HahnSeries<K>& f, const K& c) {
  if (is_zero(c)) return HahnSeries<K>({}, f.mask());
  auto t = f.terms();
  for (auto& x : t) x.second = x.second * c;
  return HahnSeries<K>(std::move(t), f.mask());
}

namespace detail {

template <CoefficientField K>
std::vector<Rational> exponents_of(const HahnSeries<K>& f) {
  std::vector<Rational> v;
  v.reserve(f.terms().size());
  for (const auto& t : f.terms()) v.push_back(t.first);
  return v;
}

// Certified region of a product. A coefficient of f·g at γ is exact unless
// some decomposition γ = γ' + γ'' pairs an uncertified exponent of one
// factor with a possible support point of the other. Possible support =
// stored exponents ∪ uncertified region; the uncertified⊕uncertified part is
// covered by a ray starting at the sum of the infima.
template <CoefficientField K>
GuaranteeMask product_mask(const HahnSeries<K>& f, const HahnSeries<K>& g) {
  GuaranteeMask uf = f.mask().complement(), ug = g.mask().complement();
  const auto ef = exponents_of(f), eg = exponents_of(g);
  // Everything from the earliest unknown ray on is unknown; compute it first
  // so the bounded pieces beyond it need not be enumerated.
  Bound cut = Bound::pos_infinity();
  if (!uf.is_empty() && !ug.is_empty()) cut = uf.intervals().front().lo + ug.intervals().front().lo;
  if (!uf.is_empty() && uf.intervals().back().hi.is_pos_inf() && !eg.empty())
    cut = min(cut, uf.intervals().back().lo + eg.front());
  if (!ug.is_empty() && ug.intervals().back().hi.is_pos_inf() && !ef.empty())
    cut = min(cut, ug.intervals().back().lo + ef.front());
  GuaranteeMask unknown = uf.minkowski_points(eg, cut).unite(ug.minkowski_points(ef, cut));
  if (!cut.is_pos_inf()) unknown = unknown.unite(GuaranteeMask::from({{cut, Bound::pos_infinity()}}));
  return unknown.complement().coarsened(mask_island_budget());
}

}  // namespace detail

template <CoefficientField K>
HahnSeries<K> operator*(const HahnSeries<K>& f, const HahnSeries<K>& g) {
  GuaranteeMask m = detail::product_mask(f, g);
  std::map<Rational, K> acc;
  for (const auto& [e1, c1] : f.terms())
    for (const auto& [e2, c2] : g.terms()) {
      Rational e = e1 + e2;
      if (!m.contains(e)) continue;
      auto it = acc.find(e);
      if (it == acc.end())
        acc.emplace(std::move(e), c1 * c2);
      else
        it->second = it->second + c1 * c2;
    }
  std::vector<typename HahnSeries<K>::Term> t(acc.begin(), acc.end());
  return HahnSeries<K>(std::move(t), std::move(m));
}

// Multiplication by z^s.
template <CoefficientField K>
HahnSeries<K> shift(const HahnSeries<K>& f, const Rational& s) {
  auto t = f.terms();
  for (auto& x : t) x.first += s;
  return HahnSeries<K>(std::move(t), f.mask().shifted(s));
}

// φ_p^k: z ↦ z^{p^k}, k of either sign.
template <CoefficientField K>
HahnSeries<K> mal(const HahnSeries<K>& f, long p, long k) {
  if (k == 0) return f;
  Rational s = pow(Rational(p), k);
  auto t = f.terms();
  for (auto& x : t) x.first *= s;
  return HahnSeries<K>(std::move(t), f.mask().scaled(s));
}

template <CoefficientField K>
Rational val(const HahnSeries<K>& f) {
  if (f.is_exact_zero()) throw Error(ErrorKind::ZeroSeries, "valuation of the zero series");
  if (!f.has_certified_leading()) throw Error(ErrorKind::UnknownLeadingTerm, "leading term not certified by mask");
  return f.terms().front().first;
}

template <CoefficientField K>
K cld(const HahnSeries<K>& f) {
  if (f.is_exact_zero()) throw Error(ErrorKind::ZeroSeries, "leading coefficient of the zero series");
  if (!f.has_certified_leading()) throw Error(ErrorKind::UnknownLeadingTerm, "leading term not certified by mask");
  return f.terms().front().second;
}

// Inverse certified on (-∞, ceiling) as far as the input allows.
// f = c z^v (1 + t); 1/(1+t) = Σ u_γ z^γ with u_0 = 1 and
// u_γ = -Σ_{δ ∈ supp t} t_δ u_{γ-δ}, γ ranging over the monoid spanned by supp t.
template <CoefficientField K>
HahnSeries<K> invert(const HahnSeries<K>& f, const Rational& ceiling) {
  if (f.empty() || !f.has_certified_leading())
    throw Error(ErrorKind::ZeroDivisor, "inverse of a series that is zero or has an uncertified leading term");
  const Rational v = f.terms().front().first;
  const K c0 = f.terms().front().second;
  const K c0inv = K(Rational(1)) / c0;
  const Bound pf = f.mask().prefix_end();
  // u is needed up to ceiling + v and is only determined below pf - v.
  const Bound limit = min(Bound(ceiling + v), pf - v);

  std::vector<std::pair<Rational, K>> t;
  for (std::size_t i = 1; i < f.terms().size(); ++i) {
    Rational d = f.terms()[i].first - v;
    if (!(Bound(d) < limit)) break;
    t.emplace_back(std::move(d), f.terms()[i].second * c0inv);
  }

  std::set<Rational> cand;
  if (Bound(0) < limit) {
    std::vector<Rational> work{Rational(0)};
    cand.insert(Rational(0));
    while (!work.empty()) {
      Rational s = std::move(work.back());
      work.pop_back();
      for (const auto& [d, _] : t) {
        Rational g = s + d;
        if (!(Bound(g) < limit)) break;  // t is sorted by exponent
        if (cand.insert(g).second) work.push_back(std::move(g));
      }
    }
  }

  std::map<Rational, K> u;
  for (const auto& g : cand) {
    if (g.is_zero()) {
      u.emplace(g, K(Rational(1)));
      continue;
    }
    K acc(Rational(0));
    for (const auto& [d, td] : t) {
      if (d > g) break;
      auto it = u.find(g - d);
      if (it != u.end()) acc = acc - td * it->second;
    }
    u.emplace(g, std::move(acc));
  }

  std::vector<typename HahnSeries<K>::Term> out;
  out.reserve(u.size());
  for (auto& [g, c] : u) out.emplace_back(g - v, c * c0inv);
  return HahnSeries<K>(std::move(out), GuaranteeMask::below(limit - v));
}

template <CoefficientField K, class F>
auto map_coeffs(const HahnSeries<K>& f, F&& fn) {
  using K2 = std::decay_t<decltype(fn(std::declval<const K&>()))>;
  std::vector<typename HahnSeries<K2>::Term> t;
  t.reserve(f.terms().size());
  for (const auto& [e, c] : f.terms()) t.emplace_back(e, fn(c));
  return HahnSeries<K2>(std::move(t), f.mask());
}

struct MaskComparison {
  bool equal;
  GuaranteeMask common;
  std::optional<Rational> first_difference;
};

template <CoefficientField K>
MaskComparison eq_on_mask(const HahnSeries<K>& f, const HahnSeries<K>& g) {
  GuaranteeMask common = f.mask().intersect(g.mask());
  HahnSeries<K> d = (f - g).restricted(common);
  if (d.empty()) return {true, std::move(common), std::nullopt};
  return {false, std::move(common), d.terms().front().first};
}

// Pieces of f relative to a split point x: support < x, = x, > x.
// The uncertified region of f is distributed over the pieces so that each
// piece stays sound on its own.
template <CoefficientField K>
HahnSeries<K> part_below(const HahnSeries<K>& f, const Rational& x) {
  std::vector<typename HahnSeries<K>::Term> t;
  for (const auto& term : f.terms())
    if (term.first < x) t.push_back(term);
  return HahnSeries<K>(std::move(t), f.mask().unite(GuaranteeMask::from({{Bound(x), Bound::pos_infinity()}})));
}

template <CoefficientField K>
HahnSeries<K> part_above(const HahnSeries<K>& f, const Rational& x) {
  std::vector<typename HahnSeries<K>::Term> t;
  for (const auto& term : f.terms())
    if (term.first > x) t.push_back(term);
  // Uncertainty at x itself is kept (half-open intervals cannot exclude a point).
  return HahnSeries<K>(std::move(t), f.mask().unite(GuaranteeMask::below(Bound(x))));
}

// Coefficient at x as a constant; empty optional when x is not certified.
template <CoefficientField K>
std::optional<K> coeff_at(const HahnSeries<K>& f, const Rational& x) {
  if (!f.mask().contains(x)) return std::nullopt;
  return f.coeff(x);
}

template <CoefficientField K>
std::string to_string(const HahnSeries<K>& f, std::size_t max_terms = 12) {
  std::string s;
  std::size_t n = 0;
  for (const auto& [e, c] : f.terms()) {
    if (n++ == max_terms) {
      s += " + …";
      break;
    }
    if (!s.empty()) s += " + ";
    std::string cs = to_string(c);
    bool compound = cs.find_first_of("+/ ") != std::string::npos || (cs.size() > 1 && cs.find('-', 1) != std::string::npos);
    if (compound) cs = "(" + cs + ")";
    if (e.is_zero())
      s += cs;
    else
      s += (cs == "1" ? std::string() : cs + "*") + "z^" + (e.is_integer() && e.sign() >= 0 ? e.to_string() : "(" + e.to_string() + ")");
  }
  if (s.empty()) s = "0";
  if (!f.mask().is_full()) s += "  on " + f.mask().to_string();
  return s;
}

}  // namespace mahler
