#pragma once

#include <vector>

#include "mahler/hahn.hpp"

namespace mahler {

// L = Σ_{i=0}^{n} a_i φ_p^i with Hahn series coefficients.
template <CoefficientField K>
class MahlerOperator {
 public:
  MahlerOperator(long p, std::vector<HahnSeries<K>> coeffs) : p_(p), a_(std::move(coeffs)) {
    if (p < 2) throw Error(ErrorKind::PlanMismatch, "radix must be at least 2");
  }

  long radix() const noexcept { return p_; }
  long order() const noexcept { return static_cast<long>(a_.size()) - 1; }
  const std::vector<HahnSeries<K>>& coeffs() const noexcept { return a_; }
  const HahnSeries<K>& operator[](std::size_t i) const { return a_.at(i); }

  // a_0 and a_n carry certified nonzero leading terms.
  bool is_regular() const {
    return !a_.empty() && a_.front().has_certified_leading() && a_.back().has_certified_leading();
  }

  friend bool operator==(const MahlerOperator&, const MahlerOperator&) = default;

 private:
  long p_;
  std::vector<HahnSeries<K>> a_;
};

using Operator = MahlerOperator<Rational>;
using ParametricOperator = MahlerOperator<RatFun>;

template <CoefficientField K>
HahnSeries<K> apply(const MahlerOperator<K>& L, const HahnSeries<K>& f) {
  HahnSeries<K> acc;
  bool first = true;
  for (std::size_t i = 0; i < L.coeffs().size(); ++i) {
    HahnSeries<K> term = L[i] * mal(f, L.radix(), static_cast<long>(i));
    acc = first ? term : acc + term;
    first = false;
  }
  return acc;
}

// Ore product: c_k = Σ_{i+j=k} a_i φ^i(b_j).
template <CoefficientField K>
MahlerOperator<K> operator*(const MahlerOperator<K>& A, const MahlerOperator<K>& B) {
  if (A.radix() != B.radix()) throw Error(ErrorKind::PlanMismatch, "operators with different radices");
  const long p = A.radix();
  std::vector<HahnSeries<K>> c(A.coeffs().size() + B.coeffs().size() - 1);
  std::vector<bool> set(c.size(), false);
  for (std::size_t i = 0; i < A.coeffs().size(); ++i)
    for (std::size_t j = 0; j < B.coeffs().size(); ++j) {
      HahnSeries<K> t = A[i] * mal(B[j], p, static_cast<long>(i));
      c[i + j] = set[i + j] ? c[i + j] + t : t;
      set[i + j] = true;
    }
  return MahlerOperator<K>(p, std::move(c));
}

template <CoefficientField K>
MahlerOperator<K> operator+(const MahlerOperator<K>& A, const MahlerOperator<K>& B) {
  std::size_t n = std::max(A.coeffs().size(), B.coeffs().size());
  std::vector<HahnSeries<K>> c(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < A.coeffs().size() && i < B.coeffs().size())
      c[i] = A[i] + B[i];
    else
      c[i] = i < A.coeffs().size() ? A[i] : B[i];
  }
  return MahlerOperator<K>(A.radix(), std::move(c));
}

template <CoefficientField K>
struct Division {
  MahlerOperator<K> quotient;
  MahlerOperator<K> remainder;
};

// A = Q·B + R with order(R) < order(B). Each step removes the current top
// coefficient a_d exactly with q = a_d · φ^{d-m}(b_m)^{-1}.
template <CoefficientField K>
Division<K> right_divide(const MahlerOperator<K>& A, const MahlerOperator<K>& B, const Rational& ceiling) {
  const long p = A.radix();
  const long m = B.order();
  if (m < 1) throw Error(ErrorKind::PlanMismatch, "divisor must have order at least 1");
  if (!B.coeffs().back().has_certified_leading())
    throw Error(ErrorKind::ZeroDivisor, "divisor's leading coefficient has no certified leading term");
  std::vector<HahnSeries<K>> work = A.coeffs();
  const long n = A.order();
  if (n < m) {
    return {MahlerOperator<K>(p, {HahnSeries<K>()}), A};
  }
  std::vector<HahnSeries<K>> q(static_cast<std::size_t>(n - m + 1));
  for (long d = n; d >= m; --d) {
    const HahnSeries<K>& ad = work[static_cast<std::size_t>(d)];
    const long k = d - m;
    if (ad.is_exact_zero()) continue;
    // Inversion precision sized so that q is good to about `ceiling`.
    Rational inv_ceiling = ceiling;
    if (ad.has_certified_leading()) inv_ceiling = ceiling - ad.terms().front().first;
    HahnSeries<K> qk = ad * invert(mal(B.coeffs().back(), p, k), inv_ceiling);
    for (long t = 0; t < m; ++t) {
      auto& slot = work[static_cast<std::size_t>(k + t)];
      slot = slot - qk * mal(B[static_cast<std::size_t>(t)], p, k);
    }
    work[static_cast<std::size_t>(d)] = HahnSeries<K>();
    q[static_cast<std::size_t>(k)] = std::move(qk);
  }
  work.resize(static_cast<std::size_t>(m));
  return {MahlerOperator<K>(p, std::move(q)), MahlerOperator<K>(p, std::move(work))};
}

// L^{[θ_μ]}: a_i ↦ z^{(p^i-1)/(p-1)·μ} a_i.
template <CoefficientField K>
MahlerOperator<K> gauge_theta(const MahlerOperator<K>& L, const Rational& mu) {
  const long p = L.radix();
  std::vector<HahnSeries<K>> c;
  c.reserve(L.coeffs().size());
  for (std::size_t i = 0; i < L.coeffs().size(); ++i) {
    Rational w = (pow(Rational(p), static_cast<long>(i)) - 1) / Rational(p - 1) * mu;
    c.push_back(shift(L[i], w));
  }
  return MahlerOperator<K>(p, std::move(c));
}

// L^{[e_c]}: a_i ↦ c^i a_i.
template <CoefficientField K>
MahlerOperator<K> gauge_exp(const MahlerOperator<K>& L, const K& c) {
  if (is_zero(c)) throw Error(ErrorKind::ZeroDivisor, "exponential gauge by zero");
  std::vector<HahnSeries<K>> out;
  K ci(Rational(1));
  for (const auto& a : L.coeffs()) {
    out.push_back(scale(a, ci));
    ci = ci * c;
  }
  return MahlerOperator<K>(L.radix(), std::move(out));
}

inline ParametricSeries lift(const Series& f) {
  return map_coeffs(f, [](const Rational& c) { return RatFun(c); });
}

inline ParametricOperator lift(const Operator& L) {
  std::vector<ParametricSeries> c;
  for (const auto& a : L.coeffs()) c.push_back(lift(a));
  return ParametricOperator(L.radix(), std::move(c));
}

// Σ λ^i a_i φ^i over Q(λ); realizes L(g e_λ) = (L^{[e_λ]} g) e_λ.
inline ParametricOperator gauge_exp_param(const Operator& L) {
  return gauge_exp(lift(L), RatFun::lambda());
}

// L^{[g]}: a_i ↦ φ^i(g)·g^{-1}·a_i.
template <CoefficientField K>
MahlerOperator<K> gauge_unit(const MahlerOperator<K>& L, const HahnSeries<K>& g, const Rational& ceiling) {
  HahnSeries<K> ginv = invert(g, ceiling);
  std::vector<HahnSeries<K>> c;
  for (std::size_t i = 0; i < L.coeffs().size(); ++i)
    c.push_back(L[i] * mal(g, L.radix(), static_cast<long>(i)) * ginv);
  return MahlerOperator<K>(L.radix(), std::move(c));
}

// Coefficientwise comparison on masks; missing coefficients count as zero.
template <CoefficientField K>
bool eq_on_mask(const MahlerOperator<K>& A, const MahlerOperator<K>& B) {
  std::size_t n = std::max(A.coeffs().size(), B.coeffs().size());
  for (std::size_t i = 0; i < n; ++i) {
    HahnSeries<K> a = i < A.coeffs().size() ? A[i] : HahnSeries<K>();
    HahnSeries<K> b = i < B.coeffs().size() ? B[i] : HahnSeries<K>();
    if (!eq_on_mask(a, b).equal) return false;
  }
  return true;
}

template <CoefficientField K>
std::string to_string(const MahlerOperator<K>& L) {
  std::string s;
  for (std::size_t i = 0; i < L.coeffs().size(); ++i) {
    if (i) s += "\n";
    s += "a[" + std::to_string(i) + "] = " + to_string(L[i]);
  }
  return s;
}

}  // namespace mahler
