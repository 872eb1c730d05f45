#pragma once

#include <algorithm>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "mahler/rational.hpp"

namespace mahler {

// Dense univariate polynomial over Q, coefficients indexed by degree.
class Poly {
 public:
  Poly() = default;
  Poly(Rational c) {  // NOLINT: constants embed implicitly
    if (!c.is_zero()) c_.push_back(std::move(c));
  }
  Poly(std::initializer_list<Rational> cs) : c_(cs) { trim(); }
  explicit Poly(std::vector<Rational> cs) : c_(std::move(cs)) { trim(); }

  static Poly x() { return Poly({Rational(0), Rational(1)}); }
  static Poly monomial(Rational c, std::size_t deg) {
    std::vector<Rational> v(deg + 1);
    v[deg] = std::move(c);
    return Poly(std::move(v));
  }
  // X - r
  static Poly linear(const Rational& r) { return Poly({-r, Rational(1)}); }

  bool is_zero() const noexcept { return c_.empty(); }
  // Degree of the zero polynomial is -1.
  long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
  const std::vector<Rational>& coeffs() const noexcept { return c_; }
  Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
  const Rational& leading() const { return c_.back(); }
  bool is_constant() const noexcept { return c_.size() <= 1; }
  bool is_one() const { return c_.size() == 1 && c_[0] == Rational(1); }

  Rational eval(const Rational& x) const {
    Rational acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Rational(static_cast<long>(i));
    return Poly(std::move(d));
  }

  // Coefficients of p(c + t) in t (at least one entry).
  std::vector<Rational> taylor_shift(const Rational& c) const {
    std::vector<Rational> v(c_);
    if (v.empty()) return {Rational(0)};
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
      for (std::size_t k = v.size() - 1; k > i; --k) v[k - 1] += c * v[k];
    return v;
  }

  Poly monic() const {
    if (is_zero()) return {};
    return *this * (Rational(1) / leading());
  }

  // p(s*X)
  Poly scale_var(const Rational& s) const {
    std::vector<Rational> v(c_);
    Rational f(1);
    for (auto& e : v) {
      e *= f;
      f *= s;
    }
    return Poly(std::move(v));
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Rational> v(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
    return Poly(std::move(v));
  }
  friend Poly operator-(const Poly& a) {
    std::vector<Rational> v(a.c_);
    for (auto& e : v) e = -e;
    return Poly(std::move(v));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> v(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(v));
  }
  friend Poly operator*(const Poly& a, const Rational& s) {
    if (s.is_zero()) return {};
    std::vector<Rational> v(a.c_);
    for (auto& e : v) e *= s;
    return Poly(std::move(v));
  }

  // Euclidean division: a = q*b + r with deg r < deg b.
  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "polynomial division by zero");
    std::vector<Rational> r(a.c_);
    long db = b.degree();
    if (a.degree() < db) return {Poly(), a};
    std::vector<Rational> q(static_cast<std::size_t>(a.degree() - db + 1));
    Rational inv = Rational(1) / b.leading();
    for (long k = a.degree() - db; k >= 0; --k) {
      Rational t = r[static_cast<std::size_t>(k + db)] * inv;
      q[static_cast<std::size_t>(k)] = t;
      if (t.is_zero()) continue;
      for (long i = 0; i <= db; ++i) r[static_cast<std::size_t>(k + i)] -= t * b.c_[static_cast<std::size_t>(i)];
    }
    r.resize(static_cast<std::size_t>(db));
    return {Poly(std::move(q)), Poly(std::move(r))};
  }
  friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
  friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  // Human readable, variable name configurable ("X", "λ", ...), highest degree first.
  std::string to_string(const std::string& var = "X") const {
    if (is_zero()) return "0";
    std::string out;
    for (long i = degree(); i >= 0; --i) {
      const Rational& a = c_[static_cast<std::size_t>(i)];
      if (a.is_zero()) continue;
      bool neg = a.sign() < 0;
      Rational m = neg ? -a : a;
      if (out.empty())
        out += neg ? "-" : "";
      else
        out += neg ? " - " : " + ";
      bool unit = m == Rational(1);
      if (i == 0 || !unit) out += m.to_string();
      if (i > 0) {
        if (!unit) out += "*";
        out += var;
        if (i > 1) out += "^" + std::to_string(i);
      }
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<Rational> c_;
};

inline Poly pow(const Poly& p, unsigned k) {
  Poly r(Rational(1)), b = p;
  while (k) {
    if (k & 1u) r = r * b;
    b = b * b;
    k >>= 1u;
  }
  return r;
}

// Monic gcd (zero if both are zero).
inline Poly gcd(Poly a, Poly b) {
  if (a.is_zero()) return b.is_zero() ? b : b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Poly(Rational(1));
  // Monic remainders keep the coefficients small.
  a = a.monic();
  b = b.monic();
  while (!b.is_zero()) {
    Poly r = a % b;
    a = std::move(b);
    b = r.is_zero() ? std::move(r) : r.monic();
  }
  return a;
}

struct RootSet {
  std::vector<std::pair<Rational, int>> roots;  // ascending
  Poly residual;
};

namespace detail {

// Integer coefficients with content 1 and positive leading coefficient.
inline std::vector<mpz_class> primitive_integer(const Poly& p) {
  mpz_class l(1);
  for (const auto& c : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.value().get_den_mpz_t());
  std::vector<mpz_class> v;
  mpz_class g(0);
  for (const auto& c : p.coeffs()) {
    mpz_class n = c.value().get_num() * (l / c.value().get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    v.push_back(n);
  }
  if (g != 0)
    for (auto& n : v) n /= g;
  if (!v.empty() && v.back() < 0)
    for (auto& n : v) n = -n;
  return v;
}

// Positive divisors of |n| (n != 0), by trial division.
inline std::vector<mpz_class> divisors(mpz_class n) {
  n = ::abs(n);
  std::vector<std::pair<mpz_class, unsigned>> fac;
  for (mpz_class d = 2; d * d <= n; ++d) {
    unsigned e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    if (e) fac.emplace_back(d, e);
  }
  if (n > 1) fac.emplace_back(n, 1);
  std::vector<mpz_class> out{mpz_class(1)};
  for (const auto& [q, e] : fac) {
    std::size_t sz = out.size();
    mpz_class pw = 1;
    for (unsigned i = 1; i <= e; ++i) {
      pw *= q;
      for (std::size_t j = 0; j < sz; ++j) out.push_back(out[j] * pw);
    }
  }
  return out;
}

}  // namespace detail

// All rational roots with exact multiplicities. Candidates come from the
// square-free part only; multiplicities come from dividing the original.
inline RootSet rational_roots(const Poly& p) {
  if (p.is_zero()) throw Error(ErrorKind::DivisionByZero, "rational_roots of the zero polynomial");
  RootSet out;
  Poly rest = p;
  // Root 0 is handled separately so the divisor search sees a nonzero constant term.
  int zero_mult = 0;
  while (rest.coeff(0).is_zero() && !rest.is_zero() && rest.degree() > 0) {
    rest = rest / Poly::x();
    ++zero_mult;
  }
  if (zero_mult) out.roots.emplace_back(Rational(0), zero_mult);
  if (rest.degree() >= 1) {
    Poly sqf = rest / gcd(rest, rest.derivative());
    auto ints = detail::primitive_integer(sqf);
    auto dn = detail::divisors(ints.front());
    auto dd = detail::divisors(ints.back());
    std::vector<Rational> cand;
    for (const auto& a : dn)
      for (const auto& b : dd) {
        cand.emplace_back(a, b);
        cand.emplace_back(mpz_class(-a), b);
      }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    for (const auto& r : cand) {
      if (!sqf.eval(r).is_zero()) continue;
      int m = 0;
      Poly lin = Poly::linear(r);
      for (;;) {
        auto [q, rem] = divmod(rest, lin);
        if (!rem.is_zero()) break;
        rest = q;
        ++m;
      }
      out.roots.emplace_back(r, m);
    }
  }
  std::sort(out.roots.begin(), out.roots.end());
  out.residual = rest;
  return out;
}

}  // namespace mahler
