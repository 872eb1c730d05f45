#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mahler/poly.hpp"

namespace mahler {

// Element of Q(λ): num/den with gcd(num, den) = 1 and den monic.
class RatFun {
 public:
  RatFun() : den_(Rational(1)) {}
  RatFun(Rational c) : num_(std::move(c)), den_(Rational(1)) {}  // NOLINT
  RatFun(long c) : RatFun(Rational(c)) {}                        // NOLINT
  RatFun(Poly num) : num_(std::move(num)), den_(Rational(1)) {}  // NOLINT
  RatFun(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { reduce(); }

  static RatFun lambda() { return RatFun(Poly::x()); }
  // λ - c
  static RatFun lambda_minus(const Rational& c) { return RatFun(Poly::linear(c)); }

  const Poly& num() const noexcept { return num_; }
  const Poly& den() const noexcept { return den_; }

  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_constant() const noexcept { return num_.is_constant() && den_.is_constant(); }
  bool is_polynomial() const noexcept { return den_.is_constant(); }
  Rational constant_value() const { return num_.coeff(0); }

  friend RatFun operator+(const RatFun& a, const RatFun& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.is_polynomial() && b.is_polynomial()) return RatFun(a.num_ + b.num_, Poly(Rational(1)), Reduced{});
    // Henrici: with g = gcd(den_a, den_b) only a gcd against g is needed.
    Poly g = gcd(a.den_, b.den_);
    Poly da = a.den_ / g, db = b.den_ / g;
    Poly num = a.num_ * db + b.num_ * da;
    Poly den = a.den_ * db;
    if (!g.is_one() && !num.is_zero())
      if (Poly h = gcd(num, g); !h.is_one()) {
        num = num / h;
        den = den / h;
      }
    return RatFun(std::move(num), std::move(den), Reduced{});
  }
  friend RatFun operator-(const RatFun& a) {
    RatFun r = a;
    r.num_ = -r.num_;
    return r;
  }
  friend RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }
  friend RatFun operator*(const RatFun& a, const RatFun& b) {
    if (a.is_zero() || b.is_zero()) return RatFun();
    // Constant factors are common (lifted Q coefficients); skip the gcd work.
    if (a.is_constant()) return b.scaled(a.constant_value());
    if (b.is_constant()) return a.scaled(b.constant_value());
    // Cross-cancel: with both inputs reduced the product is then reduced too.
    Poly an = a.num_, ad = a.den_, bn = b.num_, bd = b.den_;
    if (!bd.is_constant())
      if (Poly g = gcd(an, bd); !g.is_one()) {
        an = an / g;
        bd = bd / g;
      }
    if (!ad.is_constant())
      if (Poly g = gcd(bn, ad); !g.is_one()) {
        bn = bn / g;
        ad = ad / g;
      }
    return RatFun(an * bn, ad * bd, Reduced{});
  }
  friend RatFun operator/(const RatFun& a, const RatFun& b) {
    if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by the zero rational function");
    if (b.is_constant()) return a.scaled(Rational(1) / b.constant_value());
    return RatFun(a.num_ * b.den_, a.den_ * b.num_);
  }
  RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
  RatFun& operator-=(const RatFun& o) { return *this = *this - o; }
  RatFun& operator*=(const RatFun& o) { return *this = *this * o; }

  friend bool operator==(const RatFun& a, const RatFun& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

  RatFun scaled(const Rational& s) const {
    RatFun r = *this;
    r.num_ = r.num_ * s;
    return r;
  }

  // Multiplicity of (λ - c) in the reduced denominator.
  int pole_order(const Rational& c) const {
    int k = 0;
    Poly d = den_;
    Poly lin = Poly::linear(c);
    for (;;) {
      auto [q, r] = divmod(d, lin);
      if (!r.is_zero()) return k;
      d = q;
      ++k;
    }
  }

  Rational eval(const Rational& c) const {
    Rational d = den_.eval(c);
    if (d.is_zero()) throw Error(ErrorKind::PoleAtEvaluationPoint, "pole at λ = " + c.to_string());
    return num_.eval(c) / d;
  }

  RatFun derivative() const {
    if (is_polynomial()) return RatFun(num_.derivative() * (Rational(1) / den_.leading()));
    return RatFun(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
  }

  // Taylor coefficients t_0..t_n of f at λ = c, so ∂^k f(c) = k!·t_k.
  std::vector<Rational> taylor(const Rational& c, std::size_t n) const {
    std::vector<Rational> a = num_.taylor_shift(c), b = den_.taylor_shift(c);
    if (b[0].is_zero()) throw Error(ErrorKind::PoleAtEvaluationPoint, "pole at λ = " + c.to_string());
    a.resize(std::max(a.size(), n + 1));
    b.resize(std::max(b.size(), n + 1));
    const Rational inv = Rational(1) / b[0];
    std::vector<Rational> t(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      Rational acc = a[k];
      for (std::size_t i = 1; i <= k; ++i)
        if (!b[i].is_zero()) acc -= b[i] * t[k - i];
      t[k] = acc * inv;
    }
    return t;
  }

  // f(s·λ)
  RatFun scale_var(const Rational& s) const { return RatFun(num_.scale_var(s), den_.scale_var(s)); }

  std::string to_string(const std::string& var = "λ") const {
    if (den_.is_one()) return num_.to_string(var);
    return "(" + num_.to_string(var) + ")/(" + den_.to_string(var) + ")";
  }

 private:
  struct Reduced {};
  RatFun(Poly num, Poly den, Reduced) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  void normalize() {
    if (num_.is_zero()) {
      den_ = Poly(Rational(1));
      return;
    }
    Rational l = den_.leading();
    if (l != Rational(1)) {
      Rational inv = Rational(1) / l;
      num_ = num_ * inv;
      den_ = den_ * inv;
    }
  }

  void reduce() {
    if (den_.is_zero()) throw Error(ErrorKind::DivisionByZero, "rational function with zero denominator");
    if (num_.is_zero()) {
      den_ = Poly(Rational(1));
      return;
    }
    if (!den_.is_constant()) {
      Poly g = gcd(num_, den_);
      if (!g.is_one()) {
        num_ = num_ / g;
        den_ = den_ / g;
      }
    }
    normalize();
  }

  Poly num_;
  Poly den_;
};

inline bool is_zero(const RatFun& f) { return f.is_zero(); }
inline std::string to_string(const RatFun& f) { return f.to_string(); }

// λ^k for any integer k.
inline RatFun lambda_pow(long k) {
  if (k >= 0) return RatFun(Poly::monomial(Rational(1), static_cast<std::size_t>(k)));
  return RatFun(Poly(Rational(1)), Poly::monomial(Rational(1), static_cast<std::size_t>(-k)));
}

inline RatFun pow(const RatFun& f, unsigned k) {
  RatFun r(Rational(1)), b = f;
  while (k) {
    if (k & 1u) r = r * b;
    b = b * b;
    k >>= 1u;
  }
  return r;
}

}  // namespace mahler
