#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include "mahler/error.hpp"

namespace mahler {

// Exact rational number, always in lowest terms with positive denominator.
class Rational {
 public:
  Rational() = default;

  template <std::integral I>
  Rational(I n) : q_(static_cast<long>(n)) {}  // NOLINT: implicit by design

  Rational(long num, long den) {
    if (den == 0) throw Error(ErrorKind::DivisionByZero, "rational with zero denominator");
    q_ = mpq_class(mpz_class(num), mpz_class(den));
    q_.canonicalize();
  }

  Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw Error(ErrorKind::DivisionByZero, "rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }

  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  // Accepts "a", "-a", "a/b".
  static Rational parse(std::string_view s) {
    std::string str(s);
    if (str.empty()) throw Error(ErrorKind::SyntaxError, "empty rational literal");
    std::size_t slash = str.find('/');
    mpz_class num, den(1);
    auto valid_int = [](const std::string& t) {
      std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
      if (i >= t.size()) return false;
      for (; i < t.size(); ++i)
        if (t[i] < '0' || t[i] > '9') return false;
      return true;
    };
    std::string a = str.substr(0, slash);
    if (!a.empty() && a[0] == '+') a.erase(0, 1);
    if (!valid_int(a)) throw Error(ErrorKind::SyntaxError, "bad rational literal '" + str + "'");
    num.set_str(a, 10);
    if (slash != std::string::npos) {
      std::string b = str.substr(slash + 1);
      if (!valid_int(b) || b[0] == '-' || b[0] == '+')
        throw Error(ErrorKind::SyntaxError, "bad rational literal '" + str + "'");
      den.set_str(b, 10);
    }
    return Rational(num, den);
  }

  const mpq_class& value() const noexcept { return q_; }
  mpz_class num() const { return q_.get_num(); }
  mpz_class den() const { return q_.get_den(); }

  bool is_zero() const noexcept { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const noexcept { return sgn(q_); }

  std::string to_string() const { return q_.get_str(); }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw Error(ErrorKind::DivisionByZero, "rational division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

  std::size_t hash() const {
    return std::hash<std::string>{}(to_string());
  }

 private:
  mpq_class q_{0};
};

inline bool is_zero(const Rational& r) { return r.is_zero(); }
inline std::string to_string(const Rational& r) { return r.to_string(); }

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

// r^k for any integer k (k < 0 requires r != 0).
inline Rational pow(const Rational& r, long k) {
  if (k < 0) {
    if (r.is_zero()) throw Error(ErrorKind::DivisionByZero, "zero to a negative power");
    return Rational(1) / pow(r, -k);
  }
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), r.value().get_num_mpz_t(), static_cast<unsigned long>(k));
  mpz_pow_ui(d.get_mpz_t(), r.value().get_den_mpz_t(), static_cast<unsigned long>(k));
  return Rational(n, d);
}

inline Rational floor_div(const Rational& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.value().get_num_mpz_t(), r.value().get_den_mpz_t());
  return Rational(q, mpz_class(1));
}

inline Rational binomial(long n, long k) {
  if (k < 0 || k > n) return Rational(0);
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(b, mpz_class(1));
}

inline Rational factorial(long n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(f, mpz_class(1));
}

}  // namespace mahler

template <>
struct std::hash<mahler::Rational> {
  std::size_t operator()(const mahler::Rational& r) const { return r.hash(); }
};
