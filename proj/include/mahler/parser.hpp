#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mahler/operator.hpp"

namespace mahler {

// Coefficient expressions: rational numbers, z, z^(q), + - * /, unary -,
// integer powers of arbitrary subexpressions.
struct Expr {
  enum class Kind { Number, Z, Neg, Add, Sub, Mul, Div, Pow };
  Kind kind;
  Rational value;  // Number: the literal; Pow: the exponent
  std::shared_ptr<const Expr> lhs, rhs;
};
using ExprPtr = std::shared_ptr<const Expr>;

inline ExprPtr make_number(Rational v) { return std::make_shared<Expr>(Expr{Expr::Kind::Number, std::move(v), {}, {}}); }
inline ExprPtr make_z() { return std::make_shared<Expr>(Expr{Expr::Kind::Z, Rational(0), {}, {}}); }
inline ExprPtr make_unary(ExprPtr x) { return std::make_shared<Expr>(Expr{Expr::Kind::Neg, Rational(0), std::move(x), {}}); }
inline ExprPtr make_binary(Expr::Kind k, ExprPtr a, ExprPtr b) {
  return std::make_shared<Expr>(Expr{k, Rational(0), std::move(a), std::move(b)});
}
inline ExprPtr make_pow(ExprPtr base, Rational e) {
  return std::make_shared<Expr>(Expr{Expr::Kind::Pow, std::move(e), std::move(base), {}});
}

inline bool same_tree(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  if ((a->kind == Expr::Kind::Number || a->kind == Expr::Kind::Pow) && a->value != b->value) return false;
  return same_tree(a->lhs, b->lhs) && same_tree(a->rhs, b->rhs);
}

struct EquationSpec {
  long p = 2;
  std::vector<ExprPtr> coeffs;  // a_0..a_n; nullptr = absent (zero)
  std::optional<Rational> ceiling;
  std::optional<long> depth;
  std::optional<bool> verify;
};

namespace detail {

class ExprParser {
 public:
  ExprParser(std::string_view src, int line, int col0) : s_(src), line_(line), col0_(col0) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, ErrorKind k = ErrorKind::SyntaxError) const {
    throw ParseError(k, msg, line_, col0_ + static_cast<int>(pos_));
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::string digits() {
    std::size_t b = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(b, pos_ - b));
  }

  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      if (eat('+'))
        e = make_binary(Expr::Kind::Add, e, term());
      else if (eat('-'))
        e = make_binary(Expr::Kind::Sub, e, term());
      else
        return e;
    }
  }
  ExprPtr term() {
    ExprPtr e = unary();
    for (;;) {
      if (eat('*'))
        e = make_binary(Expr::Kind::Mul, e, unary());
      else if (eat('/'))
        e = make_binary(Expr::Kind::Div, e, unary());
      else
        return e;
    }
  }
  ExprPtr unary() {
    if (eat('-')) return make_unary(unary());
    return power();
  }
  ExprPtr power() {
    ExprPtr base = primary();
    if (!eat('^')) return base;
    Rational e = exponent();
    if (!e.is_integer() && base->kind != Expr::Kind::Z) fail("fractional exponent allowed on z only");
    return make_pow(base, e);
  }
  // bare integer, or "(" ["-"] int ["/" int] ")"
  Rational exponent() {
    skip_ws();
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      std::string d = digits();
      if (pos_ < s_.size() && (s_[pos_] == '.' || std::isalpha(static_cast<unsigned char>(s_[pos_]))))
        fail("exponent is not a rational literal", ErrorKind::NonRationalExponentLiteral);
      return Rational::parse(d);
    }
    if (!eat('(')) fail("expected exponent after '^'");
    skip_ws();
    std::size_t start = pos_;
    int depth = 1;
    std::size_t end = pos_;
    while (end < s_.size() && depth > 0) {
      if (s_[end] == '(') ++depth;
      if (s_[end] == ')') --depth;
      if (depth > 0) ++end;
    }
    if (depth != 0) fail("unbalanced parentheses in exponent");
    std::string body;
    for (char ch : s_.substr(start, end - start))
      if (!std::isspace(static_cast<unsigned char>(ch))) body += ch;
    std::size_t i = (!body.empty() && body[0] == '-') ? 1 : 0;
    bool ok = i < body.size();
    int slashes = 0;
    for (std::size_t k = i; ok && k < body.size(); ++k) {
      if (body[k] == '/')
        ok = ++slashes == 1 && k > i && k + 1 < body.size();
      else
        ok = std::isdigit(static_cast<unsigned char>(body[k])) != 0;
    }
    if (!ok) fail("exponent '" + body + "' is not a rational literal", ErrorKind::NonRationalExponentLiteral);
    pos_ = end + 1;
    Rational q = Rational::parse(body);
    return q;
  }
  ExprPtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char ch = s_[pos_];
    if (ch == '(') {
      ++pos_;
      ExprPtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::string d = digits();
      if (pos_ < s_.size() && s_[pos_] == '.') fail("decimal literals are not supported; use fractions");
      return make_number(Rational::parse(d));
    }
    if (ch == 'z' && (pos_ + 1 >= s_.size() || !std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
      ++pos_;
      return make_z();
    }
    fail("unexpected '" + std::string(1, ch) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_, col0_;
};

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline bool is_syntactic_zero(const ExprPtr& e) {
  return !e || (e->kind == Expr::Kind::Number && e->value.is_zero());
}

}  // namespace detail

inline ExprPtr parse_expr(std::string_view text, int line = 1, int col0 = 1) {
  return detail::ExprParser(text, line, col0).parse();
}

// Line-oriented input: `p = <int>`, `a[<i>] = <expr>`, optional
// `precision = <rational>`, `depth = <int>`, `verify = true|false`; `#` comments.
inline EquationSpec parse_spec(std::string_view text) {
  EquationSpec spec;
  bool have_p = false;
  std::map<long, ExprPtr> coeffs;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::string ln = detail::trim(raw);
    if (ln.empty()) continue;
    auto eq = raw.find('=');
    if (eq == std::string::npos) throw ParseError(ErrorKind::SyntaxError, "expected 'key = value'", line, 1);
    std::string key = detail::trim(std::string_view(raw).substr(0, eq));
    std::string_view rhs = std::string_view(raw).substr(eq + 1);
    const int col = static_cast<int>(eq) + 2;
    auto scalar = [&](const std::string& what) {
      std::string v = detail::trim(rhs);
      if (v.empty()) throw ParseError(ErrorKind::SyntaxError, "missing value for " + what, line, col);
      return v;
    };
    try {
      if (key == "p") {
        Rational v = Rational::parse(scalar("p"));
        if (!v.is_integer() || v < Rational(2)) throw ParseError(ErrorKind::SyntaxError, "p must be an integer ≥ 2", line, col);
        spec.p = v.num().get_si();
        have_p = true;
      } else if (key == "precision" || key == "ceiling") {
        spec.ceiling = Rational::parse(scalar(key));
      } else if (key == "depth") {
        Rational v = Rational::parse(scalar("depth"));
        if (!v.is_integer() || v < Rational(0)) throw ParseError(ErrorKind::SyntaxError, "depth must be a nonnegative integer", line, col);
        spec.depth = v.num().get_si();
      } else if (key == "verify") {
        std::string v = scalar("verify");
        if (v != "true" && v != "false") throw ParseError(ErrorKind::SyntaxError, "verify must be true or false", line, col);
        spec.verify = v == "true";
      } else if (key.size() >= 4 && key.rfind("a[", 0) == 0 && key.back() == ']') {
        std::string idx = key.substr(2, key.size() - 3);
        if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos)
          throw ParseError(ErrorKind::SyntaxError, "bad coefficient index '" + idx + "'", line, 3);
        long i = std::stol(idx);
        if (coeffs.count(i)) throw ParseError(ErrorKind::SyntaxError, "a[" + idx + "] given twice", line, 1);
        coeffs[i] = parse_expr(rhs, line, col);
      } else {
        throw ParseError(ErrorKind::SyntaxError, "unknown key '" + key + "'", line, 1);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(ErrorKind::SyntaxError, e.what(), line, col);
    }
  }
  if (!have_p) throw ParseError(ErrorKind::SyntaxError, "missing 'p = <int>'", line + 1, 1);
  if (coeffs.empty()) throw ParseError(ErrorKind::SyntaxError, "no coefficients given", line + 1, 1);
  long n = coeffs.rbegin()->first;
  if (n < 1) throw ParseError(ErrorKind::SyntaxError, "operator order must be at least 1", line + 1, 1);
  spec.coeffs.assign(static_cast<std::size_t>(n + 1), nullptr);
  for (auto& [i, e] : coeffs) spec.coeffs[static_cast<std::size_t>(i)] = e;
  if (detail::is_syntactic_zero(spec.coeffs.front()))
    throw ParseError(ErrorKind::SyntaxError, "a[0] must be nonzero", line + 1, 1);
  if (detail::is_syntactic_zero(spec.coeffs.back()))
    throw ParseError(ErrorKind::SyntaxError, "a[" + std::to_string(n) + "] must be nonzero", line + 1, 1);
  return spec;
}

// ---------------------------------------------------------------------------
// Printing (canonical, minimally parenthesized)

namespace detail {

inline int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    default: return 5;
  }
}

inline std::string print(const Expr& e, int need);

inline std::string print_exponent(const Rational& q) {
  if (q.is_integer() && q.sign() >= 0) return q.to_string();
  return "(" + q.to_string() + ")";
}

inline std::string print(const Expr& e, int need) {
  std::string s;
  switch (e.kind) {
    case Expr::Kind::Number: s = e.value.to_string(); break;
    case Expr::Kind::Z: s = "z"; break;
    case Expr::Kind::Neg: s = "-" + print(*e.lhs, 3); break;
    case Expr::Kind::Add: s = print(*e.lhs, 1) + " + " + print(*e.rhs, 2); break;
    case Expr::Kind::Sub: s = print(*e.lhs, 1) + " - " + print(*e.rhs, 2); break;
    case Expr::Kind::Mul: s = print(*e.lhs, 2) + "*" + print(*e.rhs, 3); break;
    case Expr::Kind::Div: s = print(*e.lhs, 2) + "/" + print(*e.rhs, 3); break;
    case Expr::Kind::Pow: s = print(*e.lhs, 5) + "^" + print_exponent(e.value); break;
  }
  return precedence(e) < need ? "(" + s + ")" : s;
}

}  // namespace detail

inline std::string print(const ExprPtr& e) { return e ? detail::print(*e, 0) : "0"; }

inline std::string print(const EquationSpec& spec) {
  std::string s = "p = " + std::to_string(spec.p) + "\n";
  for (std::size_t i = 0; i < spec.coeffs.size(); ++i)
    if (spec.coeffs[i]) s += "a[" + std::to_string(i) + "] = " + print(spec.coeffs[i]) + "\n";
  if (spec.ceiling) s += "precision = " + spec.ceiling->to_string() + "\n";
  if (spec.depth) s += "depth = " + std::to_string(*spec.depth) + "\n";
  if (spec.verify) s += std::string("verify = ") + (*spec.verify ? "true" : "false") + "\n";
  return s;
}

// ---------------------------------------------------------------------------
// Elaboration into truncated series

namespace detail {

inline Series evaluate(const Expr& e, const Rational& ceiling) {
  switch (e.kind) {
    case Expr::Kind::Number: return e.value.is_zero() ? Series() : Series::constant(e.value);
    case Expr::Kind::Z: return Series::monomial(Rational(1), Rational(1));
    case Expr::Kind::Neg: return -evaluate(*e.lhs, ceiling);
    case Expr::Kind::Add: return evaluate(*e.lhs, ceiling) + evaluate(*e.rhs, ceiling);
    case Expr::Kind::Sub: return evaluate(*e.lhs, ceiling) - evaluate(*e.rhs, ceiling);
    case Expr::Kind::Mul: return (evaluate(*e.lhs, ceiling) * evaluate(*e.rhs, ceiling)).truncated(Bound(ceiling));
    case Expr::Kind::Div: {
      Series num = evaluate(*e.lhs, ceiling);
      Series den = evaluate(*e.rhs, ceiling);
      if (num.is_exact_zero()) return num;
      Rational c = num.has_certified_leading() ? ceiling - num.terms().front().first : ceiling;
      return (num * invert(den, c)).truncated(Bound(ceiling));
    }
    case Expr::Kind::Pow: {
      if (e.lhs->kind == Expr::Kind::Z) return Series::monomial(Rational(1), e.value);
      Series base = evaluate(*e.lhs, ceiling);
      long k = e.value.num().get_si();
      long a = k < 0 ? -k : k;
      Series r = Series::constant(Rational(1));
      for (long i = 0; i < a; ++i) r = (r * base).truncated(Bound(ceiling));
      return k < 0 ? invert(r, ceiling) : r;
    }
  }
  return {};
}

}  // namespace detail

// Each coefficient is certified on (-∞, ceiling) where the inputs allow it;
// divisions go through the series inverse.
inline Operator elaborate(const EquationSpec& spec, const Rational& ceiling) {
  std::vector<Series> c;
  for (const auto& e : spec.coeffs) c.push_back(e ? detail::evaluate(*e, ceiling) : Series());
  Operator L(spec.p, std::move(c));
  if (!L.coeffs().front().has_certified_leading() || !L.coeffs().back().has_certified_leading())
    throw Error(ErrorKind::ZeroDivisor, "a_0 or a_n evaluates to zero (or has no certified leading term)");
  return L;
}

}  // namespace mahler
