#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "mahler/rational.hpp"

namespace mahler {

// A rational or ±∞; endpoints of mask intervals.
class Bound {
 public:
  enum class Kind : std::uint8_t { neg_inf, finite, pos_inf };

  Bound(Rational v) : kind_(Kind::finite), v_(std::move(v)) {}  // NOLINT
  template <std::integral I>
  Bound(I v) : Bound(Rational(v)) {}  // NOLINT

  static Bound neg_infinity() { return Bound(Kind::neg_inf); }
  static Bound pos_infinity() { return Bound(Kind::pos_inf); }

  Kind kind() const noexcept { return kind_; }
  bool is_finite() const noexcept { return kind_ == Kind::finite; }
  bool is_neg_inf() const noexcept { return kind_ == Kind::neg_inf; }
  bool is_pos_inf() const noexcept { return kind_ == Kind::pos_inf; }
  const Rational& value() const { return v_; }

  friend bool operator==(const Bound& a, const Bound& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::finite || a.v_ == b.v_);
  }
  friend std::strong_ordering operator<=>(const Bound& a, const Bound& b) {
    if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
    if (a.kind_ != Kind::finite) return std::strong_ordering::equal;
    return a.v_ <=> b.v_;
  }

  // Translation by a rational (infinities absorb).
  friend Bound operator+(const Bound& a, const Rational& s) { return a.is_finite() ? Bound(a.v_ + s) : a; }
  friend Bound operator-(const Bound& a, const Rational& s) { return a + (-s); }
  // Sum of bounds; -∞ wins over +∞ (callers use this for lower bounds only).
  friend Bound operator+(const Bound& a, const Bound& b) {
    if (a.is_neg_inf() || b.is_neg_inf()) return neg_infinity();
    if (a.is_pos_inf() || b.is_pos_inf()) return pos_infinity();
    return Bound(a.v_ + b.v_);
  }
  // Multiplication by a positive rational.
  Bound scaled(const Rational& s) const { return is_finite() ? Bound(v_ * s) : *this; }

  std::string to_string() const {
    switch (kind_) {
      case Kind::neg_inf: return "-inf";
      case Kind::pos_inf: return "inf";
      default: return v_.to_string();
    }
  }

 private:
  explicit Bound(Kind k) : kind_(k) {}
  Kind kind_;
  Rational v_;
};

inline const Bound& min(const Bound& a, const Bound& b) { return b < a ? b : a; }
inline const Bound& max(const Bound& a, const Bound& b) { return a < b ? b : a; }

// Half-open interval [lo, hi); lo = -∞ means unbounded below.
struct Interval {
  Bound lo;
  Bound hi;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// The region of exponents on which a truncated series is certified exact.
// Stored as sorted, disjoint, non-adjacent half-open intervals.
class GuaranteeMask {
 public:
  GuaranteeMask() = default;  // empty: nothing certified

  static GuaranteeMask full() { return from({{Bound::neg_infinity(), Bound::pos_infinity()}}); }
  static GuaranteeMask empty() { return {}; }
  // (-∞, c)
  static GuaranteeMask below(const Bound& c) { return from({{Bound::neg_infinity(), c}}); }
  static GuaranteeMask from(std::vector<Interval> iv) {
    GuaranteeMask m;
    m.iv_ = normalize(std::move(iv));
    return m;
  }

  const std::vector<Interval>& intervals() const noexcept { return iv_; }
  bool is_empty() const noexcept { return iv_.empty(); }
  bool is_full() const {
    return iv_.size() == 1 && iv_[0].lo.is_neg_inf() && iv_[0].hi.is_pos_inf();
  }

  bool contains(const Rational& x) const {
    // First interval with hi > x.
    auto it = std::upper_bound(iv_.begin(), iv_.end(), Bound(x),
                               [](const Bound& b, const Interval& i) { return b < i.hi; });
    return it != iv_.end() && it->lo <= Bound(x);
  }

  // End of the certified prefix (-∞, e); -∞ if there is none.
  Bound prefix_end() const {
    if (iv_.empty() || !iv_[0].lo.is_neg_inf()) return Bound::neg_infinity();
    return iv_[0].hi;
  }

  GuaranteeMask intersect(const GuaranteeMask& o) const {
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    while (i < iv_.size() && j < o.iv_.size()) {
      const Bound& lo = max(iv_[i].lo, o.iv_[j].lo);
      const Bound& hi = min(iv_[i].hi, o.iv_[j].hi);
      if (lo < hi) out.push_back({lo, hi});
      if (iv_[i].hi < o.iv_[j].hi)
        ++i;
      else
        ++j;
    }
    return from(std::move(out));
  }

  GuaranteeMask unite(const GuaranteeMask& o) const {
    std::vector<Interval> all(iv_);
    all.insert(all.end(), o.iv_.begin(), o.iv_.end());
    return from(std::move(all));
  }

  GuaranteeMask complement() const {
    std::vector<Interval> out;
    Bound cur = Bound::neg_infinity();
    for (const auto& i : iv_) {
      if (cur < i.lo) out.push_back({cur, i.lo});
      cur = i.hi;
    }
    if (cur < Bound::pos_infinity()) out.push_back({cur, Bound::pos_infinity()});
    return from(std::move(out));
  }

  GuaranteeMask shifted(const Rational& s) const {
    GuaranteeMask m = *this;
    for (auto& i : m.iv_) {
      i.lo = i.lo + s;
      i.hi = i.hi + s;
    }
    return m;
  }

  // Multiply all endpoints by s > 0.
  GuaranteeMask scaled(const Rational& s) const {
    GuaranteeMask m = *this;
    for (auto& i : m.iv_) {
      i.lo = i.lo.scaled(s);
      i.hi = i.hi.scaled(s);
    }
    return m;
  }

  // Union over t in pts of (this + t).
  // Pieces starting at or beyond `cutoff` are dropped; callers that already
  // treat [cutoff, ∞) as covered lose nothing. `pts` must be ascending.
  GuaranteeMask minkowski_points(const std::vector<Rational>& pts,
                                 const Bound& cutoff = Bound::pos_infinity()) const {
    if (iv_.empty() || pts.empty()) return {};
    std::vector<Interval> out;
    // A ray [a, ∞) shifted by all points collapses to one ray from the smallest point.
    bool ray = iv_.back().hi.is_pos_inf();
    std::size_t bounded = ray ? iv_.size() - 1 : iv_.size();
    for (const auto& t : pts) {
      if (bounded == 0 || !(iv_[0].lo + t < cutoff)) break;
      for (std::size_t k = 0; k < bounded; ++k) {
        Bound lo = iv_[k].lo + t;
        if (!(lo < cutoff)) break;
        out.push_back({lo, iv_[k].hi + t});
      }
    }
    if (ray) out.push_back({iv_.back().lo + pts.front(), Bound::pos_infinity()});
    return from(std::move(out));
  }

  // Keep only certified exponents below c.
  GuaranteeMask truncated(const Bound& c) const { return intersect(below(c)); }

  // Sound simplification: forget certified islands beyond the first n.
  GuaranteeMask coarsened(std::size_t n) const {
    if (iv_.size() <= n) return *this;
    GuaranteeMask m = *this;
    m.iv_.erase(m.iv_.begin() + static_cast<std::ptrdiff_t>(n), m.iv_.end());
    return m;
  }

  friend bool operator==(const GuaranteeMask&, const GuaranteeMask&) = default;

  std::string to_string() const {
    if (iv_.empty()) return "{}";
    std::string s;
    for (const auto& i : iv_) {
      if (!s.empty()) s += " ∪ ";
      s += (i.lo.is_neg_inf() ? "(" : "[") + i.lo.to_string() + ", " + i.hi.to_string() + ")";
    }
    return s;
  }

 private:
  static std::vector<Interval> normalize(std::vector<Interval> iv) {
    std::erase_if(iv, [](const Interval& i) { return !(i.lo < i.hi); });
    std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (auto& i : iv) {
      if (!out.empty() && i.lo <= out.back().hi) {
        if (out.back().hi < i.hi) out.back().hi = i.hi;
      } else {
        out.push_back(std::move(i));
      }
    }
    return out;
  }

  std::vector<Interval> iv_;
};

}  // namespace mahler
