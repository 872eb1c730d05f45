#pragma once

// Random operators with known factored form, for self-tests and property suites.

#include <random>

#include "mahler/factorize.hpp"

namespace mahler {

struct RandomOperatorConfig {
  long radix = 2;
  int max_order = 4;
  int max_h_terms = 5;   // including the leading 1
  Rational ceiling{8};   // relative precision of the expanded coefficients
};

struct RandomOperator {
  Operator L{2, {}};
  Series a;
  // factors[i] are the factors of layer i, rightmost first.
  std::vector<std::vector<FirstOrderFactor>> layers;
};

class OperatorSampler {
 public:
  explicit OperatorSampler(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

  Rational small_rational(long num_bound, long den_bound) {
    return Rational(integer(-num_bound, num_bound), integer(1, den_bound));
  }

  Rational nonzero_rational(long num_bound, long den_bound) {
    for (;;)
      if (Rational q = small_rational(num_bound, den_bound); !q.is_zero()) return q;
  }

  // 1 + Σ h_k z^{γ_k}, γ_k ∈ (0, 3] with denominators ≤ 2.
  Series unit_series(int max_terms) {
    std::vector<Series::Term> t{{Rational(0), Rational(1)}};
    const int extra = static_cast<int>(integer(0, max_terms - 1));
    for (int k = 0; k < extra; ++k) t.push_back({Rational(integer(1, 6), 2), nonzero_rational(3, 2)});
    Series s;
    for (auto& [e, c] : t) s = s + Series::monomial(c, e);
    return s;
  }

  RandomOperator sample(const RandomOperatorConfig& cfg) {
    const long p = cfg.radix;
    RandomOperator out;
    const int n = static_cast<int>(integer(1, cfg.max_order));
    static const Rational exps[] = {Rational(1), Rational(-1), Rational(2), Rational(1, 2), Rational(-2), Rational(3)};

    // Strictly increasing twists ν across layers; each layer gets ≥ 1 factor.
    const int k = static_cast<int>(integer(1, n));
    std::vector<int> sizes(static_cast<std::size_t>(k), 1);
    for (int i = k; i < n; ++i) ++sizes[static_cast<std::size_t>(integer(0, k - 1))];
    Rational nu(integer(-2, 1) * (p - 1));
    for (int i = 0; i < k; ++i) {
      if (i > 0) nu += Rational(integer(1, 4), 2) * Rational(p - 1);
      std::vector<FirstOrderFactor> layer;
      for (int l = 0; l < sizes[static_cast<std::size_t>(i)]; ++l) {
        const Rational c = exps[integer(0, 5)];
        layer.push_back({nu, c, unit_series(cfg.max_h_terms)});
      }
      out.layers.push_back(std::move(layer));
    }
    out.a = Series::monomial(nonzero_rational(3, 2), Rational(integer(-2, 2))) *
            unit_series(std::min(cfg.max_h_terms, 3));

    Operator L(p, {out.a.truncated(Bound(cfg.ceiling))});
    for (auto layer = out.layers.rbegin(); layer != out.layers.rend(); ++layer)
      for (auto f = layer->rbegin(); f != layer->rend(); ++f) L = L * factor_operator(p, *f, cfg.ceiling);
    // Relative precision: a coefficient starting high keeps `ceiling` worth of terms.
    std::vector<Series> coeffs;
    for (const auto& c : L.coeffs())
      coeffs.push_back(c.has_certified_leading() ? c.truncated(Bound(val(c) + cfg.ceiling)) : c);
    out.L = Operator(p, std::move(coeffs));
    return out;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace mahler
