#include <gtest/gtest.h>

#include "support/suites.hpp"

using namespace mahler;

namespace {

Rational R(long a, long b = 1) { return Rational(a, b); }
Series mono(const Rational& c, const Rational& e) { return Series::monomial(c, e); }

// Lower boundary of the polygon at abscissa x (vertices sorted by x).
Rational boundary_at(const NewtonData& nd, const Rational& x) {
  const auto& v = nd.vertices;
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    if (x >= v[i].x && x <= v[i + 1].x) return v[i].y + (x - v[i].x) * (v[i + 1].y - v[i].y) / (v[i + 1].x - v[i].x);
  return v.front().y;
}

}  // namespace

TEST(NewtonPolygon, WorkedExample) {
  Operator L = suite::worked_example(2, R(-2), R(8));
  NewtonData nd = newton_polygon(L);
  ASSERT_EQ(nd.vertices.size(), 3u);
  EXPECT_EQ(nd.vertices[0], (NewtonVertex{0, R(1), R(-2)}));
  EXPECT_EQ(nd.vertices[1], (NewtonVertex{1, R(2), R(-2)}));
  EXPECT_EQ(nd.vertices[2], (NewtonVertex{2, R(4), R(0)}));
  EXPECT_EQ(nd.slopes, (std::vector<Slope>{{R(0), 1}, {R(1), 1}}));
}

TEST(NewtonCharPoly, WorkedExample) {
  Operator L = suite::worked_example(2, R(-2), R(8));
  EXPECT_EQ(char_poly(L, R(0)), Poly({R(1), R(-1)}));
  EXPECT_EQ(char_poly(L, R(1)), Poly({R(-1), R(1)}));  // X² - X with X stripped
}

TEST(NewtonExponents, WorkedExample) {
  NewtonData nd = analyze(suite::worked_example(2, R(-2), R(8)));
  for (const auto& ex : nd.exponents) EXPECT_EQ(ex, (std::vector<Exponent>{{R(1), 1}}));
  EXPECT_TRUE(nd.all_rational());
}

TEST(NewtonExponents, RepeatedRoot) {
  // Constant coefficients of (X-1)²(X-3) = X³ - 5X² + 7X - 3.
  Operator L(2, {mono(R(-3), R(0)), mono(R(7), R(0)), mono(R(-5), R(0)), mono(R(1), R(0))});
  NewtonData nd = analyze(L);
  ASSERT_EQ(nd.slopes, (std::vector<Slope>{{R(0), 3}}));
  EXPECT_EQ(nd.exponents[0], (std::vector<Exponent>{{R(1), 2}, {R(3), 1}}));
}

TEST(NewtonExponents, IrreducibleQuadratic) {
  Operator L(2, {mono(R(1), R(0)), Series(), mono(R(1), R(0))});
  NewtonData nd = analyze(L);
  EXPECT_TRUE(nd.exponents[0].empty());
  EXPECT_EQ(nd.residuals[0].monic(), Poly({R(1), R(0), R(1)}));
  EXPECT_FALSE(nd.all_rational());
}

TEST(FrobeniusPlan, WorkedExample) {
  Operator L = suite::worked_example(2, R(-2), R(8));
  FrobeniusPlan plan = frobenius_plan(analyze(L), L);
  EXPECT_EQ(plan.nu, (std::vector<Rational>{R(0), R(2)}));
  ASSERT_NE(plan.find(R(1), 0), nullptr);
  ASSERT_NE(plan.find(R(1), 1), nullptr);
  EXPECT_EQ(plan.find(R(1), 0)->s, 0);
  EXPECT_EQ(plan.find(R(1), 1)->s, 1);
  EXPECT_EQ(plan.find(R(1), 1)->val_a0, R(-2));
}

TEST(FrobeniusPlan, SingleSlope) {
  Operator L(2, {mono(R(-1), R(0)), mono(R(1), R(0))});
  FrobeniusPlan plan = frobenius_plan(analyze(L), L);
  EXPECT_EQ(plan.nu, std::vector<Rational>{R(0)});
  ASSERT_EQ(plan.entries.size(), 1u);
  EXPECT_EQ(plan.entries[0].s, 0);
}

TEST(FrobeniusPlan, ThreeSlopesDistinctExponents) {
  // Vertices (1,0), (2,0), (4,2), (8,10): slopes 0, 1, 2; exponents 1, 2, 3.
  Operator L(2, {mono(R(1), R(0)), mono(R(-1), R(0)), mono(R(1, 2), R(2)), mono(R(-1, 6), R(10))});
  NewtonData nd = analyze(L);
  EXPECT_EQ(nd.slopes, (std::vector<Slope>{{R(0), 1}, {R(1), 1}, {R(2), 1}}));
  EXPECT_EQ(nd.exponents, (std::vector<std::vector<Exponent>>{{{R(1), 1}}, {{R(2), 1}}, {{R(3), 1}}}));
  FrobeniusPlan plan = frobenius_plan(nd, L);
  EXPECT_EQ(plan.nu, (std::vector<Rational>{R(0), R(2), R(6)}));
  for (const auto& e : plan.entries) EXPECT_EQ(e.s, 0);
}

TEST(NewtonPolygon, HullPropertyOnRandomOperators) {
  auto ops = suite::random_operators(99, 60, R(12));
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const Operator& L = ops[k].L;
    NewtonData nd = analyze(L);
    long total = 0;
    for (std::size_t j = 0; j < nd.slopes.size(); ++j) {
      total += nd.slopes[j].r;
      EXPECT_EQ(nd.slopes[j].r, nd.vertices[j + 1].index - nd.vertices[j].index);
      EXPECT_EQ(nd.charpolys[j].degree(), nd.slopes[j].r);
      if (j > 0) { EXPECT_LT(nd.slopes[j - 1].mu, nd.slopes[j].mu); }
    }
    EXPECT_EQ(total, L.order()) << "operator " << k;
    for (const auto& v : nd.vertices) EXPECT_EQ(v.y, val(L[static_cast<std::size_t>(v.index)]));
    Rational x(1);
    for (const auto& a : L.coeffs()) {
      if (a.has_certified_leading()) { EXPECT_GE(val(a), boundary_at(nd, x)) << "operator " << k; }
      x *= Rational(L.radix());
    }
  }
}
