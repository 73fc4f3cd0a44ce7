/**
 * @file poly_test.cpp
 * @brief Unit tests for dense univariate and trivariate polynomial
 *        arithmetic: evaluation, products, exact division, trimming, and the
 *        graded monomial enumeration.
 */
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fivept/errors.hpp"
#include "fivept/poly.hpp"

namespace fivept {
namespace {

TEST(Poly1, DegreeAndCoefficientAccess) {
  const Poly1 p({1.0, 0.0, 3.0});  // 1 + 3 x^2
  EXPECT_EQ(p.degree(), 2);
  EXPECT_EQ(p.coefficient(0), 1.0);
  EXPECT_EQ(p.coefficient(1), 0.0);
  EXPECT_EQ(p.coefficient(2), 3.0);
  EXPECT_EQ(p.coefficient(7), 0.0);
  EXPECT_EQ(Poly1::zero().degree(), -1);
  EXPECT_TRUE(Poly1({0.0, 0.0}).is_zero());
}

TEST(Poly1, HornerEvaluation) {
  const Poly1 p({-2.0, 0.0, 1.0});  // x^2 - 2
  EXPECT_NEAR(p(3.0), 7.0, 1e-15);
  EXPECT_NEAR(p(std::sqrt(2.0)), 0.0, 1e-15);
}

TEST(Poly1, ArithmeticMatchesEvaluation) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 200; ++t) {
    const Poly1 p({u(rng), u(rng), u(rng), u(rng)});
    const Poly1 q({u(rng), u(rng), u(rng)});
    const double x = u(rng);
    EXPECT_NEAR((p + q)(x), p(x) + q(x), 1e-12);
    EXPECT_NEAR((p - q)(x), p(x) - q(x), 1e-12);
    EXPECT_NEAR((p * q)(x), p(x) * q(x), 1e-12);
    EXPECT_NEAR((p * 2.5)(x), 2.5 * p(x), 1e-12);
  }
}

TEST(Poly1, DerivativeOfCubic) {
  const Poly1 p({1.0, 2.0, 3.0, 4.0});  // 1 + 2x + 3x^2 + 4x^3
  const Poly1 d = p.derivative();
  EXPECT_EQ(d.degree(), 2);
  EXPECT_EQ(d.coefficient(0), 2.0);
  EXPECT_EQ(d.coefficient(1), 6.0);
  EXPECT_EQ(d.coefficient(2), 12.0);
}

TEST(Poly1, TrimDropsTinyLeadingCoefficients) {
  const Poly1 p({1.0, 2.0, 1e-15});
  EXPECT_EQ(p.degree(), 2);
  EXPECT_EQ(p.trimmed(1e-12).degree(), 1);
  // Trimming is relative to the largest coefficient, so a uniformly tiny
  // polynomial keeps its degree.
  const Poly1 tiny({1e-15, 2e-15});
  EXPECT_EQ(tiny.trimmed(1e-12).degree(), 1);
  EXPECT_EQ(Poly1::zero().trimmed(1e-12).degree(), -1);
}

TEST(Poly1, ShiftMultipliesByPowers) {
  const Poly1 p({1.0, 1.0});  // 1 + x
  const Poly1 s = p.shifted_up(2);
  EXPECT_EQ(s.degree(), 3);
  EXPECT_EQ(s.coefficient(0), 0.0);
  EXPECT_EQ(s.coefficient(2), 1.0);
  EXPECT_EQ(s.coefficient(3), 1.0);
}

TEST(GradedMonomials, OrderedByDegreeThenLex) {
  const auto m2 = monomials_graded_desc(2);
  ASSERT_EQ(m2.size(), 10u);  // C(2+3, 3)
  // Degree 2 block first, u^2 leading, w^2 closing it; then the linear
  // block; the constant last.
  EXPECT_TRUE((m2[0] == Monomial{2, 0, 0}));
  EXPECT_TRUE((m2[1] == Monomial{1, 1, 0}));
  EXPECT_TRUE((m2[2] == Monomial{1, 0, 1}));
  EXPECT_TRUE((m2[3] == Monomial{0, 2, 0}));
  EXPECT_TRUE((m2[4] == Monomial{0, 1, 1}));
  EXPECT_TRUE((m2[5] == Monomial{0, 0, 2}));
  EXPECT_TRUE((m2[6] == Monomial{1, 0, 0}));
  EXPECT_TRUE((m2[9] == Monomial{0, 0, 0}));

  const auto m4 = monomials_graded_desc(4);
  EXPECT_EQ(m4.size(), 35u);  // C(4+3, 3)
}

Poly3 delta_poly() {
  Poly3 d = Poly3::constant(1.0);
  d.add_coefficient(2, 0, 0, 1.0);
  d.add_coefficient(0, 2, 0, 1.0);
  d.add_coefficient(0, 0, 2, 1.0);
  return d;
}

Poly3 random_poly3(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Poly3 p;
  for (const Monomial& m : monomials_graded_desc(degree)) {
    p.set_coefficient(m.a, m.b, m.c, u(rng));
  }
  return p;
}

TEST(Poly3, DifferenceOfSquares) {
  Poly3 one_plus_u = Poly3::constant(1.0);
  one_plus_u.add_coefficient(1, 0, 0, 1.0);
  Poly3 one_minus_u = Poly3::constant(1.0);
  one_minus_u.add_coefficient(1, 0, 0, -1.0);

  const Poly3 p = poly3_mul(one_plus_u, one_minus_u);
  EXPECT_NEAR(p.coefficient(0, 0, 0), 1.0, 1e-15);
  EXPECT_NEAR(p.coefficient(1, 0, 0), 0.0, 1e-15);
  EXPECT_NEAR(p.coefficient(2, 0, 0), -1.0, 1e-15);
  EXPECT_EQ(p.total_degree(), 2);
}

TEST(Poly3, MultiplicationByOneIsIdentity) {
  std::mt19937_64 rng(42);
  const Poly3 p = random_poly3(rng, 3);
  const Poly3 q = poly3_mul(p, Poly3::constant(1.0));
  for (const Monomial& m : monomials_graded_desc(3)) {
    EXPECT_EQ(q.coefficient(m.a, m.b, m.c), p.coefficient(m.a, m.b, m.c));
  }
}

TEST(Poly3, ProductMatchesPointwiseEvaluation) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const Poly3 p = random_poly3(rng, 2);
    const Poly3 q = random_poly3(rng, 2);
    const Poly3 pq = poly3_mul(p, q);
    for (int k = 0; k < 20; ++k) {
      const double x = u(rng), y = u(rng), z = u(rng);
      const double expected = p(x, y, z) * q(x, y, z);
      EXPECT_NEAR(pq(x, y, z), expected, 1e-10 * (1.0 + std::fabs(expected)));
    }
  }
}

TEST(Poly3, ProductBeyondSupportedDegreeThrows) {
  std::mt19937_64 rng(44);
  const Poly3 p = random_poly3(rng, 4);
  const Poly3 q = random_poly3(rng, 3);
  try {
    poly3_mul(p, q);
    FAIL() << "expected a degree-overflow failure";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegreeOverflow);
  }
}

TEST(Poly3, ExactDivisionRecoversCofactor) {
  Poly3 u_plus_w;
  u_plus_w.set_coefficient(1, 0, 0, 1.0);
  u_plus_w.set_coefficient(0, 0, 1, 1.0);

  const Poly3 product = poly3_mul(delta_poly(), u_plus_w);
  const Poly3 quotient = poly3_div_exact(product, delta_poly());
  EXPECT_NEAR(quotient.coefficient(1, 0, 0), 1.0, 1e-12);
  EXPECT_NEAR(quotient.coefficient(0, 0, 1), 1.0, 1e-12);
  EXPECT_EQ(quotient.total_degree(), 1);
}

TEST(Poly3, DeltaSquaredOverDeltaIsDelta) {
  const Poly3 d = delta_poly();
  const Poly3 q = poly3_div_exact(poly3_mul(d, d), d);
  for (const Monomial& m : monomials_graded_desc(2)) {
    EXPECT_NEAR(q.coefficient(m.a, m.b, m.c), d.coefficient(m.a, m.b, m.c), 1e-12);
  }
}

TEST(Poly3, InexactDivisionThrows) {
  Poly3 u_only;
  u_only.set_coefficient(1, 0, 0, 1.0);
  try {
    poly3_div_exact(u_only, delta_poly());
    FAIL() << "expected an inexact-division failure";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInexactDivision);
  }
}

TEST(Poly3, RandomProductsDivideExactly) {
  std::mt19937_64 rng(45);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const Poly3 f = random_poly3(rng, 4);
    const Poly3 product = poly3_mul(f, delta_poly());
    const Poly3 quotient = poly3_div_exact(product, delta_poly());
    for (int k = 0; k < 10; ++k) {
      const double x = u(rng), y = u(rng), z = u(rng);
      EXPECT_NEAR(quotient(x, y, z), f(x, y, z), 1e-10);
    }
  }
}

}  // namespace
}  // namespace fivept
