#pragma once

#include <array>
#include <vector>

#include "fivept/errors.hpp"
#include "fivept/tolerances.hpp"

namespace fivept {

/// Dense univariate polynomial with real coefficients, stored ascending:
/// coefficient(k) multiplies x^k.
class Poly1 {
 public:
  Poly1() = default;
  /// Coefficients in ascending order of degree.
  explicit Poly1(std::vector<double> ascending);

  static Poly1 zero() { return Poly1(); }
  static Poly1 constant(double c) { return Poly1({c}); }

  /// Degree of the stored representation; -1 for the zero polynomial.
  int degree() const;
  /// Coefficient of x^k (0 beyond the stored length).
  double coefficient(int k) const;
  double max_abs_coefficient() const;
  bool is_zero() const { return degree() < 0; }

  double operator()(double x) const;  ///< Horner evaluation

  Poly1 operator+(const Poly1& o) const;
  Poly1 operator-(const Poly1& o) const;
  Poly1 operator*(const Poly1& o) const;  ///< full convolution
  Poly1 operator*(double s) const;

  Poly1 derivative() const;
  /// Drops trailing (leading-degree) coefficients with magnitude at or below
  /// rel * max|coefficient|; the zero polynomial trims to itself.
  Poly1 trimmed(double rel) const;
  /// x^k * p.
  Poly1 shifted_up(int k) const;

  const std::vector<double>& coefficients() const { return c_; }

 private:
  std::vector<double> c_;
};

/// Exponent triple of a trivariate monomial u^a v^b w^c.
struct Monomial {
  int a = 0;
  int b = 0;
  int c = 0;
  int degree() const { return a + b + c; }
  bool operator==(const Monomial& o) const {
    return a == o.a && b == o.b && c == o.c;
  }
};

/// All monomials of total degree <= max_degree, in graded order: degree
/// descending, and within a degree lexicographic with u > v > w (so u^d
/// first, w^d last).
std::vector<Monomial> monomials_graded_desc(int max_degree);

/**
 * Dense trivariate polynomial in (u, v, w) of total degree <= 6 — large
 * enough for the 3x3 minors of the quadratic constraint matrix, which is the
 * only product this pipeline forms.
 */
class Poly3 {
 public:
  static constexpr int kMaxDegree = 6;
  static constexpr int kNumCoefficients = 84;  // C(6+3, 3)

  Poly3() = default;

  static Poly3 constant(double c);

  double coefficient(int a, int b, int c) const;
  void set_coefficient(int a, int b, int c, double value);
  void add_coefficient(int a, int b, int c, double value);

  /// Largest total degree carrying a nonzero coefficient; -1 if zero.
  int total_degree() const;
  double max_abs_coefficient() const;

  double operator()(double u, double v, double w) const;

  Poly3 operator+(const Poly3& o) const;
  Poly3 operator-(const Poly3& o) const;
  Poly3 operator*(double s) const;
  Poly3& operator+=(const Poly3& o);

 private:
  std::array<double, kNumCoefficients> c_{};

  friend Poly3 poly3_mul(const Poly3&, const Poly3&);
  friend Poly3 poly3_div_exact(const Poly3&, const Poly3&, const Tolerances&);
};

/// Product; throws SolverError kDegreeOverflow if the result would exceed
/// total degree 6.
Poly3 poly3_mul(const Poly3& p, const Poly3& q);

/// Exact division p / d for divisors that divide p exactly (up to roundoff).
/// Throws SolverError kInexactDivision when the remainder exceeds
/// tol.poly_div_remainder * max|coeff(p)|.
Poly3 poly3_div_exact(const Poly3& p, const Poly3& d,
                      const Tolerances& tol = kDefaultTolerances);

}  // namespace fivept
