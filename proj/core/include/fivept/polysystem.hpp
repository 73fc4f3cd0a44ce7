#pragma once

#include <array>

#include "fivept/normalization.hpp"
#include "fivept/poly.hpp"

namespace fivept {

/**
 * Scaled epipolar constraint matrix: row i is the polynomial row vector
 * (Rbar(u,v,w) q1_i) x q2_i, where Rbar = (1 + u^2 + v^2 + w^2) R is the
 * polynomial form of the rational rotation map.  Entries are quadratic in
 * (u, v, w); for the true parameters, S_bar * t = 0 for the true translation.
 */
using SbarMatrix = std::array<std::array<Poly3, 3>, 5>;

SbarMatrix build_sbar(const NormalizedProblem& n);

/**
 * The ten quartic constraints: f_k = det3(rows i<j<l of S_bar) / Delta with
 * Delta = 1 + u^2 + v^2 + w^2, one per row triple in lexicographic order
 * (0,1,2), (0,1,3), ..., (2,3,4).  Each minor is divisible by Delta exactly
 * once; the quotient has total degree <= 4.  The 3x3 minors of the *numeric*
 * constraint matrix S = S_bar / Delta equal f_k / Delta^2.
 */
std::array<Poly3, 10> build_f_polynomials(const SbarMatrix& sbar,
                                          const Tolerances& tol = kDefaultTolerances);

/**
 * Column basis of the expanded linear system: the 15 degree-5 monomials
 * divisible by w plus the 35 monomials of total degree <= 4, arranged in
 * elimination order — 24 leading monomials first, then the fixed 26-monomial
 * tail
 *
 *   u^3 w^2, u^3 w, u^3, v^3 w^2, v^3 w, v^3,
 *   u v w^3, u v w^2, u v w, u v,
 *   u w^4, u w^3, u w^2, u w, u,
 *   v w^4, v w^3, v w^2, v w, v,
 *   w^5, w^4, w^3, w^2, w, 1
 *
 * whose first six members are the pivot block of the final reduction and
 * whose last twenty (the u v / u / v / 1 groups) parameterize the candidate
 * extraction.
 */
class MonomialOrder50 {
 public:
  static constexpr int kSize = 50;
  static constexpr int kTailStart = 24;       ///< first tail column
  static constexpr int kFreeStart = 30;       ///< first column after the pivot block
  static constexpr int kPivotCount = 6;       ///< u^3 w^2 ... v^3

  static const MonomialOrder50& instance();

  const std::array<Monomial, kSize>& monomials() const { return mono_; }
  /// Index of u^a v^b w^c in the basis, or -1 if absent.
  int index_of(int a, int b, int c) const;
  /// All 50 basis monomials evaluated at (u, v, w), in column order.
  std::array<double, kSize> monomial_vector(double u, double v, double w) const;

 private:
  MonomialOrder50();
  std::array<Monomial, kSize> mono_;
  int index_[6][6][7];  // a <= 5, b <= 5, c <= 6 covers every basis monomial
};

/// 30x50 coefficient matrix of {reduced f_k} + {u, v multiples of the five
/// quartic-free rows} + {w multiples of all ten rows} over MonomialOrder50.
struct ExpandedSystem {
  std::array<std::array<double, MonomialOrder50::kSize>, 30> rows{};
};

/**
 * Reduces the 10x35 coefficient matrix of the f_k so its last five rows are
 * free of the five pure-(u,v) quartics {u^4, u^3 v, u^2 v^2, u v^3, v^4},
 * then stacks the reduced rows with their u-, v-, and w-multiples.  Rows are
 * rescaled to unit max-abs before elimination.  Throws SolverError
 * kRankDeficientB when one of the five quartic pivots cannot be found.
 */
ExpandedSystem build_expanded_matrix(const std::array<Poly3, 10>& f,
                                     const Tolerances& tol = kDefaultTolerances);

/**
 * 4x4 matrix of univariate polynomials in w acting on [u v, u, v, 1]^T;
 * column-degree caps {4, 5, 5, 6}.  Rows are the differences h_k of adjacent
 * reduced rows; C(w0) [u0 v0, u0, v0, 1]^T = 0 at every solution (u0, v0, w0).
 */
struct PolyMatrixC {
  std::array<std::array<Poly1, 4>, 4> entry;
  static constexpr std::array<int, 4> kColumnDegreeCap{4, 5, 5, 6};
};

struct ReducedSystem {
  PolyMatrixC c;
  /// The six fully reduced rows g_1..g_6 over the 26-column tail (identity
  /// on the pivot block), kept for diagnostics and tests.
  std::array<std::array<double, 26>, 6> tail_rows{};
};

/**
 * Eliminates the 24 leading columns (partial pivoting, rows rescaled to unit
 * max-abs first), then fully reduces the remaining six rows on the pivot
 * block u^3 w^2 ... v^3, and assembles C(w) from the differences
 * h_1 = g_1 - w g_2, h_2 = g_2 - w g_3, h_3 = g_4 - w g_5, h_4 = g_5 - w g_6.
 * Throws SolverError kUnexpectedPivotPattern when any required pivot is
 * missing.
 */
ReducedSystem reduce_and_extract_c(const ExpandedSystem& x,
                                   const Tolerances& tol = kDefaultTolerances);

/// det C(w), expanded exactly by cofactors; degree <= 20.  For valid input
/// the coefficients are palindromic up to alternating signs:
/// c_{10-k} = (-1)^k c_{10+k}.
Poly1 determinant_c(const PolyMatrixC& c);

/**
 * Degree reduction of the palindromic degree-20 polynomial W: returns the
 * unique degree-10 polynomial Wt with W(w) = w^10 * Wt(w - 1/w), found by
 * triangular back-substitution on the binomial expansion of
 * w^(10-k) (w^2 - 1)^k.  Verifies the coefficient symmetry first and throws
 * SolverError kSymmetryViolation beyond tol.symmetry_rel * max|coeff|.
 */
Poly1 fold_symmetric(const Poly1& w_poly, const Tolerances& tol = kDefaultTolerances);

}  // namespace fivept
