#pragma once

#include <vector>

#include "fivept/poly.hpp"
#include "fivept/tolerances.hpp"

namespace fivept {

/// One isolating interval for a real root.
struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
  /// The polynomial changes sign over [lo, hi]; polishing can bisect safely.
  bool sign_change = false;
  /// Interval reached the width floor without separating sign-variation
  /// counts — it may hold a multiple root or a tight cluster.
  bool possibly_multiple = false;
};

/**
 * Isolates all distinct real roots with a Sturm chain: brackets are disjoint,
 * sorted by lo, and count exactly the distinct real roots inside the Cauchy
 * bound M = 1 + max|c_i| / |c_d|.  The input is trimmed at tol.trim_rel
 * first; a polynomial that trims to zero throws SolverError
 * kDegenerateZeroPolynomial, and a nonzero constant yields no brackets.
 * Chain remainders are rescaled to unit max-abs (positive factors, so signs
 * are preserved).  Intervals that cannot be split below width
 * tol.isolation_floor * (1 + |lo|) are emitted once, flagged
 * possibly_multiple.
 */
std::vector<RootBracket> sturm_isolate(const Poly1& p,
                                       const Tolerances& tol = kDefaultTolerances);

/// Same machinery restricted to an interval: brackets cover exactly the
/// distinct real roots in (lo, hi] (half-open, by sign-variation count).
std::vector<RootBracket> sturm_isolate(const Poly1& p, double lo, double hi,
                                       const Tolerances& tol = kDefaultTolerances);

/// A polished real root.
struct RealRoot {
  double x = 0.0;
  /// False when polishing hit its iteration cap; x is the best point seen.
  bool converged = false;
  /// Inherited from an isolation bracket that could not be split further.
  bool possibly_multiple = false;
};

/**
 * All real roots of p, polished, in ascending order.
 *
 * Splits the real line at |x| = 1: roots inside [-1, 1] are isolated on the
 * polynomial directly, roots outside through the reversed polynomial
 * x^deg * p(1/x), whose reciprocal roots again lie inside [-1, 1].  Both
 * passes therefore only ever evaluate on the unit interval, which keeps the
 * scheme exact for polynomials whose leading coefficients are genuinely tiny
 * (their huge roots would otherwise be destroyed by trimming and their
 * Cauchy-bound evaluations would overflow).  Exactly-zero leading
 * coefficients are roots at infinity and are not reported.  Throws
 * kDegenerateZeroPolynomial when p trims to the zero polynomial.
 */
std::vector<RealRoot> find_real_roots(const Poly1& p,
                                      const Tolerances& tol = kDefaultTolerances);

struct PolishResult {
  double root = 0.0;
  /// False when the iteration cap was reached before meeting the residual or
  /// width criterion; root is then the best point seen.
  bool converged = false;
};

/**
 * Polishes one bracketed root with Ridders' method (regula-falsi-like
 * exponential fit, guaranteed to stay inside the bracket).  Convergence:
 * |p(x)| <= tol.ridders_residual * max(1, max|coeff|) * (1 + |x|)^degree, or
 * bracket width <= tol.ridders_width * (1 + |x|).  Brackets without a sign
 * change (possibly multiple roots) return the midpoint, convergence judged by
 * the same residual test.
 */
PolishResult ridders_polish(const Poly1& p, const RootBracket& bracket,
                            const Tolerances& tol = kDefaultTolerances);

/// Larger-magnitude solution of w^2 - wt * w - 1 = 0:
/// w = wt/2 + sign(wt) sqrt((wt/2)^2 + 1); |result| >= 1, and the companion
/// solution is -1/result.
double unfold_root(double wt);

}  // namespace fivept
