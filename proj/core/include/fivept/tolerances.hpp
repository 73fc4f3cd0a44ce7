#pragma once

namespace fivept {

/**
 * Numerical thresholds used across the solver pipeline.
 *
 * All stages read their tolerances from one record so that tests can tighten
 * or loosen them uniformly instead of chasing magic numbers through the code.
 * The defaults are tuned for IEEE double precision and unit-scale inputs
 * (bearing vectors are unit, elimination rows are rescaled to unit max-abs).
 */
struct Tolerances {
  /// Per-entry bound on |R^T R - I| and on |det(R) - 1| for valid rotations.
  double rotation_orthonormality = 1e-12;
  /// Bound on | ||t|| - 1 | for unit translations.
  double unit_norm = 1e-12;
  /// Scale-relative bound for the essential-matrix identities
  /// det(E) = 0 and 2*E*E^T*E - trace(E*E^T)*E = 0.
  double essential_invariant = 1e-10;
  /// |trace(R) + 1| below this means the rotation angle is too close to pi
  /// for the rational rotation parameterization.
  double cayley_angle_pi = 1e-9;
  /// |u*t1 + v*t2 + w*t3| below this makes the twisted-pair map degenerate.
  double twisted_delta = 1e-12;
  /// Reflector vectors with norm below this are treated as zero.
  double householder_zero = 1e-300;
  /// Observation columns with norm below this are degenerate.
  double observation_norm = 1e-12;
  /// Entries already at or below this need no reflector to be zeroed
  /// (makes repeated normalization the identity).
  double normalization_target = 1e-12;
  /// Relative remainder bound for exact polynomial division.
  double poly_div_remainder = 1e-9;
  /// Pivot threshold for eliminations on rows scaled to unit max-abs.
  double pivot_rel = 1e-12;
  /// The minors that involve the first (fully reduced) correspondence carry
  /// no pure-(u,v) quartic monomials; entries above this bound in those
  /// columns mean the input was not normalized.
  double quartic_zero_rel = 1e-6;
  /// Relative bound (vs. the largest coefficient) for the palindromic
  /// coefficient symmetry of the degree-20 determinant polynomial. Poorly
  /// conditioned instances erode the symmetry to the percent level while
  /// still carrying recoverable solutions (candidate refinement re-anchors
  /// sloppy roots), so only an outright structural failure is rejected.
  double symmetry_rel = 0.5;
  /// Trailing coefficients at or below trim_rel * max|coeff| are dropped when
  /// computing the effective degree.
  double trim_rel = 1e-12;
  /// Root isolation stops splitting brackets narrower than
  /// isolation_floor * (1 + |lo|).
  double isolation_floor = 1e-12;
  /// Polishing converges when |p(x)| <= ridders_residual * sum_k |c_k||x|^k,
  /// i.e. when the value sits at the evaluation-noise floor. A few machine
  /// epsilons: any looser and clustered roots (whose local slope is shallow)
  /// are accepted well away from the actual sign change.
  double ridders_residual = 4e-16;
  /// ... or when the bracket width falls below ridders_width * (1 + |x|).
  double ridders_width = 1e-15;
  /// Polishing iteration cap; hitting it reports non-convergence.
  int ridders_max_iter = 100;
  /// The direct and reversed root-finding passes overlap in a sliver around
  /// |x| = 1; roots there within root_dedup_rel * (1 + |x|) of each other are
  /// the same root found twice.
  double root_dedup_rel = 1e-9;
  /// Half-width of the |x| = 1 sliver in which deduplication applies.
  double root_dedup_zone = 1e-6;
  /// If the smallest elimination pivot stays above fullrank_pivot_ratio times
  /// the largest, the 4x4 system has no nullspace (no solution at that root).
  /// Clustered roots leave the matrix rank-deficient only approximately (the
  /// polynomial's own coefficient noise shifts such roots, and a displaced
  /// evaluation point raises the smallest pivot to ~1e-4 in tight clusters),
  /// so the gate errs permissive; a borderline factorization merely yields
  /// extraction attempts that the refinement residual, root-ownership, and
  /// consistency checks reject if the point was not a solution after all.
  double fullrank_pivot_ratio = 1e-3;
  /// Minimal magnitude of the last (homogeneous) nullspace entry; below this
  /// the candidate cannot be rescaled to inhomogeneous form.
  double rescale_min = 1e-12;
  /// Second/first pivot ratio below this means the 5x3 system has rank < 2
  /// and the translation direction is not unique.
  double rank2_pivot_ratio = 1e-10;
  /// First translation component with magnitude above this fixes the sign
  /// convention (first significantly nonzero component positive).
  double translation_sign_floor = 1e-10;
  /// Gauss-Newton candidate refinement: iteration cap, step floor relative
  /// to 1 + |cayley| (stopping), and the acceptance bound on the
  /// gradient-scaled residual relative to 1 + |cayley|.
  int refine_max_iter = 25;
  double refine_step_rel = 1e-14;
  double refine_accept_rel = 1e-6;
  /// A refined candidate must still belong to its root: its folded w must
  /// lie closer to this root than to any other found root, and within this
  /// ceiling (relative to 1 + |root|). The ceiling is loose on purpose:
  /// distant roots are located only to the accuracy the polynomial
  /// coefficients support, which can be a few percent, and the nearest-root
  /// ownership test is what rejects convergence onto a neighboring solution.
  double refine_root_drift = 0.1;
  /// Refined candidates at the same root closer than this (relative to
  /// 1 + |cayley|) are one solution reached from different nullspace
  /// directions; farther apart they are distinct solutions of a cluster that
  /// share the root, and every one is kept.
  double refine_dedup_rel = 1e-6;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace fivept
