#pragma once

#include <array>
#include <optional>
#include <vector>

#include "fivept/geometry.hpp"
#include "fivept/normalization.hpp"
#include "fivept/polysystem.hpp"
#include "fivept/roots.hpp"

namespace fivept {

/// Solution of the 4x4 nullspace problem C(w0) [uv, u, v, 1]^T = 0.
struct UvSolution {
  double u = 0.0;
  double v = 0.0;
  /// Relative defect |x_uv - u*v| / (1 + |u*v|) of the redundant first entry.
  double consistency = 0.0;
};

/**
 * Evaluates C at w0 and extracts the one-dimensional nullspace (Gaussian
 * elimination with complete pivoting; rows and columns are equilibrated to
 * unit max-abs first, which leaves the projective direction unchanged).
 * Throws SolverError kFullRankC when the smallest pivot exceeds
 * tol.fullrank_pivot_ratio times the largest (w0 is not a root), and
 * kRescaleFailure when the homogeneous solution's last entry is below
 * tol.rescale_min in the max-abs-normalized vector.
 */
UvSolution solve_uv(const PolyMatrixC& c, double w0,
                    const Tolerances& tol = kDefaultTolerances);

/// Result of Gauss-Newton refinement on the ten quartic constraints.
struct RefineResult {
  CayleyVector cayley;
  /// Residual norm at the returned point with every constraint divided by
  /// its gradient norm, making the total comparable to a distance in
  /// (u, v, w) space.
  double scaled_residual = 0.0;
  int iterations = 0;
  /// Last accepted step fell below tol.refine_step_rel * (1 + |cayley|).
  bool step_converged = false;
};

/**
 * Polishes a candidate (u, v, w) against all ten quartic constraints by
 * damped Gauss-Newton (constraints scaled by their gradient norms, step
 * halving on residual increase).  Returns the best point seen, which is the
 * start itself when no step improves on it.  Near-multiple roots of the
 * folded determinant degrade the per-root nullspace extraction; this pass
 * restores those candidates to full precision.
 */
RefineResult refine_on_quartics(const std::array<Poly3, 10>& f,
                                const CayleyVector& start,
                                const Tolerances& tol = kDefaultTolerances);

/// Numeric constraint rows at a recovered rotation: row i is
/// (R q1_i) x q2_i, so row_i . t = 0 for the matching translation.
std::array<std::array<double, 3>, 5> numeric_s_rows(const NormalizedProblem& n,
                                                    const Rotation3& r);

/**
 * Unit-norm spanning vector of the (generically one-dimensional) nullspace of
 * the 5x3 constraint matrix, sign fixed so the first component with magnitude
 * above tol.translation_sign_floor is positive.  Throws SolverError
 * kRankBelow2 when the matrix has rank < 2 (translation not unique).
 */
UnitTranslation solve_translation(const std::array<std::array<double, 3>, 5>& rows,
                                  const Tolerances& tol = kDefaultTolerances);

/// Both reconstructed depths of one observation under pose [R | t]: the
/// least-squares intersection depths (lambda1, lambda2) with
/// lambda2 q2 ~ R (lambda1 q1) + t.  Positive depths mean the point lies in
/// front of that camera.
std::array<double, 2> triangulate_depths(const Rotation3& r, const Vec3& t,
                                         const Vec3& q1, const Vec3& q2);

/// Number of correspondences whose two triangulated depths are both positive
/// under the pose (all bearings from the normalized problem).
int count_cheirality_votes(const RelativePose& pose, const NormalizedProblem& n);

/**
 * Picks, out of the four sign/twist combinations {[R | t], [R | -t],
 * [R' | t], [R' | -t]} with R' = -(I - 2 t t^T) R, the one that places the
 * observed points in front of both cameras.
 *
 * The default test uses only the first correspondence, via the closed-form
 * depth ratios c1 = -t1 / R(0,2) (or -t2 / R(1,2), whichever denominator is
 * larger) and c2 = c1 * R(2,2) + t3, corrected by the signs of the normalized
 * first bearings' z components.  With vote_all_points, all five
 * correspondences vote by triangulated-depth positivity and the candidate
 * with the most votes wins (ties keep the earlier candidate in the order
 * above).
 */
RelativePose select_candidate(const Rotation3& r, const UnitTranslation& t,
                              const NormalizedProblem& n,
                              bool vote_all_points = false);

/// Open or closed interval on the folded-root axis used to pre-filter roots
/// before pose recovery (the folded root equals w - 1/w of the true root).
struct WtildeInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Builds the folded-root interval for rotations whose combined in-plane
/// half-angles phi + psi lie in [angle_lo, angle_hi] (radians): the folded
/// root is -2 / tan(phi + psi), monotone on (0, pi).  Throws SolverError
/// kInvalidInterval unless 0 < angle_lo < angle_hi < pi.
WtildeInterval wtilde_interval_for_angles(double angle_lo, double angle_hi);

struct SolveOptions {
  /// Candidates with a worse uv-consistency defect are dropped (unless their
  /// refined quartic residual validates them, see `refine`).
  double consistency_tol = 1e-3;
  /// Keep candidates regardless of the consistency defect.
  bool keep_all = false;
  /// Polish every extracted candidate on the quartic system and also accept
  /// by the refined residual; without it acceptance falls back to the raw
  /// uv-consistency threshold alone.
  bool refine = true;
  /// Cheirality disambiguation votes with all five points instead of the
  /// closed-form first-point test.
  bool vote_all_points = false;
  /// Optional pre-filter on folded roots.
  std::optional<WtildeInterval> wtilde_filter;
  Tolerances tol{};
};

/// One recovered pose.  The pose is expressed in the raw input frame
/// (denormalized); cayley, root_w and consistency describe the normalized
/// problem it was extracted from.
struct SolutionCandidate {
  RelativePose pose;
  CayleyVector cayley;
  double root_w = 0.0;
  double consistency = 0.0;
  /// max_i |q2_i^T E q1_i| over the five (unit-normalized) raw inputs.
  double max_epipolar_residual = 0.0;
  /// Correspondences with both triangulated depths positive (0..5).
  int cheirality_votes = 0;
};

struct SolveDiagnostics {
  Poly1 w_poly;                    ///< degree-20 determinant polynomial
  Poly1 wtilde;                    ///< folded polynomial, trimmed
  int effective_degree = -1;       ///< degree of wtilde after trimming
  int n_real_roots = 0;            ///< isolated real folded roots
  int n_dropped = 0;               ///< roots discarded during recovery/filtering
  int n_unconverged = 0;           ///< polish results that hit the iteration cap
  std::vector<double> roots_wtilde;
};

struct SolveResult {
  /// Sorted by (max_epipolar_residual, root_w) ascending.  Empty when no real
  /// root yields a consistent pose — a valid outcome, not an error.
  std::vector<SolutionCandidate> candidates;
  SolveDiagnostics diagnostics;
};

/**
 * Full minimal-case relative pose solver.
 *
 * Ingests five correspondences (bearings are normalized to unit length;
 * (near-)zero vectors throw SolverError kDegenerateObservation), rotates the
 * problem into the canonical frame, assembles the quartic constraint system,
 * reduces it to the 4x4 polynomial matrix C(w), finds the real roots of the
 * folded degree-10 determinant, and recovers one disambiguated pose per
 * surviving root.  Per-root numerical failures drop that root; failures of a
 * whole stage rethrow as SolverError kDegenerateInput tagged with the stage.
 */
SolveResult solve_relative_pose(const std::array<Correspondence, 5>& observations,
                                const SolveOptions& options = {});

}  // namespace fivept
