#pragma once

#include <array>

#include "fivept/geometry.hpp"
#include "fivept/tolerances.hpp"

namespace fivept {

/// 3x5 stack of bearing vectors; column i is the bearing of world point i.
struct ObservationMatrix {
  std::array<Vec3, 5> col{};

  static ObservationMatrix from_correspondences(
      const std::array<Correspondence, 5>& c, int camera);
};

/**
 * Both observation matrices rotated into the canonical frame, together with
 * the orthogonal transforms that got them there.
 *
 * Camera j's transform u_j (a product of two Householder reflectors) sends
 * the first bearing to (0, 0, +-1) and the second into the x = 0 plane, so
 * a_norm[j] = u_j * a_raw[j] with |a_norm[j](0,0)|, |a_norm[j](1,0)|,
 * |a_norm[j](0,1)| all ~ 0.
 */
struct NormalizedProblem {
  ObservationMatrix a1;  ///< camera-1 bearings, canonical frame
  ObservationMatrix a2;  ///< camera-2 bearings, canonical frame
  Mat3 u1;               ///< orthogonal transform applied to camera 1
  Mat3 u2;               ///< orthogonal transform applied to camera 2
};

/**
 * Rotates each camera's bearings into the canonical frame with two
 * Householder reflectors per camera.
 *
 * The first reflector zeroes the x and y entries of column 1; the second
 * zeroes the x entry of column 2 while leaving column 1 fixed.  Entries that
 * are already at or below tol.normalization_target are left alone (identity
 * reflector), which makes the operation idempotent.  Throws SolverError
 * kDegenerateObservation if column 1 or 2 of either camera has norm at or
 * below tol.observation_norm.
 *
 * The solution set is preserved: [R | t] solves the normalized problem iff
 * [u2^T R u1 | u2^T t] solves the raw one.
 */
NormalizedProblem normalize_observations(const ObservationMatrix& a1,
                                         const ObservationMatrix& a2,
                                         const Tolerances& tol = kDefaultTolerances);

/// Maps a pose solving the normalized problem back to the raw frame:
/// R_raw = u2^T R u1, t_raw = u2^T t.
RelativePose denormalize_pose(const RelativePose& pose, const NormalizedProblem& n);

}  // namespace fivept
