#include "fivept/normalization.hpp"

#include <cmath>

#include "fivept/errors.hpp"

namespace fivept {

namespace {

// Shared sign convention: sign(0) = +1, so reflector vectors never vanish.
double sign_nonneg(double x) { return x < 0.0 ? -1.0 : 1.0; }

ObservationMatrix apply(const Mat3& m, const ObservationMatrix& a) {
  ObservationMatrix r;
  for (int i = 0; i < 5; ++i) r.col[i] = m * a.col[i];
  return r;
}

// Canonical frame for one camera: first reflector sends column 1 to
// (0, 0, -sign(z) * ||col1||), second zeroes the x entry of column 2 while
// fixing column 1.  Targets already below tol.normalization_target stay
// untouched (identity reflector) so repeating the operation is a no-op.
void normalize_camera(const ObservationMatrix& a, const Tolerances& tol,
                      ObservationMatrix* out, Mat3* u) {
  for (int i : {0, 1}) {
    if (a.col[i].norm() <= tol.observation_norm) {
      throw SolverError(ErrorCode::kDegenerateObservation,
                        "bearing column " + std::to_string(i + 1) +
                            " has (near-)zero norm");
    }
  }

  const Vec3& c1 = a.col[0];
  Mat3 h1 = Mat3::identity();
  if (std::max(std::fabs(c1.x), std::fabs(c1.y)) > tol.normalization_target) {
    const Vec3 h{c1.x, c1.y, c1.z + sign_nonneg(c1.z) * c1.norm()};
    h1 = householder_from_vector(h, tol);
  }
  const ObservationMatrix ap = apply(h1, a);

  const Vec3& c2 = ap.col[1];
  Mat3 h2 = Mat3::identity();
  if (std::fabs(c2.x) > tol.normalization_target) {
    const double m = std::sqrt(c2.x * c2.x + c2.y * c2.y);
    const Vec3 h{c2.x, c2.y + sign_nonneg(c2.y) * m, 0.0};
    h2 = householder_from_vector(h, tol);
  }

  *out = apply(h2, ap);
  *u = h2 * h1;
}

}  // namespace

ObservationMatrix ObservationMatrix::from_correspondences(
    const std::array<Correspondence, 5>& c, int camera) {
  ObservationMatrix a;
  for (int i = 0; i < 5; ++i) a.col[i] = (camera == 1) ? c[i].q1 : c[i].q2;
  return a;
}

NormalizedProblem normalize_observations(const ObservationMatrix& a1,
                                         const ObservationMatrix& a2,
                                         const Tolerances& tol) {
  NormalizedProblem n;
  normalize_camera(a1, tol, &n.a1, &n.u1);
  normalize_camera(a2, tol, &n.a2, &n.u2);
  return n;
}

RelativePose denormalize_pose(const RelativePose& pose, const NormalizedProblem& n) {
  const Mat3 r = n.u2.transposed() * pose.rotation.matrix() * n.u1;
  const Vec3 t = n.u2.transposed() * pose.translation.vector();
  return RelativePose{Rotation3(r), UnitTranslation(t)};
}

}  // namespace fivept
