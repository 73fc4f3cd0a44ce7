#pragma once

#include <array>
#include <cmath>

#include "fivept/tolerances.hpp"

namespace fivept {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double squared_norm() const { return dot(*this); }
  double norm() const { return std::sqrt(squared_norm()); }
  double max_abs() const {
    return std::max(std::fabs(x), std::max(std::fabs(y), std::fabs(z)));
  }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// Dense 3x3 matrix, row-major.
struct Mat3 {
  std::array<double, 9> m{};

  static Mat3 identity() { return Mat3{{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }

  double operator()(int r, int c) const { return m[3 * r + c]; }
  double& operator()(int r, int c) { return m[3 * r + c]; }

  Vec3 row(int r) const { return {m[3 * r], m[3 * r + 1], m[3 * r + 2]}; }
  Vec3 col(int c) const { return {m[c], m[3 + c], m[6 + c]}; }

  Mat3 operator+(const Mat3& o) const;
  Mat3 operator-(const Mat3& o) const;
  Mat3 operator*(double s) const;
  Mat3 operator*(const Mat3& o) const;
  Vec3 operator*(const Vec3& v) const;

  Mat3 transposed() const;
  double trace() const { return m[0] + m[4] + m[8]; }
  double det() const;
  double frobenius_norm() const;
  double max_abs() const;
};

/// Rotation parameters (u, v, w) of the rational rotation map; the represented
/// rotation is R = ((1 - |a|^2) I + 2 a a^T - 2 [a]_x) / (1 + |a|^2) with
/// a = (u, v, w).  Every rotation except those with angle exactly pi has a
/// unique parameter vector; |a| = tan(angle / 2).
struct CayleyVector {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;
};

/// 3x3 rotation matrix validated on construction: R^T R = I and det(R) = 1,
/// each within tol.rotation_orthonormality per entry.  Violations throw
/// std::invalid_argument (these are contract checks, not data-dependent
/// solver failures).
class Rotation3 {
 public:
  explicit Rotation3(const Mat3& m, const Tolerances& tol = kDefaultTolerances);

  const Mat3& matrix() const noexcept { return m_; }
  double operator()(int r, int c) const { return m_(r, c); }
  Vec3 operator*(const Vec3& v) const { return m_ * v; }
  Rotation3 transposed() const { return Rotation3(m_.transposed()); }

 private:
  Mat3 m_;
};

/// Unit-norm translation direction (|| ||t|| - 1 || <= tol.unit_norm).
class UnitTranslation {
 public:
  explicit UnitTranslation(const Vec3& t, const Tolerances& tol = kDefaultTolerances);
  /// Normalizes an arbitrary nonzero vector (throws SolverError kZeroVector otherwise).
  static UnitTranslation normalized(const Vec3& t,
                                    const Tolerances& tol = kDefaultTolerances);

  const Vec3& vector() const noexcept { return t_; }
  double operator[](int i) const { return t_[i]; }

 private:
  Vec3 t_;
};

/// Relative pose [R | t] of camera 2 with respect to camera 1, translation up
/// to scale (stored unit-norm): a world point Q in camera-1 coordinates maps
/// to R Q + t in camera-2 coordinates.
struct RelativePose {
  Rotation3 rotation;
  UnitTranslation translation;
};

/// Essential matrix E = [t]_x R, validated on construction: det(E) = 0 and
/// 2 E E^T E - trace(E E^T) E = 0, both within tol.essential_invariant
/// relative to the matrix scale.
class EssentialMatrix {
 public:
  explicit EssentialMatrix(const Mat3& m, const Tolerances& tol = kDefaultTolerances);

  const Mat3& matrix() const noexcept { return m_; }
  double operator()(int r, int c) const { return m_(r, c); }

 private:
  Mat3 m_;
};

/// One image-pair observation: unit bearing vectors of the same world point
/// in camera 1 and camera 2.
struct Correspondence {
  Vec3 q1;
  Vec3 q2;
};

/// Cross-product matrix: skew(a) * b == a.cross(b) for all b.
Mat3 skew(const Vec3& a);

/// Closed-form evaluation of the rational rotation map (never fails; the
/// denominator 1 + |a|^2 is always >= 1).
Rotation3 cayley_to_rotation(const CayleyVector& a);

/// Inverse of the rational rotation map.  Throws SolverError kAngleNearPi
/// when |trace(R) + 1| < tol.cayley_angle_pi (angle too close to pi).
CayleyVector rotation_to_cayley(const Rotation3& r,
                                const Tolerances& tol = kDefaultTolerances);

/// Rodrigues rotation about a (not necessarily unit) axis.  Throws SolverError
/// kZeroVector for a (near-)zero axis.
Rotation3 rotation_from_axis_angle(const Vec3& axis, double angle_rad);

/// Rotation angle of R in degrees, in [0, 180].
double rotation_angle_deg(const Rotation3& r);

/// Unsigned angle between two nonzero vectors, in degrees.
double angle_between_deg(const Vec3& a, const Vec3& b);

EssentialMatrix essential_from_pose(const RelativePose& pose,
                                    const Tolerances& tol = kDefaultTolerances);

/// Signed epipolar residual q2^T E q1.
double epipolar_residual(const EssentialMatrix& e, const Correspondence& c);

/// Parameters of the twisted-pair counterpart rotation: the rotation R' with
/// [t]_x R' = -[t]_x R that shares the essential matrix up to sign.  Throws
/// SolverError kDegenerateDelta when |u t1 + v t2 + w t3| <= tol.twisted_delta.
CayleyVector twisted_cayley(const CayleyVector& a, const UnitTranslation& t,
                            const Tolerances& tol = kDefaultTolerances);

/// Householder reflector H = I - 2 h h^T / (h^T h); symmetric, involutive.
/// Throws SolverError kZeroVector when ||h|| <= tol.householder_zero.
Mat3 householder_from_vector(const Vec3& h,
                             const Tolerances& tol = kDefaultTolerances);

}  // namespace fivept
