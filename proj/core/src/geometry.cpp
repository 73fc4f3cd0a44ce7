#include "fivept/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fivept/errors.hpp"

namespace fivept {

Mat3 Mat3::operator+(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.m[i] = m[i] + o.m[i];
  return r;
}

Mat3 Mat3::operator-(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.m[i] = m[i] - o.m[i];
  return r;
}

Mat3 Mat3::operator*(double s) const {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.m[i] = m[i] * s;
  return r;
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
      r(i, j) = s;
    }
  }
  return r;
}

Vec3 Mat3::operator*(const Vec3& v) const {
  return {row(0).dot(v), row(1).dot(v), row(2).dot(v)};
}

Mat3 Mat3::transposed() const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
  return r;
}

double Mat3::det() const {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

double Mat3::frobenius_norm() const {
  double s = 0.0;
  for (double e : m) s += e * e;
  return std::sqrt(s);
}

double Mat3::max_abs() const {
  double s = 0.0;
  for (double e : m) s = std::max(s, std::fabs(e));
  return s;
}

Rotation3::Rotation3(const Mat3& m, const Tolerances& tol) : m_(m) {
  const Mat3 gram = m.transposed() * m;
  const Mat3 id = Mat3::identity();
  for (int i = 0; i < 9; ++i) {
    if (std::fabs(gram.m[i] - id.m[i]) > tol.rotation_orthonormality) {
      throw std::invalid_argument("Rotation3: matrix is not orthonormal");
    }
  }
  if (std::fabs(m.det() - 1.0) > tol.rotation_orthonormality) {
    throw std::invalid_argument("Rotation3: determinant is not +1");
  }
}

UnitTranslation::UnitTranslation(const Vec3& t, const Tolerances& tol) : t_(t) {
  if (std::fabs(t.norm() - 1.0) > tol.unit_norm) {
    throw std::invalid_argument("UnitTranslation: vector is not unit length");
  }
}

UnitTranslation UnitTranslation::normalized(const Vec3& t, const Tolerances& tol) {
  const double n = t.norm();
  if (n <= tol.observation_norm) {
    throw SolverError(ErrorCode::kZeroVector,
                      "cannot normalize a (near-)zero translation");
  }
  return UnitTranslation(t * (1.0 / n), tol);
}

EssentialMatrix::EssentialMatrix(const Mat3& m, const Tolerances& tol) : m_(m) {
  const double scale = m.frobenius_norm();
  const double cubic = std::max(scale * scale * scale, 1e-300);
  if (std::fabs(m.det()) > tol.essential_invariant * cubic) {
    throw std::invalid_argument("EssentialMatrix: determinant is not ~0");
  }
  const Mat3 eet = m * m.transposed();
  const Mat3 residual = eet * m * 2.0 - m * eet.trace();
  if (residual.max_abs() > tol.essential_invariant * cubic) {
    throw std::invalid_argument("EssentialMatrix: trace identity violated");
  }
}

Mat3 skew(const Vec3& a) {
  Mat3 r;
  r(0, 0) = 0.0;   r(0, 1) = -a.z; r(0, 2) = a.y;
  r(1, 0) = a.z;   r(1, 1) = 0.0;  r(1, 2) = -a.x;
  r(2, 0) = -a.y;  r(2, 1) = a.x;  r(2, 2) = 0.0;
  return r;
}

Rotation3 cayley_to_rotation(const CayleyVector& a) {
  const double u = a.u, v = a.v, w = a.w;
  const double delta = 1.0 + u * u + v * v + w * w;
  Mat3 r;
  r(0, 0) = 1.0 + u * u - v * v - w * w;
  r(0, 1) = 2.0 * u * v + 2.0 * w;
  r(0, 2) = 2.0 * u * w - 2.0 * v;
  r(1, 0) = 2.0 * u * v - 2.0 * w;
  r(1, 1) = 1.0 - u * u + v * v - w * w;
  r(1, 2) = 2.0 * v * w + 2.0 * u;
  r(2, 0) = 2.0 * u * w + 2.0 * v;
  r(2, 1) = 2.0 * v * w - 2.0 * u;
  r(2, 2) = 1.0 - u * u - v * v + w * w;
  return Rotation3(r * (1.0 / delta));
}

CayleyVector rotation_to_cayley(const Rotation3& r, const Tolerances& tol) {
  const double tr = r.matrix().trace();
  if (std::fabs(tr + 1.0) < tol.cayley_angle_pi) {
    throw SolverError(ErrorCode::kAngleNearPi,
                      "rotation angle too close to pi for the rational map");
  }
  // trace(R) = (3 - |a|^2) / (1 + |a|^2)  =>  1 + |a|^2 = 4 / (1 + trace),
  // and the antisymmetric part gives R - R^T = -4 [a]_x / (1 + |a|^2).
  const double delta = 4.0 / (1.0 + tr);
  const Mat3& m = r.matrix();
  return CayleyVector{0.25 * delta * (m(1, 2) - m(2, 1)),
                      0.25 * delta * (m(2, 0) - m(0, 2)),
                      0.25 * delta * (m(0, 1) - m(1, 0))};
}

Rotation3 rotation_from_axis_angle(const Vec3& axis, double angle_rad) {
  const double n = axis.norm();
  if (n <= 1e-300) {
    throw SolverError(ErrorCode::kZeroVector, "rotation axis is (near-)zero");
  }
  const Vec3 k = axis * (1.0 / n);
  const Mat3 kx = skew(k);
  const Mat3 r = Mat3::identity() + kx * std::sin(angle_rad) +
                 (kx * kx) * (1.0 - std::cos(angle_rad));
  return Rotation3(r);
}

double rotation_angle_deg(const Rotation3& r) {
  const double c = std::clamp((r.matrix().trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c) * 180.0 / M_PI;
}

double angle_between_deg(const Vec3& a, const Vec3& b) {
  const double na = a.norm(), nb = b.norm();
  const double c = std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
  return std::acos(c) * 180.0 / M_PI;
}

EssentialMatrix essential_from_pose(const RelativePose& pose, const Tolerances& tol) {
  return EssentialMatrix(skew(pose.translation.vector()) * pose.rotation.matrix(), tol);
}

double epipolar_residual(const EssentialMatrix& e, const Correspondence& c) {
  return c.q2.dot(e.matrix() * c.q1);
}

CayleyVector twisted_cayley(const CayleyVector& a, const UnitTranslation& t,
                            const Tolerances& tol) {
  const double t1 = t[0], t2 = t[1], t3 = t[2];
  const double delta = a.u * t1 + a.v * t2 + a.w * t3;
  if (std::fabs(delta) <= tol.twisted_delta) {
    throw SolverError(ErrorCode::kDegenerateDelta,
                      "twisted-pair denominator u*t1 + v*t2 + w*t3 vanishes");
  }
  return CayleyVector{(-t1 - a.v * t3 + a.w * t2) / delta,
                      (-t2 - a.w * t1 + a.u * t3) / delta,
                      (-t3 - a.u * t2 + a.v * t1) / delta};
}

Mat3 householder_from_vector(const Vec3& h, const Tolerances& tol) {
  const double hh = h.squared_norm();
  if (std::sqrt(hh) <= tol.householder_zero) {
    throw SolverError(ErrorCode::kZeroVector, "reflector vector is (near-)zero");
  }
  const double s = 2.0 / hh;
  Mat3 r = Mat3::identity();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) -= s * h[i] * h[j];
  return r;
}

}  // namespace fivept
