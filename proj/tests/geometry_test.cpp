/**
 * @file geometry_test.cpp
 * @brief Unit tests for the 3D primitives: skew matrices, the rational
 *        rotation parameterization and its inverse, essential matrices,
 *        twisted-pair rotations, and Householder reflectors.
 *
 * Reference values are either hand-derivable closed forms or independent
 * test-side constructions (Rodrigues formula, explicit 3x3 inverse); see
 * support/test_oracles.hpp.
 */
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fivept/errors.hpp"
#include "fivept/geometry.hpp"
#include "support/test_oracles.hpp"

namespace fivept {
namespace {

using testing::frobenius_distance;
using testing::kPi;
using testing::random_unit_vector;
using testing::rodrigues_reference;

constexpr int kRandomTrials = 500;

/// Explicit adjugate-based 3x3 inverse, used only to realize the
/// matrix-inverse form of the rotation map independently of the library.
Mat3 inverse_reference(const Mat3& a) {
  Mat3 inv;
  inv(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
  inv(0, 1) = a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2);
  inv(0, 2) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
  inv(1, 0) = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
  inv(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
  inv(1, 2) = a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2);
  inv(2, 0) = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
  inv(2, 1) = a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1);
  inv(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const double det = a(0, 0) * inv(0, 0) + a(0, 1) * inv(1, 0) + a(0, 2) * inv(2, 0);
  return inv * (1.0 / det);
}

TEST(Skew, ZeroVectorGivesZeroMatrix) {
  const Mat3 s = skew(Vec3{0, 0, 0});
  for (int i = 0; i < 9; ++i) EXPECT_EQ(s.m[i], 0.0);
}

TEST(Skew, UnitXMatchesHandValue) {
  const Mat3 s = skew(Vec3{1, 0, 0});
  const Mat3 expected{{0, 0, 0, 0, 0, -1, 0, 1, 0}};
  for (int i = 0; i < 9; ++i) EXPECT_EQ(s.m[i], expected.m[i]);
}

TEST(Skew, ActsAsCrossProduct) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < kRandomTrials; ++t) {
    const Vec3 v{u(rng), u(rng), u(rng)};
    const Vec3 b{u(rng), u(rng), u(rng)};
    const Vec3 via_matrix = skew(v) * b;
    const Vec3 direct = v.cross(b);
    EXPECT_NEAR(via_matrix.x, direct.x, 1e-14);
    EXPECT_NEAR(via_matrix.y, direct.y, 1e-14);
    EXPECT_NEAR(via_matrix.z, direct.z, 1e-14);
  }
}

TEST(CayleyMap, ZeroParametersGiveIdentity) {
  const Rotation3 r = cayley_to_rotation(CayleyVector{0, 0, 0});
  EXPECT_LT(frobenius_distance(r.matrix(), Mat3::identity()), 1e-15);
}

TEST(CayleyMap, UnitUParametersMatchHandValue) {
  // a = (1, 0, 0): angle -pi/2 about the x axis,
  // R = ((1 - 1) I + 2 a a^T - 2 [a]_x) / 2.
  const Rotation3 r = cayley_to_rotation(CayleyVector{1, 0, 0});
  const Mat3 expected{{1, 0, 0, 0, 0, 1, 0, -1, 0}};
  EXPECT_LT(frobenius_distance(r.matrix(), expected), 1e-15);

  const Mat3 rodrigues = rodrigues_reference(Vec3{1, 0, 0}, -kPi / 2.0);
  EXPECT_LT(frobenius_distance(r.matrix(), rodrigues), 1e-15);
}

TEST(CayleyMap, ProducesOrthonormalMatrices) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < kRandomTrials; ++t) {
    const Rotation3 r = cayley_to_rotation(CayleyVector{u(rng), u(rng), u(rng)});
    const Mat3 gram = r.matrix().transposed() * r.matrix();
    EXPECT_LT(frobenius_distance(gram, Mat3::identity()), 1e-13);
    EXPECT_NEAR(r.matrix().det(), 1.0, 1e-13);
  }
}

TEST(CayleyMap, ClosedFormEqualsMatrixInverseForm) {
  // ((1 - |a|^2) I + 2 a a^T - 2 [a]_x) / (1 + |a|^2)  ==  (I - [a]_x)(I + [a]_x)^{-1}
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> scale(0.0, 10.0);
  for (int t = 0; t < kRandomTrials; ++t) {
    Vec3 a{u(rng), u(rng), u(rng)};
    const double n = a.norm();
    if (n == 0.0) continue;
    a = a * (scale(rng) / n);

    const Mat3 sk = skew(a);
    const Mat3 inverse_form =
        (Mat3::identity() - sk) * inverse_reference(Mat3::identity() + sk);
    const Rotation3 closed = cayley_to_rotation(CayleyVector{a.x, a.y, a.z});
    EXPECT_LT(frobenius_distance(closed.matrix(), inverse_form), 1e-13);
  }
}

TEST(CayleyInverse, IdentityGivesZeroParameters) {
  const CayleyVector a = rotation_to_cayley(Rotation3(Mat3::identity()));
  EXPECT_EQ(a.u, 0.0);
  EXPECT_EQ(a.v, 0.0);
  EXPECT_EQ(a.w, 0.0);
}

TEST(CayleyInverse, RecoversUnitUParameters) {
  const Rotation3 r(Mat3{{1, 0, 0, 0, 0, 1, 0, -1, 0}});
  const CayleyVector a = rotation_to_cayley(r);
  EXPECT_NEAR(a.u, 1.0, 1e-15);
  EXPECT_NEAR(a.v, 0.0, 1e-15);
  EXPECT_NEAR(a.w, 0.0, 1e-15);
}

TEST(CayleyInverse, RejectsAnglePi) {
  const Rotation3 half_turn(rodrigues_reference(Vec3{0, 0, 1}, kPi));
  try {
    rotation_to_cayley(half_turn);
    FAIL() << "expected an angle-near-pi failure";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAngleNearPi);
  }
}

TEST(CayleyInverse, RoundTripsRotationsAwayFromPi) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> uangle(0.0, kPi - 0.1);
  for (int t = 0; t < kRandomTrials; ++t) {
    const Mat3 m = rodrigues_reference(random_unit_vector(rng), uangle(rng));
    const Rotation3 r(m);
    const Rotation3 back = cayley_to_rotation(rotation_to_cayley(r));
    for (int i = 0; i < 9; ++i) {
      EXPECT_NEAR(back.matrix().m[i], m.m[i], 1e-11);
    }
  }
}

TEST(AxisAngle, MatchesRodriguesReference) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> uangle(-2.0 * kPi, 2.0 * kPi);
  for (int t = 0; t < kRandomTrials; ++t) {
    const Vec3 axis = random_unit_vector(rng) * 3.7;  // non-unit axis on purpose
    const double angle = uangle(rng);
    const Rotation3 r = rotation_from_axis_angle(axis, angle);
    EXPECT_LT(frobenius_distance(r.matrix(), rodrigues_reference(axis, angle)), 1e-13);
  }
}

TEST(AxisAngle, RejectsZeroAxis) {
  try {
    rotation_from_axis_angle(Vec3{0, 0, 0}, 1.0);
    FAIL() << "expected a zero-vector failure";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroVector);
  }
}

TEST(RotationAngle, RecoversConstructionAngle) {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> uangle(0.0, kPi);
  for (int t = 0; t < 100; ++t) {
    const double angle = uangle(rng);
    const Rotation3 r = rotation_from_axis_angle(random_unit_vector(rng), angle);
    EXPECT_NEAR(rotation_angle_deg(r), angle * 180.0 / kPi, 1e-6);
  }
}

TEST(EssentialMatrix, IdentityPoseGivesSkewOfTranslation) {
  const RelativePose pose{Rotation3(Mat3::identity()), UnitTranslation(Vec3{1, 0, 0})};
  const EssentialMatrix e = essential_from_pose(pose);
  EXPECT_LT(frobenius_distance(e.matrix(), skew(Vec3{1, 0, 0})), 1e-15);
}

TEST(EssentialMatrix, TranslationSpansLeftNullspace) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < kRandomTrials; ++t) {
    const Mat3 m = testing::random_rotation_matrix(rng, kPi - 0.2);
    const Vec3 tr = random_unit_vector(rng);
    const RelativePose pose{Rotation3(m), UnitTranslation(tr)};
    const EssentialMatrix e = essential_from_pose(pose);
    // t^T E = t^T [t]_x R = 0, and det(E) = 0.
    const Vec3 left = e.matrix().transposed() * tr;
    EXPECT_LT(left.norm(), 1e-14);
    EXPECT_LT(std::fabs(e.matrix().det()), 1e-14);
  }
}

TEST(EpipolarResidual, CoplanarRaysGiveZero) {
  const EssentialMatrix e(skew(Vec3{1, 0, 0}));
  const Correspondence c{Vec3{0, 0, 1}, Vec3{0, 0, 1}};
  EXPECT_EQ(epipolar_residual(e, c), 0.0);
}

TEST(EpipolarResidual, VanishesOnExactCorrespondences) {
  std::mt19937_64 rng(18);
  for (int t = 0; t < 100; ++t) {
    const auto problem = testing::make_exact_problem(rng);
    const RelativePose pose{cayley_to_rotation(problem.cayley),
                            UnitTranslation(problem.translation)};
    const EssentialMatrix e = essential_from_pose(pose);
    for (const Correspondence& c : problem.correspondences) {
      EXPECT_LT(std::fabs(epipolar_residual(e, c)), 1e-12);
    }
  }
}

TEST(EpipolarResidual, DetectsOffPlanePerturbations) {
  std::mt19937_64 rng(19);
  const auto problem = testing::make_exact_problem(rng);
  const RelativePose pose{cayley_to_rotation(problem.cayley),
                          UnitTranslation(problem.translation)};
  const EssentialMatrix e = essential_from_pose(pose);

  Correspondence c = problem.correspondences[0];
  // Push q2 off the epipolar plane by 1e-3 along the plane normal E q1.
  Vec3 normal = e.matrix() * c.q1;
  normal = normal * (1.0 / normal.norm());
  c.q2 = c.q2 + normal * 1e-3;
  c.q2 = c.q2 * (1.0 / c.q2.norm());
  EXPECT_GT(std::fabs(epipolar_residual(e, c)), 1e-6);
}

TEST(TwistedPair, HandExampleNegatesParameter) {
  const CayleyVector twisted =
      twisted_cayley(CayleyVector{1, 0, 0}, UnitTranslation(Vec3{1, 0, 0}));
  EXPECT_NEAR(twisted.u, -1.0, 1e-15);
  EXPECT_NEAR(twisted.v, 0.0, 1e-15);
  EXPECT_NEAR(twisted.w, 0.0, 1e-15);

  const UnitTranslation t(Vec3{1, 0, 0});
  const Mat3 e = skew(t.vector()) * cayley_to_rotation(CayleyVector{1, 0, 0}).matrix();
  const Mat3 e_twisted = skew(t.vector()) * cayley_to_rotation(twisted).matrix();
  EXPECT_LT(frobenius_distance(e, e_twisted * -1.0), 1e-14);
}

TEST(TwistedPair, RejectsOrthogonalParameterAndTranslation) {
  try {
    twisted_cayley(CayleyVector{0, 1, 0}, UnitTranslation(Vec3{1, 0, 0}));
    FAIL() << "expected a degenerate-delta failure";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateDelta);
  }
}

TEST(TwistedPair, FlipsEssentialMatrixSign) {
  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  int tested = 0;
  while (tested < kRandomTrials) {
    const CayleyVector a{u(rng), u(rng), u(rng)};
    const Vec3 t = random_unit_vector(rng);
    if (std::fabs(a.u * t.x + a.v * t.y + a.w * t.z) <= 0.1) continue;
    ++tested;
    const UnitTranslation ut(t);
    const CayleyVector a2 = twisted_cayley(a, ut);
    const Mat3 e1 = skew(t) * cayley_to_rotation(a).matrix();
    const Mat3 e2 = skew(t) * cayley_to_rotation(a2).matrix();
    EXPECT_LT(frobenius_distance(e1, e2 * -1.0), 1e-10);
  }
}

TEST(Householder, ReflectsThroughXYPlane) {
  const Mat3 h = householder_from_vector(Vec3{0, 0, 2});
  const Mat3 expected{{1, 0, 0, 0, 1, 0, 0, 0, -1}};
  EXPECT_LT(frobenius_distance(h, expected), 1e-15);
}

TEST(Householder, IsSymmetricAndInvolutive) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < kRandomTrials; ++t) {
    const Vec3 v{u(rng), u(rng), u(rng)};
    if (v.norm() < 1e-3) continue;
    const Mat3 h = householder_from_vector(v);
    EXPECT_LT(frobenius_distance(h, h.transposed()), 1e-14);
    EXPECT_LT(frobenius_distance(h * h, Mat3::identity()), 1e-14);
  }
}

TEST(Householder, RejectsZeroVector) {
  try {
    householder_from_vector(Vec3{0, 0, 0});
    FAIL() << "expected a zero-vector failure";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroVector);
  }
}

TEST(RotationValidation, RejectsNonOrthonormalInput) {
  Mat3 m = Mat3::identity();
  m(0, 0) = 1.001;
  EXPECT_THROW(Rotation3 r(m), std::invalid_argument);
}

TEST(UnitTranslationValidation, NormalizesArbitraryVectors) {
  const UnitTranslation t = UnitTranslation::normalized(Vec3{3, 0, 4});
  EXPECT_NEAR(t[0], 0.6, 1e-15);
  EXPECT_NEAR(t[2], 0.8, 1e-15);
  try {
    UnitTranslation::normalized(Vec3{0, 0, 0});
    FAIL() << "expected a zero-vector failure";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroVector);
  }
}

TEST(AngleBetween, MatchesKnownAngles) {
  EXPECT_NEAR(angle_between_deg(Vec3{1, 0, 0}, Vec3{0, 1, 0}), 90.0, 1e-12);
  EXPECT_NEAR(angle_between_deg(Vec3{1, 0, 0}, Vec3{-1, 0, 0}), 180.0, 1e-12);
  EXPECT_NEAR(angle_between_deg(Vec3{2, 0, 0}, Vec3{5, 0, 0}), 0.0, 1e-12);
}

}  // namespace
}  // namespace fivept
