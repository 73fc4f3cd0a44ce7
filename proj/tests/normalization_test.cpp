/**
 * @file normalization_test.cpp
 * @brief Unit tests for the canonical-frame transformation: the two
 *        Householder reflections per camera that zero the leading bearing
 *        entries, and the inverse pose transform.
 */
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fivept/errors.hpp"
#include "fivept/normalization.hpp"
#include "support/test_oracles.hpp"

namespace fivept {
namespace {

using testing::frobenius_distance;
using testing::make_exact_problem;
using testing::random_unit_vector;

constexpr int kRandomTrials = 200;
constexpr double kZeroedEntryBound = 1e-13;

ObservationMatrix random_observations(std::mt19937_64& rng) {
  ObservationMatrix a;
  for (int i = 0; i < 5; ++i) a.col[i] = random_unit_vector(rng);
  return a;
}

TEST(Normalization, AlignedInputNeedsOnlyAxisFlips) {
  // Column 1 already on the optical axis, column 2 already in the x = 0
  // plane: the canonical frame is reached by reflections that keep both.
  const double s = std::sin(0.3);
  const double c = std::cos(0.3);
  ObservationMatrix a;
  a.col[0] = Vec3{0, 0, 1};
  a.col[1] = Vec3{0, s, c};
  a.col[2] = Vec3{0, 1, 0};
  a.col[3] = Vec3{s, 0, c};
  a.col[4] = Vec3{0, 0, 1};

  const NormalizedProblem n = normalize_observations(a, a);
  EXPECT_LE(std::fabs(n.a1.col[0].x), kZeroedEntryBound);
  EXPECT_LE(std::fabs(n.a1.col[0].y), kZeroedEntryBound);
  EXPECT_LE(std::fabs(n.a1.col[1].x), kZeroedEntryBound);
  EXPECT_NEAR(std::fabs(n.a1.col[0].z), 1.0, 1e-15);
}

TEST(Normalization, ZeroesTargetEntriesForRandomInput) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < kRandomTrials; ++t) {
    const NormalizedProblem n =
        normalize_observations(random_observations(rng), random_observations(rng));
    for (const ObservationMatrix* a : {&n.a1, &n.a2}) {
      EXPECT_LE(std::fabs(a->col[0].x), kZeroedEntryBound);
      EXPECT_LE(std::fabs(a->col[0].y), kZeroedEntryBound);
      EXPECT_LE(std::fabs(a->col[1].x), kZeroedEntryBound);
    }
  }
}

TEST(Normalization, TransformsAreOrthogonalAndInvertible) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < kRandomTrials; ++t) {
    const ObservationMatrix a1 = random_observations(rng);
    const ObservationMatrix a2 = random_observations(rng);
    const NormalizedProblem n = normalize_observations(a1, a2);

    EXPECT_LT(frobenius_distance(n.u1.transposed() * n.u1, Mat3::identity()), 1e-14);
    EXPECT_LT(frobenius_distance(n.u2.transposed() * n.u2, Mat3::identity()), 1e-14);

    // U^T applied to the canonical bearings reproduces the raw ones.
    for (int i = 0; i < 5; ++i) {
      const Vec3 back1 = n.u1.transposed() * n.a1.col[i];
      const Vec3 back2 = n.u2.transposed() * n.a2.col[i];
      EXPECT_LT((back1 - a1.col[i]).norm(), 1e-13);
      EXPECT_LT((back2 - a2.col[i]).norm(), 1e-13);
    }
  }
}

TEST(Normalization, IsIdempotent) {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 50; ++t) {
    const NormalizedProblem once =
        normalize_observations(random_observations(rng), random_observations(rng));
    const NormalizedProblem twice = normalize_observations(once.a1, once.a2);
    EXPECT_LT(frobenius_distance(twice.u1, Mat3::identity()), 1e-12);
    EXPECT_LT(frobenius_distance(twice.u2, Mat3::identity()), 1e-12);
  }
}

TEST(Normalization, RejectsZeroLeadingColumns) {
  std::mt19937_64 rng(34);
  ObservationMatrix good = random_observations(rng);
  ObservationMatrix bad = random_observations(rng);
  bad.col[0] = Vec3{0, 0, 0};
  try {
    normalize_observations(bad, good);
    FAIL() << "expected a degenerate-observation failure";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateObservation);
  }
}

TEST(Denormalization, IdentityTransformsAreANoOp) {
  NormalizedProblem n;
  n.u1 = Mat3::identity();
  n.u2 = Mat3::identity();
  const RelativePose pose{cayley_to_rotation(CayleyVector{0.1, -0.2, 0.3}),
                          UnitTranslation::normalized(Vec3{1, 2, 3})};
  const RelativePose out = denormalize_pose(pose, n);
  EXPECT_LT(frobenius_distance(out.rotation.matrix(), pose.rotation.matrix()), 1e-15);
  EXPECT_LT((out.translation.vector() - pose.translation.vector()).norm(), 1e-15);
}

TEST(Denormalization, RecoversGroundTruthPose) {
  std::mt19937_64 rng(35);
  for (int t = 0; t < kRandomTrials; ++t) {
    const auto problem = make_exact_problem(rng);
    const Rotation3 r_gt = cayley_to_rotation(problem.cayley);
    const Vec3 t_gt = problem.translation;

    const ObservationMatrix a1 =
        ObservationMatrix::from_correspondences(problem.correspondences, 1);
    const ObservationMatrix a2 =
        ObservationMatrix::from_correspondences(problem.correspondences, 2);
    const NormalizedProblem n = normalize_observations(a1, a2);

    // Push the ground truth into the canonical frame and back.
    const Rotation3 r_norm(n.u2 * r_gt.matrix() * n.u1.transposed());
    const UnitTranslation t_norm(n.u2 * t_gt);
    const RelativePose back = denormalize_pose({r_norm, t_norm}, n);

    EXPECT_LT(frobenius_distance(back.rotation.matrix(), r_gt.matrix()), 1e-12);
    EXPECT_LT((back.translation.vector() - t_gt).norm(), 1e-12);
  }
}

TEST(Denormalization, PreservesEpipolarConstraints) {
  // A pose satisfying the canonical-frame constraints must, after
  // denormalization, satisfy the raw-frame constraints.
  std::mt19937_64 rng(36);
  for (int t = 0; t < kRandomTrials; ++t) {
    const auto problem = make_exact_problem(rng);
    const ObservationMatrix a1 =
        ObservationMatrix::from_correspondences(problem.correspondences, 1);
    const ObservationMatrix a2 =
        ObservationMatrix::from_correspondences(problem.correspondences, 2);
    const NormalizedProblem n = normalize_observations(a1, a2);

    const Rotation3 r_norm(n.u2 * cayley_to_rotation(problem.cayley).matrix() *
                           n.u1.transposed());
    const UnitTranslation t_norm(n.u2 * problem.translation);

    // Sanity: the transformed pose solves the normalized problem.
    const EssentialMatrix e_norm = essential_from_pose({r_norm, t_norm});
    for (int i = 0; i < 5; ++i) {
      EXPECT_LT(std::fabs(epipolar_residual(e_norm, {n.a1.col[i], n.a2.col[i]})), 1e-11);
    }

    const RelativePose raw = denormalize_pose({r_norm, t_norm}, n);
    const EssentialMatrix e_raw = essential_from_pose(raw);
    for (const Correspondence& c : problem.correspondences) {
      EXPECT_LT(std::fabs(epipolar_residual(e_raw, c)), 1e-11);
    }
  }
}

}  // namespace
}  // namespace fivept
