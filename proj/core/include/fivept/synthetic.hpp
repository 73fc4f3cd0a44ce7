#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fivept/geometry.hpp"
#include "fivept/recovery.hpp"

namespace fivept {

enum class Scenario {
  kDefault,        ///< random depths, random baseline direction
  kPlanarForward,  ///< all points on the plane z = distance, forward motion
};

const char* to_string(Scenario s);

/**
 * Synthetic-camera setup mirroring the classic minimal-solver benchmark:
 * image 352x288, 45-degree horizontal field of view, scene one unit away
 * with half a unit of depth, baseline a tenth of the scene distance.
 */
struct SceneConfig {
  Scenario scenario = Scenario::kDefault;
  double distance_to_scene = 1.0;
  double scene_depth = 0.5;
  double baseline_length = 0.1;
  int image_width = 352;
  int image_height = 288;
  double fov_degrees = 45.0;
  /// Rotation magnitude bound for the sampled camera-2 attitude.
  double max_rotation_deg = 10.0;
  /// Visibility re-draws before the sampler gives up on a trial.
  int max_sample_attempts = 1000;

  double noise_sigma_px = 0.0;
  int trials = 0;
  std::uint64_t master_seed = 0;

  /// Focal length in pixels implied by the width and horizontal FOV:
  /// (image_width / 2) / tan(fov / 2).
  double focal_px() const;
};

/// One sampled problem instance with its ground truth (translation stored
/// unit-norm; the metric baseline only affects the projections).
struct Scene {
  RelativePose ground_truth;
  std::array<Correspondence, 5> correspondences;
  std::array<Vec3, 5> world_points;  ///< camera-1 coordinates
};

/**
 * Samples a scene: five points uniform in the camera-1 pixel rectangle with
 * depth uniform in distance +- depth/2 (planar-forward: depth fixed at
 * distance), camera 2 displaced by baseline_length in a uniform random
 * direction (planar-forward: straight ahead) and rotated about a uniform
 * random axis by an angle uniform in [0, max_rotation_deg].  Re-draws until
 * all five points project inside both image rectangles with positive depth;
 * throws SolverError kSamplingExhausted after max_sample_attempts failures.
 */
Scene generate_scene(const SceneConfig& config, std::mt19937_64& rng);

/**
 * Adds independent Gaussian pixel noise (sigma per axis) to each bearing in
 * each image and re-normalizes.  Draw order per correspondence: camera-1 dx,
 * dy, then camera-2 dx, dy.  sigma_px == 0 returns the input bit-identically
 * without consuming randomness.
 */
std::array<Correspondence, 5> add_pixel_noise(
    const std::array<Correspondence, 5>& c, double sigma_px,
    const SceneConfig& config, std::mt19937_64& rng);

/// Per-trial outcome row.
struct TrialRecord {
  int trial = 0;
  /// min over candidates of || [R_cand | t_cand] - [R_gt | t_gt] ||_F.
  double epsilon = 0.0;
  double rot_err_deg = 0.0;
  double trans_err_deg = 0.0;
  int n_candidates = 0;
  /// Empty candidate set or a solver/sampler failure; error fields are +inf.
  bool degenerate = false;
};

/// Error metrics of a candidate set against the ground truth (trial index
/// left at 0; each metric takes its own minimum over the candidates).
TrialRecord pose_error_metrics(const std::vector<SolutionCandidate>& candidates,
                               const RelativePose& ground_truth);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  long count = 0;
};

struct ExperimentSummary {
  std::string scenario;
  int trials = 0;
  double sigma_px = 0.0;
  /// Quartiles over non-degenerate trials, linear interpolation; NaN when
  /// every trial degenerated.
  double median_epsilon = 0.0;
  double q25_epsilon = 0.0;
  double q75_epsilon = 0.0;
  double median_rot_err_deg = 0.0;
  double median_trans_err_deg = 0.0;
  int degenerate_count = 0;
  /// log10(epsilon) histogram, bin width 0.5 over [-16, 2], outliers clamped
  /// into the edge bins; non-degenerate trials only.
  std::vector<HistogramBin> histogram;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;  ///< one per trial, in trial order
  ExperimentSummary summary;
};

/// Seed of trial `index` under `master_seed`: a splitmix64 mix of the two, so
/// any subset of trials can be reproduced independently and in any order.
std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t index);

/**
 * Runs config.trials independent trials: sample scene, perturb (when
 * sigma > 0), solve, score against ground truth.  Sampling or solver failures
 * mark the trial degenerate instead of aborting the run.  Fully deterministic
 * in (config); trials are independent and processed in index order.
 */
ExperimentResult run_experiment(const SceneConfig& config);

/// Quartile over a copy of `values` (linear interpolation between order
/// statistics); q in [0, 1].  NaN for an empty range.
double quantile(std::vector<double> values, double q);

}  // namespace fivept
