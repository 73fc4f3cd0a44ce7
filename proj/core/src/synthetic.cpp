#include "fivept/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fivept/errors.hpp"

namespace fivept {

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::kDefault: return "default";
    case Scenario::kPlanarForward: return "planar_forward";
  }
  return "unknown";
}

double SceneConfig::focal_px() const {
  return (image_width / 2.0) / std::tan(fov_degrees * M_PI / 180.0 / 2.0);
}

namespace {

Vec3 uniform_unit_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (true) {
    const Vec3 v{gauss(rng), gauss(rng), gauss(rng)};
    const double n = v.norm();
    if (n > 1e-9) return v * (1.0 / n);
  }
}

bool projects_inside(const Vec3& p, const SceneConfig& cfg) {
  if (p.z <= 0.0) return false;
  const double f = cfg.focal_px();
  const double px = f * p.x / p.z + cfg.image_width / 2.0;
  const double py = f * p.y / p.z + cfg.image_height / 2.0;
  return px >= 0.0 && px <= cfg.image_width && py >= 0.0 && py <= cfg.image_height;
}

}  // namespace

Scene generate_scene(const SceneConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> upx(0.0, cfg.image_width);
  std::uniform_real_distribution<double> upy(0.0, cfg.image_height);
  std::uniform_real_distribution<double> udepth(cfg.distance_to_scene - cfg.scene_depth / 2.0,
                                                cfg.distance_to_scene + cfg.scene_depth / 2.0);
  std::uniform_real_distribution<double> uangle(0.0, cfg.max_rotation_deg * M_PI / 180.0);
  const double f = cfg.focal_px();
  const double cx = cfg.image_width / 2.0;
  const double cy = cfg.image_height / 2.0;
  const bool planar = cfg.scenario == Scenario::kPlanarForward;

  for (int attempt = 0; attempt < cfg.max_sample_attempts; ++attempt) {
    // Points uniform in the camera-1 image rectangle, depth uniform in the
    // scene slab (planar-forward: fixed at the scene distance).
    std::array<Vec3, 5> points;
    for (Vec3& p : points) {
      const double px = upx(rng);
      const double py = upy(rng);
      const double z = planar ? cfg.distance_to_scene : udepth(rng);
      p = Vec3{(px - cx) / f * z, (py - cy) / f * z, z};
    }
    // Camera-2 placement: center on the baseline sphere (planar-forward:
    // straight ahead), orientation a bounded random rotation.
    const Vec3 dir = planar ? Vec3{0.0, 0.0, 1.0} : uniform_unit_vector(rng);
    const Vec3 axis = uniform_unit_vector(rng);
    const double angle = uangle(rng);
    const Rotation3 r = rotation_from_axis_angle(axis, angle);
    const Vec3 center2 = dir * cfg.baseline_length;
    const Vec3 t = -(r * center2);

    bool visible = true;
    std::array<Vec3, 5> in_cam2;
    for (int i = 0; i < 5; ++i) {
      in_cam2[i] = r * points[i] + t;
      if (!projects_inside(points[i], cfg) || !projects_inside(in_cam2[i], cfg)) {
        visible = false;
        break;
      }
    }
    if (!visible) continue;

    Scene scene{RelativePose{r, UnitTranslation::normalized(t)}, {}, points};
    for (int i = 0; i < 5; ++i) {
      scene.correspondences[i] = Correspondence{points[i] * (1.0 / points[i].norm()),
                                                in_cam2[i] * (1.0 / in_cam2[i].norm())};
    }
    return scene;
  }
  throw SolverError(ErrorCode::kSamplingExhausted,
                    "no visible configuration after " +
                        std::to_string(cfg.max_sample_attempts) + " attempts");
}

std::array<Correspondence, 5> add_pixel_noise(const std::array<Correspondence, 5>& c,
                                              double sigma_px,
                                              const SceneConfig& cfg,
                                              std::mt19937_64& rng) {
  if (sigma_px == 0.0) return c;
  std::normal_distribution<double> gauss(0.0, sigma_px);
  const double f = cfg.focal_px();
  auto perturb = [&](const Vec3& q) {
    // Project onto z = 1, add pixel noise, back to a unit bearing.
    const double x = f * q.x / q.z + gauss(rng);
    const double y = f * q.y / q.z + gauss(rng);
    const Vec3 v{x / f, y / f, 1.0};
    return v * (1.0 / v.norm());
  };
  std::array<Correspondence, 5> out;
  for (int i = 0; i < 5; ++i) {
    out[i].q1 = perturb(c[i].q1);
    out[i].q2 = perturb(c[i].q2);
  }
  return out;
}

TrialRecord pose_error_metrics(const std::vector<SolutionCandidate>& candidates,
                               const RelativePose& ground_truth) {
  TrialRecord rec;
  rec.n_candidates = static_cast<int>(candidates.size());
  if (candidates.empty()) {
    rec.degenerate = true;
    rec.epsilon = std::numeric_limits<double>::infinity();
    rec.rot_err_deg = std::numeric_limits<double>::infinity();
    rec.trans_err_deg = std::numeric_limits<double>::infinity();
    return rec;
  }
  const Mat3& rg = ground_truth.rotation.matrix();
  const Vec3& tg = ground_truth.translation.vector();
  double best_eps = std::numeric_limits<double>::infinity();
  double best_rot = std::numeric_limits<double>::infinity();
  double best_trans = std::numeric_limits<double>::infinity();
  for (const SolutionCandidate& cand : candidates) {
    const Mat3 dr = cand.pose.rotation.matrix() - rg;
    const Vec3 dt = cand.pose.translation.vector() - tg;
    const double eps = std::sqrt(dr.frobenius_norm() * dr.frobenius_norm() +
                                 dt.squared_norm());
    best_eps = std::min(best_eps, eps);
    best_rot = std::min(best_rot,
                        rotation_angle_deg(Rotation3(
                            cand.pose.rotation.matrix().transposed() * rg)));
    best_trans = std::min(best_trans,
                          angle_between_deg(cand.pose.translation.vector(), tg));
  }
  rec.epsilon = best_eps;
  rec.rot_err_deg = best_rot;
  rec.trans_err_deg = best_trans;
  return rec;
}

std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t index) {
  // splitmix64 finalizer over the master seed advanced by the trial index.
  std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * (static_cast<double>(values.size()) - 1.0);
  const size_t lo = static_cast<size_t>(pos);
  const size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

ExperimentResult run_experiment(const SceneConfig& cfg) {
  ExperimentResult result;
  result.records.reserve(static_cast<size_t>(cfg.trials));

  for (int trial = 0; trial < cfg.trials; ++trial) {
    std::mt19937_64 rng(derive_trial_seed(cfg.master_seed,
                                          static_cast<std::uint64_t>(trial)));
    TrialRecord rec;
    try {
      const Scene scene = generate_scene(cfg, rng);
      const auto observations =
          cfg.noise_sigma_px > 0.0
              ? add_pixel_noise(scene.correspondences, cfg.noise_sigma_px, cfg, rng)
              : scene.correspondences;
      const SolveResult solved = solve_relative_pose(observations);
      rec = pose_error_metrics(solved.candidates, scene.ground_truth);
    } catch (const SolverError&) {
      rec.degenerate = true;
      rec.epsilon = std::numeric_limits<double>::infinity();
      rec.rot_err_deg = std::numeric_limits<double>::infinity();
      rec.trans_err_deg = std::numeric_limits<double>::infinity();
    }
    rec.trial = trial;
    result.records.push_back(rec);
  }

  ExperimentSummary& s = result.summary;
  s.scenario = to_string(cfg.scenario);
  s.trials = cfg.trials;
  s.sigma_px = cfg.noise_sigma_px;
  std::vector<double> eps, rot, trans;
  for (const TrialRecord& rec : result.records) {
    if (rec.degenerate) {
      ++s.degenerate_count;
      continue;
    }
    eps.push_back(rec.epsilon);
    rot.push_back(rec.rot_err_deg);
    trans.push_back(rec.trans_err_deg);
  }
  s.median_epsilon = quantile(eps, 0.5);
  s.q25_epsilon = quantile(eps, 0.25);
  s.q75_epsilon = quantile(eps, 0.75);
  s.median_rot_err_deg = quantile(rot, 0.5);
  s.median_trans_err_deg = quantile(trans, 0.5);

  // log10(epsilon) histogram over [-16, 2] at width 0.5; outliers clamp to
  // the edge bins.
  constexpr double kLo = -16.0, kHi = 2.0, kWidth = 0.5;
  const int bins = static_cast<int>((kHi - kLo) / kWidth);
  s.histogram.resize(static_cast<size_t>(bins));
  for (int b = 0; b < bins; ++b) {
    s.histogram[static_cast<size_t>(b)] = {kLo + b * kWidth, kLo + (b + 1) * kWidth, 0};
  }
  for (double e : eps) {
    const double l = std::log10(std::max(e, 1e-300));
    int b = static_cast<int>(std::floor((l - kLo) / kWidth));
    b = std::clamp(b, 0, bins - 1);
    ++s.histogram[static_cast<size_t>(b)].count;
  }
  return result;
}

}  // namespace fivept
