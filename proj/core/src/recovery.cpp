#include "fivept/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <utility>

#include "fivept/errors.hpp"

namespace fivept {

namespace {

double sign_nonneg(double x) { return x < 0.0 ? -1.0 : 1.0; }

// z-orientation of the normalized first bearings; the canonical frame puts
// them at (0, 0, +-1), and every closed-form depth test below is relative to
// that sign.
std::pair<double, double> first_bearing_orientations(const NormalizedProblem& n) {
  return {sign_nonneg(n.a1.col[0].z), sign_nonneg(n.a2.col[0].z)};
}

}  // namespace

namespace {

// C(w0) after row/column equilibration and complete-pivot elimination.
struct CFactor {
  double m[4][4];
  int colperm[4];
  double colscale[4];
  double pivots[4];
};

CFactor factor_c_at(const PolyMatrixC& c, double w0) {
  CFactor f{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) f.m[i][j] = c.entry[i][j](w0);
  }
  for (int i = 0; i < 4; ++i) {
    double rmax = 0.0;
    for (double x : f.m[i]) rmax = std::max(rmax, std::fabs(x));
    if (rmax == 0.0) continue;  // a zero row only helps the nullspace
    for (double& x : f.m[i]) x /= rmax;
  }
  // The column degree caps differ, so at large |w0| the raw columns span
  // several orders of magnitude; equilibrating keeps the pivot order about
  // rank rather than scale (the projective nullspace is unchanged).
  for (int j = 0; j < 4; ++j) {
    double cmax = 0.0;
    for (int i = 0; i < 4; ++i) cmax = std::max(cmax, std::fabs(f.m[i][j]));
    f.colscale[j] = (cmax == 0.0) ? 1.0 : 1.0 / cmax;
    for (int i = 0; i < 4; ++i) f.m[i][j] *= f.colscale[j];
  }
  for (int k = 0; k < 4; ++k) f.colperm[k] = k;

  // Gaussian elimination with complete pivoting; track the column
  // permutation so the nullspace vector lands back in [uv, u, v, 1] order.
  for (int k = 0; k < 4; ++k) {
    int pr = k, pc = k;
    double best = -1.0;
    for (int r = k; r < 4; ++r) {
      for (int col = k; col < 4; ++col) {
        if (std::fabs(f.m[r][col]) > best) {
          best = std::fabs(f.m[r][col]);
          pr = r;
          pc = col;
        }
      }
    }
    if (pr != k) std::swap_ranges(f.m[k], f.m[k] + 4, f.m[pr]);
    if (pc != k) {
      for (int r = 0; r < 4; ++r) std::swap(f.m[r][k], f.m[r][pc]);
      std::swap(f.colperm[k], f.colperm[pc]);
    }
    f.pivots[k] = std::fabs(f.m[k][k]);
    if (f.pivots[k] == 0.0) break;  // remaining block is exactly zero
    for (int r = k + 1; r < 4; ++r) {
      const double factor = f.m[r][k] / f.m[k][k];
      if (factor == 0.0) continue;
      for (int col = k; col < 4; ++col) f.m[r][col] -= factor * f.m[k][col];
      f.m[r][k] = 0.0;
    }
  }
  return f;
}

// Nullspace direction with permuted column free_col as the free variable
// (3: the standard direction; 2: the second direction when the matrix is
// near rank 2).  Original coordinates, max-abs normalized.
std::array<double, 4> null_direction(const CFactor& f, int free_col) {
  double y[4] = {0.0, 0.0, 0.0, 0.0};
  y[free_col] = 1.0;
  for (int k = free_col - 1; k >= 0; --k) {
    double s = 0.0;
    for (int j = k + 1; j < 4; ++j) s += f.m[k][j] * y[j];
    y[k] = (f.m[k][k] == 0.0) ? 0.0 : -s / f.m[k][k];
  }
  std::array<double, 4> x{};
  for (int k = 0; k < 4; ++k) x[f.colperm[k]] = f.colscale[f.colperm[k]] * y[k];
  double xmax = 0.0;
  for (double v : x) xmax = std::max(xmax, std::fabs(v));
  for (double& v : x) v /= xmax;  // xmax > 0: the free entry is a positive scale
  return x;
}

struct Extraction {
  double u = 0.0;
  double v = 0.0;
  double consistency = 0.0;
  bool scalable = false;  // some dehomogenizing chart usable
};

Extraction extract_uv(const std::array<double, 4>& x, const Tolerances& tol) {
  // x ~ [uv, u, v, 1] up to scale, normalized to unit max-abs. On the
  // Veronese quadric x0 x3 = x1 x2 each component has two readings,
  // u = x1/x3 = x0/x2 and v = x2/x3 = x0/x1, identical in exact arithmetic.
  // Numerically they are not: a twisted mate near a pi rotation sends u and
  // v toward infinity, collapsing x3 (and with it the standard readings)
  // while x0 stays at unit scale, so each component is read through the
  // ratio whose operands sit farthest above the noise floor.
  Extraction e;
  auto quality = [](double num, double den) {
    return std::min(std::fabs(num), std::fabs(den));
  };
  const bool u_std = quality(x[1], x[3]) >= quality(x[0], x[2]);
  const bool v_std = quality(x[2], x[3]) >= quality(x[0], x[1]);
  const double du = u_std ? x[3] : x[2];
  const double dv = v_std ? x[3] : x[1];
  if (std::fabs(du) < tol.rescale_min || std::fabs(dv) < tol.rescale_min) {
    return e;
  }
  e.u = u_std ? x[1] / x[3] : x[0] / x[2];
  e.v = v_std ? x[2] / x[3] : x[0] / x[1];
  if (std::fabs(x[3]) >= tol.rescale_min) {
    const double uv = x[0] / x[3];
    e.consistency = std::fabs(uv - e.u * e.v) / (1.0 + std::fabs(e.u * e.v));
  } else {
    // The product reading x0/x3 is gone; fall back to the quadric residual
    // of the unit-max vector, which plays the same role (zero iff the vector
    // is consistent) at this scale.
    e.consistency = std::fabs(x[0] * x[3] - x[1] * x[2]);
  }
  e.scalable = true;
  return e;
}

// Max-abs-normalized combinations alpha * xa + beta * xb lying on the
// Veronese quadric x0 x3 = x1 x2, which every vector of the form
// [uv, u, v, 1] satisfies.  When C(w0) is near rank 2 — clustered
// determinant roots — its nullspace is a plane and the quadric cuts the true
// candidate(s) out of that plane; a conjugate-complex intersection means no
// real candidate lives there.
std::vector<std::array<double, 4>> veronese_combinations(
    const std::array<double, 4>& xa, const std::array<double, 4>& xb) {
  auto q = [](const std::array<double, 4>& p, const std::array<double, 4>& r) {
    return 0.5 * (p[0] * r[3] + r[0] * p[3] - p[1] * r[2] - r[1] * p[2]);
  };
  const double qa = q(xa, xa);        // alpha^2 coefficient
  const double qm = 2.0 * q(xa, xb);  // alpha beta
  const double qb = q(xb, xb);        // beta^2
  std::vector<std::array<double, 4>> out;
  auto push = [&](double alpha, double beta) {
    std::array<double, 4> x{};
    double xmax = 0.0;
    for (int i = 0; i < 4; ++i) {
      x[i] = alpha * xa[i] + beta * xb[i];
      xmax = std::max(xmax, std::fabs(x[i]));
    }
    if (xmax == 0.0) return;
    for (double& v : x) v /= xmax;
    out.push_back(x);
  };
  const double scale = std::max({std::fabs(qa), std::fabs(qm), std::fabs(qb)});
  if (scale == 0.0) return out;  // whole pencil on the quadric; xa suffices
  if (std::fabs(qa) <= 1e-14 * scale) {
    push(1.0, 0.0);  // alpha:beta = 1:0 is (numerically) on the quadric
    if (std::fabs(qm) > 1e-14 * scale) push(-qb / qm, 1.0);
    return out;
  }
  const double disc = qm * qm - 4.0 * qa * qb;
  if (disc < 0.0) return out;
  const double s = -0.5 * (qm + std::copysign(std::sqrt(disc), qm));
  push(s / qa, 1.0);
  push(s != 0.0 ? qb / s : 0.0, 1.0);
  return out;
}

// Value and gradient of a dense trivariate polynomial at (u, v, w).
void poly3_value_grad(const Poly3& p, double u, double v, double w,
                      double& value, double grad[3]) {
  double pu[Poly3::kMaxDegree + 1];
  double pv[Poly3::kMaxDegree + 1];
  double pw[Poly3::kMaxDegree + 1];
  pu[0] = pv[0] = pw[0] = 1.0;
  for (int i = 1; i <= Poly3::kMaxDegree; ++i) {
    pu[i] = pu[i - 1] * u;
    pv[i] = pv[i - 1] * v;
    pw[i] = pw[i - 1] * w;
  }
  value = grad[0] = grad[1] = grad[2] = 0.0;
  for (int a = 0; a <= Poly3::kMaxDegree; ++a) {
    for (int b = 0; a + b <= Poly3::kMaxDegree; ++b) {
      for (int c = 0; a + b + c <= Poly3::kMaxDegree; ++c) {
        const double coef = p.coefficient(a, b, c);
        if (coef == 0.0) continue;
        value += coef * pu[a] * pv[b] * pw[c];
        if (a > 0) grad[0] += coef * a * pu[a - 1] * pv[b] * pw[c];
        if (b > 0) grad[1] += coef * b * pu[a] * pv[b - 1] * pw[c];
        if (c > 0) grad[2] += coef * c * pu[a] * pv[b] * pw[c - 1];
      }
    }
  }
}

// Gradient-scaled residual norm of the ten quartics at c; when a and b are
// given, also accumulates the Gauss-Newton normal equations a * delta = b.
double scaled_quartic_system(const std::array<Poly3, 10>& f,
                             const CayleyVector& c, double (*a)[3], double* b) {
  if (a != nullptr) {
    for (int i = 0; i < 3; ++i) {
      b[i] = 0.0;
      for (int j = 0; j < 3; ++j) a[i][j] = 0.0;
    }
  }
  double phi2 = 0.0;
  for (int k = 0; k < 10; ++k) {
    double r, g[3];
    poly3_value_grad(f[k], c.u, c.v, c.w, r, g);
    const double gn = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
    if (gn == 0.0) continue;  // stationary row constrains nothing locally
    const double s = 1.0 / gn;
    const double rs = r * s;
    phi2 += rs * rs;
    if (a != nullptr) {
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) a[i][j] += (s * g[i]) * (s * g[j]);
        b[i] -= rs * (s * g[i]);
      }
    }
  }
  return std::sqrt(phi2);
}

// 3x3 linear solve with partial pivoting; false on a zero pivot.
bool solve3(double a[3][3], const double b[3], double x[3]) {
  double m[3][4];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[i][j] = a[i][j];
    m[i][3] = b[i];
  }
  for (int k = 0; k < 3; ++k) {
    int pr = k;
    for (int r = k + 1; r < 3; ++r) {
      if (std::fabs(m[r][k]) > std::fabs(m[pr][k])) pr = r;
    }
    if (pr != k) std::swap_ranges(m[k], m[k] + 4, m[pr]);
    if (m[k][k] == 0.0) return false;
    for (int r = k + 1; r < 3; ++r) {
      const double factor = m[r][k] / m[k][k];
      for (int j = k; j < 4; ++j) m[r][j] -= factor * m[k][j];
    }
  }
  for (int k = 2; k >= 0; --k) {
    double s = m[k][3];
    for (int j = k + 1; j < 3; ++j) s -= m[k][j] * x[j];
    x[k] = s / m[k][k];
  }
  return true;
}

}  // namespace

UvSolution solve_uv(const PolyMatrixC& c, double w0, const Tolerances& tol) {
  const CFactor f = factor_c_at(c, w0);
  if (f.pivots[3] > tol.fullrank_pivot_ratio * f.pivots[0]) {
    throw SolverError(ErrorCode::kFullRankC,
                      "constraint matrix has full rank at this root");
  }
  const Extraction e = extract_uv(null_direction(f, 3), tol);
  if (!e.scalable) {
    throw SolverError(ErrorCode::kRescaleFailure,
                      "homogeneous solution has (near-)zero last entry");
  }
  return UvSolution{e.u, e.v, e.consistency};
}

RefineResult refine_on_quartics(const std::array<Poly3, 10>& f,
                                const CayleyVector& start,
                                const Tolerances& tol) {
  RefineResult res;
  res.cayley = start;
  CayleyVector c = start;
  double phi = scaled_quartic_system(f, c, nullptr, nullptr);
  res.scaled_residual = phi;
  for (int iter = 0; iter < tol.refine_max_iter; ++iter) {
    double a[3][3], b[3], d[3];
    scaled_quartic_system(f, c, a, b);
    if (!solve3(a, b, d)) break;
    const double cn = std::sqrt(c.u * c.u + c.v * c.v + c.w * c.w);
    double lambda = 1.0;
    bool accepted = false;
    CayleyVector next{};
    double phi_next = 0.0;
    for (int h = 0; h < 8; ++h, lambda *= 0.5) {
      next = CayleyVector{c.u + lambda * d[0], c.v + lambda * d[1],
                          c.w + lambda * d[2]};
      phi_next = scaled_quartic_system(f, next, nullptr, nullptr);
      if (phi_next < phi) {
        accepted = true;
        break;
      }
    }
    res.iterations = iter + 1;
    if (!accepted) break;
    c = next;
    phi = phi_next;
    res.cayley = c;
    res.scaled_residual = phi;
    const double step =
        lambda * std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    if (step <= tol.refine_step_rel * (1.0 + cn)) {
      res.step_converged = true;
      break;
    }
  }
  return res;
}

std::array<std::array<double, 3>, 5> numeric_s_rows(const NormalizedProblem& n,
                                                    const Rotation3& r) {
  std::array<std::array<double, 3>, 5> rows;
  for (int i = 0; i < 5; ++i) {
    const Vec3 x = (r * n.a1.col[i]).cross(n.a2.col[i]);
    rows[i] = {x.x, x.y, x.z};
  }
  return rows;
}

UnitTranslation solve_translation(const std::array<std::array<double, 3>, 5>& rows,
                                  const Tolerances& tol) {
  std::array<std::array<double, 3>, 5> m = rows;
  for (auto& row : m) {
    double rmax = 0.0;
    for (double x : row) rmax = std::max(rmax, std::fabs(x));
    if (rmax == 0.0) continue;
    for (double& x : row) x /= rmax;
  }

  // Two elimination steps with complete pivoting leave the nullspace in the
  // remaining column.
  int colperm[3] = {0, 1, 2};
  double pivots[2] = {0.0, 0.0};
  for (int k = 0; k < 2; ++k) {
    int pr = k, pc = k;
    double best = -1.0;
    for (int r = k; r < 5; ++r) {
      for (int col = k; col < 3; ++col) {
        if (std::fabs(m[r][col]) > best) {
          best = std::fabs(m[r][col]);
          pr = r;
          pc = col;
        }
      }
    }
    std::swap(m[k], m[pr]);
    if (pc != k) {
      for (int r = 0; r < 5; ++r) std::swap(m[r][k], m[r][pc]);
      std::swap(colperm[k], colperm[pc]);
    }
    pivots[k] = std::fabs(m[k][k]);
    if (pivots[k] == 0.0) break;
    for (int r = k + 1; r < 5; ++r) {
      const double factor = m[r][k] / m[k][k];
      if (factor == 0.0) continue;
      for (int col = k; col < 3; ++col) m[r][col] -= factor * m[k][col];
      m[r][k] = 0.0;
    }
  }
  if (pivots[0] == 0.0 || pivots[1] <= tol.rank2_pivot_ratio * pivots[0]) {
    throw SolverError(ErrorCode::kRankBelow2,
                      "translation constraint matrix has rank below 2");
  }

  double y[3];
  y[2] = 1.0;
  y[1] = -m[1][2] / m[1][1];
  y[0] = -(m[0][1] * y[1] + m[0][2]) / m[0][0];
  Vec3 t;
  for (int k = 0; k < 3; ++k) t[colperm[k]] = y[k];

  const double norm = t.norm();
  t = t * (1.0 / norm);
  for (int k = 0; k < 3; ++k) {
    if (std::fabs(t[k]) > tol.translation_sign_floor) {
      if (t[k] < 0.0) t = -t;
      break;
    }
  }
  return UnitTranslation(t);
}

std::array<double, 2> triangulate_depths(const Rotation3& r, const Vec3& t,
                                         const Vec3& q1, const Vec3& q2) {
  // Least squares on lambda1 * (R q1) - lambda2 * q2 = -t: normal equations
  // of the 3x2 system with columns (R q1, -q2).
  const Vec3 a = r * q1;
  const Vec3 b = q2 * -1.0;
  const double aa = a.dot(a), ab = a.dot(b), bb = b.dot(b);
  const Vec3 rhs = t * -1.0;
  const double ar = a.dot(rhs), br = b.dot(rhs);
  const double det = aa * bb - ab * ab;
  if (std::fabs(det) < 1e-300) return {0.0, 0.0};
  return {(ar * bb - ab * br) / det, (aa * br - ab * ar) / det};
}

int count_cheirality_votes(const RelativePose& pose, const NormalizedProblem& n) {
  int votes = 0;
  for (int i = 0; i < 5; ++i) {
    const auto d = triangulate_depths(pose.rotation, pose.translation.vector(),
                                      n.a1.col[i], n.a2.col[i]);
    if (d[0] > 0.0 && d[1] > 0.0) ++votes;
  }
  return votes;
}

RelativePose select_candidate(const Rotation3& r, const UnitTranslation& t,
                              const NormalizedProblem& n, bool vote_all_points) {
  const Vec3 tv = t.vector();
  // Twisted counterpart R' = -(I - 2 t t^T) R shares the essential matrix up
  // to sign; the four sign/twist combinations exhaust the pose ambiguity.
  Mat3 ht = Mat3::identity();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) ht(i, j) -= 2.0 * tv[i] * tv[j];
  const Rotation3 r_twist((ht * r.matrix()) * -1.0);

  const auto [z1, z2] = first_bearing_orientations(n);

  if (vote_all_points) {
    const RelativePose candidates[4] = {
        {r, t},
        {r, UnitTranslation(-tv)},
        {r_twist, t},
        {r_twist, UnitTranslation(-tv)},
    };
    int best = 0, best_votes = -1;
    for (int k = 0; k < 4; ++k) {
      const int votes = count_cheirality_votes(candidates[k], n);
      if (votes > best_votes) {
        best_votes = votes;
        best = k;
      }
    }
    return candidates[best];
  }

  // Closed-form first-point depths: with the first bearings at (0, 0, z1)
  // and (0, 0, z2), the depth of point 1 in camera 1 under [R | t] is
  // proportional to z1 * c1 with c1 = -t1 / R(0,2) (or -t2 / R(1,2)), and in
  // camera 2 to z2 * c2 with c2 = c1 * R(2,2) + t3.
  auto depth_signs = [&](const Mat3& rm) {
    const double c1 = (std::fabs(rm(0, 2)) >= std::fabs(rm(1, 2)))
                          ? -tv.x / rm(0, 2)
                          : -tv.y / rm(1, 2);
    const double c2 = c1 * rm(2, 2) + tv.z;
    return std::pair<double, double>(z1 * c1, z2 * c2);
  };
  const auto [p1, p2] = depth_signs(r.matrix());
  if (p1 > 0.0 && p2 > 0.0) return {r, t};
  if (p1 < 0.0 && p2 < 0.0) return {r, UnitTranslation(-tv)};
  const auto [q1s, q2s] = depth_signs(r_twist.matrix());
  if (q1s > 0.0 && q2s > 0.0) return {r_twist, t};
  return {r_twist, UnitTranslation(-tv)};
}

WtildeInterval wtilde_interval_for_angles(double angle_lo, double angle_hi) {
  if (!(0.0 < angle_lo) || !(angle_lo < angle_hi) || !(angle_hi < M_PI)) {
    throw SolverError(ErrorCode::kInvalidInterval,
                      "angle interval must satisfy 0 < lo < hi < pi");
  }
  // Folded root as a function of the combined in-plane angle: -2 / tan(x),
  // decreasing on (0, pi), so the interval endpoints swap.
  const double at_lo = -2.0 / std::tan(angle_lo);
  const double at_hi = -2.0 / std::tan(angle_hi);
  return WtildeInterval{std::min(at_lo, at_hi), std::max(at_lo, at_hi)};
}

SolveResult solve_relative_pose(const std::array<Correspondence, 5>& observations,
                                const SolveOptions& options) {
  const Tolerances& tol = options.tol;
  SolveResult result;

  // Ingest: unit-normalize every bearing.
  std::array<Correspondence, 5> c = observations;
  for (int i = 0; i < 5; ++i) {
    for (Vec3* q : {&c[i].q1, &c[i].q2}) {
      const double norm = q->norm();
      if (norm <= tol.observation_norm) {
        throw SolverError(ErrorCode::kDegenerateObservation,
                          "observation " + std::to_string(i) +
                              " has a (near-)zero bearing",
                          "ingest");
      }
      *q = *q * (1.0 / norm);
    }
  }

  const char* stage = "normalize";
  NormalizedProblem n;
  std::array<Poly3, 10> f;
  ReducedSystem reduced;
  Poly1 wtilde;
  try {
    n = normalize_observations(ObservationMatrix::from_correspondences(c, 1),
                               ObservationMatrix::from_correspondences(c, 2), tol);
    stage = "constraint-system";
    const SbarMatrix sbar = build_sbar(n);
    f = build_f_polynomials(sbar, tol);
    stage = "expand";
    const ExpandedSystem expanded = build_expanded_matrix(f, tol);
    stage = "reduce";
    reduced = reduce_and_extract_c(expanded, tol);
    stage = "determinant";
    result.diagnostics.w_poly = determinant_c(reduced.c);
    // Kept untrimmed: leading coefficients of genuinely tiny magnitude carry
    // the large roots (small rotations fold to large wtilde), and the root
    // finder isolates those through the reversed polynomial.
    wtilde = fold_symmetric(result.diagnostics.w_poly, tol);
    result.diagnostics.wtilde = wtilde;
    result.diagnostics.effective_degree = wtilde.trimmed(tol.trim_rel).degree();
    if (wtilde.trimmed(tol.trim_rel).is_zero()) {
      throw SolverError(ErrorCode::kDegenerateZeroPolynomial,
                        "folded determinant polynomial vanished");
    }
  } catch (const SolverError& e) {
    throw SolverError(ErrorCode::kDegenerateInput, e.what(), stage);
  } catch (const std::invalid_argument& e) {
    throw SolverError(ErrorCode::kDegenerateInput, e.what(), stage);
  }

  std::vector<double> roots;
  try {
    for (const RealRoot& root : find_real_roots(wtilde, tol)) {
      if (!root.converged) ++result.diagnostics.n_unconverged;
      roots.push_back(root.x);
    }
  } catch (const SolverError& e) {
    throw SolverError(ErrorCode::kDegenerateInput, e.what(), "roots");
  }
  result.diagnostics.n_real_roots = static_cast<int>(roots.size());
  result.diagnostics.roots_wtilde = roots;

  const bool trace = std::getenv("FIVEPT_TRACE") != nullptr;
  for (double wt : roots) {
    if (options.wtilde_filter &&
        (wt < options.wtilde_filter->lo || wt > options.wtilde_filter->hi)) {
      ++result.diagnostics.n_dropped;
      continue;
    }
    try {
      if (trace) std::fprintf(stderr, "[trace] root wt=%+.10e\n", wt);
      // Preferred picks: the refine-validated extractions whose refined
      // points fold onto this root. Validation demands a small residual and
      // that this root owns the refined fold: the fold must lie nearer to
      // this root than to any other found root (so convergence onto a
      // neighboring root's solution never masquerades as this one) and
      // within a generous relative ceiling. The ceiling is deliberately
      // loose because clustered or distant roots are located only as well as
      // the polynomial coefficients allow, which can be several percent,
      // while the refined fold is exact. A clustered root can genuinely own
      // several distinct solutions (its neighborhood holds more solutions
      // than the polynomial resolved as separate roots), so all distinct
      // validated refinements are kept, not a single winner.
      // Fallback: the raw standard direction under the consistency test.
      const double drift_cap = tol.refine_root_drift * (1.0 + std::fabs(wt));
      auto owns_fold = [&](double fold) {
        const double d = std::fabs(fold - wt);
        if (d > drift_cap) return false;
        for (double other : roots) {
          if (other != wt && std::fabs(fold - other) < d) return false;
        }
        return true;
      };
      struct Validated {
        CayleyVector cayley;
        double consistency;
        double residual;
        double drift;
      };
      std::vector<Validated> validated;
      bool have_raw = false;
      CayleyVector raw_cayley{};
      double raw_consistency = 0.0;

      // Both members of the fold pair {w0, -1/w0} solve the constraint
      // system at this root, and their extraction conditioning can differ
      // wildly: a twisted mate near a pi rotation leaves no readable
      // nullspace components while its small-rotation partner is benign.
      // Gather candidates from both; the downstream twisted-pair selection
      // works from either member. Without refinement only the standard
      // |w0| >= 1 member is used.
      const double w0_outer = unfold_root(wt);
      const std::array<double, 2> members{w0_outer, -1.0 / w0_outer};
      const int n_members = options.refine ? 2 : 1;
      int usable_members = 0;
      for (int mi = 0; mi < n_members; ++mi) {
        const double w0 = members[mi];
        if (!std::isfinite(w0)) continue;
        const CFactor fact = factor_c_at(reduced.c, w0);
        if (trace)
          std::fprintf(stderr,
                       "[trace]  member %d w0=%+.6e pivots %.3e %.3e %.3e %.3e\n",
                       mi, w0, fact.pivots[0], fact.pivots[1], fact.pivots[2],
                       fact.pivots[3]);
        if (fact.pivots[3] > tol.fullrank_pivot_ratio * fact.pivots[0]) {
          continue;
        }
        ++usable_members;

        // Candidate (u, v) vectors: the standard nullspace direction plus
        // the real Veronese points of the plane it spans with the second
        // direction (which rescues clustered roots, where the standard
        // direction degrades).
        const std::array<double, 4> xa = null_direction(fact, 3);
        std::vector<std::array<double, 4>> dirs{xa};
        for (const std::array<double, 4>& x :
             veronese_combinations(xa, null_direction(fact, 2))) {
          dirs.push_back(x);
        }
        for (size_t di = 0; di < dirs.size(); ++di) {
          const Extraction e = extract_uv(dirs[di], tol);
          if (trace)
            std::fprintf(stderr, "[trace]   dir %zu scalable=%d cons=%.3e\n",
                         di, e.scalable ? 1 : 0, e.consistency);
          if (!e.scalable) continue;
          const CayleyVector c0{e.u, e.v, w0};
          if (mi == 0 && di == 0) {
            have_raw = true;
            raw_cayley = c0;
            raw_consistency = e.consistency;
          }
          if (!options.refine) continue;
          const RefineResult rr = refine_on_quartics(f, c0, tol);
          const double cn =
              std::sqrt(rr.cayley.u * rr.cayley.u + rr.cayley.v * rr.cayley.v +
                        rr.cayley.w * rr.cayley.w);
          const double folded = rr.cayley.w - 1.0 / rr.cayley.w;
          if (trace)
            std::fprintf(stderr,
                         "[trace]   dir %zu refined (%+.6e,%+.6e,%+.6e) "
                         "resid=%.3e drift=%.3e cap=%.3e owns=%d\n",
                         di, rr.cayley.u, rr.cayley.v, rr.cayley.w,
                         rr.scaled_residual, std::fabs(folded - wt), drift_cap,
                         std::isfinite(folded) ? (owns_fold(folded) ? 1 : 0)
                                               : -1);
          if (!std::isfinite(folded) || !owns_fold(folded)) {
            continue;
          }
          if (rr.scaled_residual > tol.refine_accept_rel * (1.0 + cn)) {
            continue;
          }
          const double drift = std::fabs(folded - wt);
          validated.push_back(
              Validated{rr.cayley, e.consistency, rr.scaled_residual, drift});
        }
      }
      if (usable_members == 0) {
        throw SolverError(ErrorCode::kFullRankC,
                          "constraint matrix has full rank at this root");
      }
      // Order by fold proximity (residual as tiebreak) and drop re-discoveries
      // of the same solution; distinct survivors are all emitted.
      std::stable_sort(validated.begin(), validated.end(),
                       [](const Validated& a, const Validated& b) {
                         return std::tie(a.drift, a.residual) <
                                std::tie(b.drift, b.residual);
                       });
      std::vector<Validated> emitted;
      for (const Validated& v : validated) {
        bool duplicate = false;
        for (const Validated& prev : emitted) {
          const double du = v.cayley.u - prev.cayley.u;
          const double dv = v.cayley.v - prev.cayley.v;
          const double dw = v.cayley.w - prev.cayley.w;
          const double dist = std::sqrt(du * du + dv * dv + dw * dw);
          const double scale =
              std::sqrt(prev.cayley.u * prev.cayley.u +
                        prev.cayley.v * prev.cayley.v +
                        prev.cayley.w * prev.cayley.w);
          if (dist <= tol.refine_dedup_rel * (1.0 + scale)) {
            duplicate = true;
            break;
          }
        }
        if (!duplicate) emitted.push_back(v);
      }
      if (emitted.empty()) {
        if (!have_raw) {
          throw SolverError(ErrorCode::kRescaleFailure,
                            "no scalable nullspace combination at this root");
        }
        if (!options.keep_all && raw_consistency > options.consistency_tol) {
          ++result.diagnostics.n_dropped;
          continue;
        }
        emitted.push_back(Validated{raw_cayley, raw_consistency, 0.0, 0.0});
      }
      for (const Validated& v : emitted) {
        const Rotation3 r = cayley_to_rotation(v.cayley);
        const UnitTranslation t = solve_translation(numeric_s_rows(n, r), tol);
        const RelativePose pose_normalized =
            select_candidate(r, t, n, options.vote_all_points);
        const int votes = count_cheirality_votes(pose_normalized, n);
        const RelativePose pose = denormalize_pose(pose_normalized, n);

        const EssentialMatrix e = essential_from_pose(pose, tol);
        // The two members of a fold pair are twisted mates sharing one
        // essential matrix, and the cheirality selection maps them onto the
        // same pose; a candidate that reproduces an already-emitted
        // essential matrix (up to sign) is the same solution again.
        bool same_e = false;
        for (const SolutionCandidate& prev : result.candidates) {
          double dplus = 0.0;
          double dminus = 0.0;
          const EssentialMatrix pe = essential_from_pose(prev.pose, tol);
          for (int row = 0; row < 3; ++row) {
            for (int col = 0; col < 3; ++col) {
              const double s = e(row, col) + pe(row, col);
              const double d = e(row, col) - pe(row, col);
              dplus += s * s;
              dminus += d * d;
            }
          }
          if (std::min(dplus, dminus) <=
              tol.refine_dedup_rel * tol.refine_dedup_rel) {
            same_e = true;
            break;
          }
        }
        if (same_e) continue;
        double max_residual = 0.0;
        for (const Correspondence& obs : c) {
          max_residual =
              std::max(max_residual, std::fabs(epipolar_residual(e, obs)));
        }
        result.candidates.push_back(SolutionCandidate{pose, v.cayley,
                                                      v.cayley.w, v.consistency,
                                                      max_residual, votes});
      }
    } catch (const SolverError& err) {
      if (trace) std::fprintf(stderr, "[trace]  DROP SolverError: %s\n", err.what());
      ++result.diagnostics.n_dropped;
    } catch (const std::invalid_argument& err) {
      if (trace) std::fprintf(stderr, "[trace]  DROP invalid_argument: %s\n", err.what());
      ++result.diagnostics.n_dropped;
    }
  }

  std::stable_sort(result.candidates.begin(), result.candidates.end(),
                   [](const SolutionCandidate& a, const SolutionCandidate& b) {
                     if (a.max_epipolar_residual != b.max_epipolar_residual) {
                       return a.max_epipolar_residual < b.max_epipolar_residual;
                     }
                     return a.root_w < b.root_w;
                   });
  return result;
}

}  // namespace fivept
