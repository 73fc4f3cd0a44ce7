#include "fivept/polysystem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "fivept/errors.hpp"

namespace fivept {

namespace {

// Polynomial form of the rational rotation map, scaled by
// Delta = 1 + u^2 + v^2 + w^2 so every entry is a quadratic.
std::array<std::array<Poly3, 3>, 3> rbar_entries() {
  std::array<std::array<Poly3, 3>, 3> r;
  auto quad = [](double c0, double cu2, double cv2, double cw2) {
    Poly3 p;
    p.set_coefficient(0, 0, 0, c0);
    p.set_coefficient(2, 0, 0, cu2);
    p.set_coefficient(0, 2, 0, cv2);
    p.set_coefficient(0, 0, 2, cw2);
    return p;
  };
  auto cross = [](int a1, int b1, int c1, double s1, int a2, int b2, int c2,
                  double s2) {
    Poly3 p;
    p.set_coefficient(a1, b1, c1, s1);
    p.set_coefficient(a2, b2, c2, s2);
    return p;
  };
  r[0][0] = quad(1.0, 1.0, -1.0, -1.0);
  r[0][1] = cross(1, 1, 0, 2.0, 0, 0, 1, 2.0);    // 2uv + 2w
  r[0][2] = cross(1, 0, 1, 2.0, 0, 1, 0, -2.0);   // 2uw - 2v
  r[1][0] = cross(1, 1, 0, 2.0, 0, 0, 1, -2.0);   // 2uv - 2w
  r[1][1] = quad(1.0, -1.0, 1.0, -1.0);
  r[1][2] = cross(0, 1, 1, 2.0, 1, 0, 0, 2.0);    // 2vw + 2u
  r[2][0] = cross(1, 0, 1, 2.0, 0, 1, 0, 2.0);    // 2uw + 2v
  r[2][1] = cross(0, 1, 1, 2.0, 1, 0, 0, -2.0);   // 2vw - 2u
  r[2][2] = quad(1.0, -1.0, -1.0, 1.0);
  return r;
}

Poly3 delta_poly() {
  Poly3 d;
  d.set_coefficient(0, 0, 0, 1.0);
  d.set_coefficient(2, 0, 0, 1.0);
  d.set_coefficient(0, 2, 0, 1.0);
  d.set_coefficient(0, 0, 2, 1.0);
  return d;
}

Poly3 det3(const std::array<const Poly3*, 3>& r0,
           const std::array<const Poly3*, 3>& r1,
           const std::array<const Poly3*, 3>& r2) {
  Poly3 d;
  d += poly3_mul(*r0[0], poly3_mul(*r1[1], *r2[2]) - poly3_mul(*r1[2], *r2[1]));
  d += poly3_mul(*r0[1], poly3_mul(*r1[2], *r2[0]) - poly3_mul(*r1[0], *r2[2]));
  d += poly3_mul(*r0[2], poly3_mul(*r1[0], *r2[1]) - poly3_mul(*r1[1], *r2[0]));
  return d;
}

template <size_t N>
double max_abs(const std::array<double, N>& row) {
  double m = 0.0;
  for (double x : row) m = std::max(m, std::fabs(x));
  return m;
}

// Rescales a row to unit max-abs.  Returns false for an (effectively) zero row.
template <size_t N>
bool scale_row(std::array<double, N>& row) {
  const double m = max_abs(row);
  if (m == 0.0) return false;
  const double inv = 1.0 / m;
  for (double& x : row) x *= inv;
  return true;
}

}  // namespace

SbarMatrix build_sbar(const NormalizedProblem& n) {
  const auto rbar = rbar_entries();
  SbarMatrix s;
  for (int i = 0; i < 5; ++i) {
    const Vec3& q1 = n.a1.col[i];
    const Vec3& q2 = n.a2.col[i];
    // x = Rbar * q1 (three quadratics), then row = x cross q2.
    std::array<Poly3, 3> x;
    for (int r = 0; r < 3; ++r) {
      x[r] = rbar[r][0] * q1.x + rbar[r][1] * q1.y + rbar[r][2] * q1.z;
    }
    s[i][0] = x[1] * q2.z - x[2] * q2.y;
    s[i][1] = x[2] * q2.x - x[0] * q2.z;
    s[i][2] = x[0] * q2.y - x[1] * q2.x;
  }
  return s;
}

std::array<Poly3, 10> build_f_polynomials(const SbarMatrix& sbar,
                                          const Tolerances& tol) {
  const Poly3 delta = delta_poly();
  std::array<Poly3, 10> f;
  int k = 0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      for (int l = j + 1; l < 5; ++l) {
        const Poly3 minor =
            det3({&sbar[i][0], &sbar[i][1], &sbar[i][2]},
                 {&sbar[j][0], &sbar[j][1], &sbar[j][2]},
                 {&sbar[l][0], &sbar[l][1], &sbar[l][2]});
        f[k++] = poly3_div_exact(minor, delta, tol);
      }
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// MonomialOrder50
// ---------------------------------------------------------------------------

namespace {

// 24 leading monomials: the members of [m'; m] outside the elimination tail,
// kept in their [m'; m]-relative order (m' = degree-5 monomials divisible by
// w, graded; m = all monomials of degree <= 4, graded).
constexpr Monomial kLeading[MonomialOrder50::kTailStart] = {
    {4, 0, 1}, {3, 1, 1}, {2, 2, 1}, {2, 1, 2}, {2, 0, 3}, {1, 3, 1},
    {1, 2, 2}, {0, 4, 1}, {0, 2, 3},                                // from m'
    {4, 0, 0}, {3, 1, 0}, {2, 2, 0}, {2, 1, 1}, {2, 0, 2}, {1, 3, 0},
    {1, 2, 1}, {0, 4, 0}, {0, 2, 2},                                // degree 4
    {2, 1, 0}, {2, 0, 1}, {1, 2, 0}, {0, 2, 1},                     // degree 3
    {2, 0, 0}, {0, 2, 0},                                           // degree 2
};

// The fixed 26-monomial elimination tail: pivot block u^3 w^2 .. v^3, then
// the uv, u, v, 1 groups with descending powers of w.
constexpr Monomial kTail[MonomialOrder50::kSize - MonomialOrder50::kTailStart] = {
    {3, 0, 2}, {3, 0, 1}, {3, 0, 0}, {0, 3, 2}, {0, 3, 1}, {0, 3, 0},
    {1, 1, 3}, {1, 1, 2}, {1, 1, 1}, {1, 1, 0},
    {1, 0, 4}, {1, 0, 3}, {1, 0, 2}, {1, 0, 1}, {1, 0, 0},
    {0, 1, 4}, {0, 1, 3}, {0, 1, 2}, {0, 1, 1}, {0, 1, 0},
    {0, 0, 5}, {0, 0, 4}, {0, 0, 3}, {0, 0, 2}, {0, 0, 1}, {0, 0, 0},
};

}  // namespace

MonomialOrder50::MonomialOrder50() {
  int k = 0;
  for (const Monomial& m : kLeading) mono_[k++] = m;
  for (const Monomial& m : kTail) mono_[k++] = m;
  for (auto& plane : index_)
    for (auto& row : plane)
      for (int& e : row) e = -1;
  for (int i = 0; i < kSize; ++i) {
    index_[mono_[i].a][mono_[i].b][mono_[i].c] = i;
  }
}

const MonomialOrder50& MonomialOrder50::instance() {
  static const MonomialOrder50 order;
  return order;
}

int MonomialOrder50::index_of(int a, int b, int c) const {
  if (a < 0 || a > 5 || b < 0 || b > 5 || c < 0 || c > 6) return -1;
  return index_[a][b][c];
}

std::array<double, MonomialOrder50::kSize> MonomialOrder50::monomial_vector(
    double u, double v, double w) const {
  double pu[6], pv[6], pw[7];
  pu[0] = pv[0] = pw[0] = 1.0;
  for (int k = 1; k < 6; ++k) {
    pu[k] = pu[k - 1] * u;
    pv[k] = pv[k - 1] * v;
  }
  for (int k = 1; k < 7; ++k) pw[k] = pw[k - 1] * w;
  std::array<double, kSize> out;
  for (int i = 0; i < kSize; ++i) {
    out[i] = pu[mono_[i].a] * pv[mono_[i].b] * pw[mono_[i].c];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Expanded system
// ---------------------------------------------------------------------------

ExpandedSystem build_expanded_matrix(const std::array<Poly3, 10>& f,
                                     const Tolerances& tol) {
  // Coefficient matrix of the ten quartics over the 35 monomials of degree
  // <= 4, graded descending (so the five pure-(u,v) quartics sit at columns
  // 0, 1, 3, 6, 10).
  static const std::vector<Monomial> m35 = monomials_graded_desc(4);
  std::array<std::array<double, 35>, 10> b{};
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 35; ++j) {
      b[i][j] = f[i].coefficient(m35[j].a, m35[j].b, m35[j].c);
    }
    if (!scale_row(b[i])) {
      throw SolverError(ErrorCode::kRankDeficientB,
                        "constraint polynomial " + std::to_string(i) +
                            " is identically zero");
    }
  }

  // Gauss-Jordan with partial pivoting on the five pure-(u,v) quartic
  // columns, taken first.  The six minors that involve the first
  // correspondence carry no such monomials (both of its normalized bearings
  // are (0, 0, +-1), so the top-degree part of the first constraint row
  // vanishes at w = 0); the quartic block therefore has rank at most four
  // and a column can come up empty, in which case it is already annihilated
  // and is skipped.  Either way every row below the consumed pivots ends up
  // free of all five monomials.
  constexpr int kQuarticCols[5] = {0, 1, 3, 6, 10};  // u^4 u^3v u^2v^2 uv^3 v^4
  int next = 0;
  for (int col : kQuarticCols) {
    int piv = -1;
    double best = tol.pivot_rel;
    for (int r = next; r < 10; ++r) {
      if (std::fabs(b[r][col]) > best) {
        best = std::fabs(b[r][col]);
        piv = r;
      }
    }
    if (piv < 0) continue;
    std::swap(b[next], b[piv]);
    for (int r = 0; r < 10; ++r) {
      if (r == next) continue;
      const double factor = b[r][col] / b[next][col];
      if (factor == 0.0) continue;
      for (int j = 0; j < 35; ++j) b[r][j] -= factor * b[next][j];
      b[r][col] = 0.0;
    }
    ++next;
  }
  if (next > 5) {
    throw SolverError(ErrorCode::kUnexpectedPivotPattern,
                      "quartic block has rank above five; observations are "
                      "not in normalized form");
  }

  // The last five rows must be exactly quartic-free before multiplication by
  // u and v: the basis has no w-free quintic monomials, so anything left in
  // those columns beyond elimination roundoff means the input was bad.
  for (int r = 5; r < 10; ++r) {
    const double scale = std::max(max_abs(b[r]), 1e-300);
    for (int col : kQuarticCols) {
      if (std::fabs(b[r][col]) > tol.quartic_zero_rel * scale) {
        throw SolverError(ErrorCode::kUnexpectedPivotPattern,
                          "row " + std::to_string(r) +
                              " keeps a pure quartic term after elimination");
      }
      b[r][col] = 0.0;
    }
  }

  // Stack: the ten reduced rows, u- and v-multiples of the last five
  // (quartic-free) rows, and w-multiples of all ten.  Every product stays
  // inside the basis.
  const MonomialOrder50& order = MonomialOrder50::instance();
  ExpandedSystem x;
  auto emit = [&](int out_row, const std::array<double, 35>& row, int da, int db,
                  int dc) {
    for (int j = 0; j < 35; ++j) {
      if (row[j] == 0.0) continue;
      const int idx =
          order.index_of(m35[j].a + da, m35[j].b + db, m35[j].c + dc);
      if (idx < 0) {
        throw SolverError(ErrorCode::kUnexpectedPivotPattern,
                          "expanded row leaves the 50-monomial basis");
      }
      x.rows[out_row][idx] = row[j];
    }
  };
  for (int i = 0; i < 10; ++i) emit(i, b[i], 0, 0, 0);
  for (int k = 0; k < 5; ++k) emit(10 + k, b[5 + k], 1, 0, 0);
  for (int k = 0; k < 5; ++k) emit(15 + k, b[5 + k], 0, 1, 0);
  for (int i = 0; i < 10; ++i) emit(20 + i, b[i], 0, 0, 1);
  return x;
}

ReducedSystem reduce_and_extract_c(const ExpandedSystem& x, const Tolerances& tol) {
  // The elimination runs in extended precision.  The map from the expanded
  // rows to the fully reduced tail rows has condition 1/sigma_min of the
  // leading block, which reaches 1e10 on hard instances; double precision
  // then leaves ~1e-6 relative error in the tail rows, and the determinant
  // expansion (itself cancellation-heavy) turns that into garbage
  // coefficients.  Extended precision moves the noise floor far enough down
  // that the downstream rounding back to double is the dominant error.
  long double a[30][50];
  for (int i = 0; i < 30; ++i) {
    long double rowmax = 0.0L;
    for (int j = 0; j < 50; ++j) {
      a[i][j] = static_cast<long double>(x.rows[i][j]);
      rowmax = std::max(rowmax, std::fabs(a[i][j]));
    }
    if (rowmax == 0.0L) {
      throw SolverError(ErrorCode::kUnexpectedPivotPattern,
                        "expanded system contains a zero row");
    }
    for (int j = 0; j < 50; ++j) a[i][j] /= rowmax;
  }

  // Orthogonal (Householder) elimination of the 24 leading columns, taking
  // the strongest remaining column each step. The row recombination is
  // orthonormal, so — unlike Gaussian elimination — a nearly dependent
  // leading block cannot amplify roundoff into the surviving rows: the rows
  // left over carry exactly the component of the row space that annihilates
  // the leading monomials, to the accuracy the arithmetic supports.
  bool consumed[MonomialOrder50::kTailStart] = {};
  int nextrow = 0;
  for (int step = 0; step < MonomialOrder50::kTailStart; ++step) {
    int bestc = -1;
    long double bestn2 = 0.0L;
    for (int col = 0; col < MonomialOrder50::kTailStart; ++col) {
      if (consumed[col]) continue;
      long double n2 = 0.0L;
      for (int r = nextrow; r < 30; ++r) n2 += a[r][col] * a[r][col];
      if (n2 >= bestn2) {
        bestn2 = n2;
        bestc = col;
      }
    }
    if (bestn2 == 0.0L) break;  // every remaining column is already annihilated
    const long double bestn = std::sqrt(bestn2);
    long double v[30];
    const long double alpha = a[nextrow][bestc] >= 0.0L ? -bestn : bestn;
    v[nextrow] = a[nextrow][bestc] - alpha;
    long double vnorm2 = v[nextrow] * v[nextrow];
    for (int r = nextrow + 1; r < 30; ++r) {
      v[r] = a[r][bestc];
      vnorm2 += v[r] * v[r];
    }
    if (vnorm2 > 0.0L) {
      const long double beta = 2.0L / vnorm2;
      for (int j = 0; j < 50; ++j) {
        long double dot = 0.0L;
        for (int r = nextrow; r < 30; ++r) dot += v[r] * a[r][j];
        const long double s = beta * dot;
        if (s == 0.0L) continue;
        for (int r = nextrow; r < 30; ++r) a[r][j] -= s * v[r];
      }
    }
    a[nextrow][bestc] = alpha;
    for (int r = nextrow + 1; r < 30; ++r) a[r][bestc] = 0.0L;
    consumed[bestc] = true;
    ++nextrow;
  }
  // A nearly dependent leading block makes the last reflections operate on
  // noise-scale columns; that costs accuracy in the surviving rows (which is
  // intrinsic to the instance) but never blows them up the way dividing by a
  // tiny pivot would. Rows nextrow..29 now live entirely on the tail.
  for (int r = nextrow; r < 30; ++r) {
    for (int col = 0; col < MonomialOrder50::kTailStart; ++col) a[r][col] = 0.0L;
  }
  long double blockmax = 0.0L;
  for (int r = nextrow; r < 30; ++r) {
    for (int j = MonomialOrder50::kTailStart; j < 50; ++j) {
      blockmax = std::max(blockmax, std::fabs(a[r][j]));
    }
  }
  if (blockmax == 0.0L) {
    throw SolverError(ErrorCode::kUnexpectedPivotPattern,
                      "tail block vanished during elimination");
  }

  // Full Gauss-Jordan of the remaining rows on the pivot block
  // u^3 w^2 .. v^3 leaves an identity there; the rows, in pivot-column
  // order, are g_1..g_6. Pivots are judged against the tail block's own
  // magnitude: the residue of a poorly conditioned instance can sit orders
  // of magnitude below unit scale while staying perfectly valid.
  for (int k = 0; k < MonomialOrder50::kPivotCount; ++k) {
    const int col = MonomialOrder50::kTailStart + k;
    const int row = nextrow + k;
    int piv = -1;
    long double best = static_cast<long double>(tol.pivot_rel) * blockmax;
    for (int r = row; r < 30; ++r) {
      if (std::fabs(a[r][col]) > best) {
        best = std::fabs(a[r][col]);
        piv = r;
      }
    }
    if (piv < 0) {
      throw SolverError(ErrorCode::kUnexpectedPivotPattern,
                        "pivot block column " + std::to_string(col) +
                            " has no pivot");
    }
    for (int j = 0; j < 50; ++j) std::swap(a[row][j], a[piv][j]);
    const long double inv = 1.0L / a[row][col];
    for (int j = col; j < 50; ++j) a[row][j] *= inv;
    a[row][col] = 1.0L;
    for (int r = nextrow; r < 30; ++r) {
      if (r == row) continue;
      const long double factor = a[r][col];
      if (factor == 0.0L) continue;
      for (int j = col; j < 50; ++j) a[r][j] -= factor * a[row][j];
      a[r][col] = 0.0L;
    }
  }

  ReducedSystem out;
  for (int r = 0; r < 6; ++r) {
    for (int j = 0; j < 26; ++j) {
      out.tail_rows[r][j] = static_cast<double>(
          a[nextrow + r][MonomialOrder50::kTailStart + j]);
    }
  }

  // Tail layout (relative indices): pivot block 0..5; uv group
  // {w^3,w^2,w,1} = 6..9; u group {w^4..1} = 10..14; v group 15..19;
  // constant group {w^5..1} = 20..25.
  auto uv_poly = [&](int r) {
    const auto& g = out.tail_rows[r];
    return Poly1({g[9], g[8], g[7], g[6]});
  };
  auto u_poly = [&](int r) {
    const auto& g = out.tail_rows[r];
    return Poly1({g[14], g[13], g[12], g[11], g[10]});
  };
  auto v_poly = [&](int r) {
    const auto& g = out.tail_rows[r];
    return Poly1({g[19], g[18], g[17], g[16], g[15]});
  };
  auto one_poly = [&](int r) {
    const auto& g = out.tail_rows[r];
    return Poly1({g[25], g[24], g[23], g[22], g[21], g[20]});
  };

  // h_1 = g_1 - w g_2, h_2 = g_2 - w g_3, h_3 = g_4 - w g_5, h_4 = g_5 - w g_6:
  // the pivot-block cubes cancel, leaving rows over [uv, u, v, 1] alone.
  constexpr int kPairs[4][2] = {{0, 1}, {1, 2}, {3, 4}, {4, 5}};
  for (int k = 0; k < 4; ++k) {
    const int i = kPairs[k][0], j = kPairs[k][1];
    out.c.entry[k][0] = uv_poly(i) - uv_poly(j).shifted_up(1);
    out.c.entry[k][1] = u_poly(i) - u_poly(j).shifted_up(1);
    out.c.entry[k][2] = v_poly(i) - v_poly(j).shifted_up(1);
    out.c.entry[k][3] = one_poly(i) - one_poly(j).shifted_up(1);
  }
  return out;
}

Poly1 determinant_c(const PolyMatrixC& c) {
  auto det3x3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
    const auto& e = c.entry;
    return e[r0][c0] * (e[r1][c1] * e[r2][c2] - e[r1][c2] * e[r2][c1]) -
           e[r0][c1] * (e[r1][c0] * e[r2][c2] - e[r1][c2] * e[r2][c0]) +
           e[r0][c2] * (e[r1][c0] * e[r2][c1] - e[r1][c1] * e[r2][c0]);
  };
  Poly1 det = c.entry[0][0] * det3x3(1, 2, 3, 1, 2, 3) -
              c.entry[0][1] * det3x3(1, 2, 3, 0, 2, 3) +
              c.entry[0][2] * det3x3(1, 2, 3, 0, 1, 3) -
              c.entry[0][3] * det3x3(1, 2, 3, 0, 1, 2);
  return det;
}

Poly1 fold_symmetric(const Poly1& w_poly, const Tolerances& tol) {
  double c[21];
  for (int k = 0; k <= 20; ++k) c[k] = w_poly.coefficient(k);
  if (w_poly.degree() > 20) {
    throw SolverError(ErrorCode::kSymmetryViolation,
                      "determinant polynomial exceeds degree 20");
  }
  double maxc = 0.0;
  for (double x : c) maxc = std::max(maxc, std::fabs(x));
  if (maxc == 0.0) return Poly1();

  // Palindromic symmetry up to alternating signs: c_{10-k} = (-1)^k c_{10+k}.
  // Elimination roundoff lands unevenly on the two halves (the upper half,
  // which the fold below actually consumes, comes out cleaner), so the pairs
  // are checked but never mixed; the bound only rejects gross mismatches,
  // i.e. structural failures rather than noise.
  for (int k = 1; k <= 10; ++k) {
    const double expected = (k % 2 == 0) ? c[10 + k] : -c[10 + k];
    if (std::fabs(c[10 - k] - expected) > tol.symmetry_rel * maxc) {
      throw SolverError(ErrorCode::kSymmetryViolation,
                        "coefficient symmetry violated at offset " +
                            std::to_string(k));
    }
  }

  // W(w) = sum_k p_k w^(10-k) (w^2 - 1)^k matches coefficients of w^(10+k):
  // c_{10+k} = p_k + sum_{j>k, j=k (mod 2)} p_j * (-1)^((j-k)/2) * C(j, (j-k)/2).
  // Solve top down; then Wt(x) = sum_k p_k x^k.
  double binom[11][11];
  for (int n = 0; n <= 10; ++n) {
    binom[n][0] = 1.0;
    for (int r = 1; r <= n; ++r) {
      binom[n][r] = (r == n) ? 1.0 : binom[n - 1][r - 1] + binom[n - 1][r];
    }
  }
  std::vector<double> p(11, 0.0);
  for (int k = 10; k >= 0; --k) {
    double s = c[10 + k];
    for (int j = k + 2; j <= 10; j += 2) {
      const int half = (j - k) / 2;
      const double sign = (half % 2 == 0) ? 1.0 : -1.0;
      s -= p[j] * sign * binom[j][half];
    }
    p[k] = s;
  }
  return Poly1(std::move(p));
}

}  // namespace fivept
