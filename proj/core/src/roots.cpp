#include "fivept/roots.hpp"

#include <algorithm>
#include <cmath>

#include "fivept/errors.hpp"

namespace fivept {

namespace {

// Remainder of a / b (degrees of a >= b >= 0), both assumed trimmed.
Poly1 poly_remainder(const Poly1& a, const Poly1& b) {
  std::vector<double> r = a.coefficients();
  const int db = b.degree();
  const double lead_b = b.coefficient(db);
  int dr = a.degree();
  while (dr >= db) {
    const double factor = r[dr] / lead_b;
    const int shift = dr - db;
    for (int j = 0; j <= db; ++j) r[shift + j] -= factor * b.coefficient(j);
    r[dr] = 0.0;  // cancel exactly
    while (dr >= 0 && r[dr] == 0.0) --dr;
  }
  r.resize(static_cast<size_t>(std::max(dr + 1, 0)));
  return Poly1(std::move(r));
}

// Rescales to unit max-abs (positive factor, so signs are untouched).
Poly1 unit_scaled(const Poly1& p) {
  const double m = p.max_abs_coefficient();
  if (m == 0.0) return p;
  return p * (1.0 / m);
}

struct SturmChain {
  std::vector<Poly1> seq;

  explicit SturmChain(const Poly1& p, const Tolerances& tol) {
    seq.push_back(unit_scaled(p));
    Poly1 d = p.derivative();
    if (d.is_zero()) return;
    seq.push_back(unit_scaled(d));
    while (true) {
      const Poly1& a = seq[seq.size() - 2];
      const Poly1& b = seq.back();
      if (b.degree() <= 0) break;
      Poly1 r = poly_remainder(a, b).trimmed(tol.trim_rel);
      if (r.is_zero()) break;
      seq.push_back(unit_scaled(r * -1.0));
    }
  }

  // Sign variations of the chain at x; exact zeros are skipped, per the
  // standard convention.
  int variations(double x) const {
    int count = 0;
    int prev = 0;
    for (const Poly1& s : seq) {
      const double y = s(x);
      const int sign = (y > 0.0) - (y < 0.0);
      if (sign == 0) continue;
      if (prev != 0 && sign != prev) ++count;
      prev = sign;
    }
    return count;
  }
};

// Bisection-based isolation over (lo0, hi0], given the chain of p.
std::vector<RootBracket> isolate_on(const Poly1& p, const SturmChain& chain,
                                    double lo0, double hi0,
                                    const Tolerances& tol) {
  std::vector<RootBracket> out;

  struct Interval {
    double lo, hi;
    int vlo, vhi;
  };
  std::vector<Interval> stack;
  stack.push_back({lo0, hi0, chain.variations(lo0), chain.variations(hi0)});

  while (!stack.empty()) {
    Interval iv = stack.back();
    stack.pop_back();
    const int n = iv.vlo - iv.vhi;
    if (n <= 0) continue;

    const double width_floor = tol.isolation_floor * (1.0 + std::fabs(iv.lo));
    if (n == 1) {
      // Shrink until the endpoint signs certify the root, so polishing can
      // bisect.  A root of even local multiplicity never shows a sign
      // change; give up at the width floor and flag it.
      double lo = iv.lo, hi = iv.hi;
      int vlo = iv.vlo, vhi = iv.vhi;
      bool flagged = false;
      while (p(lo) * p(hi) >= 0.0) {
        if (hi - lo <= width_floor) {
          flagged = true;
          break;
        }
        const double mid = 0.5 * (lo + hi);
        const int vm = chain.variations(mid);
        if (vlo - vm == 1) {
          hi = mid;
          vhi = vm;
        } else if (vm - vhi == 1) {
          lo = mid;
          vlo = vm;
        } else {
          // The midpoint split lost the root count (evaluation at a root);
          // fall back to the half whose endpoints still bracket a change.
          flagged = true;
          break;
        }
      }
      if (flagged) {
        out.push_back({lo, hi, false, true});
      } else {
        out.push_back({lo, hi, true, false});
      }
      continue;
    }

    // n >= 2 distinct roots inside: split, or emit one flagged bracket when
    // the interval cannot be narrowed further (tight cluster / multiple root).
    if (iv.hi - iv.lo <= width_floor) {
      out.push_back({iv.lo, iv.hi, false, true});
      continue;
    }
    double mid = 0.5 * (iv.lo + iv.hi);
    // Nudge off an exact root of the chain head so counts stay consistent.
    if (p(mid) == 0.0) {
      mid += (iv.hi - iv.lo) * 1e-9;
    }
    const int vm = chain.variations(mid);
    stack.push_back({iv.lo, mid, iv.vlo, vm});
    stack.push_back({mid, iv.hi, vm, iv.vhi});
  }

  std::sort(out.begin(), out.end(),
            [](const RootBracket& a, const RootBracket& b) { return a.lo < b.lo; });
  return out;
}

}  // namespace

std::vector<RootBracket> sturm_isolate(const Poly1& p_in, const Tolerances& tol) {
  const Poly1 p = p_in.trimmed(tol.trim_rel);
  if (p.is_zero()) {
    throw SolverError(ErrorCode::kDegenerateZeroPolynomial,
                      "cannot isolate roots of the zero polynomial");
  }
  const int d = p.degree();
  if (d == 0) return {};

  // Cauchy bound: all real roots lie in (-M, M).
  double max_ratio = 0.0;
  const double lead = std::fabs(p.coefficient(d));
  for (int k = 0; k < d; ++k) {
    max_ratio = std::max(max_ratio, std::fabs(p.coefficient(k)) / lead);
  }
  const double m_bound = 1.0 + max_ratio;

  const SturmChain chain(p, tol);
  return isolate_on(p, chain, -m_bound, m_bound, tol);
}

std::vector<RootBracket> sturm_isolate(const Poly1& p_in, double lo, double hi,
                                       const Tolerances& tol) {
  const Poly1 p = p_in.trimmed(tol.trim_rel);
  if (p.is_zero()) {
    throw SolverError(ErrorCode::kDegenerateZeroPolynomial,
                      "cannot isolate roots of the zero polynomial");
  }
  if (p.degree() == 0 || !(lo < hi)) return {};
  const SturmChain chain(p, tol);
  return isolate_on(p, chain, lo, hi, tol);
}

std::vector<RealRoot> find_real_roots(const Poly1& p_in, const Tolerances& tol) {
  const Poly1 direct = p_in.trimmed(tol.trim_rel);
  if (direct.is_zero()) {
    throw SolverError(ErrorCode::kDegenerateZeroPolynomial,
                      "cannot find roots of the zero polynomial");
  }

  // Cover a root sitting exactly on -1 (variation counts are half-open and
  // would otherwise miss it); the resulting sliver of double coverage around
  // the unit circle is removed below.
  constexpr double kLo = -1.0 - 1e-8;
  constexpr double kHi = 1.0;

  std::vector<RealRoot> out;
  if (direct.degree() >= 1) {
    const SturmChain chain(direct, tol);
    for (const RootBracket& b : isolate_on(direct, chain, kLo, kHi, tol)) {
      const PolishResult r = ridders_polish(direct, b, tol);
      out.push_back({r.root, r.converged, b.possibly_multiple});
    }
  }

  // Reversed polynomial: its roots inside the unit interval are the
  // reciprocals of p's roots outside.  Exact zeros at its low end are p's
  // vanished leading coefficients, i.e. roots at infinity; shift them away.
  std::vector<double> rc = p_in.coefficients();
  std::reverse(rc.begin(), rc.end());
  size_t strip = 0;
  while (strip + 1 < rc.size() && rc[strip] == 0.0) ++strip;
  rc.erase(rc.begin(), rc.begin() + static_cast<ptrdiff_t>(strip));
  const Poly1 reversed = Poly1(std::move(rc)).trimmed(tol.trim_rel);
  if (reversed.degree() >= 1) {
    const SturmChain chain(reversed, tol);
    for (const RootBracket& b : isolate_on(reversed, chain, kLo, kHi, tol)) {
      const PolishResult r = ridders_polish(reversed, b, tol);
      if (r.root == 0.0) continue;  // reciprocal root at infinity
      const double x = 1.0 / r.root;
      if (!std::isfinite(x)) continue;
      out.push_back({x, r.converged, b.possibly_multiple});
    }
  }

  std::sort(out.begin(), out.end(),
            [](const RealRoot& a, const RealRoot& b) { return a.x < b.x; });

  // The two passes overlap only in a sliver around |x| = 1; drop the weaker
  // member of any near-identical pair there.
  std::vector<RealRoot> dedup;
  for (const RealRoot& r : out) {
    if (!dedup.empty()) {
      const RealRoot& prev = dedup.back();
      const bool near_unit = std::fabs(std::fabs(r.x) - 1.0) <= tol.root_dedup_zone;
      if (near_unit &&
          r.x - prev.x <= tol.root_dedup_rel * (1.0 + std::fabs(prev.x))) {
        if (r.converged && !prev.converged) dedup.back() = r;
        continue;
      }
    }
    dedup.push_back(r);
  }
  return dedup;
}

PolishResult ridders_polish(const Poly1& p, const RootBracket& bracket,
                            const Tolerances& tol) {
  auto residual_ok = [&](double x, double fx) {
    // Anchor to the local evaluation magnitude sum_k |c_k||x|^k: that is the
    // roundoff scale of Horner at x, and for coefficients spanning many
    // orders of magnitude it is far smaller near the small-coefficient end
    // than the global bound max|c| * (1+|x|)^d (which it implies).  When even
    // this is unreachable the bracket-width stop below terminates instead.
    double mag = 0.0;
    const double ax = std::fabs(x);
    for (int k = p.degree(); k >= 0; --k) {
      mag = mag * ax + std::fabs(p.coefficient(k));
    }
    return std::fabs(fx) <= tol.ridders_residual * mag;
  };

  double lo = bracket.lo, hi = bracket.hi;
  if (!bracket.sign_change) {
    const double mid = 0.5 * (lo + hi);
    return {mid, residual_ok(mid, p(mid))};
  }

  double flo = p(lo), fhi = p(hi);
  if (flo == 0.0) return {lo, true};
  if (fhi == 0.0) return {hi, true};

  double best_x = 0.5 * (lo + hi);
  double best_f = std::fabs(p(best_x));
  for (int iter = 0; iter < tol.ridders_max_iter; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = p(mid);
    const double s = std::sqrt(fmid * fmid - flo * fhi);
    if (s == 0.0) return {mid, true};  // only possible when fmid == 0 here
    const double dir = (flo >= fhi) ? 1.0 : -1.0;
    const double x = mid + (mid - lo) * dir * fmid / s;
    const double fx = p(x);
    if (std::fabs(fx) < best_f) {
      best_f = std::fabs(fx);
      best_x = x;
    }
    if (fx == 0.0 || residual_ok(x, fx)) return {x, true};

    // Re-bracket with the tightest pair among {lo, mid, x, hi} that still
    // straddles the root.
    if (fmid * fx < 0.0) {
      if (mid < x) {
        lo = mid; flo = fmid; hi = x; fhi = fx;
      } else {
        lo = x; flo = fx; hi = mid; fhi = fmid;
      }
    } else if (flo * fx < 0.0) {
      hi = x;
      fhi = fx;
    } else {
      lo = x;
      flo = fx;
    }
    if (hi - lo <= tol.ridders_width * (1.0 + std::fabs(x))) {
      return {x, true};
    }
  }
  return {best_x, false};
}

double unfold_root(double wt) {
  const double half = 0.5 * wt;
  const double sign = wt < 0.0 ? -1.0 : 1.0;
  return half + sign * std::sqrt(half * half + 1.0);
}

}  // namespace fivept
