#include "fivept/poly.hpp"

#include <algorithm>
#include <cmath>

namespace fivept {

// ---------------------------------------------------------------------------
// Poly1
// ---------------------------------------------------------------------------

Poly1::Poly1(std::vector<double> ascending) : c_(std::move(ascending)) {}

int Poly1::degree() const {
  for (int k = static_cast<int>(c_.size()) - 1; k >= 0; --k) {
    if (c_[k] != 0.0) return k;
  }
  return -1;
}

double Poly1::coefficient(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return 0.0;
  return c_[k];
}

double Poly1::max_abs_coefficient() const {
  double m = 0.0;
  for (double c : c_) m = std::max(m, std::fabs(c));
  return m;
}

double Poly1::operator()(double x) const {
  double r = 0.0;
  for (int k = static_cast<int>(c_.size()) - 1; k >= 0; --k) r = r * x + c_[k];
  return r;
}

Poly1 Poly1::operator+(const Poly1& o) const {
  std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
  for (size_t i = 0; i < r.size(); ++i) {
    r[i] = coefficient(static_cast<int>(i)) + o.coefficient(static_cast<int>(i));
  }
  return Poly1(std::move(r));
}

Poly1 Poly1::operator-(const Poly1& o) const {
  std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
  for (size_t i = 0; i < r.size(); ++i) {
    r[i] = coefficient(static_cast<int>(i)) - o.coefficient(static_cast<int>(i));
  }
  return Poly1(std::move(r));
}

Poly1 Poly1::operator*(const Poly1& o) const {
  const int da = degree(), db = o.degree();
  if (da < 0 || db < 0) return Poly1();
  std::vector<double> r(static_cast<size_t>(da + db + 1), 0.0);
  for (int i = 0; i <= da; ++i) {
    if (c_[i] == 0.0) continue;
    for (int j = 0; j <= db; ++j) r[i + j] += c_[i] * o.c_[j];
  }
  return Poly1(std::move(r));
}

Poly1 Poly1::operator*(double s) const {
  std::vector<double> r = c_;
  for (double& c : r) c *= s;
  return Poly1(std::move(r));
}

Poly1 Poly1::derivative() const {
  if (c_.size() <= 1) return Poly1();
  std::vector<double> r(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k) r[k - 1] = c_[k] * static_cast<double>(k);
  return Poly1(std::move(r));
}

Poly1 Poly1::trimmed(double rel) const {
  const double floor = rel * max_abs_coefficient();
  int d = -1;
  for (int k = static_cast<int>(c_.size()) - 1; k >= 0; --k) {
    if (std::fabs(c_[k]) > floor) {
      d = k;
      break;
    }
  }
  if (d < 0) return Poly1();
  return Poly1(std::vector<double>(c_.begin(), c_.begin() + d + 1));
}

Poly1 Poly1::shifted_up(int k) const {
  if (is_zero()) return Poly1();
  std::vector<double> r(c_.size() + static_cast<size_t>(k), 0.0);
  std::copy(c_.begin(), c_.end(), r.begin() + k);
  return Poly1(std::move(r));
}

// ---------------------------------------------------------------------------
// Monomial enumeration and Poly3
// ---------------------------------------------------------------------------

std::vector<Monomial> monomials_graded_desc(int max_degree) {
  std::vector<Monomial> out;
  for (int d = max_degree; d >= 0; --d) {
    // Lexicographic with u > v > w: highest u first, then highest v.
    for (int a = d; a >= 0; --a) {
      for (int b = d - a; b >= 0; --b) {
        out.push_back(Monomial{a, b, d - a - b});
      }
    }
  }
  return out;
}

namespace {

// Index tables for the dense degree-<=6 representation, built once.
struct Poly3Tables {
  std::vector<Monomial> monomials;          // graded descending, 84 entries
  int index[7][7][7];                       // exponents -> position

  Poly3Tables() {
    monomials = monomials_graded_desc(Poly3::kMaxDegree);
    for (auto& plane : index)
      for (auto& row : plane)
        for (int& e : row) e = -1;
    for (size_t i = 0; i < monomials.size(); ++i) {
      const Monomial& m = monomials[i];
      index[m.a][m.b][m.c] = static_cast<int>(i);
    }
  }

  int at(int a, int b, int c) const {
    if (a < 0 || b < 0 || c < 0 || a + b + c > Poly3::kMaxDegree) return -1;
    return index[a][b][c];
  }
};

const Poly3Tables& tables() {
  static const Poly3Tables t;
  return t;
}

}  // namespace

Poly3 Poly3::constant(double c) {
  Poly3 p;
  p.set_coefficient(0, 0, 0, c);
  return p;
}

double Poly3::coefficient(int a, int b, int c) const {
  const int i = tables().at(a, b, c);
  return i < 0 ? 0.0 : c_[i];
}

void Poly3::set_coefficient(int a, int b, int c, double value) {
  const int i = tables().at(a, b, c);
  if (i < 0) {
    throw SolverError(ErrorCode::kDegreeOverflow,
                      "coefficient index outside the degree-6 basis");
  }
  c_[i] = value;
}

void Poly3::add_coefficient(int a, int b, int c, double value) {
  const int i = tables().at(a, b, c);
  if (i < 0) {
    throw SolverError(ErrorCode::kDegreeOverflow,
                      "coefficient index outside the degree-6 basis");
  }
  c_[i] += value;
}

int Poly3::total_degree() const {
  const auto& mono = tables().monomials;
  for (size_t i = 0; i < mono.size(); ++i) {
    if (c_[i] != 0.0) return mono[i].degree();  // list is degree-descending
  }
  return -1;
}

double Poly3::max_abs_coefficient() const {
  double m = 0.0;
  for (double c : c_) m = std::max(m, std::fabs(c));
  return m;
}

double Poly3::operator()(double u, double v, double w) const {
  double pu[kMaxDegree + 1], pv[kMaxDegree + 1], pw[kMaxDegree + 1];
  pu[0] = pv[0] = pw[0] = 1.0;
  for (int k = 1; k <= kMaxDegree; ++k) {
    pu[k] = pu[k - 1] * u;
    pv[k] = pv[k - 1] * v;
    pw[k] = pw[k - 1] * w;
  }
  const auto& mono = tables().monomials;
  double s = 0.0;
  for (size_t i = 0; i < mono.size(); ++i) {
    if (c_[i] == 0.0) continue;
    s += c_[i] * pu[mono[i].a] * pv[mono[i].b] * pw[mono[i].c];
  }
  return s;
}

Poly3 Poly3::operator+(const Poly3& o) const {
  Poly3 r = *this;
  for (int i = 0; i < kNumCoefficients; ++i) r.c_[i] += o.c_[i];
  return r;
}

Poly3 Poly3::operator-(const Poly3& o) const {
  Poly3 r = *this;
  for (int i = 0; i < kNumCoefficients; ++i) r.c_[i] -= o.c_[i];
  return r;
}

Poly3 Poly3::operator*(double s) const {
  Poly3 r = *this;
  for (double& c : r.c_) c *= s;
  return r;
}

Poly3& Poly3::operator+=(const Poly3& o) {
  for (int i = 0; i < kNumCoefficients; ++i) c_[i] += o.c_[i];
  return *this;
}

Poly3 poly3_mul(const Poly3& p, const Poly3& q) {
  const int dp = p.total_degree(), dq = q.total_degree();
  if (dp < 0 || dq < 0) return Poly3();
  if (dp + dq > Poly3::kMaxDegree) {
    throw SolverError(ErrorCode::kDegreeOverflow,
                      "product exceeds total degree " +
                          std::to_string(Poly3::kMaxDegree));
  }
  const auto& t = tables();
  Poly3 r;
  for (size_t i = 0; i < t.monomials.size(); ++i) {
    const double ci = p.c_[i];
    if (ci == 0.0) continue;
    const Monomial& mi = t.monomials[i];
    for (size_t j = 0; j < t.monomials.size(); ++j) {
      const double cj = q.c_[j];
      if (cj == 0.0) continue;
      const Monomial& mj = t.monomials[j];
      const int k = t.at(mi.a + mj.a, mi.b + mj.b, mi.c + mj.c);
      // Degree bound already checked; k is valid for every nonzero pair.
      r.c_[k] += ci * cj;
    }
  }
  return r;
}

Poly3 poly3_div_exact(const Poly3& p, const Poly3& d, const Tolerances& tol) {
  const int dd = d.total_degree();
  if (dd < 0) {
    throw SolverError(ErrorCode::kInexactDivision, "division by the zero polynomial");
  }
  const auto& t = tables();
  // Peel ascending by total degree: the divisor's lowest term must be a
  // single monomial with the smallest degree (true for 1 + u^2 + v^2 + w^2,
  // whose constant term leads).  We require a nonzero constant term.
  const double d0 = d.coefficient(0, 0, 0);
  if (d0 == 0.0) {
    throw SolverError(ErrorCode::kInexactDivision,
                      "divisor must have a nonzero constant term");
  }
  Poly3 rem = p;
  Poly3 quot;
  // Ascending order = reversed graded-descending list.
  for (int i = static_cast<int>(t.monomials.size()) - 1; i >= 0; --i) {
    const Monomial& m = t.monomials[i];
    const double c = rem.c_[i];
    if (c == 0.0) continue;
    if (m.degree() + dd > Poly3::kMaxDegree) break;  // cannot be part of the quotient
    const double qc = c / d0;
    quot.c_[i] = qc;
    // rem -= qc * monomial(m) * d
    for (size_t j = 0; j < t.monomials.size(); ++j) {
      const double cj = d.c_[j];
      if (cj == 0.0) continue;
      const Monomial& mj = t.monomials[j];
      const int k = t.at(m.a + mj.a, m.b + mj.b, m.c + mj.c);
      if (k < 0) {
        throw SolverError(ErrorCode::kDegreeOverflow,
                          "quotient times divisor exceeds the degree-6 basis");
      }
      rem.c_[k] -= qc * cj;
    }
  }
  const double bound = tol.poly_div_remainder * std::max(p.max_abs_coefficient(), 1e-300);
  if (rem.max_abs_coefficient() > bound) {
    throw SolverError(ErrorCode::kInexactDivision,
                      "division left a non-negligible remainder");
  }
  return quot;
}

}  // namespace fivept
