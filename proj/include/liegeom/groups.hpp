#pragma once

// Registry of the compact matrix groups SO(n), SU(n), U(n), Sp(n) and their
// Lie algebras: membership, projection, Haar sampling, orthonormal algebra
// bases, brackets and ad-operators. Sp(n) is realized as 2n x 2n complex
// matrices with the quaternionic reality constraint m = -Omega conj(m) Omega.

#include <Eigen/Dense>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "liegeom/error.hpp"
#include "liegeom/numkit.hpp"
#include "liegeom/rng.hpp"

namespace liegeom {

enum class GroupFamily { SO, SU, U, Sp };

inline const char* family_prefix(GroupFamily f) {
  switch (f) {
    case GroupFamily::SO: return "SO";
    case GroupFamily::SU: return "SU";
    case GroupFamily::U: return "U";
    case GroupFamily::Sp: return "Sp";
  }
  return "?";
}

struct GroupId {
  GroupFamily family;
  int n;

  bool operator==(const GroupId& o) const {
    return family == o.family && n == o.n;
  }
  bool operator!=(const GroupId& o) const { return !(*this == o); }

  /// Side length of the ambient matrices (2n for Sp(n)).
  int ambient_dim() const { return family == GroupFamily::Sp ? 2 * n : n; }

  int algebra_dim() const {
    switch (family) {
      case GroupFamily::SO: return n * (n - 1) / 2;
      case GroupFamily::SU: return n * n - 1;
      case GroupFamily::U: return n * n;
      case GroupFamily::Sp: return n * (2 * n + 1);
    }
    return 0;
  }

  bool is_real() const { return family == GroupFamily::SO; }

  std::string name() const {
    return std::string(family_prefix(family)) + ":" + std::to_string(n);
  }
};

inline GroupId make_group_id(GroupFamily family, int n) {
  const int min_n = family == GroupFamily::Sp ? 1 : 2;
  if (n < min_n) {
    fail(ErrorCode::InvalidArgument,
         std::string("unsupported n for ") + family_prefix(family) + ": " +
             std::to_string(n));
  }
  return GroupId{family, n};
}

inline GroupId so(int n) { return make_group_id(GroupFamily::SO, n); }
inline GroupId su(int n) { return make_group_id(GroupFamily::SU, n); }
inline GroupId un(int n) { return make_group_id(GroupFamily::U, n); }
inline GroupId sp(int n) { return make_group_id(GroupFamily::Sp, n); }

/// The symplectic form Omega = [[0, I], [-I, 0]] of size 2n x 2n.
inline Matrix symplectic_form(int n) {
  Matrix omega = Matrix::Zero(2 * n, 2 * n);
  omega.block(0, n, n, n) = Matrix::Identity(n, n);
  omega.block(n, 0, n, n) = -Matrix::Identity(n, n);
  return omega;
}

struct GroupElement {
  GroupId group;
  Matrix m;
};

struct AlgebraElement {
  GroupId group;
  Matrix v;
};

struct MembershipReport {
  bool ok = false;
  double max_residual = 0.0;
  std::vector<std::pair<std::string, double>> residuals;

  void add(const std::string& name, double r) {
    residuals.emplace_back(name, r);
    max_residual = std::max(max_residual, r);
  }
};

/// Defining-relation residuals for group membership.
inline MembershipReport membership(GroupId g, const Matrix& m,
                                   const Tolerances& tol = {}) {
  const int d = g.ambient_dim();
  if (m.rows() != d || m.cols() != d) {
    fail(ErrorCode::DimensionMismatch,
         g.name() + " expects " + std::to_string(d) + "x" + std::to_string(d));
  }
  MembershipReport rep;
  const Matrix id = Matrix::Identity(d, d);
  rep.add("unitarity", (m.adjoint() * m - id).norm());
  switch (g.family) {
    case GroupFamily::SO:
      rep.add("realness",
              m.size() ? m.imag().cwiseAbs().maxCoeff() : 0.0);
      rep.add("determinant", std::abs(m.determinant() - cxd(1.0, 0.0)));
      break;
    case GroupFamily::SU:
      rep.add("determinant", std::abs(m.determinant() - cxd(1.0, 0.0)));
      break;
    case GroupFamily::U:
      break;
    case GroupFamily::Sp: {
      const Matrix omega = symplectic_form(g.n);
      rep.add("symplectic", (m.transpose() * omega * m - omega).norm());
      break;
    }
  }
  rep.ok = rep.max_residual <= tol.membership_tol;
  return rep;
}

inline bool contains(GroupId g, const Matrix& m, const Tolerances& tol = {}) {
  return membership(g, m, tol).ok;
}

/// Defining-relation residuals for Lie algebra membership.
inline MembershipReport algebra_membership(GroupId g, const Matrix& v,
                                           const Tolerances& tol = {}) {
  const int d = g.ambient_dim();
  if (v.rows() != d || v.cols() != d) {
    fail(ErrorCode::DimensionMismatch,
         g.name() + " algebra expects " + std::to_string(d) + "x" +
             std::to_string(d));
  }
  MembershipReport rep;
  rep.add("skew", (v + v.adjoint()).norm());
  switch (g.family) {
    case GroupFamily::SO:
      rep.add("realness",
              v.size() ? v.imag().cwiseAbs().maxCoeff() : 0.0);
      break;
    case GroupFamily::SU:
      rep.add("traceless", std::abs(v.trace()));
      break;
    case GroupFamily::U:
      break;
    case GroupFamily::Sp: {
      const Matrix omega = symplectic_form(g.n);
      rep.add("symplectic", (v.transpose() * omega + omega * v).norm());
      break;
    }
  }
  rep.ok = rep.max_residual <= tol.membership_tol;
  return rep;
}

inline GroupElement make_group_element(GroupId g, Matrix m,
                                       const Tolerances& tol = {}) {
  const MembershipReport rep = membership(g, m, tol);
  if (!rep.ok) {
    fail(ErrorCode::NotInGroup,
         g.name() + " membership residual " + std::to_string(rep.max_residual));
  }
  return GroupElement{g, std::move(m)};
}

inline AlgebraElement make_algebra_element(GroupId g, Matrix v,
                                           const Tolerances& tol = {}) {
  const MembershipReport rep = algebra_membership(g, v, tol);
  if (!rep.ok) {
    fail(ErrorCode::NotInGroup,
         g.name() + " algebra residual " + std::to_string(rep.max_residual));
  }
  return AlgebraElement{g, std::move(v)};
}

template <class T>
struct Drawn {
  T value;
  SeededSampler next;
};

namespace detail {

inline RealMatrix gaussian_real(RngStream& rng, int rows, int cols) {
  RealMatrix z(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) z(i, j) = rng.gaussian();
  return z;
}

inline Matrix gaussian_complex(RngStream& rng, int rows, int cols) {
  Matrix z(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) z(i, j) = rng.gaussian_complex();
  return z;
}

// Haar on O(n) conditioned to SO(n): QR of a real Ginibre matrix with the
// R-diagonal sign correction, then a fixed column flip off the det = -1 sheet.
inline RealMatrix haar_so(RngStream& rng, int n) {
  const RealMatrix z = gaussian_real(rng, n, n);
  Eigen::HouseholderQR<RealMatrix> qr(z);
  RealMatrix q = qr.householderQ();
  const RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    if (r(k, k) < 0.0) q.col(k) = -q.col(k);
  }
  if (q.determinant() < 0.0) q.col(n - 1) = -q.col(n - 1);
  return q;
}

inline Matrix haar_u(RngStream& rng, int n) {
  const Matrix z = gaussian_complex(rng, n, n);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const cxd d = r(k, k);
    const double a = std::abs(d);
    q.col(k) *= a > 0.0 ? d / a : cxd(1.0, 0.0);
  }
  return q;
}

inline Matrix haar_su(RngStream& rng, int n) {
  Matrix q = haar_u(rng, n);
  q.col(0) /= q.determinant();
  return q;
}

struct Quaternion {
  cxd a;  // q = a + j b
  cxd b;

  Quaternion operator*(const Quaternion& o) const {
    return {a * o.a - std::conj(b) * o.b,
            std::conj(a) * o.b + b * o.a};
  }
  Quaternion conj_q() const { return {std::conj(a), -b}; }
  double norm2() const { return std::norm(a) + std::norm(b); }
};

inline Quaternion qadd(const Quaternion& x, const Quaternion& y) {
  return {x.a + y.a, x.b + y.b};
}
inline Quaternion qsub(const Quaternion& x, const Quaternion& y) {
  return {x.a - y.a, x.b - y.b};
}
inline Quaternion qscale(const Quaternion& x, double s) {
  return {x.a * s, x.b * s};
}

}  // namespace detail

/// Haar-distributed group element for the given (seed, counter) state.
Drawn<GroupElement> haar_sample(GroupId g, const SeededSampler& s);

/// Orthonormal basis of the Lie algebra with respect to Re tr(X Y*).
const std::vector<AlgebraElement>& algebra_basis(GroupId g);

/// Random algebra element: standard Gaussian coefficients in the orthonormal
/// basis. Test plumbing, not part of any classification statement.
Drawn<AlgebraElement> algebra_sample(GroupId g, const SeededSampler& s);

inline AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) {
  if (x.group != y.group) {
    fail(ErrorCode::GroupMismatch,
         x.group.name() + " vs " + y.group.name());
  }
  return AlgebraElement{x.group, x.v * y.v - y.v * x.v};
}

/// Matrix of ad_X : v -> [X, v] in algebra_basis coordinates.
inline RealMatrix ad_matrix(GroupId g, const AlgebraElement& x) {
  if (x.group != g) {
    fail(ErrorCode::GroupMismatch, g.name() + " vs " + x.group.name());
  }
  const auto& basis = algebra_basis(g);
  const int d = static_cast<int>(basis.size());
  RealMatrix ad(d, d);
  for (int j = 0; j < d; ++j) {
    const Matrix w = x.v * basis[j].v - basis[j].v * x.v;
    for (int i = 0; i < d; ++i) {
      // Coefficient extraction through the Frobenius pairing Re tr(w B_i*).
      ad(i, j) = (w.array() * basis[i].v.array().conjugate()).sum().real();
    }
  }
  return ad;
}

/// Nearest group element via the polar factor, with determinant phase
/// correction for SO/SU and quaternionic symmetrization for Sp.
inline GroupElement project_to_group(GroupId g, const Matrix& m,
                                     const Tolerances& tol = {}) {
  const int d = g.ambient_dim();
  if (m.rows() != d || m.cols() != d) {
    fail(ErrorCode::DimensionMismatch, "project_to_group: wrong size");
  }
  Matrix candidate;
  switch (g.family) {
    case GroupFamily::SO: {
      const RealMatrix mr = m.real();
      Eigen::JacobiSVD<RealMatrix> svd(
          mr, Eigen::ComputeFullU | Eigen::ComputeFullV);
      RealMatrix u = svd.matrixU() * svd.matrixV().transpose();
      if (u.determinant() < 0.0) {
        fail(ErrorCode::TooFar, "nearest orthogonal factor has det -1");
      }
      candidate = to_complex(u);
      break;
    }
    case GroupFamily::SU:
    case GroupFamily::U: {
      Eigen::JacobiSVD<Matrix> svd(m,
                                   Eigen::ComputeFullU | Eigen::ComputeFullV);
      Matrix u = svd.matrixU() * svd.matrixV().adjoint();
      if (g.family == GroupFamily::SU) {
        const double delta = std::arg(u.determinant());
        u *= std::exp(cxd(0.0, -delta / g.n));
      }
      candidate = u;
      break;
    }
    case GroupFamily::Sp: {
      const Matrix omega = symplectic_form(g.n);
      const Matrix sym = 0.5 * (m - omega * m.conjugate() * omega);
      Eigen::JacobiSVD<Matrix> svd(sym,
                                   Eigen::ComputeFullU | Eigen::ComputeFullV);
      candidate = svd.matrixU() * svd.matrixV().adjoint();
      break;
    }
  }
  if ((m - candidate).norm() > 0.1) {
    fail(ErrorCode::TooFar, "input further than 0.1 from " + g.name());
  }
  return make_group_element(g, candidate, tol);
}

// ---------------------------------------------------------------------------
// Implementations that need the basis tables.

namespace detail {

inline std::vector<Matrix> skew_real_basis(int n) {
  // (E_ab - E_ba)/sqrt(2), a < b.
  std::vector<Matrix> out;
  const double s = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      Matrix m = Matrix::Zero(n, n);
      m(a, b) = cxd(-s, 0);
      m(b, a) = cxd(s, 0);
      out.push_back(m);
    }
  }
  return out;
}

inline std::vector<Matrix> traceless_diag_basis(int n) {
  // i * diag(1,..,1,-k,0,..)/sqrt(k(k+1)), k = 1..n-1.
  std::vector<Matrix> out;
  for (int k = 1; k < n; ++k) {
    Matrix m = Matrix::Zero(n, n);
    const double s = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int j = 0; j < k; ++j) m(j, j) = cxd(0, s);
    m(k, k) = cxd(0, -k * s);
    out.push_back(m);
  }
  return out;
}

inline std::vector<Matrix> unitary_algebra_basis(int n) {
  // Orthonormal basis of u(n): skew pairs, i-symmetric pairs, i-diagonals.
  std::vector<Matrix> out = skew_real_basis(n);
  const double s = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      Matrix m = Matrix::Zero(n, n);
      m(a, b) = cxd(0, s);
      m(b, a) = cxd(0, s);
      out.push_back(m);
    }
  }
  for (int a = 0; a < n; ++a) {
    Matrix m = Matrix::Zero(n, n);
    m(a, a) = cxd(0, 1);
    out.push_back(m);
  }
  return out;
}

inline std::vector<Matrix> special_unitary_algebra_basis(int n) {
  std::vector<Matrix> out = skew_real_basis(n);
  const double s = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      Matrix m = Matrix::Zero(n, n);
      m(a, b) = cxd(0, s);
      m(b, a) = cxd(0, s);
      out.push_back(m);
    }
  }
  auto diag = traceless_diag_basis(n);
  out.insert(out.end(), diag.begin(), diag.end());
  return out;
}

inline std::vector<Matrix> symplectic_algebra_basis(int n) {
  // sp(n) = { [[P, Q], [-conj(Q), conj(P)]] : P* = -P, Q^T = Q }.
  std::vector<Matrix> out;
  const double s = 1.0 / std::sqrt(2.0);
  const int d = 2 * n;
  for (const Matrix& p : unitary_algebra_basis(n)) {
    Matrix m = Matrix::Zero(d, d);
    m.block(0, 0, n, n) = s * p;
    m.block(n, n, n, n) = s * p.conjugate();
    out.push_back(m);
  }
  // Complex-symmetric block, phases 1 and i.
  std::vector<Matrix> sym;
  for (int a = 0; a < n; ++a) {
    Matrix m = Matrix::Zero(n, n);
    m(a, a) = cxd(1, 0);
    sym.push_back(m);
  }
  const double t = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      Matrix m = Matrix::Zero(n, n);
      m(a, b) = cxd(t, 0);
      m(b, a) = cxd(t, 0);
      sym.push_back(m);
    }
  }
  for (const Matrix& base : sym) {
    for (const cxd phase : {cxd(1, 0), cxd(0, 1)}) {
      const Matrix q = phase * base;
      Matrix m = Matrix::Zero(d, d);
      m.block(0, n, n, n) = s * q;
      m.block(n, 0, n, n) = -s * q.conjugate();
      out.push_back(m);
    }
  }
  return out;
}

}  // namespace detail

inline const std::vector<AlgebraElement>& algebra_basis(GroupId g) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<AlgebraElement>> cache;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_pair(static_cast<int>(g.family), g.n);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::vector<Matrix> raw;
  switch (g.family) {
    case GroupFamily::SO: raw = detail::skew_real_basis(g.n); break;
    case GroupFamily::SU: raw = detail::special_unitary_algebra_basis(g.n); break;
    case GroupFamily::U: raw = detail::unitary_algebra_basis(g.n); break;
    case GroupFamily::Sp: raw = detail::symplectic_algebra_basis(g.n); break;
  }
  std::vector<AlgebraElement> basis;
  basis.reserve(raw.size());
  for (auto& m : raw) basis.push_back(AlgebraElement{g, std::move(m)});
  auto [pos, inserted] = cache.emplace(key, std::move(basis));
  (void)inserted;
  return pos->second;
}

inline Drawn<AlgebraElement> algebra_sample(GroupId g, const SeededSampler& s) {
  RngStream rng(s);
  const auto& basis = algebra_basis(g);
  Matrix v = Matrix::Zero(g.ambient_dim(), g.ambient_dim());
  for (const auto& b : basis) v += rng.gaussian() * b.v;
  return {AlgebraElement{g, std::move(v)}, s.advanced()};
}

inline Drawn<GroupElement> haar_sample(GroupId g, const SeededSampler& s) {
  RngStream rng(s);
  Matrix m;
  switch (g.family) {
    case GroupFamily::SO: m = to_complex(detail::haar_so(rng, g.n)); break;
    case GroupFamily::U: m = detail::haar_u(rng, g.n); break;
    case GroupFamily::SU: m = detail::haar_su(rng, g.n); break;
    case GroupFamily::Sp: {
      const int n = g.n;
      const Matrix z = detail::gaussian_complex(rng, 2 * n, 2 * n);
      const Matrix omega = symplectic_form(n);
      const Matrix a = z - omega * z.conjugate() * omega;
      // Quaternion entries: alpha from the (1,1) block, beta from (2,1).
      std::vector<std::vector<detail::Quaternion>> q(
          n, std::vector<detail::Quaternion>(n));
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          q[r][c] = detail::Quaternion{a(r, c), a(n + r, c)};
      // Modified Gram-Schmidt over the quaternions (right coefficients).
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < j; ++k) {
          detail::Quaternion inner{cxd(0, 0), cxd(0, 0)};
          for (int r = 0; r < n; ++r)
            inner = detail::qadd(inner, q[r][k].conj_q() * q[r][j]);
          for (int r = 0; r < n; ++r)
            q[r][j] = detail::qsub(q[r][j], q[r][k] * inner);
        }
        double norm2 = 0.0;
        for (int r = 0; r < n; ++r) norm2 += q[r][j].norm2();
        const double inv = 1.0 / std::sqrt(norm2);
        for (int r = 0; r < n; ++r) q[r][j] = detail::qscale(q[r][j], inv);
      }
      m = Matrix::Zero(2 * n, 2 * n);
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
          m(r, c) = q[r][c].a;
          m(n + r, n + c) = std::conj(q[r][c].a);
          m(r, n + c) = -std::conj(q[r][c].b);
          m(n + r, c) = q[r][c].b;
        }
      }
      break;
    }
  }
  return {GroupElement{g, std::move(m)}, s.advanced()};
}

}  // namespace liegeom
