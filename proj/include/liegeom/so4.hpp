#pragma once

// SO(4)-specific structure: the decomplexification rho, the reflection J,
// the double cover chi_hat : SU(2) x SU(2) -> SO(4), Cayley factorization
// into commuting isoclinic factors, the involution tau, and projection of
// product isometries through the cover.

#include <array>
#include <utility>

#include "liegeom/error.hpp"
#include "liegeom/groups.hpp"
#include "liegeom/isometry_types.hpp"
#include "liegeom/numkit.hpp"
#include "liegeom/rng.hpp"

namespace liegeom {

/// Blockwise decomplexification: each entry z becomes the 2x2 real block
/// [[Re z, -Im z], [Im z, Re z]].
inline Matrix rho(const Matrix& z) {
  const int h = static_cast<int>(z.rows());
  const int w = static_cast<int>(z.cols());
  Matrix out = Matrix::Zero(2 * h, 2 * w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const double re = z(r, c).real();
      const double im = z(r, c).imag();
      out(2 * r, 2 * c) = re;
      out(2 * r, 2 * c + 1) = -im;
      out(2 * r + 1, 2 * c) = im;
      out(2 * r + 1, 2 * c + 1) = re;
    }
  }
  return out;
}

/// J = diag(-1, 1, 1, 1) in O(4) \ SO(4).
inline const Matrix& j_matrix() {
  static const Matrix j = [] {
    Matrix m = Matrix::Identity(4, 4);
    m(0, 0) = -1.0;
    return m;
  }();
  return j;
}

/// Quaternion units of the real span of SU(2): I, i s1, i s2, i s3.
inline const std::array<Matrix, 4>& su2_units() {
  static const std::array<Matrix, 4> units = [] {
    std::array<Matrix, 4> u;
    u[0] = Matrix::Identity(2, 2);
    u[1] = Matrix::Zero(2, 2);
    u[1](0, 1) = cxd(0, 1);
    u[1](1, 0) = cxd(0, 1);
    u[2] = Matrix::Zero(2, 2);
    u[2](0, 1) = cxd(1, 0);
    u[2](1, 0) = cxd(-1, 0);
    u[3] = Matrix::Zero(2, 2);
    u[3](0, 0) = cxd(0, 1);
    u[3](1, 1) = cxd(0, -1);
    return u;
  }();
  return units;
}

namespace so4_detail {

struct ProductBasis {
  std::array<Matrix, 4> q;                  // rho(u_a), left-isoclinic units
  std::array<Matrix, 4> r;                  // J rho(u_b) J, right-isoclinic
  std::array<std::array<Matrix, 4>, 4> qr;  // products q_a r_b
};

// The 16 products q_a r_b are Frobenius-orthogonal with Gram 4 I; asserted
// once at startup instead of trusted.
inline const ProductBasis& product_basis() {
  static const ProductBasis basis = [] {
    ProductBasis pb;
    const auto& u = su2_units();
    const Matrix& j = j_matrix();
    for (int a = 0; a < 4; ++a) {
      pb.q[a] = rho(u[a]);
      pb.r[a] = j * rho(u[a]) * j;
    }
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) pb.qr[a][b] = pb.q[a] * pb.r[b];
    for (int i = 0; i < 16; ++i) {
      for (int k = 0; k < 16; ++k) {
        const Matrix& mi = pb.qr[i / 4][i % 4];
        const Matrix& mk = pb.qr[k / 4][k % 4];
        const double inner = (mi.array() * mk.array().conjugate()).sum().real();
        const double expected = i == k ? 4.0 : 0.0;
        if (std::abs(inner - expected) > 1e-12) {
          fail(ErrorCode::NoConvergence, "isoclinic product basis is broken");
        }
      }
    }
    return pb;
  }();
  return basis;
}

inline GroupId so4_id() { return so(4); }
inline GroupId su2_id() { return su(2); }

}  // namespace so4_detail

/// chi_hat(X1, X2) = rho(X1) J rho(X2) J, the 2:1 cover SU(2)^2 -> SO(4).
inline GroupElement chi_hat(const GroupElement& x1, const GroupElement& x2,
                            const Tolerances& tol = {}) {
  if (x1.group != so4_detail::su2_id() || x2.group != so4_detail::su2_id()) {
    fail(ErrorCode::GroupMismatch, "chi_hat expects SU(2) factors");
  }
  const Matrix& j = j_matrix();
  Matrix m = rho(x1.m) * j * rho(x2.m) * j;
  (void)tol;
  return GroupElement{so4_detail::so4_id(), std::move(m)};
}

struct CayleyFactorization {
  GroupElement x1;  // left-isoclinic factor, in SU(2)
  GroupElement x2;  // right-isoclinic factor, in SU(2)
  double residual;  // |chi_hat(x1, x2) - x|
};

/// Cayley factorization x = rho(X1) J rho(X2) J, unique up to the sign of
/// both factors. Coefficients are read off against the 16-product basis and
/// split by rank-1 factorization.
inline CayleyFactorization cayley_factor(const GroupElement& x,
                                         const Tolerances& tol = {}) {
  if (x.group != so4_detail::so4_id()) {
    fail(ErrorCode::GroupMismatch, "cayley_factor expects SO(4)");
  }
  const MembershipReport rep = membership(x.group, x.m, tol);
  if (!rep.ok) {
    fail(ErrorCode::NotInGroup,
         "cayley_factor: membership residual " +
             std::to_string(rep.max_residual));
  }
  const auto& pb = so4_detail::product_basis();
  RealMatrix coeffs(4, 4);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      coeffs(a, b) =
          0.25 *
          (pb.qr[a][b].array().conjugate() * x.m.array()).sum().real();
    }
  }
  Rank1Factors f = rank1_factor(coeffs);
  f.p.normalize();
  f.q.normalize();
  const auto& u = su2_units();
  Matrix m1 = Matrix::Zero(2, 2), m2 = Matrix::Zero(2, 2);
  for (int a = 0; a < 4; ++a) {
    m1 += f.p[a] * u[a];
    m2 += f.q[a] * u[a];
  }
  CayleyFactorization out{make_group_element(su(2), m1, tol),
                          make_group_element(su(2), m2, tol), 0.0};
  out.residual = (chi_hat(out.x1, out.x2).m - x.m).norm();
  if (out.residual > 1e-9) {
    fail(ErrorCode::NotInGroup,
         "cayley_factor: reconstruction residual " +
             std::to_string(out.residual));
  }
  return out;
}

/// tau(X) = rho(X1) [J rho(X2) J]^T, via the Cayley factorization. The sign
/// ambiguity cancels in the product.
inline GroupElement tau(const GroupElement& x, const Tolerances& tol = {}) {
  const CayleyFactorization f = cayley_factor(x, tol);
  const Matrix& j = j_matrix();
  Matrix m = rho(f.x1.m) * (j * rho(f.x2.m) * j).transpose();
  return GroupElement{so4_detail::so4_id(), std::move(m)};
}

/// Linear extension of tau to all of M_4(R): the coefficient expansion
/// tau(X) = 1/4 sum_ab tr((Q_a R_b)^T X) Q_a R_b^T is linear in X and agrees
/// with tau on SO(4), which spans M_4(R).
inline RealMatrix tau_linear(const RealMatrix& m) {
  const auto& pb = so4_detail::product_basis();
  RealMatrix out = RealMatrix::Zero(4, 4);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const double c =
          0.25 * (pb.qr[a][b].real().array() * m.array()).sum();
      out += c * (pb.q[a] * pb.r[b].transpose()).real();
    }
  }
  return out;
}

inline Matrix tau_linear(const Matrix& m) {
  return to_complex(tau_linear(RealMatrix(m.real())));
}

// ---------------------------------------------------------------------------
// Product isometries of SU(2) x SU(2) and their projection through chi_hat.

/// One factor map: x -> A x B, or x -> A x^-1 B when invert is set.
struct Su2Factor {
  Matrix a = Matrix::Identity(2, 2);
  Matrix b = Matrix::Identity(2, 2);
  bool invert = false;

  Matrix apply(const Matrix& x) const {
    return invert ? Matrix(a * x.adjoint() * b) : Matrix(a * x * b);
  }
};

/// De Rham form of an isometry of SU(2) x SU(2): (psi1 x psi2), optionally
/// precomposed with the factor swap sigma.
struct ProductIsometry {
  Su2Factor f1;
  Su2Factor f2;
  bool swap_factors = false;

  std::pair<Matrix, Matrix> apply(const Matrix& x, const Matrix& y) const {
    if (swap_factors) return {f1.apply(y), f2.apply(x)};
    return {f1.apply(x), f2.apply(y)};
  }
};

/// Projects a product isometry through the cover: checks compatibility with
/// the deck transformation (X, Y) -> (-X, -Y) on seeded samples, then returns
/// the induced SO(4) map canonicalized into one of the classified families.
/// The canonical form is verified pointwise against the factor-and-map route.
inline IsometryMap product_isometry_projects(const ProductIsometry& psi,
                                             SeededSampler s = {0x504F34u, 0},
                                             const Tolerances& tol = {}) {
  // Deck compatibility with a global sign.
  for (int trial = 0; trial < 20; ++trial) {
    const auto dx = haar_sample(su(2), s);
    const auto dy = haar_sample(su(2), dx.next);
    s = dy.next;
    const auto plus = psi.apply(dx.value.m, dy.value.m);
    const auto minus = psi.apply(-dx.value.m, -dy.value.m);
    const double flip = std::max((minus.first + plus.first).norm(),
                                 (minus.second + plus.second).norm());
    const double keep = std::max((minus.first - plus.first).norm(),
                                 (minus.second - plus.second).norm());
    if (std::min(flip, keep) > 1e-9) {
      fail(ErrorCode::NotWellDefined,
           "product map is incompatible with the deck transformation");
    }
  }

  // Canonical family of the induced map.
  const GroupElement a1{su(2), psi.f1.a}, b1{su(2), psi.f1.b};
  const GroupElement a2{su(2), psi.f2.a}, b2{su(2), psi.f2.b};
  Matrix a = chi_hat(a1, a2).m;
  Matrix b = chi_hat(b1, b2).m;
  FamilyTag tag;
  if (!psi.f1.invert && !psi.f2.invert) {
    tag = FamilyTag::Plain;
  } else if (psi.f1.invert && psi.f2.invert) {
    tag = FamilyTag::Transpose;
  } else if (!psi.f1.invert && psi.f2.invert) {
    tag = FamilyTag::TauPlain;
  } else {
    tag = FamilyTag::TauTranspose;
  }
  if (psi.swap_factors) {
    // Precomposition with sigma projects to conjugation by J, which swaps
    // the tau variants and moves the parameters off the identity sheet.
    const Matrix& j = j_matrix();
    a = a * j;
    b = j * b;
    if (tag == FamilyTag::TauPlain) {
      tag = FamilyTag::TauTranspose;
    } else if (tag == FamilyTag::TauTranspose) {
      tag = FamilyTag::TauPlain;
    }
  }
  IsometryMap induced = make_isometry(so(4), tag, a, b, tol);

  // Pointwise check of the canonical form against factor-apply-project.
  for (int trial = 0; trial < 20; ++trial) {
    const auto dx = haar_sample(so(4), s);
    s = dx.next;
    const CayleyFactorization f = cayley_factor(dx.value, tol);
    const auto img = psi.apply(f.x1.m, f.x2.m);
    const Matrix via_cover =
        chi_hat(GroupElement{su(2), img.first}, GroupElement{su(2), img.second})
            .m;
    Matrix core;
    switch (tag) {
      case FamilyTag::Plain: core = dx.value.m; break;
      case FamilyTag::Transpose: core = dx.value.m.transpose(); break;
      case FamilyTag::TauPlain: core = tau(dx.value, tol).m; break;
      case FamilyTag::TauTranspose:
        core = tau(dx.value, tol).m.transpose();
        break;
      default:
        fail(ErrorCode::NotWellDefined, "unexpected family");
    }
    const Matrix direct = induced.a * core * induced.b;
    if ((via_cover - direct).norm() > 1e-10) {
      fail(ErrorCode::NotWellDefined,
           "projected map does not match its canonical family form");
    }
  }
  return induced;
}

}  // namespace liegeom
