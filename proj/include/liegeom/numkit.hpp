#pragma once

// Dense complex/real matrix kernel: eigendecomposition of normal matrices,
// matrix exponential, principal logarithm, and a rank-1 extraction routine.
// Everything is sized for small dense problems (n up to a few dozen).

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "liegeom/error.hpp"

namespace liegeom {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

/// Tolerance bundle threaded through membership tests and verification.
struct Tolerances {
  double membership_tol = 1e-10;
  double metric_rel_tol = 1e-9;
  double cut_locus_tol = 1e-8;
  double falsification_margin = 1e-3;

  void validate() const {
    if (membership_tol <= 0 || metric_rel_tol <= 0 || cut_locus_tol <= 0 ||
        falsification_margin <= 0) {
      fail(ErrorCode::InvalidArgument, "tolerances must be strictly positive");
    }
    if (falsification_margin <= metric_rel_tol) {
      fail(ErrorCode::InvalidArgument,
           "falsification_margin must exceed metric_rel_tol");
    }
  }
};

inline double frob(const Matrix& m) { return m.norm(); }

/// True when every imaginary part is below `tol` (exactly zero for matrices
/// produced by real arithmetic).
inline bool is_effectively_real(const Matrix& m, double tol = 0.0) {
  if (m.size() == 0) return true;
  return m.imag().cwiseAbs().maxCoeff() <= tol;
}

inline Matrix to_complex(const RealMatrix& m) {
  return m.cast<cxd>();
}

inline void require_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols()) {
    fail(ErrorCode::DimensionMismatch, std::string(who) + ": matrix not square");
  }
}

struct EigResult {
  Eigen::VectorXcd eigenvalues;
  Matrix vectors;  // unitary; m = vectors * diag(eigenvalues) * vectors*
};

/// Eigendecomposition of a normal matrix. Routes skew-Hermitian and Hermitian
/// inputs through the self-adjoint solver, everything else through the
/// complex Schur form (whose triangular factor is diagonal up to round-off
/// exactly when the input is normal).
inline EigResult eig_normal(const Matrix& m, const Tolerances& tol = {}) {
  require_square(m, "eig_normal");
  const int n = static_cast<int>(m.rows());
  const double scale = frob(m);
  const double normality = (m * m.adjoint() - m.adjoint() * m).norm();
  if (normality > tol.membership_tol * (1.0 + scale * scale)) {
    fail(ErrorCode::NotNormal,
         "normality residual " + std::to_string(normality));
  }

  EigResult out;
  const double route_tol = 1e-12 * (1.0 + scale);
  if ((m - m.adjoint()).norm() <= route_tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    if (es.info() != Eigen::Success) {
      fail(ErrorCode::NoConvergence, "self-adjoint eigensolver failed");
    }
    out.eigenvalues = es.eigenvalues().cast<cxd>();
    out.vectors = es.eigenvectors();
  } else if ((m + m.adjoint()).norm() <= route_tol) {
    // -i * m is Hermitian for skew-Hermitian m.
    Eigen::SelfAdjointEigenSolver<Matrix> es(cxd(0, -1) * m);
    if (es.info() != Eigen::Success) {
      fail(ErrorCode::NoConvergence, "self-adjoint eigensolver failed");
    }
    out.eigenvalues =
        (cxd(0, 1) * es.eigenvalues().cast<cxd>().array()).matrix();
    out.vectors = es.eigenvectors();
  } else {
    Eigen::ComplexSchur<Matrix> schur(m, /*computeU=*/true);
    if (schur.info() != Eigen::Success) {
      fail(ErrorCode::NoConvergence, "complex Schur iteration failed");
    }
    out.eigenvalues = schur.matrixT().diagonal();
    out.vectors = schur.matrixU();
  }

  const Matrix recon =
      out.vectors * out.eigenvalues.asDiagonal() * out.vectors.adjoint();
  const double residual = (recon - m).norm();
  if (residual > 1e-10 * scale + 1e-14 * n) {
    fail(ErrorCode::NoConvergence,
         "eigendecomposition residual " + std::to_string(residual));
  }
  return out;
}

namespace detail {

// Scaling-and-squaring with the order-13 Pade approximant (Higham's
// coefficients). Fallback for non-normal input only.
inline Matrix exp_pade13(const Matrix& m) {
  static const double b[14] = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  const double theta13 = 5.371920351148152;
  const int n = static_cast<int>(m.rows());
  const Matrix id = Matrix::Identity(n, n);

  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  }
  const Matrix a = m / std::pow(2.0, squarings);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a2 * a4;
  const Matrix u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
           b[5] * a4 + b[3] * a2 + b[1] * id);
  const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                   b[4] * a4 + b[2] * a2 + b[0] * id;
  Matrix f = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) f = f * f;
  return f;
}

}  // namespace detail

/// Matrix exponential. Normal input goes through the eigendecomposition,
/// anything else through scaling-and-squaring.
inline Matrix mat_exp(const Matrix& m, const Tolerances& tol = {}) {
  require_square(m, "mat_exp");
  const int n = static_cast<int>(m.rows());
  if (n == 0) return m;
  const double scale = frob(m);
  const double normality = (m * m.adjoint() - m.adjoint() * m).norm();
  const bool real_input = is_effectively_real(m, tol.membership_tol);

  Matrix result;
  if (normality <= tol.membership_tol * (1.0 + scale * scale)) {
    const EigResult e = eig_normal(m, tol);
    Eigen::VectorXcd ev(n);
    for (int k = 0; k < n; ++k) ev[k] = std::exp(e.eigenvalues[k]);
    result = e.vectors * ev.asDiagonal() * e.vectors.adjoint();
  } else {
    result = detail::exp_pade13(m);
  }
  if (real_input) result = to_complex(result.real());
  return result;
}

/// Principal logarithm of a unitary (or special orthogonal) matrix:
/// skew-Hermitian output with eigenvalue arguments in (-pi, pi). Real input
/// yields an exactly real, skew-symmetric result.
inline Matrix principal_log(const Matrix& u, const Tolerances& tol = {}) {
  require_square(u, "principal_log");
  const int n = static_cast<int>(u.rows());
  const Matrix id = Matrix::Identity(n, n);
  const double unitarity = (u.adjoint() * u - id).norm();
  if (unitarity > tol.membership_tol * 10.0) {
    fail(ErrorCode::NotInGroup,
         "principal_log: unitarity residual " + std::to_string(unitarity));
  }
  const bool real_input = is_effectively_real(u, tol.membership_tol);

  const EigResult e = eig_normal(u, tol);
  Eigen::VectorXcd logev(n);
  for (int k = 0; k < n; ++k) {
    const cxd lambda = e.eigenvalues[k];
    if (std::abs(lambda + 1.0) < tol.cut_locus_tol) {
      fail(ErrorCode::CutLocus, "eigenvalue within cut_locus_tol of -1");
    }
    logev[k] = cxd(0.0, std::atan2(lambda.imag(), lambda.real()));
  }
  Matrix l = e.vectors * logev.asDiagonal() * e.vectors.adjoint();
  l = 0.5 * (l - l.adjoint().eval());
  if (real_input) {
    RealMatrix lr = l.real();
    lr = 0.5 * (lr - lr.transpose().eval());
    return to_complex(lr);
  }
  return l;
}

struct Rank1Factors {
  Eigen::VectorXd p;
  Eigen::VectorXd q;
};

/// Rank-1 factorization c = p q^T with |p| = |q| = |c|_F^(1/2). Sign fixed by
/// making the largest-magnitude entry of p nonnegative (ties: lowest index).
inline Rank1Factors rank1_factor_general(const RealMatrix& c,
                                         double rel_tol = 1e-8) {
  Eigen::JacobiSVD<RealMatrix> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double s0 = sv.size() > 0 ? sv[0] : 0.0;
  const double s1 = sv.size() > 1 ? sv[1] : 0.0;
  if (s1 > rel_tol * c.norm()) {
    fail(ErrorCode::NotRankOne,
         "second singular value " + std::to_string(s1));
  }
  const double r = std::sqrt(s0);
  Rank1Factors out;
  out.p = r * svd.matrixU().col(0);
  out.q = r * svd.matrixV().col(0);

  int idx = 0;
  double best = -1.0;
  for (int i = 0; i < out.p.size(); ++i) {
    const double a = std::abs(out.p[i]);
    if (a > best) {
      best = a;
      idx = i;
    }
  }
  if (out.p.size() > 0 && out.p[idx] < 0.0) {
    out.p = -out.p;
    out.q = -out.q;
  }
  return out;
}

/// The 4x4 entry point used by the Cayley factorization.
inline Rank1Factors rank1_factor(const RealMatrix& c) {
  if (c.rows() != 4 || c.cols() != 4) {
    fail(ErrorCode::DimensionMismatch, "rank1_factor expects a 4x4 matrix");
  }
  return rank1_factor_general(c);
}

/// Largest singular value (used for cut-locus-safe sampling bounds).
inline double spectral_norm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
}

}  // namespace liegeom
