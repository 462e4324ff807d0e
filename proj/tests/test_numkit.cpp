#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "liegeom/numkit.hpp"
#include "liegeom/rng.hpp"

using namespace liegeom;

namespace {

Matrix random_complex(RngStream& rng, int n) {
  Matrix z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = rng.gaussian_complex();
  return z;
}

Matrix random_skew_hermitian(RngStream& rng, int n) {
  const Matrix z = random_complex(rng, n);
  return 0.5 * (z - z.adjoint().eval());
}

Matrix random_unitary(RngStream& rng, int n) {
  Eigen::HouseholderQR<Matrix> qr(random_complex(rng, n));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const cxd d = r(k, k);
    q.col(k) *= std::abs(d) > 0 ? d / std::abs(d) : cxd(1, 0);
  }
  return q;
}

Matrix diag2(cxd a, cxd b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("tolerances validate", "[numkit]") {
  Tolerances tol;
  REQUIRE_NOTHROW(tol.validate());
  tol.falsification_margin = 1e-12;
  REQUIRE_THROWS_AS(tol.validate(), Error);
  tol = Tolerances{};
  tol.cut_locus_tol = 0.0;
  REQUIRE_THROWS_AS(tol.validate(), Error);
}

TEST_CASE("eig_normal identity and diagonal cases", "[numkit]") {
  const Matrix id = Matrix::Identity(3, 3);
  const EigResult e = eig_normal(id);
  for (int k = 0; k < 3; ++k) REQUIRE(std::abs(e.eigenvalues[k] - 1.0) < 1e-14);
  REQUIRE((e.vectors.adjoint() * e.vectors - id).norm() < 1e-13);

  const Matrix d = diag2(cxd(0, 1), cxd(0, -1));
  const EigResult e2 = eig_normal(d);
  const Matrix recon =
      e2.vectors * e2.eigenvalues.asDiagonal() * e2.vectors.adjoint();
  REQUIRE((recon - d).norm() < 1e-13);
  // Both eigenvalues present.
  double sum_im = 0;
  for (int k = 0; k < 2; ++k) sum_im += e2.eigenvalues[k].imag();
  REQUIRE(std::abs(sum_im) < 1e-14);
}

TEST_CASE("eig_normal rejects non-normal input", "[numkit]") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;  // nilpotent, not normal
  REQUIRE_THROWS_AS(eig_normal(m), Error);
  try {
    eig_normal(m);
  } catch (const Error& e) {
    REQUIRE(e.code() == ErrorCode::NotNormal);
  }
}

TEST_CASE("eig_normal reconstruction sweep", "[numkit]") {
  // 1000 seeded normal matrices, n <= 8: residual <= 1e-10 * |M|.
  SeededSampler s{2024, 0};
  for (int trial = 0; trial < 1000; ++trial) {
    RngStream rng(s);
    const int n = 2 + static_cast<int>(rng.raw() % 7);
    const Matrix u = random_unitary(rng, n);
    Eigen::VectorXcd lam(n);
    for (int k = 0; k < n; ++k) lam[k] = rng.gaussian_complex();
    const Matrix m = u * lam.asDiagonal() * u.adjoint();
    const EigResult e = eig_normal(m);
    const Matrix recon =
        e.vectors * e.eigenvalues.asDiagonal() * e.vectors.adjoint();
    REQUIRE((recon - m).norm() <= 1e-10 * m.norm() + 1e-13);
    REQUIRE((e.vectors.adjoint() * e.vectors - Matrix::Identity(n, n)).norm() <
            1e-12);
    s = s.advanced();
  }
}

TEST_CASE("eig_normal on skew-Hermitian has imaginary spectrum", "[numkit]") {
  SeededSampler s{7, 0};
  for (int trial = 0; trial < 50; ++trial) {
    RngStream rng(s);
    const Matrix h = random_skew_hermitian(rng, 5);
    const EigResult e = eig_normal(h);
    for (int k = 0; k < 5; ++k) REQUIRE(std::abs(e.eigenvalues[k].real()) < 1e-12);
    const Matrix recon =
        e.vectors * e.eigenvalues.asDiagonal() * e.vectors.adjoint();
    REQUIRE((recon - h).norm() <= 1e-10 * h.norm() + 1e-13);
    s = s.advanced();
  }
}

TEST_CASE("mat_exp basic values", "[numkit]") {
  const Matrix z = Matrix::Zero(4, 4);
  REQUIRE((mat_exp(z) - Matrix::Identity(4, 4)).norm() < 1e-14);

  const double pi = 3.14159265358979323846;
  const Matrix d = diag2(cxd(0, pi), cxd(0, -pi));
  const Matrix e = mat_exp(d);
  REQUIRE((e - diag2(-1, -1)).norm() < 1e-12);
}

TEST_CASE("mat_exp of su(3) samples is special unitary", "[numkit]") {
  SeededSampler s{11, 0};
  for (int trial = 0; trial < 100; ++trial) {
    RngStream rng(s);
    Matrix v = random_skew_hermitian(rng, 3);
    v -= (v.trace() / 3.0) * Matrix::Identity(3, 3);  // traceless
    const Matrix e = mat_exp(v);
    REQUIRE((e.adjoint() * e - Matrix::Identity(3, 3)).norm() <= 1e-10);
    REQUIRE(std::abs(e.determinant() - cxd(1, 0)) <= 1e-10);
    s = s.advanced();
  }
}

TEST_CASE("mat_exp falls back for non-normal input", "[numkit]") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  const Matrix e = mat_exp(m);
  Matrix expected = Matrix::Identity(2, 2);
  expected(0, 1) = 1.0;  // exp of the nilpotent shift
  REQUIRE((e - expected).norm() < 1e-13);

  // Larger non-normal block against the series evaluated directly.
  SeededSampler s{13, 0};
  RngStream rng(s);
  Matrix a = 0.3 * random_complex(rng, 4);
  Matrix series = Matrix::Identity(4, 4);
  Matrix term = Matrix::Identity(4, 4);
  for (int k = 1; k <= 30; ++k) {
    term = (term * a) / static_cast<double>(k);
    series += term;
  }
  REQUIRE((mat_exp(a) - series).norm() < 1e-12);
}

TEST_CASE("principal_log basic values", "[numkit]") {
  const Matrix id = Matrix::Identity(3, 3);
  REQUIRE(principal_log(id).norm() < 1e-13);

  const double theta = 0.7;
  const Matrix u = diag2(std::polar(1.0, theta), std::polar(1.0, -theta));
  const Matrix l = principal_log(u);
  REQUIRE((l - diag2(cxd(0, theta), cxd(0, -theta))).norm() < 1e-12);
}

TEST_CASE("principal_log cut locus detection", "[numkit]") {
  const Matrix u = diag2(-1.0, 1.0);
  REQUIRE_THROWS_AS(principal_log(u), Error);
  try {
    principal_log(u);
  } catch (const Error& e) {
    REQUIRE(e.code() == ErrorCode::CutLocus);
  }
}

TEST_CASE("principal_log rejects non-unitary input", "[numkit]") {
  Matrix m = 2.0 * Matrix::Identity(2, 2);
  REQUIRE_THROWS_AS(principal_log(m), Error);
}

TEST_CASE("exp/log round trip", "[numkit]") {
  // 1000 seeded samples with small norm recover v to 1e-9.
  SeededSampler s{99, 0};
  for (int trial = 0; trial < 1000; ++trial) {
    RngStream rng(s);
    const int n = 2 + static_cast<int>(rng.raw() % 5);
    Matrix v = random_skew_hermitian(rng, n);
    const double sn = spectral_norm(v);
    const double target = 0.1 + 0.9 * rng.uniform01() * (3.0415926 - 0.2);
    v *= target / (sn > 0 ? sn : 1.0);
    const Matrix u = mat_exp(v);
    const Matrix back = principal_log(u);
    REQUIRE((back - v).norm() <= 1e-9 * (1.0 + v.norm()));
    s = s.advanced();
  }
}

TEST_CASE("principal_log of real orthogonal input is exactly real", "[numkit]") {
  // Rotation blocks give conjugate eigenvalue pairs; the log must come back
  // with zero imaginary part, not 1e-16 dust.
  RealMatrix r = RealMatrix::Identity(4, 4);
  const double a = 1.1, b = 0.4;
  r.block(0, 0, 2, 2) << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  r.block(2, 2, 2, 2) << std::cos(b), -std::sin(b), std::sin(b), std::cos(b);
  const Matrix l = principal_log(to_complex(r));
  REQUIRE(is_effectively_real(l));
  REQUIRE((l + l.transpose().eval()).norm() < 1e-14);
  REQUIRE((mat_exp(l) - to_complex(r)).norm() < 1e-12);
}

TEST_CASE("mat_exp conjugation equivariance", "[numkit]") {
  SeededSampler s{123, 0};
  for (int trial = 0; trial < 100; ++trial) {
    RngStream rng(s);
    const int n = 3;
    const Matrix v = random_skew_hermitian(rng, n);
    const Matrix a = random_unitary(rng, n);
    const Matrix lhs = mat_exp(a.adjoint() * v * a);
    const Matrix rhs = a.adjoint() * mat_exp(v) * a;
    REQUIRE((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
    s = s.advanced();
  }
}

TEST_CASE("rank1_factor basic conventions", "[numkit]") {
  RealMatrix c = RealMatrix::Zero(4, 4);
  c(0, 0) = 1.0;  // e1 e1^T
  Rank1Factors f = rank1_factor(c);
  REQUIRE((f.p - Eigen::Vector4d(1, 0, 0, 0).eval()).norm() < 1e-12);
  REQUIRE((f.q - Eigen::Vector4d(1, 0, 0, 0).eval()).norm() < 1e-12);

  // (-e2)(e3)^T: the sign moves onto q.
  c = RealMatrix::Zero(4, 4);
  c(1, 2) = -1.0;
  f = rank1_factor(c);
  REQUIRE((f.p - Eigen::Vector4d(0, 1, 0, 0).eval()).norm() < 1e-12);
  REQUIRE((f.q - Eigen::Vector4d(0, 0, -1, 0).eval()).norm() < 1e-12);
}

TEST_CASE("rank1_factor reconstruction sweep", "[numkit]") {
  SeededSampler s{5, 0};
  for (int trial = 0; trial < 200; ++trial) {
    RngStream rng(s);
    Eigen::Vector4d p0, q0;
    for (int i = 0; i < 4; ++i) {
      p0[i] = rng.gaussian();
      q0[i] = rng.gaussian();
    }
    p0.normalize();
    q0.normalize();
    const RealMatrix c = p0 * q0.transpose();
    const Rank1Factors f = rank1_factor(c);
    REQUIRE((c - f.p * f.q.transpose()).norm() < 1e-9);
    // Result is +-(p0, q0) with the stated sign convention.
    const double sp = (f.p - p0).norm() < (f.p + p0).norm() ? 1.0 : -1.0;
    REQUIRE((f.p - sp * p0).norm() < 1e-10);
    REQUIRE((f.q - sp * q0).norm() < 1e-10);
    int idx = 0;
    f.p.cwiseAbs().maxCoeff(&idx);
    REQUIRE(f.p[idx] >= 0.0);
    s = s.advanced();
  }
}

TEST_CASE("rank1_factor rejects higher rank", "[numkit]") {
  REQUIRE_THROWS_AS(rank1_factor(RealMatrix::Identity(4, 4)), Error);
}
