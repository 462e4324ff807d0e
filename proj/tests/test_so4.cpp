#include <catch2/catch_amalgamated.hpp>

#include "liegeom/geometry.hpp"
#include "liegeom/so4.hpp"

using namespace liegeom;

namespace {

Matrix random_complex2(RngStream& rng) {
  Matrix z(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) z(i, j) = rng.gaussian_complex();
  return z;
}

}  // namespace

TEST_CASE("rho on scalars", "[so4]") {
  Matrix one(1, 1), imag(1, 1);
  one(0, 0) = 1.0;
  imag(0, 0) = cxd(0, 1);
  REQUIRE((rho(one) - Matrix::Identity(2, 2)).norm() == 0.0);
  Matrix expected(2, 2);
  expected << 0, -1, 1, 0;
  REQUIRE((rho(imag) - expected).norm() == 0.0);
}

TEST_CASE("rho ring and trace identities", "[so4]") {
  SeededSampler s{71, 0};
  for (int trial = 0; trial < 100; ++trial) {
    RngStream rng(s);
    const Matrix z = random_complex2(rng);
    const Matrix w = random_complex2(rng);
    REQUIRE((rho((z * w).eval()) - rho(z) * rho(w)).norm() <= 1e-12);
    REQUIRE(std::abs(rho(z).trace().real() - 2.0 * z.trace().real()) <= 1e-12);
    REQUIRE(std::abs(rho(z).real().determinant() -
                     std::norm(z.determinant())) <= 1e-10);
    REQUIRE((rho(z.adjoint().eval()) - rho(z).transpose()).norm() <= 1e-12);
    s = s.advanced();
  }
}

TEST_CASE("rho embeds SU(2) into SO(4)", "[so4]") {
  SeededSampler s{73, 0};
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = haar_sample(su(2), s);
    s = x.next;
    REQUIRE(membership(so(4), rho(x.value.m)).max_residual <= 1e-11);
  }
}

TEST_CASE("J matrix properties", "[so4]") {
  const Matrix& j = j_matrix();
  REQUIRE((j - j.transpose()).norm() == 0.0);
  REQUIRE((j * j - Matrix::Identity(4, 4)).norm() == 0.0);
  REQUIRE(std::abs(j.real().determinant() + 1.0) < 1e-15);
}

TEST_CASE("left and right isoclinic factors commute", "[so4]") {
  const Matrix& j = j_matrix();
  SeededSampler s{79, 0};
  for (int trial = 0; trial < 100; ++trial) {
    const auto x1 = haar_sample(su(2), s);
    const auto x2 = haar_sample(su(2), x1.next);
    s = x2.next;
    const Matrix l = rho(x1.value.m);
    const Matrix r = j * rho(x2.value.m) * j;
    REQUIRE((l * r - r * l).norm() <= 1e-11);
  }
}

TEST_CASE("chi_hat kernel and homomorphism", "[so4]") {
  const GroupElement i2{su(2), Matrix::Identity(2, 2)};
  const GroupElement mi2{su(2), -Matrix::Identity(2, 2)};
  REQUIRE((chi_hat(i2, i2).m - Matrix::Identity(4, 4)).norm() == 0.0);
  REQUIRE((chi_hat(mi2, mi2).m - Matrix::Identity(4, 4)).norm() <= 1e-15);

  SeededSampler s{83, 0};
  for (int trial = 0; trial < 50; ++trial) {
    const auto x1 = haar_sample(su(2), s);
    const auto x2 = haar_sample(su(2), x1.next);
    const auto y1 = haar_sample(su(2), x2.next);
    const auto y2 = haar_sample(su(2), y1.next);
    s = y2.next;
    const Matrix lhs = chi_hat(GroupElement{su(2), x1.value.m * y1.value.m},
                               GroupElement{su(2), x2.value.m * y2.value.m})
                           .m;
    const Matrix rhs =
        chi_hat(x1.value, x2.value).m * chi_hat(y1.value, y2.value).m;
    REQUIRE((lhs - rhs).norm() <= 1e-11);
    REQUIRE(membership(so(4), rhs).max_residual <= 1e-11);
    REQUIRE((chi_hat(GroupElement{su(2), -x1.value.m},
                     GroupElement{su(2), -x2.value.m})
                 .m -
             chi_hat(x1.value, x2.value).m)
                .norm() <= 1e-12);
  }
}

TEST_CASE("cayley_factor on basic inputs", "[so4]") {
  const GroupElement id4{so(4), Matrix::Identity(4, 4)};
  const CayleyFactorization f = cayley_factor(id4);
  const double d1 = std::min((f.x1.m - Matrix::Identity(2, 2)).norm(),
                             (f.x1.m + Matrix::Identity(2, 2)).norm());
  REQUIRE(d1 <= 1e-10);
  REQUIRE(f.residual <= 1e-12);

  SeededSampler s{89, 0};
  for (int trial = 0; trial < 20; ++trial) {
    const auto x1 = haar_sample(su(2), s);
    s = x1.next;
    const GroupElement x{so(4), rho(x1.value.m)};
    const CayleyFactorization g = cayley_factor(x);
    const double dl =
        std::min((g.x1.m - x1.value.m).norm(), (g.x1.m + x1.value.m).norm());
    const double dr = std::min((g.x2.m - Matrix::Identity(2, 2)).norm(),
                               (g.x2.m + Matrix::Identity(2, 2)).norm());
    REQUIRE(dl <= 1e-10);
    REQUIRE(dr <= 1e-10);
  }
}

TEST_CASE("cayley_factor round trip sweep", "[so4]") {
  SeededSampler s{97, 0};
  for (int trial = 0; trial < 1000; ++trial) {
    const auto x = haar_sample(so(4), s);
    s = x.next;
    const CayleyFactorization f = cayley_factor(x.value);
    REQUIRE(f.residual <= 1e-10);
    REQUIRE(membership(su(2), f.x1.m).max_residual <= 1e-10);
    REQUIRE(membership(su(2), f.x2.m).max_residual <= 1e-10);
    // Factors commute after J-conjugation.
    const Matrix& j = j_matrix();
    const Matrix l = rho(f.x1.m);
    const Matrix r = j * rho(f.x2.m) * j;
    REQUIRE((l * r - r * l).norm() <= 1e-10);
  }
}

TEST_CASE("cayley_factor rejects non-members", "[so4]") {
  Matrix m = Matrix::Identity(4, 4);
  m(0, 0) = 2.0;
  REQUIRE_THROWS_AS(cayley_factor(GroupElement{so(4), m}), Error);
}

TEST_CASE("isoclinic subgroups meet only in +-I", "[so4]") {
  // Closed form: dist(rho(X1), J rho(SU(2)) J)^2 == 2 min |X1 -+ I|^2, so the
  // inner maximization over the right factor is exact and the sweep resolves
  // +-I at 1e-6 scale without any search.
  const auto& j = j_matrix();
  std::array<Matrix, 4> r;
  for (int b = 0; b < 4; ++b) r[b] = j * rho(su2_units()[b]) * j;
  SeededSampler s{101, 0};
  for (int trial = 0; trial < 500; ++trial) {
    const auto x1 = haar_sample(su(2), s);
    s = x1.next;
    const Matrix lx = rho(x1.value.m);
    Eigen::Vector4d w;
    for (int b = 0; b < 4; ++b) {
      w[b] = (lx.real().array() * r[b].real().array()).sum();
    }
    const double dist2 = 8.0 - 2.0 * w.norm();
    const double near_id =
        std::min((x1.value.m - Matrix::Identity(2, 2)).squaredNorm(),
                 (x1.value.m + Matrix::Identity(2, 2)).squaredNorm());
    REQUIRE(std::abs(dist2 - 2.0 * near_id) <= 1e-9);
    if (near_id >= 1e-3) REQUIRE(dist2 >= 1e-6);
  }
}

TEST_CASE("tau fixes the identity and left factors", "[so4]") {
  const GroupElement id4{so(4), Matrix::Identity(4, 4)};
  REQUIRE((tau(id4).m - Matrix::Identity(4, 4)).norm() <= 1e-12);

  SeededSampler s{103, 0};
  for (int trial = 0; trial < 20; ++trial) {
    const auto x1 = haar_sample(su(2), s);
    s = x1.next;
    const GroupElement x{so(4), rho(x1.value.m)};
    REQUIRE((tau(x).m - x.m).norm() <= 1e-10);
  }
}

TEST_CASE("tau is an involution commuting with transposition", "[so4]") {
  SeededSampler s{107, 0};
  for (int trial = 0; trial < 1000; ++trial) {
    const auto x = haar_sample(so(4), s);
    s = x.next;
    const GroupElement tx = tau(x.value);
    REQUIRE(membership(so(4), tx.m).max_residual <= 1e-10);
    REQUIRE((tau(tx).m - x.value.m).norm() <= 1e-10);
    const GroupElement xt{so(4), x.value.m.transpose()};
    REQUIRE((tau(xt).m - tx.m.transpose()).norm() <= 1e-10);
  }
}

TEST_CASE("tau agrees with its linear extension", "[so4]") {
  SeededSampler s{109, 0};
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = haar_sample(so(4), s);
    s = x.next;
    REQUIRE((tau(x.value).m - tau_linear(x.value.m)).norm() <= 1e-10);
  }
  // Linear extension is an involution on all of M_4(R).
  RngStream rng(s);
  for (int trial = 0; trial < 20; ++trial) {
    RealMatrix m(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = rng.gaussian();
    REQUIRE((tau_linear(RealMatrix(tau_linear(m))) - m).norm() <= 1e-11);
  }
}

TEST_CASE("tau preserves the Killing metric", "[so4]") {
  const MetricSpec m = MetricSpec::killing(so(4));
  SeededSampler s{113, 0};
  for (int trial = 0; trial < 200; ++trial) {
    auto base = haar_sample(so(4), s);
    auto u = algebra_sample(so(4), base.next);
    auto w = algebra_sample(so(4), u.next);
    s = w.next;
    const Matrix x = base.value.m * u.value.v;
    const Matrix y = base.value.m * w.value.v;
    const double before = metric_eval_raw(m, base.value.m, x, y);
    const double after =
        metric_eval_raw(m, tau(base.value).m, tau_linear(x), tau_linear(y));
    REQUIRE(std::abs(after - before) <= 1e-9 * (1.0 + std::abs(before)));
  }
}

TEST_CASE("projection table of the double cover", "[so4]") {
  // id x id projects to the identity map.
  ProductIsometry ident;
  const IsometryMap id_map = product_isometry_projects(ident);
  REQUIRE(id_map.family == FamilyTag::Plain);
  REQUIRE((id_map.a - Matrix::Identity(4, 4)).norm() <= 1e-12);
  REQUIRE((id_map.b - Matrix::Identity(4, 4)).norm() <= 1e-12);

  // id x j projects to tau.
  ProductIsometry idxj;
  idxj.f2.invert = true;
  const IsometryMap tau_map = product_isometry_projects(idxj);
  REQUIRE(tau_map.family == FamilyTag::TauPlain);
  REQUIRE((tau_map.a - Matrix::Identity(4, 4)).norm() <= 1e-12);
  REQUIRE((tau_map.b - Matrix::Identity(4, 4)).norm() <= 1e-12);

  // sigma projects to conjugation by J.
  ProductIsometry swap;
  swap.swap_factors = true;
  const IsometryMap cj = product_isometry_projects(swap);
  REQUIRE(cj.family == FamilyTag::Plain);
  const Matrix& j = j_matrix();
  REQUIRE((cj.a - j).norm() <= 1e-12);
  REQUIRE((cj.b - j).norm() <= 1e-12);

  // j x j projects to transposition.
  ProductIsometry jxj;
  jxj.f1.invert = true;
  jxj.f2.invert = true;
  const IsometryMap tr = product_isometry_projects(jxj);
  REQUIRE(tr.family == FamilyTag::Transpose);
  REQUIRE((tr.a - Matrix::Identity(4, 4)).norm() <= 1e-12);

  // C_A x C_B projects to conjugation by chi_hat(A, B).
  const auto a = haar_sample(su(2), SeededSampler{131, 0});
  const auto b = haar_sample(su(2), a.next);
  ProductIsometry inner;
  inner.f1 = Su2Factor{a.value.m, a.value.m.adjoint(), false};
  inner.f2 = Su2Factor{b.value.m, b.value.m.adjoint(), false};
  const IsometryMap conj_map = product_isometry_projects(inner);
  REQUIRE(conj_map.family == FamilyTag::Plain);
  const Matrix c = chi_hat(a.value, b.value).m;
  SeededSampler s2 = b.next;
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = haar_sample(so(4), s2);
    s2 = x.next;
    const Matrix lhs = conj_map.a * x.value.m * conj_map.b;
    const Matrix rhs = c * x.value.m * c.adjoint();
    REQUIRE((lhs - rhs).norm() <= 1e-10);
  }
}
