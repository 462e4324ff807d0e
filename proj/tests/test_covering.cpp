#include <catch2/catch_amalgamated.hpp>

#include "liegeom/covering_un.hpp"

using namespace liegeom;

namespace {

const double kPi = 3.14159265358979323846;

CylinderPoint random_point(int n, SeededSampler& s) {
  const auto b = haar_sample(su(n), s);
  s = b.next;
  RngStream rng(s);
  s = s.advanced();
  return CylinderPoint{b.value, 6.0 * rng.uniform01() - 3.0};
}

CylinderTangent random_tangent(const CylinderPoint& pt, SeededSampler& s) {
  const auto u = algebra_sample(pt.b.group, s);
  s = u.next;
  RngStream rng(s);
  s = s.advanced();
  return CylinderTangent{pt.b.m * u.value.v, rng.gaussian()};
}

}  // namespace

TEST_CASE("cover_p basics and the fiber over the identity", "[covering]") {
  const int n = 3;
  const CylinderPoint origin{GroupElement{su(n), Matrix::Identity(n, n)}, 0.0};
  REQUIRE((cover_p(origin).m - Matrix::Identity(n, n)).norm() == 0.0);

  // (e^{2 pi i / n} I, -2 pi / n) lies over the identity as well.
  const cxd zeta = std::polar(1.0, 2.0 * kPi / n);
  const CylinderPoint other{
      GroupElement{su(n), (zeta * Matrix::Identity(n, n)).eval()},
      -2.0 * kPi / n};
  REQUIRE((cover_p(other).m - Matrix::Identity(n, n)).norm() <= 1e-14);

  SeededSampler s{301, 0};
  for (int trial = 0; trial < 50; ++trial) {
    const CylinderPoint pt = random_point(n, s);
    REQUIRE(membership(un(n), cover_p(pt).m).max_residual <= 1e-12);
  }
}

TEST_CASE("cover_p is a homomorphism", "[covering]") {
  const int n = 2;
  SeededSampler s{303, 0};
  for (int trial = 0; trial < 25; ++trial) {
    const CylinderPoint p1 = random_point(n, s);
    const CylinderPoint p2 = random_point(n, s);
    const CylinderPoint prod{
        GroupElement{su(n), (p1.b.m * p2.b.m).eval()}, p1.x + p2.x};
    REQUIRE((cover_p(prod).m - cover_p(p1).m * cover_p(p2).m).norm() <= 1e-13);
  }
}

TEST_CASE("cover_dp values and finite differences", "[covering]") {
  const int n = 3;
  const CylinderPoint origin{GroupElement{su(n), Matrix::Identity(n, n)}, 0.0};
  const CylinderTangent zero{Matrix::Zero(n, n), 0.0};
  REQUIRE(cover_dp(origin, zero).norm() == 0.0);

  const CylinderTangent unit_lambda{Matrix::Zero(n, n), 1.0};
  REQUIRE((cover_dp(origin, unit_lambda) -
           cxd(0, 1) * Matrix::Identity(n, n))
              .norm() == 0.0);

  // Central finite differences along t -> (B exp(t W'), x + t lambda).
  SeededSampler s{307, 0};
  const double h = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    const CylinderPoint pt = random_point(n, s);
    const CylinderTangent v = random_tangent(pt, s);
    const AlgebraElement w0{pt.b.group, pt.b.m.adjoint() * v.w};
    const CylinderPoint plus{geodesic(pt.b, w0, h), pt.x + h * v.lambda};
    const CylinderPoint minus{geodesic(pt.b, w0, -h), pt.x - h * v.lambda};
    const Matrix fd = (cover_p(plus).m - cover_p(minus).m) / (2.0 * h);
    const Matrix analytic = cover_dp(pt, v);
    REQUIRE((fd - analytic).norm() <= 1e-6 * (1.0 + analytic.norm()));
    // Tangency at the image.
    const Matrix img = cover_p(pt).m;
    REQUIRE(algebra_membership(un(n), (img.adjoint() * analytic).eval())
                .max_residual <= 1e-10);
  }
}

TEST_CASE("h_metric values", "[covering]") {
  const int n = 3;
  const CylinderPoint origin{GroupElement{su(n), Matrix::Identity(n, n)}, 0.0};
  const CylinderTangent unit_lambda{Matrix::Zero(n, n), 1.0};
  REQUIRE(h_metric(origin, unit_lambda, unit_lambda) == static_cast<double>(n));

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = cxd(0, 1);
  d(1, 1) = cxd(0, -1);
  const CylinderPoint o2{GroupElement{su(2), Matrix::Identity(2, 2)}, 0.0};
  const CylinderTangent v{d, 0.0};
  REQUIRE(std::abs(h_metric(o2, v, v) - 2.0) <= 1e-14);
}

TEST_CASE("pullback identity p*(phi) = H", "[covering]") {
  for (const int n : {2, 3, 4}) {
    const MetricSpec phi = MetricSpec::frobenius(un(n));
    SeededSampler s{311, 0};
    for (int trial = 0; trial < 100; ++trial) {
      const CylinderPoint pt = random_point(n, s);
      const CylinderTangent v = random_tangent(pt, s);
      const CylinderTangent w = random_tangent(pt, s);
      const double upstairs = h_metric(pt, v, w);
      const double downstairs = metric_eval_raw(
          phi, cover_p(pt).m, cover_dp(pt, v), cover_dp(pt, w));
      INFO("n=" << n);
      REQUIRE(std::abs(upstairs - downstairs) <=
              1e-10 * (1.0 + std::abs(upstairs)));
    }
  }
}

TEST_CASE("inner automorphism lifts project", "[covering]") {
  const int n = 3;
  const auto b = haar_sample(su(n), SeededSampler{313, 0});
  const IsometryMap cb =
      make_isometry(su(n), FamilyTag::Plain, b.value.m, b.value.m.adjoint());
  const IsometryMap induced =
      fiber_projects(make_cylinder_isometry(cb, +1.0, 0.0));
  REQUIRE(induced.family == FamilyTag::Plain);
  SeededSampler s = b.next;
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = haar_sample(un(n), s);
    s = x.next;
    const Matrix want = b.value.m * x.value.m * b.value.m.adjoint();
    REQUIRE((apply_raw(induced, x.value.m) - want).norm() <= 1e-12);
  }
}

TEST_CASE("Id x (-id) projects to the det twist exactly for n = 2",
          "[covering]") {
  const IsometryMap id2 = make_isometry(
      su(2), FamilyTag::Plain, Matrix::Identity(2, 2), Matrix::Identity(2, 2));
  const IsometryMap induced =
      fiber_projects(make_cylinder_isometry(id2, -1.0, 0.0));
  REQUIRE(induced.family == FamilyTag::DetTwist);
  SeededSampler s{317, 0};
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = haar_sample(un(2), s);
    s = x.next;
    const Matrix want = x.value.m / x.value.m.determinant();
    REQUIRE((apply_raw(induced, x.value.m) - want).norm() <= 1e-12);
  }

  for (const int n : {3, 4}) {
    const IsometryMap idn =
        make_isometry(su(n), FamilyTag::Plain, Matrix::Identity(n, n),
                      Matrix::Identity(n, n));
    REQUIRE_THROWS_AS(fiber_projects(make_cylinder_isometry(idn, -1.0, 0.0)),
                      Error);
    try {
      fiber_projects(make_cylinder_isometry(idn, -1.0, 0.0));
    } catch (const Error& e) {
      REQUIRE(e.code() == ErrorCode::NotWellDefined);
    }
  }
}

TEST_CASE("the projection table across lift families", "[covering]") {
  // n >= 3: (Plain, +), (Adjoint, -), (Conjugate, -), (Transpose, +) project;
  // the four opposite pairings do not.
  const int n = 3;
  const Matrix id = Matrix::Identity(n, n);
  const auto expect = [&](FamilyTag fam, double sign, bool projects,
                          FamilyTag want) {
    const IsometryMap phi = make_isometry(su(n), fam, id, id);
    const CylinderIsometry lift = make_cylinder_isometry(phi, sign, 0.0);
    if (projects) {
      REQUIRE(fiber_projects(lift).family == want);
    } else {
      REQUIRE_THROWS_AS(fiber_projects(lift), Error);
    }
  };
  expect(FamilyTag::Plain, +1.0, true, FamilyTag::Plain);
  expect(FamilyTag::Adjoint, -1.0, true, FamilyTag::Adjoint);
  expect(FamilyTag::Conjugate, -1.0, true, FamilyTag::Conjugate);
  expect(FamilyTag::Transpose, +1.0, true, FamilyTag::Transpose);
  expect(FamilyTag::Plain, -1.0, false, FamilyTag::Plain);
  expect(FamilyTag::Adjoint, +1.0, false, FamilyTag::Adjoint);
  expect(FamilyTag::Conjugate, +1.0, false, FamilyTag::Conjugate);
  expect(FamilyTag::Transpose, -1.0, false, FamilyTag::Transpose);

  // n = 2: every lift of the two SU(2) families projects, and the four
  // pairings yield exactly the four U(2) families.
  const Matrix id2m = Matrix::Identity(2, 2);
  const IsometryMap plain2 =
      make_isometry(su(2), FamilyTag::Plain, id2m, id2m);
  const IsometryMap adj2 =
      make_isometry(su(2), FamilyTag::Adjoint, id2m, id2m);
  REQUIRE(fiber_projects(make_cylinder_isometry(plain2, +1.0, 0.0)).family ==
          FamilyTag::Plain);
  REQUIRE(fiber_projects(make_cylinder_isometry(plain2, -1.0, 0.0)).family ==
          FamilyTag::DetTwist);
  REQUIRE(fiber_projects(make_cylinder_isometry(adj2, -1.0, 0.0)).family ==
          FamilyTag::Adjoint);
  REQUIRE(fiber_projects(make_cylinder_isometry(adj2, +1.0, 0.0)).family ==
          FamilyTag::DetAdjoint);
}

TEST_CASE("translation offsets canonicalize into the left parameter",
          "[covering]") {
  const int n = 3;
  const Matrix id = Matrix::Identity(n, n);
  const IsometryMap phi = make_isometry(su(n), FamilyTag::Plain, id, id);
  const double c = 0.83;
  const IsometryMap induced =
      fiber_projects(make_cylinder_isometry(phi, +1.0, c));
  REQUIRE(induced.family == FamilyTag::Plain);
  REQUIRE((induced.a - std::polar(1.0, c) * id).norm() <= 1e-13);
}

TEST_CASE("un_families matches the theorem split", "[covering]") {
  const auto f2 = un_families(2);
  REQUIRE(f2.size() == 4);
  REQUIRE(f2[2].tag == FamilyTag::DetTwist);
  const auto f3 = un_families(3);
  REQUIRE(f3.size() == 4);
  for (const auto& info : f3) {
    REQUIRE(info.tag != FamilyTag::DetTwist);
    REQUIRE(info.tag != FamilyTag::DetAdjoint);
  }
}

TEST_CASE("U(n) families verify as isometries of the Frobenius metric",
          "[covering]") {
  for (const int n : {2, 3, 4}) {
    const MetricSpec phi = MetricSpec::frobenius(un(n));
    SeededSampler s{331, 0};
    for (const FamilyInfo& info : un_families(n)) {
      const auto a = haar_sample(un(n), s);
      const auto b = haar_sample(un(n), a.next);
      s = b.next;
      const IsometryMap f = make_isometry(un(n), info.tag, a.value.m, b.value.m);
      const VerificationReport rep =
          verify_isometry(f, phi, SeededSampler{67, 0}, 40);
      INFO("U(" << n << ") " << family_name(info.tag));
      REQUIRE(rep.verdict == Verdict::Isometry);
      REQUIRE(rep.max_metric_defect <= 1e-9);
    }
  }
}

TEST_CASE("U(n) Frobenius metric is not proportional to the Killing tensor",
          "[covering]") {
  // The ratio K/phi varies across tangent directions (phi is definite, K is
  // degenerate along iI).
  for (const int n : {2, 3}) {
    const GroupElement id{un(n), Matrix::Identity(n, n)};
    const Matrix i_id = cxd(0, 1) * Matrix::Identity(n, n);
    const MetricSpec phi = MetricSpec::frobenius(un(n));
    const double phi_center = metric_eval(phi, {id, i_id, i_id});
    const double k_center = killing_tensor_un(id, i_id, i_id);
    // Degenerate direction: K vanishes, phi does not.
    REQUIRE(phi_center >= 1.0);
    REQUIRE(k_center == 0.0);

    Matrix d = Matrix::Zero(n, n);
    d(0, 0) = cxd(0, 1);
    d(1, 1) = cxd(0, -1);
    const double phi_t = metric_eval(phi, {id, d, d});
    const double k_t = killing_tensor_un(id, d, d);
    const double ratio_center = k_center / phi_center;
    const double ratio_t = k_t / phi_t;
    REQUIRE(std::abs(ratio_center - ratio_t) >= 0.1);
  }
}
