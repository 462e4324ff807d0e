#pragma once

// Application, analytic differentials, composition with canonicalization,
// and numeric verification for the classified isometry families.

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "liegeom/error.hpp"
#include "liegeom/geometry.hpp"
#include "liegeom/groups.hpp"
#include "liegeom/isometry_types.hpp"
#include "liegeom/numkit.hpp"
#include "liegeom/so4.hpp"

namespace liegeom {

namespace detail {

/// The family formula without admissibility or membership checks. Used both
/// by apply() and by falsification probes that deliberately evaluate a
/// family on a group where it is not an isometry.
inline Matrix family_apply_raw(FamilyTag family, const Matrix& a,
                               const Matrix& b, const Matrix& x) {
  switch (family) {
    case FamilyTag::Plain: return a * x * b;
    case FamilyTag::Transpose: return a * x.transpose() * b;
    case FamilyTag::Adjoint: return a * x.adjoint() * b;
    case FamilyTag::Conjugate: return a * x.conjugate() * b;
    case FamilyTag::Inverse: return a * x.inverse() * b;
    case FamilyTag::TauPlain: return a * tau_linear(x) * b;
    case FamilyTag::TauTranspose:
      return a * tau_linear(x).transpose() * b;
    case FamilyTag::DetTwist: return (a * x * b) / x.determinant();
    case FamilyTag::DetAdjoint: return x.determinant() * (a * x.adjoint() * b);
  }
  fail(ErrorCode::InvalidArgument, "unknown family");
}

/// Differential of the family formula at a group point. v is tangent at x.
inline Matrix family_differential_raw(FamilyTag family, const Matrix& a,
                                      const Matrix& b, const Matrix& x,
                                      const Matrix& v) {
  switch (family) {
    case FamilyTag::Plain: return a * v * b;
    case FamilyTag::Transpose: return a * v.transpose() * b;
    case FamilyTag::Adjoint: {
      const Matrix xs = x.adjoint();
      return -(a * xs * v * xs * b);
    }
    case FamilyTag::Conjugate: return a * v.conjugate() * b;
    case FamilyTag::Inverse: {
      const Matrix xi = x.inverse();
      return -(a * xi * v * xi * b);
    }
    case FamilyTag::TauPlain: return a * tau_linear(v) * b;
    case FamilyTag::TauTranspose:
      return a * tau_linear(v).transpose() * b;
    case FamilyTag::DetTwist: {
      const cxd det = x.determinant();
      const cxd tr = (x.inverse() * v).trace();
      return a * ((v - tr * x) / det) * b;
    }
    case FamilyTag::DetAdjoint: {
      const cxd det = x.determinant();
      const cxd tr = (x.inverse() * v).trace();
      const Matrix xs = x.adjoint();
      return det * (tr * (a * xs * b) - a * xs * v * xs * b);
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown family");
}

}  // namespace detail

inline Matrix apply_raw(const IsometryMap& f, const Matrix& x) {
  return detail::family_apply_raw(f.family, f.a, f.b, x);
}

/// Apply the classified map; the image is membership-checked.
inline GroupElement apply(const IsometryMap& f, const GroupElement& x,
                          const Tolerances& tol = {}) {
  if (x.group != f.group) {
    fail(ErrorCode::GroupMismatch, "apply: group mismatch");
  }
  return make_group_element(f.group, apply_raw(f, x.m), tol);
}

/// Analytic pushforward of a tangent vector at `base`.
inline Matrix differential(const IsometryMap& f, const GroupElement& base,
                           const Matrix& v, const Tolerances& tol = {}) {
  if (base.group != f.group) {
    fail(ErrorCode::GroupMismatch, "differential: group mismatch");
  }
  detail::require_tangent(base, v, tol, "differential");
  return detail::family_differential_raw(f.family, f.a, f.b, base.m, v);
}

/// Opaque point-function with differential: the interface verify_isometry
/// consumes, so falsification candidates can be probed without constructing
/// an (inadmissible) IsometryMap.
struct PointMap {
  GroupId group;
  std::function<Matrix(const Matrix&)> apply;
  std::function<Matrix(const Matrix&, const Matrix&)> differential;
};

inline PointMap family_point_map(GroupId g, FamilyTag family, Matrix a,
                                 Matrix b) {
  PointMap pm;
  pm.group = g;
  pm.apply = [family, a, b](const Matrix& x) {
    return detail::family_apply_raw(family, a, b, x);
  };
  pm.differential = [family, a, b](const Matrix& x, const Matrix& v) {
    return detail::family_differential_raw(family, a, b, x, v);
  };
  return pm;
}

inline PointMap as_point_map(const IsometryMap& f) {
  return family_point_map(f.group, f.family, f.a, f.b);
}

enum class Verdict { Isometry, NotIsometry, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Isometry: return "Isometry";
    case Verdict::NotIsometry: return "NotIsometry";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct VerificationReport {
  int samples = 0;
  double max_metric_defect = 0.0;
  double max_membership_defect = 0.0;
  Verdict verdict = Verdict::Inconclusive;
};

/// Pullback-metric check on seeded samples, plus a distance cross-check on
/// pairs off the cut locus. Isometry requires every relative defect at or
/// below metric_rel_tol; NotIsometry requires a defect past the
/// falsification margin; anything between stays Inconclusive.
inline VerificationReport verify_isometry(const PointMap& f,
                                          const MetricSpec& m,
                                          SeededSampler s, int n_samples,
                                          const Tolerances& tol = {}) {
  VerificationReport rep;
  rep.samples = n_samples;
  GroupElement prev_image{m.group, Matrix()};
  GroupElement prev_base{m.group, Matrix()};
  bool have_prev = false;

  for (int i = 0; i < n_samples; ++i) {
    const auto base = haar_sample(m.group, s);
    const auto u = algebra_sample(m.group, base.next);
    const auto w = algebra_sample(m.group, u.next);
    s = w.next;

    const Matrix x = base.value.m * u.value.v;
    const Matrix y = base.value.m * w.value.v;
    const double g0 = metric_eval_raw(m, base.value.m, x, y);

    const Matrix image = f.apply(base.value.m);
    rep.max_membership_defect = std::max(
        rep.max_membership_defect, membership(m.group, image, tol).max_residual);

    const Matrix dx = f.differential(base.value.m, x);
    const Matrix dy = f.differential(base.value.m, y);
    rep.max_membership_defect =
        std::max(rep.max_membership_defect,
                 algebra_membership(m.group, (image.adjoint() * dx).eval(), tol)
                     .max_residual);

    const double g1 = metric_eval_raw(m, image, dx, dy);
    rep.max_metric_defect =
        std::max(rep.max_metric_defect,
                 std::abs(g1 - g0) / (1.0 + std::abs(g0)));

    // Distance preservation on consecutive base pairs.
    if (have_prev && i % 5 == 0) {
      try {
        const double d0 = distance(m, prev_base, base.value, tol);
        const GroupElement ib{m.group, image};
        const double d1 = distance(m, prev_image, ib, tol);
        rep.max_metric_defect = std::max(
            rep.max_metric_defect, std::abs(d1 - d0) / (1.0 + d0));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::CutLocus) throw;
      }
    }
    prev_base = base.value;
    prev_image = GroupElement{m.group, image};
    have_prev = true;
  }

  if (rep.max_metric_defect >= tol.falsification_margin ||
      rep.max_membership_defect >= tol.falsification_margin) {
    rep.verdict = Verdict::NotIsometry;
  } else if (rep.max_metric_defect <= tol.metric_rel_tol &&
             rep.max_membership_defect <= tol.membership_tol) {
    rep.verdict = Verdict::Isometry;
  } else {
    rep.verdict = Verdict::Inconclusive;
  }
  return rep;
}

inline VerificationReport verify_isometry(const IsometryMap& f,
                                          const MetricSpec& m,
                                          SeededSampler s, int n_samples,
                                          const Tolerances& tol = {}) {
  return verify_isometry(as_point_map(f), m, s, n_samples, tol);
}

// ---------------------------------------------------------------------------
// Composition with canonicalization.

namespace detail {

// Core composition for the linear/antilinear cores {id, T, *, conj}: an
// abelian Klein four-group.
inline FamilyTag compose_linear_core(FamilyTag outer, FamilyTag inner) {
  auto idx = [](FamilyTag t) -> int {
    switch (t) {
      case FamilyTag::Plain: return 0;
      case FamilyTag::Transpose: return 1;
      case FamilyTag::Adjoint: return 2;
      case FamilyTag::Conjugate: return 3;
      default: fail(ErrorCode::InvalidArgument, "not a linear core");
    }
  };
  static const FamilyTag table[4][4] = {
      {FamilyTag::Plain, FamilyTag::Transpose, FamilyTag::Adjoint,
       FamilyTag::Conjugate},
      {FamilyTag::Transpose, FamilyTag::Plain, FamilyTag::Conjugate,
       FamilyTag::Adjoint},
      {FamilyTag::Adjoint, FamilyTag::Conjugate, FamilyTag::Plain,
       FamilyTag::Transpose},
      {FamilyTag::Conjugate, FamilyTag::Adjoint, FamilyTag::Transpose,
       FamilyTag::Plain}};
  return table[idx(outer)][idx(inner)];
}

// f(g(X)) for maps X -> A sigma(X) B with sigma in {id, T, *, conj, inv}:
// push the outer core through the inner parameters.
inline IsometryMap compose_push_through(const IsometryMap& f,
                                        const IsometryMap& g) {
  Matrix a, b;
  FamilyTag core;
  switch (f.family) {
    case FamilyTag::Plain:
      core = g.family;
      a = f.a * g.a;
      b = g.b * f.b;
      break;
    case FamilyTag::Transpose:
      core = compose_linear_core(FamilyTag::Transpose, g.family);
      a = f.a * g.b.transpose();
      b = g.a.transpose() * f.b;
      break;
    case FamilyTag::Adjoint:
      core = compose_linear_core(FamilyTag::Adjoint, g.family);
      a = f.a * g.b.adjoint();
      b = g.a.adjoint() * f.b;
      break;
    case FamilyTag::Conjugate:
      core = compose_linear_core(FamilyTag::Conjugate, g.family);
      a = f.a * g.a.conjugate();
      b = g.b.conjugate() * f.b;
      break;
    case FamilyTag::Inverse:
      core = g.family == FamilyTag::Inverse ? FamilyTag::Plain
                                            : FamilyTag::Inverse;
      a = f.a * g.b.adjoint();
      b = g.a.adjoint() * f.b;
      break;
    default:
      fail(ErrorCode::InvalidArgument, "core not handled by push-through");
  }
  return IsometryMap{f.group, core, std::move(a), std::move(b)};
}

// U(2): represent X -> det(X)^k A X^sigma B with sigma in {id, *} and
// k in {-1, 0, 1}; the four families are (0,id), (0,*), (-1,id), (1,*).
struct DetTwisted {
  int k;
  bool adj;
  Matrix a;
  Matrix b;
};

inline DetTwisted to_det_twisted(const IsometryMap& f) {
  switch (f.family) {
    case FamilyTag::Plain: return {0, false, f.a, f.b};
    case FamilyTag::Adjoint: return {0, true, f.a, f.b};
    case FamilyTag::DetTwist: return {-1, false, f.a, f.b};
    case FamilyTag::DetAdjoint: return {1, true, f.a, f.b};
    default:
      fail(ErrorCode::InvalidArgument, "not a U(2) family");
  }
}

inline IsometryMap from_det_twisted(GroupId g, const DetTwisted& d) {
  FamilyTag tag;
  if (d.k == 0 && !d.adj) {
    tag = FamilyTag::Plain;
  } else if (d.k == 0 && d.adj) {
    tag = FamilyTag::Adjoint;
  } else if (d.k == -1 && !d.adj) {
    tag = FamilyTag::DetTwist;
  } else if (d.k == 1 && d.adj) {
    tag = FamilyTag::DetAdjoint;
  } else {
    fail(ErrorCode::NoConvergence, "det-twist composition left the family list");
  }
  return IsometryMap{g, tag, d.a, d.b};
}

inline IsometryMap compose_u2(const IsometryMap& f, const IsometryMap& g) {
  const DetTwisted df = to_det_twisted(f);
  const DetTwisted dg = to_det_twisted(g);
  const int s2 = dg.adj ? -1 : 1;
  const int e1 = df.adj ? -1 : 1;
  DetTwisted out;
  out.k = df.k * (2 * dg.k + s2) + e1 * dg.k;
  out.adj = df.adj != dg.adj;
  const cxd inner_det = dg.a.determinant() * dg.b.determinant();
  cxd scalar = 1.0;
  for (int i = 0; i < std::abs(df.k); ++i) {
    scalar *= df.k > 0 ? inner_det : cxd(1.0, 0.0) / inner_det;
  }
  if (!df.adj) {
    out.a = scalar * (df.a * dg.a);
    out.b = dg.b * df.b;
  } else {
    out.a = scalar * (df.a * dg.b.adjoint());
    out.b = dg.a.adjoint() * df.b;
  }
  return from_det_twisted(f.group, out);
}

// SO(4): every classified core (id, T, tau, tau T) extends to a linear
// operator on M_4(R), so the composite is identified as a 16x16 operator and
// split back into A (.) B form by a Kronecker rank-1 rearrangement.
inline RealMatrix operator_matrix(const IsometryMap& f) {
  RealMatrix op(16, 16);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      RealMatrix e = RealMatrix::Zero(4, 4);
      e(i, j) = 1.0;
      const RealMatrix img =
          family_apply_raw(f.family, f.a, f.b, to_complex(e)).real();
      for (int c = 0; c < 4; ++c)
        for (int r = 0; r < 4; ++r) op(r + 4 * c, i + 4 * j) = img(r, c);
    }
  }
  return op;
}

inline std::optional<std::pair<Matrix, Matrix>> split_two_sided(
    const RealMatrix& n_op) {
  // n_op = kron(B^T, A) in column-major vec convention; rearrange so the
  // Kronecker structure becomes rank one.
  RealMatrix r(16, 16);
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      for (int rr = 0; rr < 4; ++rr)
        for (int ss = 0; ss < 4; ++ss)
          r(4 * q + ss, 4 * rr + p) = n_op(4 * p + q, 4 * rr + ss);
  Rank1Factors f;
  try {
    f = rank1_factor_general(r, 1e-9);
  } catch (const Error&) {
    return std::nullopt;
  }
  RealMatrix a(4, 4), b(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      a(i, j) = f.p[4 * i + j];
      b(i, j) = f.q[4 * i + j];
    }
  return std::make_pair(to_complex(a), to_complex(b));
}

inline IsometryMap compose_so4(const IsometryMap& f, const IsometryMap& g,
                               const Tolerances& tol) {
  const RealMatrix composite = operator_matrix(f) * operator_matrix(g);
  for (const FamilyTag core :
       {FamilyTag::Plain, FamilyTag::Transpose, FamilyTag::TauPlain,
        FamilyTag::TauTranspose}) {
    // All four cores are involutions, so core^-1 = core.
    const IsometryMap probe{so(4), core, Matrix::Identity(4, 4),
                            Matrix::Identity(4, 4)};
    const RealMatrix n_op = composite * operator_matrix(probe);
    const auto split = split_two_sided(n_op);
    if (!split) continue;
    const auto& [a, b] = *split;
    const Matrix id4 = Matrix::Identity(4, 4);
    if ((a.adjoint() * a - id4).norm() > tol.membership_tol) continue;
    if ((b.adjoint() * b - id4).norm() > tol.membership_tol) continue;
    const double pa = a.real().determinant();
    const double pb = b.real().determinant();
    if (pa * pb < 0.0) continue;
    return IsometryMap{so(4), core, a, b};
  }
  fail(ErrorCode::NoConvergence, "SO(4) composite did not canonicalize");
}

}  // namespace detail

/// Composite f after g, re-expressed in a classified family with explicit
/// parameters. The canonical form is validated pointwise on seeded samples.
inline IsometryMap compose(const IsometryMap& f, const IsometryMap& g,
                           const Tolerances& tol = {}) {
  if (f.group != g.group) {
    fail(ErrorCode::GroupMismatch, "compose: group mismatch");
  }
  IsometryMap out{f.group, FamilyTag::Plain, Matrix(), Matrix()};
  if (f.group.family == GroupFamily::SO && f.group.n == 4) {
    out = detail::compose_so4(f, g, tol);
  } else if (f.group.family == GroupFamily::U && f.group.n == 2) {
    out = detail::compose_u2(f, g);
  } else {
    out = detail::compose_push_through(f, g);
  }

  SeededSampler s{0xC0405EEDull, 0};
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = haar_sample(f.group, s);
    s = x.next;
    const Matrix naive = apply_raw(f, apply_raw(g, x.value.m));
    const Matrix canon = apply_raw(out, x.value.m);
    if ((naive - canon).norm() > 1e-10) {
      fail(ErrorCode::NoConvergence,
           "composition canonical form mismatch at a sample point");
    }
  }
  return make_isometry(out.group, out.family, out.a, out.b, tol);
}

/// Rewrites the SU(2) transpose/conjugate cores into the two listed families
/// (conjugation is inner there: conj(X) = eps X eps^-1 with eps = i s2).
inline IsometryMap canonicalize_su2(FamilyTag family, const Matrix& a,
                                    const Matrix& b,
                                    const Tolerances& tol = {}) {
  Matrix eps(2, 2);
  eps << 0, -1, 1, 0;
  switch (family) {
    case FamilyTag::Conjugate:
      return make_isometry(su(2), FamilyTag::Plain, a * eps,
                           eps.transpose() * b, tol);
    case FamilyTag::Transpose:
      return make_isometry(su(2), FamilyTag::Adjoint, a * eps,
                           eps.transpose() * b, tol);
    case FamilyTag::Plain:
    case FamilyTag::Adjoint:
      return make_isometry(su(2), family, a, b, tol);
    default:
      fail(ErrorCode::InvalidArgument, "family not defined on SU(2)");
  }
}

}  // namespace liegeom
