#pragma once

// The universal cover p : SU(n) x R -> U(n), (B, x) -> e^{ix} B, the product
// metric H on the cylinder, the local-isometry pullback identity, and
// projection (or obstruction) of lifted isometries down to U(n).

#include <cmath>
#include <utility>

#include "liegeom/error.hpp"
#include "liegeom/geometry.hpp"
#include "liegeom/groups.hpp"
#include "liegeom/isometries.hpp"
#include "liegeom/isometry_types.hpp"

namespace liegeom {

/// A point (B, x) of the cylinder SU(n) x R.
struct CylinderPoint {
  GroupElement b;  // in SU(n)
  double x = 0.0;
};

/// Tangent (W, lambda) at a cylinder point: W tangent to SU(n) at B.
struct CylinderTangent {
  Matrix w;
  double lambda = 0.0;
};

namespace detail {

inline void require_cylinder(const CylinderPoint& pt, const Tolerances& tol,
                             const char* who) {
  if (pt.b.group.family != GroupFamily::SU) {
    fail(ErrorCode::GroupMismatch, std::string(who) + ": expects SU(n) x R");
  }
  const MembershipReport rep = membership(pt.b.group, pt.b.m, tol);
  if (!rep.ok) {
    fail(ErrorCode::NotInGroup, std::string(who) + ": base off SU(n)");
  }
}

inline void require_cylinder_tangent(const CylinderPoint& pt,
                                     const CylinderTangent& v,
                                     const Tolerances& tol, const char* who) {
  const MembershipReport rep =
      algebra_membership(pt.b.group, (pt.b.m.adjoint() * v.w).eval(), tol);
  if (!rep.ok) {
    fail(ErrorCode::NotTangent,
         std::string(who) + ": tangency residual " +
             std::to_string(rep.max_residual));
  }
}

}  // namespace detail

/// p(B, x) = e^{ix} B in U(n).
inline GroupElement cover_p(const CylinderPoint& pt,
                            const Tolerances& tol = {}) {
  detail::require_cylinder(pt, tol, "cover_p");
  const cxd phase = std::polar(1.0, pt.x);
  return GroupElement{un(pt.b.group.n), phase * pt.b.m};
}

/// Differential of p: (W, lambda) -> e^{ix} (W + i lambda B).
inline Matrix cover_dp(const CylinderPoint& pt, const CylinderTangent& v,
                       const Tolerances& tol = {}) {
  detail::require_cylinder(pt, tol, "cover_dp");
  detail::require_cylinder_tangent(pt, v, tol, "cover_dp");
  const cxd phase = std::polar(1.0, pt.x);
  return phase * (v.w + cxd(0.0, v.lambda) * pt.b.m);
}

/// The product metric H: -tr(B* W B* W') + n lambda lambda'.
inline double h_metric(const CylinderPoint& pt, const CylinderTangent& v,
                       const CylinderTangent& w, const Tolerances& tol = {}) {
  detail::require_cylinder(pt, tol, "h_metric");
  detail::require_cylinder_tangent(pt, v, tol, "h_metric");
  detail::require_cylinder_tangent(pt, w, tol, "h_metric");
  const int n = pt.b.group.n;
  const Matrix bw = pt.b.m.adjoint() * v.w;
  const Matrix bw2 = pt.b.m.adjoint() * w.w;
  return -(bw * bw2).trace().real() + n * v.lambda * w.lambda;
}

/// A cylinder isometry in de Rham form: Phi x alpha with Phi a classified
/// SU(n) family map and alpha(x) = sign x + offset a euclidean isometry.
struct CylinderIsometry {
  IsometryMap phi;      // on SU(n)
  double alpha_sign;    // +1 or -1
  double alpha_offset;  // translation part

  std::pair<Matrix, double> apply(const CylinderPoint& pt) const {
    return {apply_raw(phi, pt.b.m), alpha_sign * pt.x + alpha_offset};
  }
};

inline CylinderIsometry make_cylinder_isometry(IsometryMap phi, double sign,
                                               double offset) {
  if (phi.group.family != GroupFamily::SU) {
    fail(ErrorCode::GroupMismatch, "lift must act on SU(n)");
  }
  if (sign != 1.0 && sign != -1.0) {
    fail(ErrorCode::InvalidArgument, "alpha must be x -> +-x + c");
  }
  return CylinderIsometry{std::move(phi), sign, offset};
}

/// Tests whether the lift descends through the cover: p o lift must agree on
/// the fiber generator pair over the identity and on seeded deck-shifted
/// pairs. When it does, the induced U(n) map is returned canonicalized into
/// a classified family and checked pointwise; otherwise NotWellDefined.
inline IsometryMap fiber_projects(const CylinderIsometry& lift,
                                  SeededSampler s = {0xF1BE5u, 0},
                                  const Tolerances& tol = {}) {
  const int n = lift.phi.group.n;
  const double shift = 2.0 * 3.14159265358979323846 / n;
  const cxd zeta = std::polar(1.0, shift);

  auto project_after = [&](const CylinderPoint& pt) {
    const auto moved = lift.apply(pt);
    return (std::polar(1.0, moved.second) * moved.first).eval();
  };
  auto deck_shift = [&](const CylinderPoint& pt) {
    return CylinderPoint{GroupElement{su(n), (zeta * pt.b.m).eval()},
                         pt.x - shift};
  };

  // Generator fiber pair over the identity, then seeded fiber pairs.
  std::vector<CylinderPoint> probes;
  probes.push_back(CylinderPoint{GroupElement{su(n), Matrix::Identity(n, n)},
                                 0.0});
  for (int trial = 0; trial < 20; ++trial) {
    const auto b = haar_sample(su(n), s);
    s = b.next;
    RngStream rng(s);
    probes.push_back(CylinderPoint{b.value, 6.0 * rng.uniform01() - 3.0});
    s = s.advanced();
  }
  for (const CylinderPoint& pt : probes) {
    const Matrix lhs = project_after(pt);
    const Matrix rhs = project_after(deck_shift(pt));
    if ((lhs - rhs).norm() > 1e-9) {
      fail(ErrorCode::NotWellDefined,
           "lift does not descend: fiber images differ by " +
               std::to_string((lhs - rhs).norm()));
    }
  }

  // Canonical family of the induced map; the translation part becomes a
  // phase on the left parameter.
  const cxd phase = std::polar(1.0, lift.alpha_offset);
  const Matrix a = phase * lift.phi.a;
  const Matrix b = lift.phi.b;
  const bool up = lift.alpha_sign > 0;
  FamilyTag tag;
  switch (lift.phi.family) {
    case FamilyTag::Plain:
      tag = up ? FamilyTag::Plain : FamilyTag::DetTwist;
      break;
    case FamilyTag::Adjoint:
      tag = up ? FamilyTag::DetAdjoint : FamilyTag::Adjoint;
      break;
    case FamilyTag::Conjugate:
      if (up) fail(ErrorCode::NotWellDefined, "conjugate lift needs -id");
      tag = FamilyTag::Conjugate;
      break;
    case FamilyTag::Transpose:
      if (!up) fail(ErrorCode::NotWellDefined, "transpose lift needs +id");
      tag = FamilyTag::Transpose;
      break;
    default:
      fail(ErrorCode::InvalidArgument, "lift family not in Thm-2.5 form");
  }
  const IsometryMap induced = make_isometry(un(n), tag, a, b, tol);

  // Pointwise agreement of the canonical form with the projected lift.
  for (int trial = 0; trial < 20; ++trial) {
    const auto bb = haar_sample(su(n), s);
    s = bb.next;
    RngStream rng(s);
    s = s.advanced();
    const CylinderPoint pt{bb.value, 6.0 * rng.uniform01() - 3.0};
    const Matrix down = project_after(pt);
    const Matrix direct = apply_raw(induced, cover_p(pt, tol).m);
    if ((down - direct).norm() > 1e-10) {
      fail(ErrorCode::NotWellDefined,
           "projected lift does not match its canonical family form");
    }
  }
  return induced;
}

/// Family list of (U(n), phi): det-twisted families exist only for n = 2.
inline std::vector<FamilyInfo> un_families(int n) {
  return families_for(un(n));
}

}  // namespace liegeom
