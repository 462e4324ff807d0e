#pragma once

// Bi-invariant metrics (Killing, Frobenius, the cylinder product metric H),
// geodesics, Riemannian logarithm, distance, curvature tensors, sectional
// curvature, Ricci, and the ad-trace Killing-form oracle.

#include <cmath>
#include <string>

#include "liegeom/error.hpp"
#include "liegeom/groups.hpp"
#include "liegeom/numkit.hpp"

namespace liegeom {

enum class MetricKind { KillingNeg, Frobenius, ProductH };

/// Closed-form Killing constant c with K(X, Y) = c tr(XY) on the algebra.
/// Validated against the ad-trace oracle by the test suite before use.
inline double killing_constant(GroupId g) {
  switch (g.family) {
    case GroupFamily::SO:
      if (g.n <= 2) {
        fail(ErrorCode::InvalidArgument,
             "Killing form degenerate on SO(2)");
      }
      return static_cast<double>(g.n - 2);
    case GroupFamily::SU:
      return 2.0 * g.n;
    case GroupFamily::Sp:
      return 2.0 * g.n + 2.0;
    case GroupFamily::U:
      fail(ErrorCode::InvalidArgument,
           "Killing tensor of U(n) is degenerate; no scalar constant");
  }
  return 0.0;
}

struct MetricSpec {
  MetricKind kind;
  GroupId group;
  double c = 0.0;  // Killing constant, KillingNeg only

  static MetricSpec killing(GroupId g) {
    return MetricSpec{MetricKind::KillingNeg, g, killing_constant(g)};
  }
  static MetricSpec frobenius(GroupId g) {
    return MetricSpec{MetricKind::Frobenius, g, 0.0};
  }
};

struct TangentPair {
  GroupElement base;
  Matrix x;
  Matrix y;
};

/// tr(ad_X ad_Y): the defining trace form, computed from ad matrices. This is
/// the independent oracle every closed-form constant is validated against.
inline double killing_form_ad(GroupId g, const AlgebraElement& x,
                              const AlgebraElement& y) {
  if (x.group != g || y.group != g) {
    fail(ErrorCode::GroupMismatch, "killing_form_ad: group mismatch");
  }
  const RealMatrix ax = ad_matrix(g, x);
  const RealMatrix ay = ad_matrix(g, y);
  return (ax * ay).trace();
}

namespace detail {

inline double real_trace_product(const Matrix& a, const Matrix& b) {
  // tr(a b), real part; the trace of a product of two skew-Hermitian
  // translates is real up to round-off.
  return (a * b).trace().real();
}

inline void require_tangent(const GroupElement& base, const Matrix& t,
                            const Tolerances& tol, const char* who) {
  const Matrix u = base.m.adjoint() * t;
  const MembershipReport rep = algebra_membership(base.group, u, tol);
  if (!rep.ok) {
    fail(ErrorCode::NotTangent,
         std::string(who) + ": tangency residual " +
             std::to_string(rep.max_residual));
  }
}

}  // namespace detail

/// Metric value at the identity on algebra vectors.
inline double metric_at_identity(const MetricSpec& m, const Matrix& u,
                                 const Matrix& v) {
  switch (m.kind) {
    case MetricKind::KillingNeg:
      return -m.c * detail::real_trace_product(u, v);
    case MetricKind::Frobenius:
      return -detail::real_trace_product(u, v);
    case MetricKind::ProductH:
      fail(ErrorCode::InvalidArgument,
           "ProductH lives on the cylinder; use h_metric");
  }
  return 0.0;
}

/// Metric value without tangency enforcement (verification inner loop).
inline double metric_eval_raw(const MetricSpec& m, const Matrix& base,
                              const Matrix& x, const Matrix& y) {
  return metric_at_identity(m, base.adjoint() * x, base.adjoint() * y);
}

/// KillingNeg: -c tr(base^-1 X base^-1 Y); Frobenius: -tr(base* X base* Y).
inline double metric_eval(const MetricSpec& m, const TangentPair& t,
                          const Tolerances& tol = {}) {
  if (t.base.group != m.group) {
    fail(ErrorCode::GroupMismatch, "metric_eval: group mismatch");
  }
  detail::require_tangent(t.base, t.x, tol, "metric_eval");
  detail::require_tangent(t.base, t.y, tol, "metric_eval");
  return metric_eval_raw(m, t.base.m, t.x, t.y);
}

/// Killing tensor of U(n) at A: 2n tr(A*Y A*Z) - 2 tr(A*Y) tr(A*Z).
/// Negative semi-definite with iA in the radical.
inline double killing_tensor_un(const GroupElement& a, const Matrix& y,
                                const Matrix& z, const Tolerances& tol = {}) {
  if (a.group.family != GroupFamily::U) {
    fail(ErrorCode::GroupMismatch, "killing_tensor_un expects U(n)");
  }
  detail::require_tangent(a, y, tol, "killing_tensor_un");
  detail::require_tangent(a, z, tol, "killing_tensor_un");
  const int n = a.group.n;
  const Matrix ay = a.m.adjoint() * y;
  const Matrix az = a.m.adjoint() * z;
  const cxd value =
      2.0 * n * (ay * az).trace() - 2.0 * ay.trace() * az.trace();
  return value.real();
}

/// Geodesic through x with velocity v: t -> x exp(t v).
inline GroupElement geodesic(const GroupElement& x, const AlgebraElement& v,
                             double t) {
  if (x.group != v.group) {
    fail(ErrorCode::GroupMismatch, "geodesic: group mismatch");
  }
  return GroupElement{x.group, x.m * mat_exp((t * v.v).eval())};
}

/// v with geodesic(a, v, 1) = b, i.e. the principal log of a^-1 b.
inline AlgebraElement riemannian_log(const GroupElement& a,
                                     const GroupElement& b,
                                     const Tolerances& tol = {}) {
  if (a.group != b.group) {
    fail(ErrorCode::GroupMismatch, "riemannian_log: group mismatch");
  }
  const Matrix rel = a.m.adjoint() * b.m;
  Matrix l = principal_log(rel, tol);
  if (a.group.family == GroupFamily::SU) {
    // Round-off can leave a trace of order eps; re-center so the result is
    // exactly traceless.
    l -= (l.trace() / static_cast<double>(a.group.n)) *
         Matrix::Identity(l.rows(), l.cols());
  }
  return AlgebraElement{a.group, l};
}

/// Geodesic distance off the cut locus: the metric norm of the Riemannian log.
inline double distance(const MetricSpec& m, const GroupElement& a,
                       const GroupElement& b, const Tolerances& tol = {}) {
  if (a.group != m.group || b.group != m.group) {
    fail(ErrorCode::GroupMismatch, "distance: group mismatch");
  }
  const AlgebraElement v = riemannian_log(a, b, tol);
  const double g2 = metric_at_identity(m, v.v, v.v);
  return std::sqrt(std::max(0.0, g2));
}

/// (1,3) curvature: R(X, Y) Z = 1/4 [[X, Y], Z].
inline AlgebraElement curvature_13(const AlgebraElement& x,
                                   const AlgebraElement& y,
                                   const AlgebraElement& z) {
  if (x.group != y.group || x.group != z.group) {
    fail(ErrorCode::GroupMismatch, "curvature_13: group mismatch");
  }
  const AlgebraElement xy = bracket(x, y);
  const AlgebraElement xyz = bracket(xy, z);
  return AlgebraElement{x.group, 0.25 * xyz.v};
}

/// (0,4) curvature: R(X, Y, Z, W) = -1/4 K([X, Y], [Z, W]); with the metric
/// g = -K this is 1/4 g([X, Y], [Z, W]).
inline double curvature_04(const MetricSpec& m, const AlgebraElement& x,
                           const AlgebraElement& y, const AlgebraElement& z,
                           const AlgebraElement& w) {
  if (m.kind != MetricKind::KillingNeg) {
    fail(ErrorCode::InvalidArgument, "curvature_04 expects the Killing metric");
  }
  if (x.group != m.group || y.group != m.group || z.group != m.group ||
      w.group != m.group) {
    fail(ErrorCode::GroupMismatch, "curvature_04: group mismatch");
  }
  const AlgebraElement xy = bracket(x, y);
  const AlgebraElement zw = bracket(z, w);
  return 0.25 * metric_at_identity(m, xy.v, zw.v);
}

/// Sectional curvature of span(X, Y), normalized by the Gram determinant in
/// the chosen metric.
inline double sectional(const MetricSpec& m, const AlgebraElement& x,
                        const AlgebraElement& y) {
  const double gxx = metric_at_identity(m, x.v, x.v);
  const double gyy = metric_at_identity(m, y.v, y.v);
  const double gxy = metric_at_identity(m, x.v, y.v);
  const double gram = gxx * gyy - gxy * gxy;
  if (gram <= 1e-12 * std::max(gxx * gyy, 1e-300)) {
    fail(ErrorCode::DegeneratePlane, "sectional: degenerate plane");
  }
  return curvature_04(m, x, y, x, y) / gram;
}

/// Ricci contraction over a metric-orthonormal basis (fixed summation order).
inline double ricci(const MetricSpec& m, const AlgebraElement& x,
                    const AlgebraElement& y) {
  if (m.kind != MetricKind::KillingNeg) {
    fail(ErrorCode::InvalidArgument, "ricci expects the Killing metric");
  }
  if (x.group != m.group || y.group != m.group) {
    fail(ErrorCode::GroupMismatch, "ricci: group mismatch");
  }
  const auto& basis = algebra_basis(m.group);
  const double scale = 1.0 / std::sqrt(m.c);
  double sum = 0.0;
  for (const auto& b : basis) {
    const AlgebraElement e{m.group, scale * b.v};
    sum += curvature_04(m, x, e, y, e);
  }
  return sum;
}

/// Einstein fit: lambda from one basis pair, so tests can verify
/// ricci = lambda * g on independent samples.
inline double einstein_constant_fit(const MetricSpec& m) {
  const auto& basis = algebra_basis(m.group);
  const AlgebraElement& e0 = basis.front();
  const double g00 = metric_at_identity(m, e0.v, e0.v);
  return ricci(m, e0, e0) / g00;
}

}  // namespace liegeom
