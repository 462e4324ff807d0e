#pragma once

// Classification data for the isometry families: tags, per-group family
// lists with parameter domains, component counts, and the IsometryMap value
// type with admissibility checks.

#include <string>
#include <vector>

#include "liegeom/error.hpp"
#include "liegeom/groups.hpp"

namespace liegeom {

enum class FamilyTag {
  Plain,         // X -> A X B
  Transpose,     // X -> A X^T B
  Adjoint,       // X -> A X* B
  Conjugate,     // X -> A conj(X) B
  Inverse,       // X -> A X^-1 B
  TauPlain,      // X -> A tau(X) B           (SO(4))
  TauTranspose,  // X -> A tau(X)^T B         (SO(4))
  DetTwist,      // X -> A X B / det(X)       (U(2))
  DetAdjoint,    // X -> det(X) A X* B        (U(2))
};

inline const char* family_name(FamilyTag t) {
  switch (t) {
    case FamilyTag::Plain: return "plain";
    case FamilyTag::Transpose: return "transpose";
    case FamilyTag::Adjoint: return "adjoint";
    case FamilyTag::Conjugate: return "conjugate";
    case FamilyTag::Inverse: return "inverse";
    case FamilyTag::TauPlain: return "tauplain";
    case FamilyTag::TauTranspose: return "tautranspose";
    case FamilyTag::DetTwist: return "dettwist";
    case FamilyTag::DetAdjoint: return "detadjoint";
  }
  return "?";
}

inline FamilyTag parse_family(const std::string& s) {
  for (const FamilyTag t :
       {FamilyTag::Plain, FamilyTag::Transpose, FamilyTag::Adjoint,
        FamilyTag::Conjugate, FamilyTag::Inverse, FamilyTag::TauPlain,
        FamilyTag::TauTranspose, FamilyTag::DetTwist, FamilyTag::DetAdjoint}) {
    if (s == family_name(t)) return t;
  }
  fail(ErrorCode::InvalidArgument, "unknown family tag: " + s);
}

/// Where the parameter matrices (A, B) live.
enum class ParamDomain {
  GroupItself,              // A, B in G
  MatchedParityOrthogonal,  // A, B both in SO(n) or both in O(n) \ SO(n)
};

struct FamilyInfo {
  FamilyTag tag;
  ParamDomain domain;

  /// Connected components of the isometry group this family contributes.
  int components() const {
    return domain == ParamDomain::MatchedParityOrthogonal ? 2 : 1;
  }
};

/// The classified family list per group. Throws Unclassified outside the
/// covered range (e.g. SO(2)).
inline std::vector<FamilyInfo> families_for(GroupId g) {
  using FT = FamilyTag;
  using PD = ParamDomain;
  switch (g.family) {
    case GroupFamily::SO:
      if (g.n < 3) fail(ErrorCode::Unclassified, "SO(2) is not classified");
      if (g.n % 2 == 1) {
        return {{FT::Plain, PD::GroupItself}, {FT::Transpose, PD::GroupItself}};
      }
      if (g.n == 4) {
        return {{FT::Plain, PD::MatchedParityOrthogonal},
                {FT::Transpose, PD::MatchedParityOrthogonal},
                {FT::TauPlain, PD::MatchedParityOrthogonal},
                {FT::TauTranspose, PD::MatchedParityOrthogonal}};
      }
      return {{FT::Plain, PD::MatchedParityOrthogonal},
              {FT::Transpose, PD::MatchedParityOrthogonal}};
    case GroupFamily::SU:
      if (g.n == 2) {
        return {{FT::Plain, PD::GroupItself}, {FT::Adjoint, PD::GroupItself}};
      }
      return {{FT::Plain, PD::GroupItself},
              {FT::Adjoint, PD::GroupItself},
              {FT::Conjugate, PD::GroupItself},
              {FT::Transpose, PD::GroupItself}};
    case GroupFamily::U:
      if (g.n == 2) {
        return {{FT::Plain, PD::GroupItself},
                {FT::Adjoint, PD::GroupItself},
                {FT::DetTwist, PD::GroupItself},
                {FT::DetAdjoint, PD::GroupItself}};
      }
      return {{FT::Plain, PD::GroupItself},
              {FT::Adjoint, PD::GroupItself},
              {FT::Conjugate, PD::GroupItself},
              {FT::Transpose, PD::GroupItself}};
    case GroupFamily::Sp:
      return {{FT::Plain, PD::GroupItself}, {FT::Inverse, PD::GroupItself}};
  }
  fail(ErrorCode::Unclassified, "unknown group family");
}

/// Connected components of the full isometry group.
inline int component_count(GroupId g) {
  int total = 0;
  for (const FamilyInfo& f : families_for(g)) total += f.components();
  return total;
}

struct IsometryMap {
  GroupId group;
  FamilyTag family;
  Matrix a;
  Matrix b;
};

namespace detail {

/// Parity of an O(n) parameter: +1 for SO(n), -1 for the other sheet.
inline int orthogonal_parity(const Matrix& m, const Tolerances& tol) {
  const int n = static_cast<int>(m.rows());
  const Matrix id = Matrix::Identity(n, n);
  const double res = (m.adjoint() * m - id).norm() +
                     (m.size() ? m.imag().cwiseAbs().maxCoeff() : 0.0);
  if (res > tol.membership_tol) {
    fail(ErrorCode::InadmissibleParameters, "parameter not in O(n)");
  }
  const double det = m.real().determinant();
  return det > 0 ? 1 : -1;
}

}  // namespace detail

/// Validated constructor: family admissible for the group, parameters in the
/// declared domain (matched parity on the orthogonal sheets).
inline IsometryMap make_isometry(GroupId g, FamilyTag family, Matrix a,
                                 Matrix b, const Tolerances& tol = {}) {
  const auto fams = families_for(g);
  const FamilyInfo* info = nullptr;
  for (const auto& f : fams) {
    if (f.tag == family) {
      info = &f;
      break;
    }
  }
  if (info == nullptr) {
    fail(ErrorCode::InadmissibleParameters,
         std::string(family_name(family)) + " is not a family of " + g.name());
  }
  const int d = g.ambient_dim();
  if (a.rows() != d || a.cols() != d || b.rows() != d || b.cols() != d) {
    fail(ErrorCode::DimensionMismatch, "parameter size mismatch");
  }
  if (info->domain == ParamDomain::GroupItself) {
    if (!contains(g, a, tol) || !contains(g, b, tol)) {
      fail(ErrorCode::InadmissibleParameters,
           "parameters must lie in " + g.name());
    }
  } else {
    const int pa = detail::orthogonal_parity(a, tol);
    const int pb = detail::orthogonal_parity(b, tol);
    if (pa != pb) {
      fail(ErrorCode::InadmissibleParameters,
           "parameters must share the O(n) parity");
    }
  }
  return IsometryMap{g, family, std::move(a), std::move(b)};
}

}  // namespace liegeom
