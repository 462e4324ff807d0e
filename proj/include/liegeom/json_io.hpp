#pragma once

// Wire formats: the matrix JSON schema used by the CLI and the IsometryMap
// serialization built on top of it.

#include <string>

#include <json.hpp>

#include "liegeom/error.hpp"
#include "liegeom/groups.hpp"
#include "liegeom/isometry_types.hpp"

namespace liegeom {

using json = nlohmann::json;

/// {"rows": r, "cols": c, "real": bool, "entries": [[re, im], ...]} with
/// row-major entries. Printing then parsing reproduces the matrix bit for
/// bit for finite doubles.
inline json matrix_to_json(const Matrix& m) {
  json entries = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      entries.push_back({m(r, c).real(), m(r, c).imag()});
    }
  }
  return json{{"rows", m.rows()},
              {"cols", m.cols()},
              {"real", is_effectively_real(m)},
              {"entries", std::move(entries)}};
}

inline Matrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("entries")) {
    fail(ErrorCode::InvalidArgument, "matrix JSON needs rows/cols/entries");
  }
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  if (rows <= 0 || cols <= 0) {
    fail(ErrorCode::InvalidArgument, "matrix dimensions must be positive");
  }
  const json& entries = j.at("entries");
  if (!entries.is_array() ||
      static_cast<int>(entries.size()) != rows * cols) {
    fail(ErrorCode::InvalidArgument, "entry count does not match rows*cols");
  }
  Matrix m(rows, cols);
  int k = 0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c, ++k) {
      const json& e = entries.at(k);
      if (!e.is_array() || e.size() != 2 || !e.at(0).is_number() ||
          !e.at(1).is_number()) {
        fail(ErrorCode::InvalidArgument, "entries must be [re, im] pairs");
      }
      m(r, c) = cxd(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

/// Group descriptor strings of the form "SO:4", "SU:3", "U:2", "Sp:2".
inline GroupId parse_group_descriptor(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) {
    fail(ErrorCode::InvalidArgument,
         "group descriptor must look like SO:4 / SU:3 / U:2 / Sp:2");
  }
  const std::string fam = s.substr(0, colon);
  int n = 0;
  try {
    n = std::stoi(s.substr(colon + 1));
  } catch (const std::exception&) {
    fail(ErrorCode::InvalidArgument, "bad group size in descriptor: " + s);
  }
  if (fam == "SO") return so(n);
  if (fam == "SU") return su(n);
  if (fam == "U") return un(n);
  if (fam == "Sp") return sp(n);
  fail(ErrorCode::InvalidArgument, "unknown group family: " + fam);
}

inline json isometry_to_json(const IsometryMap& f) {
  return json{{"group", f.group.name()},
              {"family", family_name(f.family)},
              {"A", matrix_to_json(f.a)},
              {"B", matrix_to_json(f.b)}};
}

inline IsometryMap isometry_from_json(const json& j,
                                      const Tolerances& tol = {}) {
  if (!j.is_object() || !j.contains("group") || !j.contains("family") ||
      !j.contains("A") || !j.contains("B")) {
    fail(ErrorCode::InvalidArgument, "isometry JSON needs group/family/A/B");
  }
  const GroupId g = parse_group_descriptor(j.at("group").get<std::string>());
  const FamilyTag tag = parse_family(j.at("family").get<std::string>());
  return make_isometry(g, tag, matrix_from_json(j.at("A")),
                       matrix_from_json(j.at("B")), tol);
}

}  // namespace liegeom
