#pragma once

// JSON encodings. Matrices use separate row-major "re"/"im" arrays.

#include <rankrange/decomposition.hpp>
#include <rankrange/error.hpp>
#include <rankrange/region.hpp>
#include <rankrange/spectrum.hpp>

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace rankrange::io {

using Json = nlohmann::json;

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << text;
}

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorCode::ParseError, "complex value must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Json matrix_to_json(const Matrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json rr = Json::array(), ri = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ri.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return Json{{"n", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline Matrix matrix_from_json(const Json& j) {
  try {
    const auto& re = j.at("re");
    const Json im = j.contains("im") ? j.at("im") : Json();
    const auto n = static_cast<Eigen::Index>(re.size());
    if (j.contains("n") && j.at("n").get<Eigen::Index>() != n)
      throw Error(ErrorCode::ShapeMismatch, "\"n\" disagrees with the row count");
    Matrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      if (re[r].size() != static_cast<std::size_t>(n) ||
          (!im.is_null() && im.at(r).size() != static_cast<std::size_t>(n)))
        throw Error(ErrorCode::ShapeMismatch, "matrix is not square");
      for (Eigen::Index c = 0; c < n; ++c)
        m(r, c) = Complex(re[r][c].get<double>(), im.is_null() ? 0.0 : im[r][c].get<double>());
    }
    return m;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("matrix JSON: ") + e.what());
  }
}

/// Accepts either a spectrum {"phases": [...]} or a matrix {"n", "re", "im"}.
inline EigenSystem eigensystem_from_json(const Json& j, double tol = kDefaultUnitarityTol) {
  if (j.contains("phases")) {
    try {
      const auto phases = j.at("phases").get<std::vector<double>>();
      return ingest_spectrum(std::span<const double>(phases));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("spectrum JSON: ") + e.what());
    }
  }
  if (j.contains("re")) return ingest_matrix(matrix_from_json(j), tol);
  throw Error(ErrorCode::ParseError, "expected {\"phases\": ...} or {\"n\", \"re\", \"im\"}");
}

inline Json spectrum_to_json(const EigenSystem& es) {
  return Json{{"phases", es.phases()}};
}

inline const char* kind_name(ChordKind k) {
  switch (k) {
    case ChordKind::HalfPlane: return "halfplane";
    case ChordKind::Point: return "point";
    case ChordKind::Vacuous: return "vacuous";
  }
  return "?";
}

inline Json region_to_json(const OmegaRegion& region) {
  Json cs = Json::array();
  for (const auto& c : region.constraints())
    cs.push_back({{"i", c.start},
                  {"a", complex_to_json(c.a)},
                  {"b", complex_to_json(c.b)},
                  {"sign", c.sign},
                  {"degenerate", c.degenerate()},
                  {"kind", kind_name(c.kind)}});
  return Json{{"k", region.k()}, {"constraints", std::move(cs)}};
}

inline Json residuals_to_json(const ResidualReport& r) {
  return Json{{"hermitian", r.hermitian},
              {"idempotent", r.idempotent},
              {"trace", r.trace},
              {"compression", r.compression},
              {"pass", r.pass}};
}

inline Json plan_to_json(const DecompositionPlan& p) {
  Json tri = Json::array();
  for (const auto& t : p.triangles) tri.push_back({t[0], t[1], t[2]});
  Json pairs = Json::array();
  for (const auto& q : p.pairings)
    pairs.push_back({{"triangles", {q.triangles[0], q.triangles[1]}}, {"shared", q.shared}});
  Json out{{"case", std::string(to_string(p.dimension_case))},
           {"triangles", std::move(tri)},
           {"pairings", std::move(pairs)},
           {"reflected", p.reflection_pivot.has_value()}};
  if (p.reflection_pivot) out["pivot"] = *p.reflection_pivot;
  if (!p.rank1_support.empty()) {
    Json sup = Json::array();
    for (const auto& [j, w] : p.rank1_support) sup.push_back({{"index", j}, {"weight", w}});
    out["support"] = std::move(sup);
  }
  return out;
}

inline Json projector_to_json(const Projector& p) {
  Json out = matrix_to_json(p.matrix);
  out["k"] = p.rank;
  out["lambda"] = complex_to_json(p.target);
  out["residuals"] = residuals_to_json(p.residuals);
  out["method"] = std::string(to_string(p.method));
  out["plan"] = plan_to_json(p.plan);
  return out;
}

struct ProjectorFile {
  Matrix matrix;
  int k = 0;
  Complex target;
};

inline ProjectorFile projector_from_json(const Json& j) {
  ProjectorFile out;
  out.matrix = matrix_from_json(j);
  try {
    out.k = j.at("k").get<int>();
    out.target = complex_from_json(j.at("lambda"));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("projector JSON: ") + e.what());
  }
  return out;
}

/// Pretty form with full double precision; stable across runs.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace rankrange::io
