#pragma once

// JSON forms of the exchange types. Layouts:
//   Polyhedron   {"dim":n,"vertices":[[..]],"rays":[[..]],
//                 "halfspaces":[{"normal":[..],"offset":o}]}
//   MaxAffine    {"dim":n,"pieces":[{"slope":[..],"intercept":b}]}
//   CellPA       {"dim":n,"cells":[{"poly":{..},"piece":{..}}]}
//   TestFunction {"dim":n,"poly":{"ex<,ey>":coeff},"rho":r,"k":k}
//   Window       {"B":{..},"C":{..}}

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "epival/convexfn.hpp"
#include "epival/error.hpp"
#include "epival/harness.hpp"
#include "epival/hessian.hpp"
#include "epival/testfn.hpp"

namespace epival {

using json = nlohmann::json;

inline json vec_to_json(const Vec& v, int dim) {
  json a = json::array();
  a.push_back(v.x);
  if (dim == 2) a.push_back(v.y);
  return a;
}

inline Vec vec_from_json(const json& a, int dim) {
  require(a.is_array() && static_cast<int>(a.size()) == dim, errc::invalid_argument,
          "vector entry does not match dim");
  Vec v{a[0].get<double>(), dim == 2 ? a[1].get<double>() : 0.0};
  return v;
}

inline json to_json(const Polyhedron& p) {
  json j;
  j["dim"] = p.dim;
  j["vertices"] = json::array();
  for (const Vec& v : p.vertices) j["vertices"].push_back(vec_to_json(v, p.dim));
  j["rays"] = json::array();
  for (const Vec& r : p.rays) j["rays"].push_back(vec_to_json(r, p.dim));
  j["halfspaces"] = json::array();
  for (const Halfspace& h : p.halfspaces) {
    j["halfspaces"].push_back({{"normal", vec_to_json(h.normal, p.dim)}, {"offset", h.offset}});
  }
  return j;
}

inline Polyhedron polyhedron_from_json(const json& j) {
  require(j.contains("dim"), errc::invalid_argument, "polyhedron: missing dim");
  int dim = j["dim"].get<int>();
  require(dim == 1 || dim == 2, errc::dimension_unsupported, "polyhedron: dim must be 1 or 2");
  std::vector<Vec> verts, rays;
  if (j.contains("vertices")) {
    for (const json& v : j["vertices"]) verts.push_back(vec_from_json(v, dim));
  }
  if (j.contains("rays")) {
    for (const json& r : j["rays"]) rays.push_back(vec_from_json(r, dim));
  }
  if (!verts.empty()) return Polyhedron::from_vrep(dim, verts, rays);
  require(j.contains("halfspaces") && !j["halfspaces"].empty(), errc::invalid_argument,
          "polyhedron: need vertices or halfspaces");
  std::vector<Halfspace> hs;
  for (const json& h : j["halfspaces"]) {
    hs.push_back({vec_from_json(h.at("normal"), dim), h.at("offset").get<double>()});
  }
  return Polyhedron::from_halfspaces(dim, hs);
}

inline json to_json(const Affine& w, int dim) {
  return {{"slope", vec_to_json(w.slope, dim)}, {"intercept", w.intercept}};
}

inline Affine affine_from_json(const json& j, int dim) {
  return {vec_from_json(j.at("slope"), dim), j.at("intercept").get<double>()};
}

inline json to_json(const MaxAffine& v) {
  json j;
  j["dim"] = v.dim;
  j["pieces"] = json::array();
  for (const Affine& w : v.pieces) j["pieces"].push_back(to_json(w, v.dim));
  return j;
}

inline MaxAffine max_affine_from_json(const json& j) {
  int dim = j.at("dim").get<int>();
  require(dim == 1 || dim == 2, errc::dimension_unsupported, "max-affine: dim must be 1 or 2");
  std::vector<Affine> pieces;
  for (const json& p : j.at("pieces")) pieces.push_back(affine_from_json(p, dim));
  require(!pieces.empty(), errc::invalid_argument, "max-affine: no pieces");
  return max_affine(dim, std::move(pieces));
}

inline json to_json(const CellPA& u) {
  json j;
  j["dim"] = u.dim;
  j["cells"] = json::array();
  for (std::size_t i = 0; i < u.sub.cells.size(); ++i) {
    j["cells"].push_back(
        {{"poly", to_json(u.sub.cells[i].poly)}, {"piece", to_json(u.pieces[i], u.dim)}});
  }
  return j;
}

inline CellPA cell_pa_from_json(const json& j) {
  int dim = j.at("dim").get<int>();
  require(dim == 1 || dim == 2, errc::dimension_unsupported, "cell-pa: dim must be 1 or 2");
  std::vector<std::pair<Polyhedron, Affine>> parts;
  for (const json& c : j.at("cells")) {
    parts.push_back({polyhedron_from_json(c.at("poly")), affine_from_json(c.at("piece"), dim)});
  }
  return make_cell_pa(dim, std::move(parts));  // validates convexity
}

inline json to_json(const TestFunction& z) {
  require(z.has_exact_support(), errc::invalid_argument,
          "test function with raw callable has no JSON form");
  json poly = json::object();
  for (const Monomial& m : z.poly) {
    std::ostringstream key;
    key << m.ex;
    if (z.dim == 2) key << "," << m.ey;
    poly[key.str()] = m.coeff;
  }
  return {{"dim", z.dim}, {"poly", poly}, {"rho", z.rho}, {"k", z.smoothness}};
}

inline TestFunction test_function_from_json(const json& j) {
  int dim = j.at("dim").get<int>();
  require(dim == 1 || dim == 2, errc::dimension_unsupported, "test function: dim must be 1 or 2");
  std::vector<Monomial> terms;
  for (auto it = j.at("poly").begin(); it != j.at("poly").end(); ++it) {
    Monomial m;
    std::istringstream key(it.key());
    char comma = 0;
    key >> m.ex;
    if (dim == 2) {
      key >> comma >> m.ey;
      require(comma == ',', errc::invalid_argument, "test function: bad monomial key");
    }
    m.coeff = it.value().get<double>();
    terms.push_back(m);
  }
  return TestFunction::bump(dim, j.at("rho").get<double>(), j.at("k").get<int>(),
                            std::move(terms));
}

inline json to_json(const Window& w) { return {{"B", to_json(w.b)}, {"C", to_json(w.c)}}; }

inline Window window_from_json(const json& j) {
  return {polyhedron_from_json(j.at("B")), polyhedron_from_json(j.at("C"))};
}

inline json to_json(const SuiteReport& r) {
  json failures = json::array();
  for (const SuiteFailure& f : r.failures) {
    failures.push_back(
        {{"case", f.case_index}, {"seed", f.seed}, {"defect", f.defect}});
  }
  return {{"suite", r.suite},       {"cases", r.cases},       {"max_defect", r.max_defect},
          {"tolerance", r.tolerance}, {"failures", failures}, {"passed", r.passed()}};
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), errc::io_failure, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(errc::io_failure, "parse error in " + path + ": " + e.what());
  }
  return j;
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  require(out.good(), errc::io_failure, "cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

}  // namespace epival
