#include "polylc/complex_io.hpp"

#include <fstream>
#include <sstream>

#include "polylc/errors.hpp"

namespace polylc {

json point_to_json(const Point& p) {
  json a = json::array();
  for (auto& x : p) a.push_back(to_string(x));
  return a;
}

Point point_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "point must be an array");
  Point p;
  for (auto& x : j) {
    if (x.is_string())
      p.push_back(parse_rational(x.get<std::string>()));
    else if (x.is_number_integer())
      p.push_back(Rational(x.get<long>()));
    else
      throw Error(ErrorCode::ParseError, "coordinate must be a string or integer");
  }
  return p;
}

json complex_to_json(const PolyComplex& C) {
  json j;
  j["version"] = 1;
  j["dim"] = C.n;
  json cells = json::array();
  for (auto& c : C.cells()) {
    json cj;
    cj["id"] = c.id;
    cj["ambient"] = c.poly->ambient_dim();
    cj["scale"] = to_string(c.poly->scale());
    json vs = json::array();
    for (auto& v : c.poly->vertices()) vs.push_back(point_to_json(v));
    cj["vertices"] = vs;
    cells.push_back(cj);
  }
  j["cells"] = cells;
  json ms = json::array();
  for (auto& m : C.morphisms()) {
    json mj;
    mj["from"] = C.cell(m.from).id;
    mj["to"] = C.cell(m.to).id;
    json A = json::array();
    for (auto& row : m.map->A) A.push_back(point_to_json(row));
    mj["matrix"] = A;
    mj["offset"] = point_to_json(m.map->b);
    ms.push_back(mj);
  }
  j["morphisms"] = ms;
  return j;
}

PolyComplex complex_from_json(const json& j) {
  try {
    PolyComplex C;
    C.n = j.at("dim").get<int>();
    std::map<std::string, PolytopePtr> polys;
    for (auto& cj : j.at("cells")) {
      std::string id = cj.at("id").is_string() ? cj.at("id").get<std::string>() : cj.at("id").dump();
      Integer s = 1;
      if (cj.contains("scale")) {
        auto& sj = cj.at("scale");
        s = sj.is_string() ? Integer(sj.get<std::string>()) : Integer(sj.get<long>());
      }
      std::vector<Point> verts;
      for (auto& v : cj.at("vertices")) verts.push_back(point_from_json(v));
      std::string key = to_string(s);
      for (auto& v : verts) key += "|" + to_string(v);
      auto it = polys.find(key);
      if (it == polys.end())
        it = polys.emplace(key, std::make_shared<const LatticePolytope>(LatticePolytope::hull(verts, s))).first;
      if (cj.contains("ambient") && cj.at("ambient").get<std::size_t>() != it->second->ambient_dim() && !verts.empty())
        throw Error(ErrorCode::ParseError, "cell " + id + ": ambient does not match vertices");
      C.add_cell(id, it->second);
    }
    std::map<std::string, MapPtr> maps;
    for (auto& mj : j.at("morphisms")) {
      auto idstr = [](const json& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
      int from = C.find(idstr(mj.at("from"))), to = C.find(idstr(mj.at("to")));
      if (from < 0 || to < 0) throw Error(ErrorCode::ParseError, "morphism references unknown cell");
      AffineMap m;
      for (auto& row : mj.at("matrix")) m.A.push_back(point_from_json(row));
      m.b = point_from_json(mj.at("offset"));
      if (m.A.size() != m.b.size()) throw Error(ErrorCode::ParseError, "matrix/offset size mismatch");
      std::string key = mj.at("matrix").dump() + mj.at("offset").dump();
      auto it = maps.find(key);
      if (it == maps.end()) it = maps.emplace(key, std::make_shared<const AffineMap>(m)).first;
      C.add_morphism(from, to, it->second);
    }
    return C;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("complex JSON: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    throw Error(ErrorCode::ParseError, std::string("complex JSON: ") + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << j.dump() << "\n";
}

}  // namespace polylc
