#include <algorithm>
#include <map>
#include <set>

#include "polylc/errors.hpp"
#include "polylc/resolve.hpp"

namespace polylc {

namespace {

using EdgeMap = std::map<std::pair<int, int>, std::vector<int>>;  // sorted edge -> triangles

EdgeMap edge_triangles(const SurfaceTriangulation& T) {
  EdgeMap m;
  for (std::size_t t = 0; t < T.triangles.size(); ++t) {
    const auto& f = T.triangles[t];
    for (int i = 0; i < 3; ++i) {
      int a = f[i], b = f[(i + 1) % 3];
      m[{std::min(a, b), std::max(a, b)}].push_back(static_cast<int>(t));
    }
  }
  return m;
}

// neighbours of v in cyclic link order
std::vector<int> link_cycle(const SurfaceTriangulation& T, int v) {
  std::map<int, std::vector<int>> adj;
  for (auto& f : T.triangles) {
    int i = static_cast<int>(std::find(f.begin(), f.end(), v) - f.begin());
    if (i == 3) continue;
    int a = f[(i + 1) % 3], b = f[(i + 2) % 3];
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  if (adj.empty()) return {};
  for (auto& [w, n] : adj)
    if (n.size() != 2) return {};
  std::vector<int> cyc{adj.begin()->first};
  int prev = -1;
  while (true) {
    int cur = cyc.back();
    int nxt = adj[cur][0] != prev ? adj[cur][0] : adj[cur][1];
    if (nxt == cyc.front()) break;
    if (std::find(cyc.begin(), cyc.end(), nxt) != cyc.end()) return {};
    prev = cur;
    cyc.push_back(nxt);
  }
  if (cyc.size() != adj.size()) return {};
  return cyc;
}

}  // namespace

void check_closed_surface(const SurfaceTriangulation& T) {
  auto bad = [](const std::string& w) { return Error(ErrorCode::InvalidArgument, "surface: " + w); };
  if (T.vertices <= 0 || T.triangles.empty()) throw bad("empty triangulation");
  std::set<std::array<int, 3>> seen;
  for (auto f : T.triangles) {
    for (int x : f)
      if (x < 0 || x >= T.vertices) throw bad("vertex index out of range");
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) throw bad("degenerate triangle");
    std::sort(f.begin(), f.end());
    if (!seen.insert(f).second) throw bad("repeated triangle");
  }
  for (auto& [e, ts] : edge_triangles(T))
    if (ts.size() != 2)
      throw bad("edge " + std::to_string(e.first) + "-" + std::to_string(e.second) + " lies in " +
                std::to_string(ts.size()) + " triangles");
  for (int v = 0; v < T.vertices; ++v)
    if (link_cycle(T, v).empty()) throw bad("link of vertex " + std::to_string(v) + " is not a single cycle");
}

SurfaceTriangulation tetrahedron_surface() { return {4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}}; }

SurfaceTriangulation octahedron_surface() {
  SurfaceTriangulation T{6, {}};
  for (int x : {0, 1})
    for (int y : {2, 3})
      for (int z : {4, 5}) T.triangles.push_back({x, y, z});
  return T;
}

SurfaceTriangulation torus_surface(int k) {
  if (k < 3) throw Error(ErrorCode::InvalidArgument, "torus grid needs k >= 3");
  SurfaceTriangulation T{k * k, {}};
  auto id = [k](int i, int j) { return ((i + k) % k) * k + (j + k) % k; };
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      T.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      T.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return T;
}

SurfaceTriangulation genus2_surface() {
  const int k = 7, n = k * k;
  auto A = torus_surface(k);
  const std::array<int, 3> cut = A.triangles.front();  // (0,0),(1,0),(1,1)
  SurfaceTriangulation T{2 * n - 3, {}};
  // second copy: the cut triangle's vertices are shared, the rest shifted
  std::map<int, int> second;
  int next = n;
  for (int v = 0; v < n; ++v)
    second[v] = std::find(cut.begin(), cut.end(), v) != cut.end() ? v : next++;
  for (std::size_t t = 1; t < A.triangles.size(); ++t) T.triangles.push_back(A.triangles[t]);
  for (std::size_t t = 1; t < A.triangles.size(); ++t) {
    auto f = A.triangles[t];
    T.triangles.push_back({second[f[0]], second[f[2]], second[f[1]]});  // opposite orientation
  }
  return T;
}

std::vector<int> vertex_degrees(const SurfaceTriangulation& T) {
  std::vector<int> d(T.vertices, 0);
  for (auto& f : T.triangles)
    for (int x : f) ++d.at(x);
  return d;
}

nlohmann::json surface_to_json(const SurfaceTriangulation& T) {
  nlohmann::json j;
  j["vertices"] = T.vertices;
  nlohmann::json ts = nlohmann::json::array();
  for (auto& f : T.triangles) ts.push_back({f[0], f[1], f[2]});
  j["triangles"] = ts;
  nlohmann::json gl = nlohmann::json::array();
  for (auto& [e, t] : edge_triangles(T)) {
    nlohmann::json g = {e.first, e.second};
    for (int x : t) g.push_back(x);
    gl.push_back(g);
  }
  j["gluings"] = gl;
  return j;
}

SurfaceTriangulation surface_from_json(const nlohmann::json& j) {
  SurfaceTriangulation T;
  try {
    T.vertices = j.at("vertices").get<int>();
    for (auto& f : j.at("triangles")) {
      if (f.size() != 3) throw Error(ErrorCode::ParseError, "triangle needs three vertices");
      T.triangles.push_back({f.at(0).get<int>(), f.at(1).get<int>(), f.at(2).get<int>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("surface: ") + e.what());
  }
  check_closed_surface(T);
  if (j.contains("gluings")) {
    // optional, must agree with the triangles: [a, b, t1, t2]
    auto em = edge_triangles(T);
    std::size_t count = 0;
    try {
      for (auto& g : j.at("gluings")) {
        int a = g.at(0).get<int>(), b = g.at(1).get<int>();
        std::vector<int> ts{g.at(2).get<int>(), g.at(3).get<int>()};
        std::sort(ts.begin(), ts.end());
        auto it = em.find({std::min(a, b), std::max(a, b)});
        if (it == em.end() || it->second != ts)
          throw Error(ErrorCode::InvalidArgument, "gluing of edge " + std::to_string(a) + "-" + std::to_string(b) +
                                                      " disagrees with the triangles");
        ++count;
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("surface gluings: ") + e.what());
    }
    if (count != em.size()) throw Error(ErrorCode::InvalidArgument, "gluings do not list every edge once");
  }
  return T;
}

namespace {

const Point kCorner[3] = {make_point({0, 0}), make_point({0, 3}), make_point({3, 0})};

LabelledComplex surface_labels(const SurfaceTriangulation& T) {
  LabelledComplex L;
  L.n = 2;
  for (int v = 0; v < T.vertices; ++v) L.vertex_names.push_back("v" + std::to_string(v));
  for (auto& [e, ts] : edge_triangles(T))
    L.face_names.emplace(std::vector<int>{e.first, e.second}, "e" + std::to_string(e.first) + "_" + std::to_string(e.second));
  L.fresh_prefix = "s";
  return L;
}

}  // namespace

PolyComplex surface_complex(const SurfaceTriangulation& T) {
  check_closed_surface(T);
  auto L = surface_labels(T);
  auto tri = std::make_shared<const LatticePolytope>(LatticePolytope::hull({kCorner[0], kCorner[1], kCorner[2]}));
  for (std::size_t t = 0; t < T.triangles.size(); ++t) {
    std::vector<int> lab(3);
    for (int i = 0; i < 3; ++i) lab[tri->find_vertex(kCorner[i])] = T.triangles[t][i];
    L.cells.push_back(LabelledCell{"t" + std::to_string(t), tri, lab});
  }
  return assemble(L);
}

PolyComplex smooth_surface_complex(const SurfaceTriangulation& T) {
  check_closed_surface(T);
  auto deg = vertex_degrees(T);
  std::vector<char> blown(T.vertices, 0);
  for (int v = 0; v < T.vertices; ++v) {
    if (deg[v] < 4) continue;
    if (!unit_edge_polygon(deg[v]))
      throw Error(ErrorCode::UnsupportedDegree, "vertex " + std::to_string(v) + " has degree " + std::to_string(deg[v]) +
                                                    "; smooth unit-edge polygons are known for degrees " + [] {
                                                      std::string s;
                                                      for (int d : unit_edge_polygon_degrees()) s += (s.empty() ? "" : ",") + std::to_string(d);
                                                      return s;
                                                    }());
    blown[v] = 1;
  }
  auto L = surface_labels(T);
  std::map<std::pair<int, int>, int> cut_label;  // (v, w): point one step from v towards w
  auto cut = [&](int v, int w) {
    auto [it, fresh] = cut_label.emplace(std::make_pair(v, w), static_cast<int>(L.vertex_names.size()));
    if (fresh) L.vertex_names.push_back("c" + std::to_string(v) + ">" + std::to_string(w));
    return it->second;
  };
  std::map<int, PolytopePtr> shapes;  // by corner mask
  for (std::size_t t = 0; t < T.triangles.size(); ++t) {
    const auto& f = T.triangles[t];
    int mask = 0;
    for (int i = 0; i < 3; ++i)
      if (blown[f[i]]) mask |= 1 << i;
    std::vector<Point> pts;
    std::vector<std::pair<int, int>> who;  // (corner, -1) or (corner, towards)
    for (int i = 0; i < 3; ++i) {
      if (!(mask >> i & 1)) {
        pts.push_back(kCorner[i]);
        who.push_back({i, -1});
        continue;
      }
      for (int j : {(i + 1) % 3, (i + 2) % 3}) {
        pts.push_back(kCorner[i] + Rational(1, 3) * (kCorner[j] - kCorner[i]));
        who.push_back({i, j});
      }
    }
    auto& S = shapes[mask];
    if (!S) S = std::make_shared<const LatticePolytope>(LatticePolytope::hull(pts));
    std::vector<int> lab(S->vertices().size(), -1);
    for (std::size_t k = 0; k < pts.size(); ++k) {
      auto [i, j] = who[k];
      lab[S->find_vertex(pts[k])] = j < 0 ? f[i] : cut(f[i], f[j]);
    }
    L.cells.push_back(LabelledCell{"t" + std::to_string(t), S, lab});
  }
  for (int v = 0; v < T.vertices; ++v) {
    if (!blown[v]) continue;
    auto P = std::make_shared<const LatticePolytope>(*unit_edge_polygon(deg[v]));
    auto cyc = link_cycle(T, v);
    std::vector<int> pv{0};
    int prev = -1;
    while (pv.size() < cyc.size()) {
      int cur = pv.back(), nxt = -1;
      for (int w : P->neighbors()[cur])
        if (w != prev && std::find(pv.begin(), pv.end(), w) == pv.end()) nxt = w;
      prev = cur;
      pv.push_back(nxt);
    }
    std::vector<int> lab(cyc.size());
    for (std::size_t k = 0; k < cyc.size(); ++k) lab[pv[k]] = cut(v, cyc[k]);
    L.cells.push_back(LabelledCell{"P:v" + std::to_string(v), P, lab});
  }
  return assemble(L);
}

}  // namespace polylc
