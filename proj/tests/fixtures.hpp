#pragma once
// Small hand-built complexes shared by the unit tests and the acceptance binary.
#include <string>
#include <vector>

#include "polylc/complex.hpp"

namespace fixtures {

using namespace polylc;

inline BuildCell make_cell(const std::string& id, const std::vector<std::vector<long>>& pts,
                           const std::vector<long>& labels, long scale = 1) {
  std::vector<Point> p;
  for (auto& v : pts) p.push_back(make_point(v));
  for (auto& q : p)
    for (auto& x : q) x /= scale;
  BuildCell c;
  c.id = id;
  c.poly = LatticePolytope::hull(p, scale);
  for (auto& v : c.poly.vertices()) {
    std::size_t j = std::find(p.begin(), p.end(), v) - p.begin();
    c.labels.push_back(labels.at(j));
  }
  return c;
}

// Closed surface from polygons given by cyclic label lists; triangles become the
// unimodular triangle, quadrilaterals the unit square.
inline PolyComplex polygon_surface(const std::vector<std::vector<long>>& faces,
                                   const std::vector<std::vector<std::vector<long>>>& shapes = {}) {
  std::vector<BuildCell> cells;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    std::vector<std::vector<long>> pts;
    if (i < shapes.size() && !shapes[i].empty())
      pts = shapes[i];
    else if (faces[i].size() == 3)
      pts = {{0, 0}, {1, 0}, {0, 1}};
    else
      pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    cells.push_back(make_cell("F" + std::to_string(i), pts, faces[i]));
  }
  return complex_from_cells(cells, 2);
}

inline PolyComplex simplex_boundary() { return polygon_surface({{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}}); }

inline PolyComplex octahedron() {
  // 0,1 poles; 2..5 equator
  return polygon_surface({{0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 2}, {1, 3, 2}, {1, 4, 3}, {1, 5, 4}, {1, 2, 5}});
}

inline std::vector<std::vector<long>> cube_faces() {
  // vertex label = 4x + 2y + z
  return {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
}

inline PolyComplex cube_surface() { return polygon_surface(cube_faces()); }

// cube surface plus a square hanging off the edge {0,1}
inline PolyComplex cube_with_dangling_square() {
  auto f = cube_faces();
  f.push_back({0, 1, 9, 8});
  return polygon_surface(f);
}

// boundary of the 3-simplex with one face replaced by a triangle of area 3 with primitive edges
inline PolyComplex simplex_boundary_bad_corner() {
  return polygon_surface({{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}}, {{}, {}, {}, {{0, 0}, {2, 1}, {1, 2}}});
}

// k x k torus of unit squares; cells keyed by their lower-left corner mod k
inline PolyComplex torus_grid(long k) {
  std::vector<BuildCell> cells;
  for (long i = 0; i < k; ++i)
    for (long j = 0; j < k; ++j) {
      auto lab = [&](long x, long y) { return ((x % k) * k + (y % k)); };
      cells.push_back(make_cell("Q" + std::to_string(i) + "_" + std::to_string(j),
                                {{i, j}, {i + 1, j}, {i + 1, j + 1}, {i, j + 1}},
                                {lab(i, j), lab(i + 1, j), lab(i + 1, j + 1), lab(i, j + 1)}));
    }
  auto key = [k](const std::vector<long>&, const std::vector<Point>& pts) {
    Point lo = *std::min_element(pts.begin(), pts.end());
    std::string s;
    for (auto& x : lo) {
      long v = x.get_num().get_si();
      s += std::to_string(((v % k) + k) % k) + ",";
    }
    std::vector<Point> rel;
    for (auto& p : pts) rel.push_back(p - lo);
    std::sort(rel.begin(), rel.end());
    for (auto& r : rel) s += to_string(r);
    return s;
  };
  return complex_from_cells(cells, 2, key);
}

}  // namespace fixtures

namespace fixtures {

// boundary of the (n+1)-simplex as n unimodular simplices
inline PolyComplex simplex_sphere(int n) {
  std::vector<BuildCell> cells;
  for (int omit = 0; omit <= n + 1; ++omit) {
    std::vector<std::vector<long>> pts;
    std::vector<long> labels;
    std::vector<long> origin(n, 0);
    pts.push_back(origin);
    for (int i = 0; i < n; ++i) {
      std::vector<long> e(n, 0);
      e[i] = 1;
      pts.push_back(e);
    }
    for (int l = 0; l <= n + 1; ++l)
      if (l != omit) labels.push_back(l);
    cells.push_back(make_cell("S" + std::to_string(omit), pts, labels));
  }
  return complex_from_cells(cells, n);
}

}  // namespace fixtures
