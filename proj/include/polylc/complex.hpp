#pragma once
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "polylc/polytope.hpp"

namespace polylc {

struct AffineMap {
  RatMatrix A;  // rows = target ambient, cols = source ambient
  Point b;

  Point apply(const Point& x) const;
  bool operator==(const AffineMap& o) const { return A == o.A && b == o.b; }
  static AffineMap identity(std::size_t d);
};
using MapPtr = std::shared_ptr<const AffineMap>;

AffineMap compose(const AffineMap& outer, const AffineMap& inner);
// The affine map sending each src[i] to dst[i], defined on the affine span of src
// (extended by zero on a complement); nullopt if inconsistent.
std::optional<AffineMap> affine_from_points(const std::vector<Point>& src, const std::vector<Point>& dst);

struct Cell {
  std::string id;
  PolytopePtr poly;
  int dim() const { return poly->dim(); }
};

// A generating morphism: `from` is a face of `to`.
struct Morphism {
  int from = -1;
  int to = -1;
  MapPtr map;
};

// Vertex correspondence of a morphism: source vertex index -> target vertex index.
// Empty when some source vertex does not land on a target vertex.
using VertexMap = std::shared_ptr<const std::vector<int>>;

class PolyComplex {
 public:
  int n = 0;

  int add_cell(const std::string& id, PolytopePtr p);  // throws InvalidArgument on duplicate id
  int add_morphism(int from, int to, MapPtr m);

  std::size_t size() const { return cells_.size(); }
  const std::vector<Cell>& cells() const { return cells_; }
  const Cell& cell(int i) const { return cells_[i]; }
  const std::vector<Morphism>& morphisms() const { return morphs_; }
  int find(const std::string& id) const;
  const std::vector<int>& in_morphisms(int c) const { return in_[c]; }
  const std::vector<int>& out_morphisms(int c) const { return out_[c]; }
  const std::vector<int>& vertex_map(int k) const { return *vmaps_[k]; }

  bool is_maximal(int c) const { return out_[c].empty(); }
  std::vector<int> maximal_cells() const;
  std::vector<int> cells_of_dim(int d) const;
  std::vector<int> up_set(int c) const;  // includes c; sorted
  std::vector<int> maximal_cells_containing(int c) const;  // sorted
  // Cells below c with their vertex sets in c's polytope (c itself included).
  std::vector<std::pair<int, std::vector<int>>> face_cells(int c) const;

 private:
  std::vector<Cell> cells_;
  std::vector<Morphism> morphs_;
  std::vector<VertexMap> vmaps_;
  std::vector<std::vector<int>> in_, out_;
  std::unordered_map<std::string, int> index_;
  struct TripleHash {
    std::size_t operator()(const std::tuple<const void*, const void*, const void*>& t) const;
  };
  std::unordered_map<std::tuple<const void*, const void*, const void*>, VertexMap, TripleHash> vmap_cache_;
};

struct Violation {
  std::string kind;  // FaceClosure, Uniqueness, Composition, FaceInclusion, InvalidReference
  std::string witness;
};

struct ValidationReport {
  bool pass = true;
  std::vector<Violation> violations;
  std::size_t max_listed = 50;
  void add(const std::string& kind, const std::string& witness);
};

ValidationReport validate(const PolyComplex& C);

struct NerveComplex {
  int cell = -1;
  std::vector<int> vertices;  // maximal cells containing the cell
  FacePoset poset;
  int dim = -1;
  std::string shape;  // point, segment, triangle, simplex3, simplex<k>, quadrilateral, triangular_prism, square_pyramid, other
  bool is_simplex() const;
};

NerveComplex nerve(const PolyComplex& C, int cell);
NerveComplex nerve(const PolyComplex& C, const std::string& id);
// Name of a reference shape the poset is isomorphic to, or "other".
std::string identify_shape(const FacePoset& P, int dim);
bool is_simplex_poset(const FacePoset& P, int dim);
// P is a pyramid with some apex over a base isomorphic to Q
bool is_pyramid_over(const FacePoset& P, const FacePoset& Q);

struct SmoothWitness {
  std::string cell;
  std::string kind;  // CombinatorialSmoothness, LatticeSmoothness, Purity, PseudoManifold
  std::string detail;
  std::string vertex;  // for lattice failures
  Integer det = 0;
};

struct CertificationReport {
  bool pass = true;
  std::string failed_condition;  // "", "a", "b", "c"
  std::vector<SmoothWitness> witnesses;
  std::vector<std::pair<std::string, FacetData>> facet_data;  // snc-CY certificate
  std::size_t cells_checked = 0;
};

// Throws InvalidComplex when validate fails (skip with check_valid = false).
CertificationReport certify_smooth(const PolyComplex& C, bool check_valid = true);
CertificationReport certify_snc_cy(const PolyComplex& C, bool check_valid = true);

struct CWData {
  struct Edge {
    int a = -1, b = -1;
    std::string id;
  };
  std::vector<std::string> vertex_ids;
  std::vector<Edge> edges;
  std::vector<std::string> face_ids;
  std::vector<std::vector<std::pair<int, int>>> faces;  // boundary cycle: (edge index, +1/-1)
  std::vector<std::size_t> counts;  // per dimension

  long euler() const;
};

CWData amalgamate(const PolyComplex& C);

PolyComplex scale_complex(const PolyComplex& C, const Integer& m);

// Keep cells by mask; morphisms between kept cells kept.
PolyComplex subcomplex(const PolyComplex& C, const std::vector<char>& keep);

}  // namespace polylc

namespace polylc {

// Affine lattice chart of a polytope's span: x = origin + (basis^T c) / scale.
struct Chart {
  Point origin;
  IntMatrix basis;  // HNF rows
  Integer scale = 1;
  std::vector<Rational> coords(const Point& x) const;
  Point point(const std::vector<Rational>& c) const;
};
Chart lattice_chart(const LatticePolytope& P, const Point& origin);
// P written in the chart of its own span with origin at its lexicographically least vertex.
LatticePolytope intrinsic(const LatticePolytope& P, Chart* chart = nullptr);

// the containing maximal cells of every cell, computed top-down in one pass
std::vector<std::vector<int>> containing_maximal_all(const PolyComplex& C);

}  // namespace polylc

#include <functional>

namespace polylc {

// Building complexes from maximal cells. Faces are identified across cells by a
// key computed from their vertex labels and (global) points; the default key is
// the sorted label list. Every face becomes a cell in its own lattice chart and
// every facet inclusion a generating morphism.
struct BuildCell {
  std::string id;
  LatticePolytope poly;
  std::vector<long> labels;  // one per polytope vertex
};
using FaceKeyFn = std::function<std::string(const std::vector<long>& sorted_labels, const std::vector<Point>& pts)>;

PolyComplex complex_from_cells(const std::vector<BuildCell>& maximal, int n, const FaceKeyFn& key = nullptr);

}  // namespace polylc
