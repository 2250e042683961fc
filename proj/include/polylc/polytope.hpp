#pragma once
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "polylc/linalg.hpp"
#include "polylc/rational.hpp"

namespace polylc {

struct Face {
  int dim = 0;
  std::vector<int> verts;  // sorted vertex indices

  bool operator==(const Face& o) const { return dim == o.dim && verts == o.verts; }
  bool operator<(const Face& o) const {
    return dim != o.dim ? dim < o.dim : verts < o.verts;
  }
};

// a·x >= b
struct Halfspace {
  std::vector<Rational> a;
  Rational b;
};

class LatticePolytope {
 public:
  LatticePolytope() = default;

  // Convex hull of the given lattice points; non-extreme points are dropped.
  static LatticePolytope hull(const std::vector<Point>& pts, const Integer& scale = 1);
  // Vertex list plus a face lattice known in advance (dual cells); faces are sorted.
  static LatticePolytope with_faces(std::vector<Point> verts, const Integer& scale, std::vector<Face> faces);

  std::size_t ambient_dim() const { return ambient_; }
  int dim() const { return dim_; }
  const Integer& scale() const { return scale_; }
  bool empty() const { return verts_.empty(); }
  const std::vector<Point>& vertices() const { return verts_; }
  const std::vector<Face>& faces() const { return faces_; }
  std::vector<int> faces_of_dim(int k) const;
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<std::vector<int>>& neighbors() const { return nbrs_; }
  int find_vertex(const Point& p) const;
  int find_face(const std::vector<int>& sorted_verts) const;
  std::vector<std::size_t> f_vector() const;  // counts for dims 0..dim-1
  LatticePolytope with_scale(const Integer& s) const;
  std::string describe() const;

  bool same_geometry(const LatticePolytope& o) const {
    return scale_ == o.scale_ && verts_ == o.verts_ && faces_ == o.faces_;
  }

 private:
  void finish();

  std::size_t ambient_ = 0;
  int dim_ = -1;
  Integer scale_ = 1;
  std::vector<Point> verts_;
  std::vector<Face> faces_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> nbrs_;
  std::unordered_map<std::vector<int>, int, VecHash<int>> face_index_;
};

using PolytopePtr = std::shared_ptr<const LatticePolytope>;

// Primitive integer steps (in units of the polytope's lattice) along the edges at vertex v.
std::vector<IntVec> primitive_edge_steps(const LatticePolytope& P, int v);
// Index of the sublattice generated by the edge steps at v inside the lattice of P's span;
// 0 when the vertex is not simple.
Integer vertex_cone_index(const LatticePolytope& P, int v);
bool smooth_at_vertex(const LatticePolytope& P, const Point& v);
bool smooth_at_vertex_index(const LatticePolytope& P, int v);
bool is_smooth(const LatticePolytope& P);

LatticePolytope truncate_halfspace(const LatticePolytope& P, const IntVec& u, const Rational& c);
LatticePolytope truncate(const LatticePolytope& P, const Halfspace& h);
LatticePolytope scale(const LatticePolytope& P, const Integer& m);
Point barycenter(const LatticePolytope& S);

struct FacetInequality {
  IntVec u;    // primitive inward normal
  Rational a;  // <m, u> >= -a
  bool operator==(const FacetInequality& o) const { return u == o.u && a == o.a; }
};
using FacetData = std::vector<FacetInequality>;

FacetData facet_presentation(const LatticePolytope& P);
std::vector<Point> vertices_from_facets(const FacetData& F, std::size_t d);

// Abstract face poset on vertex labels 0..nverts-1.
struct FacePoset {
  int nverts = 0;
  std::vector<Face> faces;  // nonempty faces including the top one
};
FacePoset face_poset(const LatticePolytope& P);
bool isomorphic(const FacePoset& a, const FacePoset& b);
bool isomorphic(const LatticePolytope& a, const LatticePolytope& b);

// Reference shapes
LatticePolytope truncated_octahedron();
LatticePolytope hexagonal_prism();
LatticePolytope simplex_polytope(int k);
LatticePolytope triangular_prism();
LatticePolytope quadrilateral_prism();
LatticePolytope square_polytope();
LatticePolytope associahedron3();

}  // namespace polylc
