#pragma once
#include <array>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "polylc/complex.hpp"
#include "polylc/ingest.hpp"

namespace polylc {

// ---------------------------------------------------------------------------
// Working form: maximal cells in their own lattice coordinates, vertices
// carrying global labels. Blow-ups rewrite this form; assemble() rebuilds the
// face structure.

struct LabelledCell {
  std::string id;
  PolytopePtr poly;         // full-dimensional in its own chart
  std::vector<int> labels;  // global vertex label per polytope vertex
};

struct LabelledComplex {
  int n = 0;
  std::vector<std::string> vertex_names;  // per label
  std::vector<LabelledCell> cells;        // maximal cells
  // names for faces, keyed by sorted vertex labels (faces not listed get fresh names)
  std::unordered_map<std::vector<int>, std::string, VecHash<int>> face_names;
  std::string fresh_prefix = "n";
};

// Maximal cells of C written intrinsically; label i is the i-th 0-cell of C
// in index order. cell_labels (optional) receives the sorted labels of every cell of C.
LabelledComplex decompose(const PolyComplex& C, std::vector<std::vector<int>>* cell_labels = nullptr);
PolyComplex assemble(const LabelledComplex& L);

// Everything the planners need about one pre-complex.
struct BlowUpContext {
  const PolyComplex* C = nullptr;
  LabelledComplex L;
  std::vector<std::vector<int>> cell_labels;                 // per cell of C, sorted
  std::vector<int> label_of_cell;                            // 0-cell -> label, -1 otherwise
  std::vector<std::vector<std::pair<int, int>>> incidence;   // label -> (maximal cell in L, local vertex)
};
BlowUpContext make_context(const PolyComplex& C);

// ---------------------------------------------------------------------------
// Records

struct Truncation {
  std::string cell;  // maximal cell of the pre-complex
  Halfspace keep;    // a.x >= b in the cell's intrinsic coordinates, after scaling
};

// A vertex of the new cell: the cut point of this record on the edge from -> to
// (0-cell ids of the pre-complex; `from` is the removed end).
struct CutVertex {
  std::string from, to;
};

struct BlowUpRecord {
  std::string kind;    // vertex, edge, generic
  std::string target;  // blown-up cell of the pre-complex
  int batch = 0;
  Integer scale = 1;  // factor applied to the whole complex before the batch
  std::vector<Truncation> truncations;
  std::string new_cell;
  PolytopePtr new_poly;
  std::vector<CutVertex> new_vertices;  // one per new_poly vertex
};

// name of every cut point: (record index in batch, from id, to id) -> new 0-cell id
using CutNames = std::map<std::tuple<int, std::string, std::string>, std::string>;

// Applies one batch (all records share batch number and scale) to C.
// InvalidArgument when truncation regions of one cell overlap or miss the lattice.
PolyComplex apply_batch(const PolyComplex& C, const std::vector<BlowUpRecord>& batch, CutNames* names = nullptr);
PolyComplex apply_batch(const BlowUpContext& ctx, const std::vector<BlowUpRecord>& batch, CutNames* names = nullptr);
// true when the half-spaces cut S in pairwise disjoint corner regions through lattice points
bool truncations_disjoint(const LatticePolytope& S, const std::vector<Halfspace>& cuts);
bool batch_disjoint(const BlowUpContext& ctx, const std::vector<BlowUpRecord>& batch);
// Replays a record list batch by batch.
PolyComplex replay(const PolyComplex& C, const std::vector<BlowUpRecord>& records);

nlohmann::json record_to_json(const BlowUpRecord& r);
BlowUpRecord record_from_json(const nlohmann::json& j);  // ParseError

// ---------------------------------------------------------------------------
// Vertex classification and the fan tables

struct VertexCase {
  int number = 0;             // 1..6
  std::array<int, 2> pair{};  // chain positions of the two-vertex side, before normalization
  bool reversed = false;      // the chain symmetry i -> 4 - i was used
  bool complemented = false;  // three vertices in M: the out pair was used
  // per label A..E: the edge cell (omitting chain position k) and its step in (1/5)Z^4
  std::array<int, 5> ray_cells{};
  std::array<IntVec, 5> directions;
};

struct VertexClass {
  bool prism = false;  // false: SimplexNerve
  int in_count = 0;
  VertexCase vcase;  // valid when prism
};

// v must be a 0-cell of B; NotInComplex otherwise.
VertexClass classify_vertex(const BoundaryComplex& B, int v);
VertexClass classify_vertex(const BoundaryComplex& B, const std::string& id);

struct FanEmbedding {
  int case_number = 0;  // 0 for fans not taken from the tables
  std::vector<std::string> labels;
  std::vector<IntVec> image;              // one lattice point per label
  std::vector<std::vector<int>> cones;    // sorted label-index sets, one per maximal cone
  PolytopePtr polytope;                   // conv(image)

  // convex position, facets of conv(image) = cones, cones smooth and covering
  bool strongly_polytopal(std::string* why = nullptr) const;
};

// Cases 1..6 of the vertex tables; InvalidCase otherwise. Verified on construction.
FanEmbedding fan_embedding(int case_number);
// Cone triples of case c, in the labels A..E (0..4).
std::vector<std::vector<int>> case_cones(int case_number);
// Ray directions of the normalized simplex (0000,1000,1100,1110,1111), labels A..E as listed for the tables.
std::array<IntVec, 5> table_directions();

// Lattice polygons with d vertices, smooth, primitive edges; nullopt when none is known.
std::optional<LatticePolytope> unit_edge_polygon(int d);
std::vector<int> unit_edge_polygon_degrees();

// ---------------------------------------------------------------------------
// Blow-ups

struct BlowUpResult {
  PolyComplex complex;
  BlowUpRecord record;
};

// ray_cells[i]: edge cell carrying label i of emb. Doubling is part of the operation.
BlowUpResult blow_up_vertex(const PolyComplex& C, int v, const FanEmbedding& emb, const std::vector<int>& ray_cells);
// Record for a vertex blow-up at scale factor `factor`, computed against L (the decomposed C).
BlowUpRecord plan_vertex_blow_up(const BlowUpContext& ctx, int v, const FanEmbedding& emb,
                                 const std::vector<int>& ray_cells, const Integer& factor);

// A fan for v read off its neighbourhood: simplex fan, bipyramid, or P_d in dimension 2.
// NotRealizable when the nerve admits none; SmoothnessRequired for a non-smooth corner.
std::pair<FanEmbedding, std::vector<int>> neighbourhood_fan(const PolyComplex& C, int v);

struct EdgeCut {
  IntVec functional;  // on the lattice steps of P_A at A
  Integer depth;      // t: cut points at t / functional(step) steps
};
// Canonical corner cut at vertex a of P: primitive u with u(s) >= 1 on every edge step,
// minimal sum, lexicographically least in [-3,3]^d; depth lcm of u(s).
EdgeCut canonical_corner_cut(const LatticePolytope& P, int a);

BlowUpResult blow_up_edge(const PolyComplex& C, int edge);
// Record for one edge at extra doubling `factor`. The walls around the edge are cut in
// trapezoids; the new cell is the prism over H_A ∩ P_A under the affine height function
// matching the trapezoid lengths. NotRealizable when no such function exists.
BlowUpRecord plan_edge_blow_up(const BlowUpContext& ctx, int edge, const Integer& factor, int batch);
// Several edges at once. With `skipped` set, failing edges are listed there instead of thrown.
std::vector<BlowUpRecord> plan_edge_blow_ups(const BlowUpContext& ctx, const std::vector<int>& edges,
                                             const Integer& factor, int batch,
                                             std::vector<std::pair<int, std::string>>* skipped = nullptr);

// Definition-level blow-up: vertices through neighbourhood_fan, quadrilateral-nerved
// edges through blow_up_edge; NotRealizable otherwise. InvalidArgument for maximal cells.
BlowUpResult blow_up(const PolyComplex& C, int cell);

// Face poset of the dual polytope (vertices = facets of P).
FacePoset dual_poset(const FacePoset& P, int dim);
// For every stratum R of `pre` meeting the record's target and not inside it, the nerve of
// R_P in `post` must be a pyramid over the nerve of R. Returns the violating strata.
std::vector<std::string> nerve_pyramid_failures(const PolyComplex& pre, const PolyComplex& post,
                                                const BlowUpRecord& rec, int rec_index, const CutNames& names);

// ---------------------------------------------------------------------------
// 3D smoothing driver

struct SmoothingStage {
  std::string name;
  std::size_t cells = 0;
  std::size_t maximal = 0;
  AbelianInvariants h1;
};

struct SmoothingResult {
  PolyComplex complex;
  std::vector<BlowUpRecord> records;
  std::vector<SmoothingStage> stages;
  std::size_t prism_vertices = 0;
  std::size_t bad_edges = 0;         // non-simplicial edges after the vertex phase
  bool bad_edges_disjoint = true;
  std::vector<std::pair<std::string, std::string>> unrealized_edges;  // (edge, reason), non-strict runs
  Integer vertex_scale = 1, edge_scale = 1;
  bool h1_invariant = true;
  CertificationReport certification;
  std::map<std::string, std::size_t> cell_families;  // final maximal cells
};

struct SmoothingOptions {
  bool compute_h1 = true;
  bool certify = true;
  bool validate_stages = true;
  bool strict = true;  // false: edges without a realizable blow-up are kept and listed
};

// Throws NonDisjointBadEdges; propagates blow-up errors.
SmoothingResult smooth_complex(const BoundaryComplex& B, const SmoothingOptions& opt = {});

nlohmann::json smoothing_report_json(const SmoothingResult& R);

// truncated_octahedron, hexagonal_prism, quadrilateral_prism, associahedron,
// triangular_bipyramid, simplex3, or "f=(...)[ simple]" for anything else
std::string cell_family(const LatticePolytope& P);

// ---------------------------------------------------------------------------
// Surfaces

struct SurfaceTriangulation {
  int vertices = 0;
  std::vector<std::array<int, 3>> triangles;
};

// Pure, every edge in exactly two triangles, every vertex link a single cycle; InvalidArgument otherwise.
void check_closed_surface(const SurfaceTriangulation& T);
SurfaceTriangulation tetrahedron_surface();
SurfaceTriangulation octahedron_surface();
SurfaceTriangulation torus_surface(int k);  // k x k grid, k >= 3
SurfaceTriangulation genus2_surface();      // connected sum of two 7x7 tori along a triangle
std::vector<int> vertex_degrees(const SurfaceTriangulation& T);

nlohmann::json surface_to_json(const SurfaceTriangulation& T);
SurfaceTriangulation surface_from_json(const nlohmann::json& j);  // ParseError / InvalidArgument

// Triangles as conv{(0,0),(0,3),(3,0)}, the complex of T before smoothing.
PolyComplex surface_complex(const SurfaceTriangulation& T);
// UnsupportedDegree when a vertex degree >= 4 has no P_d.
PolyComplex smooth_surface_complex(const SurfaceTriangulation& T);

}  // namespace polylc
