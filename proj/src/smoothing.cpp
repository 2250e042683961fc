#include <algorithm>
#include <set>

#include "polylc/errors.hpp"
#include "polylc/groups.hpp"
#include "polylc/resolve.hpp"

namespace polylc {

namespace {

AbelianInvariants first_homology(const PolyComplex& C) { return abelianization(presentation(amalgamate(C))); }

void add_stage(SmoothingResult& R, const std::string& name, const PolyComplex& C, const SmoothingOptions& opt) {
  if (opt.validate_stages) {
    auto v = validate(C);
    if (!v.pass)
      throw Error(ErrorCode::InvalidComplex,
                  "stage " + name + ": " + v.violations.front().kind + " " + v.violations.front().witness);
  }
  SmoothingStage s;
  s.name = name;
  s.cells = C.size();
  s.maximal = C.maximal_cells().size();
  if (opt.compute_h1) s.h1 = first_homology(C);
  if (opt.compute_h1 && !R.stages.empty() && !(s.h1 == R.stages.front().h1)) R.h1_invariant = false;
  R.stages.push_back(s);
}

bool same_f(const LatticePolytope& P, const LatticePolytope& Q) { return P.f_vector() == Q.f_vector() && isomorphic(P, Q); }

}  // namespace

std::string cell_family(const LatticePolytope& P) {
  static const std::vector<std::pair<std::string, LatticePolytope>> refs{
      {"truncated_octahedron", truncated_octahedron()}, {"hexagonal_prism", hexagonal_prism()},
      {"quadrilateral_prism", quadrilateral_prism()},   {"associahedron", associahedron3()},
      {"simplex3", simplex_polytope(3)}};
  if (P.dim() == 3) {
    for (auto& [name, Q] : refs)
      if (same_f(P, Q)) return name;
    auto f = P.f_vector();
    if (f == std::vector<std::size_t>{5, 9, 6}) {
      bool tri = true;
      for (int fi : P.faces_of_dim(2)) tri = tri && P.faces()[fi].verts.size() == 3;
      if (tri) return "triangular_bipyramid";
    }
  }
  std::string s = "f=(";
  auto f = P.f_vector();
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + std::to_string(f[i]);
  s += ")";
  bool simple = true;
  for (auto& nb : P.neighbors()) simple = simple && static_cast<int>(nb.size()) == P.dim();
  return simple ? s + " simple" : s;
}

SmoothingResult smooth_complex(const BoundaryComplex& B, const SmoothingOptions& opt) {
  const PolyComplex& C0 = B.complex;
  if (C0.n != 3) throw Error(ErrorCode::InvalidArgument, "smoothing needs a 3-dimensional complex");
  SmoothingResult R;
  add_stage(R, "input", C0, opt);

  // vertex phase
  std::vector<std::pair<int, VertexClass>> prism;
  for (int v : C0.cells_of_dim(0)) {
    auto vc = classify_vertex(B, v);
    if (vc.prism) prism.push_back({v, vc});
  }
  R.prism_vertices = prism.size();
  PolyComplex C1 = C0;
  if (!prism.empty()) {
    auto ctx = make_context(C0);
    std::vector<FanEmbedding> fans;
    for (int c = 1; c <= 6; ++c) fans.push_back(fan_embedding(c));
    bool done = false;
    for (Integer f = 2; f <= 16 && !done; f *= 2) {
      std::vector<BlowUpRecord> batch;
      for (auto& [v, vc] : prism) {
        std::vector<int> rays(vc.vcase.ray_cells.begin(), vc.vcase.ray_cells.end());
        auto rec = plan_vertex_blow_up(ctx, v, fans[vc.vcase.number - 1], rays, f);
        rec.batch = 0;
        batch.push_back(std::move(rec));
      }
      if (!batch_disjoint(ctx, batch)) continue;
      C1 = apply_batch(ctx, batch);
      R.vertex_scale = f;
      for (auto& r : batch) R.records.push_back(std::move(r));
      done = true;
    }
    if (!done) throw Error(ErrorCode::NotRealizable, "vertex blow-up regions overlap at every scale up to 16");
    add_stage(R, "vertices", C1, opt);
  }

  // edge phase: edges whose nerve is not a simplex
  std::vector<int> bad;
  {
    auto around = containing_maximal_all(C1);
    for (int e : C1.cells_of_dim(1))
      if (around[e].size() != 3 && !nerve(C1, e).is_simplex()) bad.push_back(e);
  }
  R.bad_edges = bad.size();
  PolyComplex C2 = C1;
  if (!bad.empty()) {
    auto ctx = make_context(C1);
    std::set<int> ends;
    for (int e : bad)
      for (int l : ctx.cell_labels[e])
        if (!ends.insert(l).second) R.bad_edges_disjoint = false;
    if (!R.bad_edges_disjoint) throw Error(ErrorCode::NonDisjointBadEdges, "non-simplicial edges share a vertex");
    bool done = false;
    for (Integer f = 1; f <= 16 && !done; f *= 2) {
      std::vector<std::pair<int, std::string>> skipped;
      auto batch = plan_edge_blow_ups(ctx, bad, f, 1, opt.strict ? nullptr : &skipped);
      if (!batch_disjoint(ctx, batch)) continue;
      for (auto& [e, why] : skipped) R.unrealized_edges.push_back({C1.cell(e).id, why});
      C2 = apply_batch(ctx, batch);
      R.edge_scale = f;
      for (auto& r : batch) R.records.push_back(std::move(r));
      done = true;
    }
    if (!done) throw Error(ErrorCode::NotRealizable, "edge blow-up regions overlap at every scale up to 16");
    add_stage(R, "edges", C2, opt);
  }

  if (opt.certify) R.certification = certify_smooth(C2, false);
  std::map<const LatticePolytope*, std::string> fam;
  for (int m : C2.maximal_cells()) {
    const auto* p = C2.cell(m).poly.get();
    auto it = fam.find(p);
    if (it == fam.end()) it = fam.emplace(p, cell_family(*p)).first;
    ++R.cell_families[it->second];
  }
  R.complex = std::move(C2);
  return R;
}

nlohmann::json smoothing_report_json(const SmoothingResult& R) {
  nlohmann::json j;
  nlohmann::json st = nlohmann::json::array();
  for (auto& s : R.stages)
    st.push_back({{"name", s.name}, {"cells", s.cells}, {"maximal", s.maximal}, {"h1", s.h1.str()}});
  j["stages"] = st;
  j["prism_vertices"] = R.prism_vertices;
  j["bad_edges"] = R.bad_edges;
  j["bad_edges_disjoint"] = R.bad_edges_disjoint;
  j["vertex_scale"] = to_string(R.vertex_scale);
  j["edge_scale"] = to_string(R.edge_scale);
  j["h1_invariant"] = R.h1_invariant;
  j["records"] = R.records.size();
  nlohmann::json un = nlohmann::json::array();
  for (auto& [e, why] : R.unrealized_edges) un.push_back({{"edge", e}, {"reason", why}});
  j["unrealized_edges"] = un;
  nlohmann::json cert;
  cert["pass"] = R.certification.pass;
  cert["failed_condition"] = R.certification.failed_condition;
  cert["cells_checked"] = R.certification.cells_checked;
  nlohmann::json w = nlohmann::json::array();
  for (std::size_t i = 0; i < R.certification.witnesses.size() && i < 20; ++i) {
    auto& x = R.certification.witnesses[i];
    w.push_back({{"cell", x.cell}, {"kind", x.kind}, {"detail", x.detail}, {"vertex", x.vertex}, {"det", to_string(x.det)}});
  }
  cert["witnesses"] = w;
  cert["witness_count"] = R.certification.witnesses.size();
  j["certification"] = cert;
  nlohmann::json fam = nlohmann::json::object();
  for (auto& [k, v] : R.cell_families) fam[k] = v;
  j["cell_families"] = fam;
  return j;
}

}  // namespace polylc
