// polylc command-line front end. Reports are JSON on stdout (or --report PATH).
// Exit codes: 0 success, 1 usage or input error, 2 certification / validation failure.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "polylc/complex_io.hpp"
#include "polylc/errors.hpp"
#include "polylc/freudenthal.hpp"
#include "polylc/groups.hpp"
#include "polylc/ingest.hpp"
#include "polylc/resolve.hpp"
#include "polylc/surfgroup.hpp"

using namespace polylc;

namespace {

constexpr const char* kSchema = "polylc-report/1";

struct Outcome {
  json report;
  int code = 0;
};

// errors caused by the input itself
bool is_input_error(ErrorCode c) { return c == ErrorCode::ParseError || c == ErrorCode::InvalidArgument; }

json error_json(const Error& e) { return {{"code", error_name(e.code())}, {"message", e.what()}}; }

std::pair<int, int> parse_range(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) throw Error(ErrorCode::InvalidArgument, "range '" + s + "' needs the form A,B");
  try {
    return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "range '" + s + "' needs integers");
  }
}

json h1_json(const PolyComplex& C, bool simplify) {
  auto cw = amalgamate(C);
  auto P = presentation(cw);
  json j;
  j["euler"] = cw.euler();
  j["h1"] = abelianization(P).str();
  j["generators"] = P.generators.size();
  j["relators"] = P.relators.size();
  if (simplify) {
    auto S = tietze_simplify(P);
    j["simplified"] = {{"generators", S.generators.size()}, {"relators", S.relators.size()}, {"length", S.total_length()}};
    if (S.relators.size() <= 40) j["simplified"]["presentation"] = S.str();
  }
  j["note"] = "the isomorphism type of pi1 is not decided; abelianization and a simplified presentation are reported";
  return j;
}

json certification_json(const CertificationReport& R, std::size_t max_witnesses = 20) {
  json j;
  j["pass"] = R.pass;
  j["failed_condition"] = R.failed_condition;
  j["cells_checked"] = R.cells_checked;
  json w = json::array();
  for (std::size_t i = 0; i < R.witnesses.size() && i < max_witnesses; ++i) {
    auto& x = R.witnesses[i];
    w.push_back({{"cell", x.cell}, {"kind", x.kind}, {"detail", x.detail}, {"vertex", x.vertex}, {"det", to_string(x.det)}});
  }
  j["witnesses"] = w;
  j["witness_count"] = R.witnesses.size();
  return j;
}

json validation_json(const ValidationReport& v) {
  json j;
  j["pass"] = v.pass;
  json w = json::array();
  for (auto& x : v.violations) w.push_back({{"kind", x.kind}, {"witness", x.witness}});
  j["violations"] = w;
  return j;
}

// inner = fewest maximal cells, outer = most, or an index in that order
int parse_component(const std::string& c) {
  if (c == "inner") return 0;
  if (c == "outer") return -1;
  try {
    std::size_t used = 0;
    int k = std::stoi(c, &used);
    if (used == c.size() && k >= 0) return k;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidArgument, "component '" + c + "' is not inner, outer or an index");
}

BoundaryComplex ingest_component(const ManifoldSpec& spec, int N, int component) {
  auto V = spec.kind == ManifoldSpec::Kind::VoxelFile ? read_voxel_file(spec.path) : voxelize(spec, N);
  BoundaryOptions o;
  o.only_component = component;
  auto comps = boundary_dual(V, o);
  if (comps.empty()) throw Error(ErrorCode::EmptyResult, "no boundary component " + std::to_string(component));
  return std::move(comps.front());
}

SurfaceTriangulation named_surface(const std::string& s) {
  if (s == "tetrahedron") return tetrahedron_surface();
  if (s == "octahedron") return octahedron_surface();
  if (s == "genus2") return genus2_surface();
  if (s.rfind("torus:", 0) == 0) return torus_surface(std::stoi(s.substr(6)));
  if (s == "torus") return torus_surface(7);
  if (s.rfind("file:", 0) == 0) return surface_from_json(read_json_file(s.substr(5)));
  throw Error(ErrorCode::InvalidArgument, "unknown surface '" + s + "' (tetrahedron, octahedron, torus:K, genus2, file:PATH)");
}

// --- subcommands

Outcome run_freudenthal(const std::string& box) {
  auto [a, b] = parse_range(box);
  if (b <= a) throw Error(ErrorCode::InvalidArgument, "empty box");
  auto F = generate(Box::uniform(a, b));
  Rational vol = 0;
  for (auto& s : F.maximal) vol += simplex_volume(s);
  long cubes = 1;
  for (int i = 0; i < 4; ++i) cubes *= (b - a);
  json j;
  j["box"] = {a, b};
  j["maximal_simplices"] = F.maximal.size();
  j["volume"] = to_string(vol);
  j["cubes"] = cubes;
  j["per_cube"] = F.maximal.size() / static_cast<std::size_t>(cubes);
  j["faces"] = F.incidence.size();
  return {j, 0};
}

Outcome run_dual(const std::string& box, const std::string& region) {
  auto [a, b] = parse_range(box);
  auto [c, d] = parse_range(region);
  auto F = generate(Box::uniform(a, b));
  auto T = verify_dual_tiling(F, Box::uniform(c, d));
  json j;
  j["box"] = {a, b};
  j["region"] = {c, d};
  j["pass"] = T.pass;
  j["cells_checked"] = T.cells_checked;
  j["failures"] = T.failures;
  auto count = [](std::vector<Vec4> v) { return dual_polytope(FSimplex::from_vertices(std::move(v))).vertices().size(); };
  j["dual_vertices"] = {{"vertex", count({{0, 0, 0, 0}})},
                        {"diagonal_edge", count({{0, 0, 0, 0}, {1, 1, 1, 1}})},
                        {"face_diagonal_edge", count({{0, 0, 0, 0}, {1, 1, 0, 0}})}};
  return {j, T.pass ? 0 : 2};
}

Outcome run_ingest(const std::string& manifold, int N, int component, const std::string& out) {
  auto spec = ManifoldSpec::parse(manifold);
  auto V = spec.kind == ManifoldSpec::Kind::VoxelFile ? read_voxel_file(spec.path) : voxelize(spec, N);
  BoundaryOptions o;
  o.only_component = component;
  auto comps = boundary_dual(V, o);
  if (comps.empty()) throw Error(ErrorCode::EmptyResult, "no boundary component " + std::to_string(component));
  const auto& B = comps.front();
  // necessary conditions only: a closed pseudo-manifold, two shells for the builtin manifolds
  bool pseudo = true;
  for (int c : B.complex.cells_of_dim(2)) pseudo = pseudo && B.complex.maximal_cells_containing(c).size() == 2;
  json checks;
  checks["pseudo_manifold"] = pseudo;
  bool ok = pseudo;
  if (spec.kind != ManifoldSpec::Kind::VoxelFile) {
    checks["expected_components"] = 2;
    checks["components_ok"] = B.component_total == 2;
    ok = ok && B.component_total == 2;
  }
  auto hom = h1_json(B.complex, false);
  const char* want = spec.kind == ManifoldSpec::Kind::Sphere3 ? "0"
                     : spec.kind == ManifoldSpec::Kind::S2xS1 ? "Z"
                     : spec.kind == ManifoldSpec::Kind::Torus3 ? "Z^3"
                                                              : nullptr;
  if (want) {
    checks["expected_h1"] = want;
    checks["h1_ok"] = hom["h1"] == want;
    ok = ok && hom["h1"] == want;  // a mismatch means the resolution is too coarse for this shell
  }
  checks["pass"] = ok;
  checks["note"] = "necessary conditions only; the homotopy type of the component is not certified";
  json j;
  j["checks"] = checks;
  j["manifold"] = spec.str();
  j["resolution"] = N;
  j["cubes"] = V.cubes.size();
  j["component"] = B.component;
  j["components"] = B.component_total;
  j["cells"] = B.complex.size();
  j["maximal"] = B.maximal_count();
  auto cs = census(B);
  j["census"] = {{"truncated_octahedra", cs.truncated_octahedra}, {"hexagonal_prisms", cs.hexagonal_prisms}};
  j["homology"] = hom;
  if (!out.empty()) write_json_file(out, boundary_to_json(B));
  return {j, ok ? 0 : 2};
}

Outcome smooth_boundary(const BoundaryComplex& B, bool strict, const std::string& out) {
  SmoothingOptions o;
  o.strict = strict;
  json j;
  try {
    auto R = smooth_complex(B, o);
    j = smoothing_report_json(R);
    if (!out.empty()) write_json_file(out, complex_to_json(R.complex));
    return {j, R.certification.pass ? 0 : 2};
  } catch (const Error& e) {
    if (is_input_error(e.code())) throw;
    j["failure"] = error_json(e);
    return {j, 2};
  }
}

Outcome run_smooth(const std::string& in, const std::string& manifold, int N, int component, bool strict,
                   const std::string& out) {
  if (in.empty() == manifold.empty()) throw Error(ErrorCode::InvalidArgument, "give exactly one of --in and --manifold");
  auto B = in.empty() ? ingest_component(ManifoldSpec::parse(manifold), N, component) : boundary_from_json(read_json_file(in));
  return smooth_boundary(B, strict, out);
}

Outcome run_smooth_surface(const std::string& name, const std::string& out) {
  auto T = named_surface(name);
  json j;
  j["surface"] = name;
  j["vertices"] = T.vertices;
  j["triangles"] = T.triangles.size();
  j["input_homology"] = h1_json(surface_complex(T), false);
  try {
    auto C = smooth_surface_complex(T);
    auto cert = certify_smooth(C);
    j["cells"] = C.size();
    j["maximal"] = C.maximal_cells().size();
    j["certification"] = certification_json(cert);
    j["homology"] = h1_json(C, true);
    if (!out.empty()) write_json_file(out, complex_to_json(C));
    return {j, cert.pass ? 0 : 2};
  } catch (const Error& e) {
    if (is_input_error(e.code())) throw;
    j["failure"] = error_json(e);
    return {j, 2};
  }
}

Outcome run_certify(const std::string& in, bool snc) {
  auto C = complex_from_json(read_json_file(in));
  json j;
  auto v = validate(C);
  j["validation"] = validation_json(v);
  if (!v.pass) {
    j["failure"] = {{"code", "InvalidComplex"}, {"witness", j["validation"]["violations"][0]}};
    return {j, 2};
  }
  auto R = certify_smooth(C, false);
  j["smooth"] = certification_json(R);
  bool pass = R.pass;
  if (snc) {
    auto S = certify_snc_cy(C, false);
    j["snc_cy"] = certification_json(S);
    pass = pass && S.pass;
  }
  j["pass"] = pass;
  return {j, pass ? 0 : 2};
}

Outcome run_pi1(const std::string& in, const std::string& tree) {
  auto C = complex_from_json(read_json_file(in));
  auto v = validate(C);
  if (!v.pass) {
    json j;
    j["validation"] = validation_json(v);
    return {j, 2};
  }
  auto cw = amalgamate(C);
  auto P = presentation(cw, tree == "dfs" ? TreePolicy::DFS : TreePolicy::BFS);
  auto S = tietze_simplify(P);
  json j;
  j["cw_counts"] = cw.counts;
  j["euler"] = cw.euler();
  j["presentation"] = {{"generators", P.generators.size()}, {"relators", P.relators.size()}};
  j["simplified"] = presentation_to_json(S);
  j["simplified_text"] = S.str();
  j["h1"] = abelianization(S).str();
  j["note"] = "the isomorphism type of pi1 is not decided; abelianization and a simplified presentation are reported";
  return {j, 0};
}

Outcome run_surfgroup(const std::string& path, bool do_classify, bool do_witness) {
  auto [g, b] = graph_from_json(read_json_file(path));
  json j;
  j["graph"] = graph_to_json(g, b);
  try {
    auto P = mumford_presentation(g, b);
    j["mumford"] = presentation_to_json(P);
    j["mumford_text"] = P.str();
    j["abelianization"] = abelianization(P).str();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotATree && e.code() != ErrorCode::GenusOne) throw;
    j["mumford_unavailable"] = error_json(e);
    if (!do_classify && !do_witness) {
      j["failure"] = error_json(e);
      return {j, 2};
    }
  }
  if (do_classify || do_witness) {
    try {
      auto c = classify(g, b);
      j["classification"] = classification_to_json(c);
      if (do_witness) j["witness"] = witness_to_json(solvable_witness(c), c.presentation);
    } catch (const Error& e) {
      if (is_input_error(e.code())) throw;
      j["failure"] = error_json(e);
      return {j, 2};
    }
  }
  return {j, 0};
}

Outcome run_pipeline(const std::string& manifold, int N, int component, bool strict, const std::string& keep) {
  auto spec = ManifoldSpec::parse(manifold);
  json j;
  j["manifold"] = spec.str();
  j["resolution"] = N;
  auto B = ingest_component(spec, N, component);
  auto cs = census(B);
  j["ingest"] = {{"component", B.component},
                 {"components", B.component_total},
                 {"cells", B.complex.size()},
                 {"maximal", B.maximal_count()},
                 {"census", {{"truncated_octahedra", cs.truncated_octahedra}, {"hexagonal_prisms", cs.hexagonal_prisms}}}};
  if (!keep.empty()) write_json_file(keep + "/boundary.json", boundary_to_json(B));
  SmoothingOptions o;
  o.strict = strict;
  SmoothingResult R;
  try {
    R = smooth_complex(B, o);
  } catch (const Error& e) {
    j["smooth"] = {{"failure", error_json(e)}};
    j["verdict"] = {{"pass", false}, {"stage", "smooth"}};
    return {j, 2};
  }
  j["smooth"] = smoothing_report_json(R);
  j["certify"] = j["smooth"]["certification"];
  j["smooth"].erase("certification");
  if (!keep.empty()) write_json_file(keep + "/smooth.json", complex_to_json(R.complex));
  j["pi1"] = h1_json(R.complex, false);
  j["pi1"]["h1_invariant"] = R.h1_invariant;
  bool pass = R.certification.pass && R.h1_invariant;
  j["verdict"] = {{"pass", pass}, {"stage", pass ? "" : (R.certification.pass ? "pi1" : "certify")}};
  return {j, pass ? 0 : 2};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polylc: polyhedral complexes, blow-ups and fundamental groups"};
  app.require_subcommand(1);
  app.fallthrough();  // --report and --threads may follow the subcommand
  std::string report_path;
  int threads = 1;
  app.add_option("--report", report_path, "write the JSON report here instead of stdout");
  app.add_option("--threads", threads, "worker threads (results do not depend on it)")->check(CLI::PositiveNumber);

  std::string box = "0,2", region = "1,2", manifold, in, out, graph, surface = "tetrahedron", tree = "bfs", keep;
  int resolution = 4;
  std::string component = "inner";
  bool non_strict = false, strict = false, snc = false, do_classify = false, do_witness = false;

  auto* fr = app.add_subcommand("freudenthal", "Freudenthal decomposition of a box [A,B]^4");
  fr->add_option("--box", box, "A,B");
  auto* du = app.add_subcommand("dual", "verify the dual tiling on a region");
  du->add_option("--box", box, "A,B")->default_str("0,3");
  du->add_option("--region", region, "A,B");
  auto* ig = app.add_subcommand("ingest", "voxelize a 3-manifold in R^4 and extract the boundary dual complex");
  ig->add_option("--manifold", manifold, "s3[:R2] | s2xs1[:a,b] | t3[:a,b,c] | file:PATH")->required();
  ig->add_option("--resolution", resolution, "cubes per unit")->check(CLI::PositiveNumber);
  ig->add_option("--component", component, "inner | outer | K (index by size)");
  ig->add_option("--out", out, "write the boundary complex");
  auto* sm = app.add_subcommand("smooth", "vertex and edge blow-ups of a boundary complex");
  sm->add_option("--in", in, "boundary complex JSON from ingest");
  sm->add_option("--manifold", manifold, "ingest first");
  sm->add_option("--resolution", resolution)->check(CLI::PositiveNumber);
  sm->add_option("--component", component);
  sm->add_flag("--non-strict", non_strict, "keep edges with no lattice blow-up and list them");
  sm->add_option("--out", out, "write the smoothed complex");
  auto* ss = app.add_subcommand("smooth-surface", "smooth a triangulated surface");
  ss->add_option("--surface", surface, "tetrahedron | octahedron | torus:K | genus2 | file:PATH");
  ss->add_option("--out", out, "write the smoothed complex");
  auto* ce = app.add_subcommand("certify", "validate and certify a complex");
  ce->add_option("--in", in, "complex JSON")->required();
  ce->add_flag("--snc", snc, "also check the snc Calabi-Yau conditions");
  auto* pi = app.add_subcommand("pi1", "presentation and H1 of a complex");
  pi->add_option("--in", in, "complex JSON")->required();
  pi->add_option("--tree", tree, "spanning tree policy")->check(CLI::IsMember({"bfs", "dfs"}));
  auto* sg = app.add_subcommand("surfgroup", "groups of resolution graphs");
  sg->add_option("--graph", graph, "graph JSON")->required();
  sg->add_flag("--classify", do_classify, "match a table row");
  sg->add_flag("--witness", do_witness, "solvable-extension witness (implies --classify)");
  auto* pl = app.add_subcommand("pipeline", "ingest, smooth, certify, pi1");
  pl->add_option("--manifold", manifold)->required();
  pl->add_option("--resolution", resolution)->check(CLI::PositiveNumber);
  pl->add_option("--component", component);
  pl->add_flag("--strict", strict, "stop at the first edge with no lattice blow-up");
  pl->add_option("--keep", keep, "directory for intermediate artifacts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  Outcome r;
  std::string command;
  try {
    if (*fr) command = "freudenthal", r = run_freudenthal(box);
    else if (*du) command = "dual", r = run_dual(du->count("--box") ? box : "0,3", region);
    else if (*ig) command = "ingest", r = run_ingest(manifold, resolution, parse_component(component), out);
    else if (*sm) command = "smooth", r = run_smooth(in, manifold, resolution, parse_component(component), !non_strict, out);
    else if (*ss) command = "smooth-surface", r = run_smooth_surface(surface, out);
    else if (*ce) command = "certify", r = run_certify(in, snc);
    else if (*pi) command = "pi1", r = run_pi1(in, tree);
    else if (*sg) command = "surfgroup", r = run_surfgroup(graph, do_classify || do_witness, do_witness);
    else if (*pl) command = "pipeline", r = run_pipeline(manifold, resolution, parse_component(component), strict, keep);
  } catch (const Error& e) {
    std::cerr << "polylc: " << e.what() << "\n";
    return is_input_error(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "polylc: " << e.what() << "\n";
    return 1;
  }
  r.report["schema"] = kSchema;
  r.report["command"] = command;
  r.report["exit_code"] = r.code;
  const std::string text = r.report.dump(2) + "\n";
  if (report_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(report_path);
    if (!f) {
      std::cerr << "polylc: cannot write " << report_path << "\n";
      return 1;
    }
    f << text;
  }
  return r.code;
}
