#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "polylc/complex_io.hpp"

using namespace polylc;
using namespace fixtures;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  json report() const { return json::parse(out); }
};

fs::path tmpdir() {
  static fs::path d = [] {
    auto p = fs::temp_directory_path() / ("polylc_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return d;
}

Run run(const std::string& args) {
  static int n = 0;
  auto out = tmpdir() / ("out" + std::to_string(n++) + ".txt");
  std::string cmd = std::string(POLYLC_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
  int st = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  r.out = ss.str();
  return r;
}

std::string write(const std::string& name, const json& j) {
  auto p = (tmpdir() / name).string();
  write_json_file(p, j);
  return p;
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("bogus").code, 1);
  EXPECT_EQ(run("certify").code, 1);  // --in is required
  EXPECT_EQ(run("freudenthal --box 3").code, 1);
  EXPECT_EQ(run("certify --in /nonexistent/file.json").code, 1);
  EXPECT_EQ(run("smooth-surface --surface klein").code, 1);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, Freudenthal) {
  auto r = run("freudenthal --box 0,2");
  ASSERT_EQ(r.code, 0);
  auto j = r.report();
  EXPECT_EQ(j["schema"], "polylc-report/1");
  EXPECT_EQ(j["maximal_simplices"], 384);
  EXPECT_EQ(j["volume"], "16");
  EXPECT_EQ(j["per_cube"], 24);
}

TEST(Cli, DeterministicAcrossRunsAndThreads) {
  auto a = run("freudenthal --box 0,2");
  auto b = run("--threads 4 freudenthal --box 0,2");
  EXPECT_EQ(a.out, b.out);
  auto c = run("smooth-surface --surface octahedron");
  auto d = run("--threads 3 smooth-surface --surface octahedron");
  EXPECT_EQ(c.out, d.out);
}

TEST(Cli, CertifyBrokenFileReportsFaceClosure) {
  auto T = polygon_surface({{0, 1, 2}});
  std::vector<char> keep(T.size(), 1);
  keep[T.find("f0,1")] = 0;
  auto path = write("broken.json", complex_to_json(subcomplex(T, keep)));
  auto r = run("certify --in " + path);
  EXPECT_EQ(r.code, 2);
  auto j = r.report();
  EXPECT_EQ(j["failure"]["witness"]["kind"], "FaceClosure");
}

TEST(Cli, CertifyGoodAndBad) {
  auto good = write("cube.json", complex_to_json(cube_surface()));
  auto r = run("certify --snc --in " + good);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.report()["pass"], true);
  auto bad = write("corner.json", complex_to_json(simplex_boundary_bad_corner()));
  auto s = run("certify --in " + bad);
  EXPECT_EQ(s.code, 2);
  EXPECT_EQ(s.report()["smooth"]["witnesses"][0]["kind"], "LatticeSmoothness");
}

TEST(Cli, SurfaceAndPi1) {
  auto out = (tmpdir() / "tet.json").string();
  auto r = run("smooth-surface --surface tetrahedron --out " + out);
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.report()["homology"]["h1"], "0");
  EXPECT_EQ(r.report()["certification"]["pass"], true);
  auto p = run("pi1 --in " + out);
  EXPECT_EQ(p.code, 0);
  EXPECT_EQ(p.report()["h1"], "0");
  EXPECT_EQ(p.report()["euler"], 2);
  auto t = run("smooth-surface --surface torus:7");
  EXPECT_EQ(t.report()["homology"]["h1"], "Z^2");
}

TEST(Cli, Surfgroup) {
  json g = {{"curves", {{{"id", 0}, {"self", -3}}, {{"id", 1}, {"self", -2}}, {{"id", 2}, {"self", -2}}, {{"id", 3}, {"self", -2}}, {{"id", 4}, {"self", -2}}}},
            {"edges", {{0, 1}, {0, 2}, {0, 3}, {0, 4}}}};
  auto path = write("star.json", g);
  auto r = run("surfgroup --graph " + path + " --witness");
  ASSERT_EQ(r.code, 0);
  auto j = r.report();
  EXPECT_EQ(j["classification"]["row"]["number"], 3);
  EXPECT_EQ(j["classification"]["row"]["group"], "<a, b, c | a^2 b^-2, a^2 c^-2, a^2 (a^5 b^-1 c^-1)^-2>");
  EXPECT_EQ(j["witness"]["quotient"], "Z/2");
  EXPECT_EQ(j["abelianization"], j["classification"]["abelianization"]);

  json cyc = {{"curves", {{{"id", 0}, {"self", -2}}, {{"id", 1}, {"self", -3}}, {{"id", 2}, {"self", -2}}}},
              {"edges", {{0, 1}, {1, 2}, {2, 0}}}};
  auto cp = write("cycle.json", cyc);
  EXPECT_EQ(run("surfgroup --graph " + cp).code, 2);  // Mumford needs a tree
  auto c = run("surfgroup --graph " + cp + " --classify");
  EXPECT_EQ(c.code, 0);
  EXPECT_EQ(c.report()["classification"]["row"]["group"], "Z^2 ⋊ Z");

  g["curves"][1]["self"] = -3;  // basket (2,2,2,3)
  auto bad = run("surfgroup --classify --graph " + write("notlc.json", g));
  EXPECT_EQ(bad.code, 2);
  EXPECT_EQ(bad.report()["failure"]["code"], "NotLogCanonicalConfiguration");

  json broken = {{"curves", {{{"id", 0}, {"self", -2}}}}, {"orbifold", {{{"curve", 0}, {"n", 4}, {"q", 2}}}}};
  EXPECT_EQ(run("surfgroup --graph " + write("frac.json", broken)).code, 2);
}

TEST(Cli, IngestVoxelFile) {
  auto r = run(std::string("ingest --manifold file:") + POLYLC_DATA_DIR + "/single_cube.vox");
  ASSERT_EQ(r.code, 0);
  auto j = r.report();
  EXPECT_EQ(j["maximal"], 350);
  EXPECT_EQ(j["homology"]["h1"], "0");
}

TEST(Cli, IngestComponentsAndChecks) {
  auto in = run("ingest --manifold s3 --resolution 4 --component inner");
  auto out = run("ingest --manifold s3 --resolution 4 --component outer");
  ASSERT_EQ(in.code, 0);
  ASSERT_EQ(out.code, 0);
  auto a = in.report(), b = out.report();
  EXPECT_EQ(a["component"], 0);
  EXPECT_EQ(b["component"], 1);
  EXPECT_LT(a["maximal"].get<long>(), b["maximal"].get<long>());
  EXPECT_EQ(a["checks"]["pass"], true);
  EXPECT_EQ(b["checks"]["h1_ok"], true);
  // too coarse: the shell around the centre closes up into one component
  auto coarse = run("ingest --manifold s3 --resolution 2");
  EXPECT_EQ(coarse.code, 2);
  EXPECT_EQ(coarse.report()["checks"]["components_ok"], false);
  EXPECT_EQ(run("ingest --manifold s3 --resolution 2 --component middle").code, 1);
  EXPECT_EQ(run("ingest --manifold s3 --resolution 2 --component 5").code, 1);
}

TEST(Cli, PipelineSphere) {
  auto rep = (tmpdir() / "pipe.json").string();
  auto r = run("pipeline --manifold s3 --resolution 4 --report " + rep);
  std::ifstream f(rep);
  json j = json::parse(f);
  EXPECT_EQ(j["pi1"]["h1"], "0");
  EXPECT_EQ(j["pi1"]["h1_invariant"], true);
  for (auto& s : j["smooth"]["stages"]) EXPECT_EQ(s["h1"], "0");
  // the exit code follows the certification verdict
  EXPECT_EQ(r.code, j["verdict"]["pass"].get<bool>() ? 0 : 2);
  EXPECT_EQ(j["exit_code"], r.code);
  EXPECT_TRUE(j["verdict"]["pass"].get<bool>()) << "certification: " << j["certify"]["witness_count"] << " witnesses, "
                                                << j["smooth"]["unrealized_edges"].size() << " edges without a lattice blow-up";
}
