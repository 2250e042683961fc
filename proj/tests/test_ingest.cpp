#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include "polylc/complex_io.hpp"
#include "polylc/errors.hpp"
#include "polylc/groups.hpp"
#include "polylc/ingest.hpp"

using namespace polylc;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no polylc::Error thrown";
  return ErrorCode::InvalidArgument;
}

VoxelSet single_cube() {
  VoxelSet V;
  V.cubes = {{0, 0, 0, 0}};
  return V;
}

const BoundaryComplex& single_shell() {
  static const BoundaryComplex B = boundary_dual(single_cube()).at(0);
  return B;
}

AbelianInvariants h1(const PolyComplex& C) { return abelianization(presentation(amalgamate(C))); }

AbelianInvariants free_ab(std::size_t r) {
  AbelianInvariants a;
  a.free_rank = r;
  return a;
}

std::vector<std::string> ids(const PolyComplex& C) {
  std::vector<std::string> out;
  for (auto& c : C.cells()) out.push_back(c.id);
  return out;
}

std::set<std::pair<std::string, std::string>> arrows(const PolyComplex& C) {
  std::set<std::pair<std::string, std::string>> out;
  for (auto& m : C.morphisms()) out.emplace(C.cell(m.from).id, C.cell(m.to).id);
  return out;
}

}  // namespace

TEST(Voxelize, SphereSymmetryAudit) {
  auto V = voxelize(ManifoldSpec::sphere3(Rational(25, 4)), 1);
  std::set<Vec4> S(V.cubes.begin(), V.cubes.end());
  ASSERT_FALSE(S.empty());
  std::array<int, 4> p{0, 1, 2, 3};
  do {
    for (int flips = 0; flips < 16; ++flips)
      for (auto& c : V.cubes) {
        Vec4 d;
        for (int i = 0; i < 4; ++i) {
          int x = c[p[i]];
          d[i] = (flips >> i & 1) ? -x - 1 : x;  // [x,x+1] -> [-x-1,-x]
        }
        ASSERT_TRUE(S.count(d)) << "missing image of a cube";
      }
  } while (std::next_permutation(p.begin(), p.end()));
}

TEST(Voxelize, ConstantIsEmpty) {
  EXPECT_EQ(code_of([] { voxelize(ManifoldSpec::constant(1), 2); }), ErrorCode::EmptyVoxelization);
  EXPECT_EQ(code_of([] { voxelize(ManifoldSpec::sphere3(), 0); }), ErrorCode::InvalidArgument);
}

TEST(Voxelize, EpsilonOnlyAdds) {
  auto spec = ManifoldSpec::sphere3(Rational(9, 4));
  auto A = voxelize(spec, 1);
  VoxelizeOptions o;
  o.epsilon = 0.5;
  auto B = voxelize(spec, 1, o);
  EXPECT_TRUE(std::includes(B.cubes.begin(), B.cubes.end(), A.cubes.begin(), A.cubes.end()));
}

TEST(Voxelize, DisconnectedFile) {
  std::string path = ::testing::TempDir() + "disc.vox";
  VoxelSet V;
  V.cubes = {{0, 0, 0, 0}, {5, 0, 0, 0}};
  write_voxel_file(path, V);
  EXPECT_EQ(code_of([&] { voxelize(ManifoldSpec::voxel_file(path), 1); }), ErrorCode::DisconnectedVoxelization);
  std::remove(path.c_str());
}

TEST(Voxelize, ExactSignMatchesFloat) {
  // away from the zero set the double evaluation and the exact one agree
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-64, 64);
  for (auto spec : {ManifoldSpec::sphere3(), ManifoldSpec::s2xs1(), ManifoldSpec::torus3()}) {
    for (int t = 0; t < 2000; ++t) {
      std::vector<Rational> x(4);
      std::vector<double> xd(4);
      for (int i = 0; i < 4; ++i) {
        x[i] = Rational(d(rng), 32);
        xd[i] = x[i].get_d();
      }
      double v = spec.value_at(xd);
      if (std::fabs(v) < 1e-9) continue;
      ASSERT_EQ(spec.sign_at(x), v > 0 ? 1 : -1) << spec.str();
    }
  }
  // exact zeros
  auto s = ManifoldSpec::s2xs1(2, 1);
  EXPECT_EQ(s.sign_at({3, 0, 0, 0}), 0);
  EXPECT_EQ(s.sign_at({2, 0, 0, 1}), 0);
  EXPECT_EQ(s.sign_at({2, 0, 0, 0}), -1);
  auto t = ManifoldSpec::torus3(4, 2, 1);
  EXPECT_EQ(t.sign_at({7, 0, 0, 0}), 0);
  EXPECT_EQ(t.sign_at({4, 0, 2, 1}), 0);
  EXPECT_EQ(t.sign_at({0, 0, 0, 0}), 1);
}

TEST(ManifoldSpecParse, RoundTripAndErrors) {
  EXPECT_EQ(ManifoldSpec::parse("s3").kind, ManifoldSpec::Kind::Sphere3);
  auto s = ManifoldSpec::parse("s2xs1:2,1");
  EXPECT_EQ(s.params, (std::vector<Rational>{2, 1}));
  EXPECT_EQ(ManifoldSpec::parse(s.str()).params, s.params);
  auto t = ManifoldSpec::parse("t3:3/2,3/4,3/8");
  EXPECT_EQ(t.params[2], Rational(3, 8));
  EXPECT_EQ(ManifoldSpec::parse("file:x.vox").path, "x.vox");
  EXPECT_EQ(code_of([] { ManifoldSpec::parse("klein"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { ManifoldSpec::parse("s2xs1:1"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { ManifoldSpec::parse("s2xs1:1,2"); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { ManifoldSpec::parse("t3:3,1,2"); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { ManifoldSpec::parse("s3:-1"); }), ErrorCode::InvalidArgument);
}

TEST(VoxelFile, ParseErrors) {
  std::string path = ::testing::TempDir() + "bad.vox";
  {
    std::ofstream(path) << "0 0 0\n";
  }
  EXPECT_EQ(code_of([&] { read_voxel_file(path); }), ErrorCode::ParseError);
  {
    std::ofstream(path) << "0 0 0 x\n";
  }
  EXPECT_EQ(code_of([&] { read_voxel_file(path); }), ErrorCode::ParseError);
  {
    std::ofstream(path) << "# comment\n1 2 3 4\n\n1 2 3 4\n";
  }
  auto V = read_voxel_file(path);
  EXPECT_EQ(V.cubes, (std::vector<Vec4>{{1, 2, 3, 4}}));
  std::remove(path.c_str());
  EXPECT_EQ(code_of([] { read_voxel_file("/nonexistent/none.vox"); }), ErrorCode::ParseError);
}

TEST(BoundaryDual, EmptyIsError) {
  EXPECT_EQ(code_of([] { boundary_dual(VoxelSet{}); }), ErrorCode::EmptyVoxelization);
}

TEST(BoundaryDual, SingleCubeShell) {
  auto all = boundary_dual(single_cube());
  ASSERT_EQ(all.size(), 1u);
  const auto& B = single_shell();
  EXPECT_EQ(B.component_total, 1);
  EXPECT_TRUE(validate(B.complex).pass);
  EXPECT_EQ(h1(B.complex), free_ab(0));
  EXPECT_EQ(amalgamate(B.complex).euler(), 0);
  auto c = census(B);
  EXPECT_EQ(c.total(), B.maximal_count());
  EXPECT_GT(c.truncated_octahedra, 0u);
  EXPECT_GT(c.hexagonal_prisms, 0u);
}

TEST(BoundaryDual, MaximalCellsAreMixedEdges) {
  const auto& B = single_shell();
  std::set<Vec4> corners;
  for (int m = 0; m < 16; ++m) corners.insert({m & 1, m >> 1 & 1, m >> 2 & 1, m >> 3 & 1});
  for (std::size_t i = 0; i < B.complex.size(); ++i) {
    const auto& p = B.provenance[i];
    auto vs = p.simplex.vertices();
    EXPECT_EQ(B.complex.cell(static_cast<int>(i)).dim(), 4 - p.simplex.dim());
    std::uint8_t mask = 0;
    for (std::size_t k = 0; k < vs.size(); ++k)
      if (corners.count(vs[k])) mask |= static_cast<std::uint8_t>(1u << k);
    EXPECT_EQ(mask, p.in_mask);
    EXPECT_NE(mask, 0);
    EXPECT_NE(mask, (1u << vs.size()) - 1);
    if (p.simplex.dim() == 1) EXPECT_TRUE(B.complex.is_maximal(static_cast<int>(i)));
  }
}

TEST(BoundaryDual, ClosedPseudoManifold) {
  const auto& C = single_shell().complex;
  for (int c : C.cells_of_dim(2)) EXPECT_EQ(C.maximal_cells_containing(c).size(), 2u) << C.cell(c).id;
}

TEST(BoundaryDual, NervesOfVerticesAndEdges) {
  const auto& B = single_shell();
  const auto& C = B.complex;
  std::size_t prisms = 0;
  for (int v : C.cells_of_dim(0)) {
    auto nv = nerve(C, v);
    ASSERT_TRUE(nv.shape == "simplex3" || nv.shape == "triangular_prism") << nv.shape;
    int in = __builtin_popcount(B.provenance[v].in_mask);
    EXPECT_EQ(nv.shape == "triangular_prism", in == 2 || in == 3);
    prisms += nv.shape == "triangular_prism";
  }
  EXPECT_GT(prisms, 0u);
  for (int e : C.cells_of_dim(1)) {
    auto ne = nerve(C, e);
    ASSERT_TRUE(ne.shape == "triangle" || ne.shape == "quadrilateral") << ne.shape;
    int in = __builtin_popcount(B.provenance[e].in_mask);
    EXPECT_EQ(ne.shape == "quadrilateral", in == 2);
  }
}

TEST(BoundaryDual, OrderIndependent) {
  VoxelSet V;
  V.cubes = {{0, 0, 0, 0}, {1, 0, 0, 0}, {1, 1, 0, 0}};
  auto A = boundary_dual(V);
  std::reverse(V.cubes.begin(), V.cubes.end());
  auto B = boundary_dual(V);
  ASSERT_EQ(A.size(), B.size());
  for (std::size_t i = 0; i < A.size(); ++i) {
    EXPECT_EQ(ids(A[i].complex), ids(B[i].complex));
    EXPECT_EQ(arrows(A[i].complex), arrows(B[i].complex));
  }
}

TEST(BoundaryDual, IncompleteStarOnSmallBox) {
  BoundaryOptions o;
  o.box = Box::uniform(0, 1);
  EXPECT_EQ(code_of([&] { boundary_dual(single_cube(), o); }), ErrorCode::IncompleteStar);
  o.box = Box::uniform(-1, 2);
  EXPECT_NO_THROW(boundary_dual(single_cube(), o));
}

TEST(BoundaryDual, JsonRoundTrip) {
  const auto& B = single_shell();
  auto j = boundary_to_json(B);
  auto R = boundary_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(ids(R.complex), ids(B.complex));
  EXPECT_EQ(arrows(R.complex), arrows(B.complex));
  ASSERT_EQ(R.provenance.size(), B.provenance.size());
  for (std::size_t i = 0; i < R.provenance.size(); ++i) {
    EXPECT_EQ(R.provenance[i].simplex, B.provenance[i].simplex);
    EXPECT_EQ(R.provenance[i].in_mask, B.provenance[i].in_mask);
  }
  EXPECT_TRUE(validate(R.complex).pass);
}

TEST(BoundaryDual, SphereAtN1) {
  auto V = voxelize(ManifoldSpec::sphere3(Rational(9, 4)), 1);
  auto comps = boundary_dual(V);
  ASSERT_FALSE(comps.empty());
  for (auto& B : comps) {
    EXPECT_TRUE(validate(B.complex).pass);
    EXPECT_EQ(census(B).total(), B.maximal_count());
    EXPECT_EQ(amalgamate(B.complex).euler(), 0);
  }
  // sorted by size
  for (std::size_t i = 1; i < comps.size(); ++i) EXPECT_LE(comps[i - 1].maximal_count(), comps[i].maximal_count());
}

TEST(BoundaryDual, ConnectedSumFixture) {
  auto V = voxelize(ManifoldSpec::voxel_file(std::string(POLYLC_DATA_DIR) + "/connected_sum2.vox"), 1);
  auto comps = boundary_dual(V);
  ASSERT_EQ(comps.size(), 1u);
  EXPECT_EQ(h1(comps[0].complex), free_ab(2));
  EXPECT_EQ(amalgamate(comps[0].complex).euler(), 0);
}

TEST(BoundaryDual, OnlyComponent) {
  auto V = voxelize(ManifoldSpec::sphere3(Rational(9, 4)), 1);
  auto all = boundary_dual(V);
  BoundaryOptions o;
  o.only_component = static_cast<int>(all.size()) - 1;
  auto one = boundary_dual(V, o);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(ids(one[0].complex), ids(all.back().complex));
  o.only_component = -1;
  EXPECT_EQ(ids(boundary_dual(V, o).at(0).complex), ids(all.back().complex));
  o.only_component = static_cast<int>(all.size());
  EXPECT_EQ(code_of([&] { boundary_dual(V, o); }), ErrorCode::InvalidArgument);
  o.only_component = -1 - static_cast<int>(all.size());
  EXPECT_EQ(code_of([&] { boundary_dual(V, o); }), ErrorCode::InvalidArgument);
}

TEST(Census, EmptyComplexIsZero) {
  BoundaryComplex B;
  B.complex.n = 3;
  auto c = census(B);
  EXPECT_EQ(c.total(), 0u);
}
