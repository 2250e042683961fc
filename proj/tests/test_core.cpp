#include <gtest/gtest.h>

#include <random>

#include "polylc/errors.hpp"
#include "polylc/polytope.hpp"

using namespace polylc;

namespace {

LatticePolytope poly(std::vector<std::vector<long>> pts, long s = 1) {
  std::vector<Point> p;
  for (auto& v : pts) p.push_back(make_point(v));
  return LatticePolytope::hull(p, s);
}

LatticePolytope unit_square() { return poly({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

// brute-force cokernel oracle: |Z^n / rowspace| via counting in a box is
// awkward, so compare against invariants computed from determinantal divisors.
std::vector<Integer> determinantal_divisors(const IntMatrix& m) {
  std::size_t r = m.size(), c = r ? m[0].size() : 0;
  std::vector<Integer> dk;
  for (std::size_t k = 1; k <= std::min(r, c); ++k) {
    Integer g = 0;
    std::vector<int> rs(r), cs(c);
    for (std::size_t rm = 0; rm < (1u << r); ++rm) {
      if (static_cast<std::size_t>(__builtin_popcount(rm)) != k) continue;
      for (std::size_t cm = 0; cm < (1u << c); ++cm) {
        if (static_cast<std::size_t>(__builtin_popcount(cm)) != k) continue;
        IntMatrix sub;
        for (std::size_t i = 0; i < r; ++i) {
          if (!(rm >> i & 1)) continue;
          IntVec row;
          for (std::size_t j = 0; j < c; ++j)
            if (cm >> j & 1) row.push_back(m[i][j]);
          sub.push_back(row);
        }
        g = gcd(g, determinant(sub));
      }
    }
    if (g == 0) break;
    dk.push_back(g);
  }
  return dk;
}

}  // namespace

TEST(Rational, CanonicalForm) {
  Rational r = parse_rational("6/-4");
  EXPECT_EQ(to_string(r), "-3/2");
  EXPECT_EQ(to_string(parse_rational("10/5")), "2");
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("x"), Error);
}

TEST(PrimitiveStep, Examples) {
  EXPECT_EQ(primitive_step(to_intvec({2, 4})), to_intvec({1, 2}));
  EXPECT_EQ(primitive_step(to_intvec({3, -6, 9})), to_intvec({1, -2, 3}));
  try {
    primitive_step(to_intvec({0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroVector);
  }
}

TEST(Smoothness, VertexExamples) {
  auto tri = poly({{0, 0}, {1, 0}, {0, 1}});
  EXPECT_TRUE(smooth_at_vertex(tri, make_point({0, 0})));
  auto bad = poly({{0, 0}, {2, 0}, {1, 2}});
  EXPECT_FALSE(smooth_at_vertex(bad, make_point({0, 0})));
  // 2x2 determinant oracle for the steps (1,0), (1,2)
  EXPECT_EQ(vertex_cone_index(bad, bad.find_vertex(make_point({0, 0}))), 2);
  auto cube = quadrilateral_prism();
  EXPECT_TRUE(smooth_at_vertex(cube, make_point({0, 0, 0})));
  try {
    smooth_at_vertex(tri, make_point({1, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAVertex);
  }
}

TEST(Smoothness, PolytopeExamples) {
  EXPECT_TRUE(is_smooth(simplex_polytope(3)));
  EXPECT_TRUE(is_smooth(poly({{0, 0}, {2, 0}, {0, 2}})));
  auto p = poly({{0, 0}, {1, 0}, {0, 2}});
  EXPECT_FALSE(is_smooth(p));
  EXPECT_EQ(vertex_cone_index(p, p.find_vertex(make_point({1, 0}))), 2);
}

TEST(Smoothness, LowerDimensionalInAmbient) {
  // triangle in R^3 evaluated in its own span lattice
  auto t = poly({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}});
  EXPECT_TRUE(is_smooth(t));
  auto t2 = poly({{0, 0, 0}, {1, 1, 0}, {0, 1, 1}});
  EXPECT_TRUE(is_smooth(t2));
  auto t3 = poly({{0, 0, 0}, {2, 0, 0}, {1, 2, 0}});
  EXPECT_FALSE(is_smooth(t3));
}

TEST(Truncate, Examples) {
  auto sq = unit_square();
  auto pent = truncate_halfspace(sq, to_intvec({1, 1}), rat(1, 2));
  std::vector<Point> expect{make_point({0, 1}, 2), make_point({0, 2}, 2), make_point({1, 0}, 2),
                            make_point({2, 0}, 2), make_point({2, 2}, 2)};
  EXPECT_EQ(pent.vertices(), expect);
  EXPECT_EQ(pent.faces_of_dim(1).size(), 5u);
  EXPECT_EQ(pent.scale(), 2);
  auto same = truncate_halfspace(sq, to_intvec({1, 0}), 0);
  EXPECT_TRUE(same.same_geometry(sq));
  try {
    truncate_halfspace(sq, to_intvec({1, 0}), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyResult);
  }
}

TEST(Truncate, IdempotentAndValidInequality) {
  auto cube = quadrilateral_prism();
  auto a = truncate_halfspace(cube, to_intvec({1, 1, 1}), rat(1, 2));
  auto b = truncate_halfspace(a, to_intvec({1, 1, 1}), rat(1, 2));
  EXPECT_TRUE(a.same_geometry(b));
  EXPECT_EQ(a.vertices().size(), 10u);
  EXPECT_EQ(a.faces_of_dim(2).size(), 7u);
  for (auto& f : facet_presentation(a)) {
    auto c = truncate_halfspace(a, f.u, -f.a);
    EXPECT_TRUE(c.same_geometry(a));
  }
}

TEST(Scale, Examples) {
  auto seg = poly({{0}, {1}});
  EXPECT_TRUE(scale(seg, 1).same_geometry(seg));
  auto s2 = scale(seg, 2);
  EXPECT_EQ(s2.scale(), 2);
  EXPECT_TRUE(is_smooth(s2));
  EXPECT_FALSE(is_smooth(scale(poly({{0, 0}, {1, 0}, {0, 2}}), 3)));
}

TEST(Barycenter, Examples) {
  auto s = poly({{0, 0, 0, 0}, {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 1, 1, 0}, {1, 1, 1, 1}});
  EXPECT_EQ(barycenter(s), make_point({4, 3, 2, 1}, 5));
  EXPECT_EQ(barycenter(poly({{0, 0}, {1, 0}})), make_point({1, 0}, 2));
  EXPECT_EQ(barycenter(poly({{0, 0}, {1, 0}, {0, 1}})), make_point({1, 1}, 3));
  try {
    barycenter(unit_square());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotASimplex);
  }
}

TEST(SmithNormalForm, Examples) {
  IntMatrix id{{1, 0}, {0, 1}};
  EXPECT_TRUE(smith_normal_form(id).trivial());
  IntMatrix m{{-2, 1}, {1, -2}};
  auto r = smith_normal_form(m);
  EXPECT_EQ(r.free_rank, 0u);
  ASSERT_EQ(r.torsion.size(), 1u);
  EXPECT_EQ(r.torsion[0], 3);
  IntMatrix z{{0, 0, 0}, {0, 0, 0}};
  auto rz = smith_normal_form(z);
  EXPECT_EQ(rz.free_rank, 3u);
  EXPECT_TRUE(rz.torsion.empty());
}

TEST(SmithNormalForm, MatchesDeterminantalDivisorsExhaustiveSample) {
  // every matrix of size <= 3x3 with entries in [-3,3] is too many to enumerate
  // at 3x3 (7^9 = 40M); all of 1x1..2x3 are covered exhaustively, 3x3 by a
  // fixed-seed sample of 20000.
  auto check = [](const IntMatrix& m, std::size_t cols) {
    auto snf = smith_normal_form(m, cols);
    auto dk = determinantal_divisors(m);
    std::vector<Integer> inv;
    Integer prev = 1;
    for (auto& d : dk) {
      inv.push_back(d / prev);
      prev = d;
    }
    std::vector<Integer> tors;
    for (auto& x : inv)
      if (x >= 2) tors.push_back(x);
    ASSERT_EQ(snf.free_rank, cols - dk.size());
    ASSERT_EQ(snf.torsion, tors);
  };
  for (std::size_t r = 1; r <= 2; ++r)
    for (std::size_t c = 1; c <= 3; ++c) {
      std::size_t n = r * c, total = 1;
      for (std::size_t i = 0; i < n; ++i) total *= 7;
      for (std::size_t code = 0; code < total; ++code) {
        IntMatrix m(r, IntVec(c));
        std::size_t x = code;
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < c; ++j) {
            m[i][j] = static_cast<long>(x % 7) - 3;
            x /= 7;
          }
        check(m, c);
      }
    }
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> ent(-3, 3);
  for (int t = 0; t < 20000; ++t) {
    IntMatrix m(3, IntVec(3));
    for (auto& row : m)
      for (auto& x : row) x = ent(rng);
    check(m, 3);
  }
}

TEST(SparseCokernel, AgreesWithDense) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> ent(-2, 2), sz(1, 7), coin(0, 3);
  for (int t = 0; t < 500; ++t) {
    std::size_t r = sz(rng), c = sz(rng);
    IntMatrix m(r, IntVec(c, Integer(0)));
    SparseRelations sp;
    sp.ncols = c;
    for (std::size_t i = 0; i < r; ++i) {
      sp.rows.emplace_back();
      for (std::size_t j = 0; j < c; ++j) {
        if (coin(rng) != 0) continue;
        int v = ent(rng);
        m[i][j] = v;
        if (v) sp.rows.back().push_back({static_cast<std::uint32_t>(j), v});
      }
    }
    ASSERT_EQ(sparse_cokernel(sp), smith_normal_form(m, c));
  }
}

TEST(FacetPresentation, Examples) {
  auto sq = facet_presentation(unit_square());
  FacetData expect{{to_intvec({1, 0}), 0}, {to_intvec({0, 1}), 0}, {to_intvec({-1, 0}), 1}, {to_intvec({0, -1}), 1}};
  EXPECT_EQ(sq, expect);
  auto tri = facet_presentation(poly({{0, 0}, {1, 0}, {0, 1}}));
  FacetData et{{to_intvec({1, 0}), 0}, {to_intvec({0, 1}), 0}, {to_intvec({-1, -1}), 1}};
  EXPECT_EQ(tri, et);
  auto seg = facet_presentation(poly({{0}, {1}}));
  FacetData es{{to_intvec({1}), 0}, {to_intvec({-1}), 1}};
  EXPECT_EQ(seg, es);
  try {
    facet_presentation(poly({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegeneratePolytope);
  }
}

TEST(Properties, RoundtripAndScaleInvariance) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> c(-3, 3), npts(4, 9);
  for (int t = 0; t < 60; ++t) {
    std::vector<Point> pts;
    int n = npts(rng);
    for (int i = 0; i < n; ++i) pts.push_back(make_point({c(rng), c(rng), c(rng)}));
    auto P = LatticePolytope::hull(pts);
    if (P.dim() < 3) continue;
    auto back = vertices_from_facets(facet_presentation(P), 3);
    EXPECT_EQ(back, P.vertices());
    bool sm = is_smooth(P);
    for (long m = 1; m <= 5; ++m) EXPECT_EQ(is_smooth(scale(P, m)), sm);
    for (std::size_t v = 0; v < P.vertices().size(); ++v)
      if (smooth_at_vertex_index(P, static_cast<int>(v)))
        EXPECT_EQ(static_cast<int>(P.neighbors()[v].size()), P.dim());
  }
}

TEST(ReferenceShapes, FVectors) {
  EXPECT_EQ(truncated_octahedron().f_vector(), (std::vector<std::size_t>{24, 36, 14}));
  EXPECT_EQ(hexagonal_prism().f_vector(), (std::vector<std::size_t>{12, 18, 8}));
  EXPECT_EQ(associahedron3().f_vector(), (std::vector<std::size_t>{14, 21, 9}));
  EXPECT_EQ(quadrilateral_prism().f_vector(), (std::vector<std::size_t>{8, 12, 6}));
  EXPECT_TRUE(isomorphic(truncated_octahedron(), truncated_octahedron()));
  EXPECT_FALSE(isomorphic(truncated_octahedron(), hexagonal_prism()));
  // a cube sheared by a unimodular map is the same combinatorial type
  std::vector<Point> sheared;
  for (long x : {0L, 1L})
    for (long y : {0L, 1L})
      for (long z : {0L, 1L}) sheared.push_back(make_point({x + 2 * y, y, z + x}));
  EXPECT_TRUE(isomorphic(LatticePolytope::hull(sheared), quadrilateral_prism()));
  EXPECT_FALSE(isomorphic(triangular_prism(), quadrilateral_prism()));
}

TEST(Hull, DropsInteriorPointsAndKeepsFaceLatticeClosed) {
  auto P = poly({{0, 0}, {2, 0}, {0, 2}, {2, 2}, {1, 1}, {1, 0}});
  EXPECT_EQ(P.vertices().size(), 4u);
  for (std::size_t i = 0; i < P.faces().size(); ++i)
    for (std::size_t j = 0; j < P.faces().size(); ++j) {
      std::vector<int> inter;
      std::set_intersection(P.faces()[i].verts.begin(), P.faces()[i].verts.end(), P.faces()[j].verts.begin(),
                            P.faces()[j].verts.end(), std::back_inserter(inter));
      if (!inter.empty()) EXPECT_GE(P.find_face(inter), 0);
    }
  EXPECT_THROW(LatticePolytope::hull({make_point({1, 2}, 3)}, 1), Error);
}
