#pragma once
#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "polylc/polytope.hpp"

namespace polylc {

using Vec4 = std::array<int, 4>;

struct Vec4Hash {
  std::size_t operator()(const Vec4& v) const {
    std::size_t h = 0;
    for (int x : v) hash_mix(h, std::hash<int>{}(x));
    return h;
  }
};

// A simplex of the Freudenthal decomposition: the chain c_0 = base,
// c_j = c_{j-1} + e_{perm[j-1]}, restricted to the chain positions in `subset`.
struct FSimplex {
  Vec4 base{0, 0, 0, 0};
  std::array<std::uint8_t, 4> perm{0, 1, 2, 3};
  std::uint8_t subset = 0x1f;

  static FSimplex maximal(const Vec4& base, const std::array<std::uint8_t, 4>& perm);
  static FSimplex from_vertices(std::vector<Vec4> verts);  // throws InvalidArgument unless a chain

  int dim() const { return __builtin_popcount(subset) - 1; }
  bool is_maximal() const { return subset == 0x1f; }
  Vec4 chain(int j) const;
  std::vector<Vec4> vertices() const;
  FSimplex canonical() const;
  FSimplex face(std::uint8_t sub) const;  // sub ⊆ subset, positions in this chain
  bool contains(const FSimplex& other) const;
  std::string key() const;

  bool operator==(const FSimplex& o) const { return base == o.base && perm == o.perm && subset == o.subset; }
  bool operator<(const FSimplex& o) const;
};

struct FSimplexHash {
  std::size_t operator()(const FSimplex& s) const;
};

// barycenter of a maximal simplex times 5
Vec4 barycenter5(const FSimplex& maximal);
Rational simplex_volume(const FSimplex& s);

// Maximal simplices of the unbounded decomposition containing s, sorted.
std::vector<FSimplex> maximal_cofaces(const FSimplex& s);

struct Box {
  std::array<std::pair<int, int>, 4> r{};  // inclusive coordinate ranges
  bool contains(const Vec4& v) const;
  static Box uniform(int a, int b);
};

class FComplex {
 public:
  Box box;
  std::vector<FSimplex> maximal;
  // every face (canonical form) -> indices into `maximal`
  std::unordered_map<FSimplex, std::vector<std::uint32_t>, FSimplexHash> incidence;
  // injected barycenter changes, for defect tests
  std::unordered_map<std::uint32_t, Point> barycenter_override;

  bool contains(const FSimplex& s) const;
  Point barycenter(std::uint32_t maximal_index) const;
  int index_of(const FSimplex& maximal_simplex) const;
};

FComplex generate(const Box& box);
std::vector<std::uint32_t> cofaces(const FComplex& F, const FSimplex& s);

struct DualCell {
  LatticePolytope polytope;  // scale 5
  FSimplex provenance;
  std::vector<std::uint32_t> vertex_simplices;  // maximal simplex per vertex
};
DualCell dual_cell(const FComplex& F, const FSimplex& s);
// Dual cell in the unbounded decomposition; vertices are the barycenters of
// maximal_cofaces(s) in that order.
LatticePolytope dual_polytope(const FSimplex& s, std::vector<FSimplex>* vertex_simplices = nullptr);

struct TilingReport {
  bool pass = true;
  std::size_t cells_checked = 0;
  std::vector<std::string> failures;
};
TilingReport verify_dual_tiling(const FComplex& F, const Box& region);

}  // namespace polylc
