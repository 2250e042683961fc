#include "polylc/freudenthal.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "polylc/errors.hpp"

namespace polylc {

FSimplex FSimplex::maximal(const Vec4& base, const std::array<std::uint8_t, 4>& perm) {
  FSimplex s;
  s.base = base;
  s.perm = perm;
  s.subset = 0x1f;
  return s;
}

Vec4 FSimplex::chain(int j) const {
  Vec4 v = base;
  for (int i = 0; i < j; ++i) v[perm[i]] += 1;
  return v;
}

std::vector<Vec4> FSimplex::vertices() const {
  std::vector<Vec4> out;
  for (int j = 0; j < 5; ++j)
    if (subset >> j & 1) out.push_back(chain(j));
  return out;
}

FSimplex FSimplex::from_vertices(std::vector<Vec4> verts) {
  if (verts.empty() || verts.size() > 5) throw Error(ErrorCode::InvalidArgument, "bad simplex vertex count");
  auto sum = [](const Vec4& v) { return v[0] + v[1] + v[2] + v[3]; };
  std::sort(verts.begin(), verts.end(), [&](const Vec4& a, const Vec4& b) {
    return sum(a) != sum(b) ? sum(a) < sum(b) : a < b;
  });
  FSimplex s;
  s.base = verts[0];
  std::vector<std::uint8_t> order;
  std::uint8_t sub = 1;
  bool used[4] = {false, false, false, false};
  for (std::size_t i = 1; i < verts.size(); ++i) {
    for (int c = 0; c < 4; ++c) {
      int d = verts[i][c] - verts[i - 1][c];
      if (d < 0 || d > 1 || (d == 1 && used[c]))
        throw Error(ErrorCode::InvalidArgument, "vertices do not form a Freudenthal chain");
      if (d == 1) {
        used[c] = true;
        order.push_back(static_cast<std::uint8_t>(c));
      }
    }
    if (sum(verts[i]) == sum(verts[i - 1])) throw Error(ErrorCode::InvalidArgument, "repeated vertex");
    sub |= static_cast<std::uint8_t>(1u << order.size());
  }
  for (int c = 0; c < 4; ++c)
    if (!used[c]) order.push_back(static_cast<std::uint8_t>(c));
  for (int i = 0; i < 4; ++i) s.perm[i] = order[i];
  s.subset = sub;
  return s;
}

FSimplex FSimplex::canonical() const {
  if (is_maximal()) return *this;
  return from_vertices(vertices());
}

FSimplex FSimplex::face(std::uint8_t sub) const {
  FSimplex f = *this;
  f.subset = sub;
  return f.canonical();
}

bool FSimplex::contains(const FSimplex& o) const {
  auto mine = vertices();
  for (auto& v : o.vertices())
    if (std::find(mine.begin(), mine.end(), v) == mine.end()) return false;
  return true;
}

std::string FSimplex::key() const {
  FSimplex c = canonical();
  std::string s;
  for (int i = 0; i < 4; ++i) s += (i ? "," : "") + std::to_string(c.base[i]);
  s += ";";
  for (int i = 0; i < 4; ++i) s += static_cast<char>('0' + c.perm[i]);
  s += ";" + std::to_string(static_cast<int>(c.subset));
  return s;
}

bool FSimplex::operator<(const FSimplex& o) const {
  if (base != o.base) return base < o.base;
  if (perm != o.perm) return perm < o.perm;
  return subset < o.subset;
}

std::size_t FSimplexHash::operator()(const FSimplex& s) const {
  std::size_t h = Vec4Hash{}(s.base);
  hash_mix(h, static_cast<std::size_t>(s.perm[0] | s.perm[1] << 2 | s.perm[2] << 4 | s.perm[3] << 6 | s.subset << 8));
  return h;
}

Vec4 barycenter5(const FSimplex& m) {
  Vec4 b;
  for (int i = 0; i < 4; ++i) b[i] = 5 * m.base[i];
  for (int j = 0; j < 4; ++j) b[m.perm[j]] += 4 - j;
  return b;
}

Rational simplex_volume(const FSimplex& s) {
  auto v = s.vertices();
  if (v.size() != 5) return 0;
  IntMatrix m;
  for (int i = 1; i < 5; ++i) {
    IntVec row;
    for (int c = 0; c < 4; ++c) row.emplace_back(v[i][c] - v[0][c]);
    m.push_back(row);
  }
  Integer d = abs(determinant(m));
  return Rational(d, 24);
}

std::vector<FSimplex> maximal_cofaces(const FSimplex& s) {
  auto V = s.vertices();
  std::vector<std::vector<std::uint8_t>> blocks;
  bool inT[4] = {false, false, false, false};
  for (std::size_t i = 1; i < V.size(); ++i) {
    std::vector<std::uint8_t> b;
    for (int c = 0; c < 4; ++c)
      if (V[i][c] != V[i - 1][c]) {
        b.push_back(static_cast<std::uint8_t>(c));
        inT[c] = true;
      }
    blocks.push_back(b);
  }
  std::vector<std::uint8_t> rest;
  for (int c = 0; c < 4; ++c)
    if (!inT[c]) rest.push_back(static_cast<std::uint8_t>(c));
  std::vector<FSimplex> out;
  const int nr = static_cast<int>(rest.size());
  for (int mask = 0; mask < (1 << nr); ++mask) {
    std::vector<std::uint8_t> A, B;
    for (int i = 0; i < nr; ++i) (mask >> i & 1 ? A : B).push_back(rest[i]);
    Vec4 base = V[0];
    for (auto c : A) base[c] -= 1;
    // all orderings: perm(A) + perm(block_1) + ... + perm(B)
    std::vector<std::vector<std::uint8_t>> parts{A};
    for (auto& b : blocks) parts.push_back(b);
    parts.push_back(B);
    for (auto& p : parts) std::sort(p.begin(), p.end());
    std::vector<std::uint8_t> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (k == parts.size()) {
        std::array<std::uint8_t, 4> perm;
        for (int i = 0; i < 4; ++i) perm[i] = cur[i];
        out.push_back(FSimplex::maximal(base, perm));
        return;
      }
      auto p = parts[k];
      do {
        std::size_t before = cur.size();
        cur.insert(cur.end(), p.begin(), p.end());
        rec(k + 1);
        cur.resize(before);
      } while (std::next_permutation(p.begin(), p.end()));
    };
    rec(0);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Box::contains(const Vec4& v) const {
  for (int i = 0; i < 4; ++i)
    if (v[i] < r[i].first || v[i] > r[i].second) return false;
  return true;
}

Box Box::uniform(int a, int b) {
  Box x;
  for (auto& p : x.r) p = {a, b};
  return x;
}

bool FComplex::contains(const FSimplex& s) const { return incidence.count(s.canonical()) > 0; }

Point FComplex::barycenter(std::uint32_t idx) const {
  auto it = barycenter_override.find(idx);
  if (it != barycenter_override.end()) return it->second;
  Vec4 b = barycenter5(maximal[idx]);
  return make_point({b[0], b[1], b[2], b[3]}, 5);
}

int FComplex::index_of(const FSimplex& m) const {
  auto it = std::lower_bound(maximal.begin(), maximal.end(), m);
  if (it == maximal.end() || !(*it == m)) return -1;
  return static_cast<int>(it - maximal.begin());
}

FComplex generate(const Box& box) {
  FComplex F;
  F.box = box;
  std::array<std::uint8_t, 4> perm{0, 1, 2, 3};
  std::vector<std::array<std::uint8_t, 4>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  for (int i = 0; i < 4; ++i)
    if (box.r[i].second - box.r[i].first < 1) return F;
  Vec4 b;
  for (b[0] = box.r[0].first; b[0] < box.r[0].second; ++b[0])
    for (b[1] = box.r[1].first; b[1] < box.r[1].second; ++b[1])
      for (b[2] = box.r[2].first; b[2] < box.r[2].second; ++b[2])
        for (b[3] = box.r[3].first; b[3] < box.r[3].second; ++b[3])
          for (auto& p : perms) F.maximal.push_back(FSimplex::maximal(b, p));
  std::sort(F.maximal.begin(), F.maximal.end());
  for (std::uint32_t i = 0; i < F.maximal.size(); ++i)
    for (std::uint8_t sub = 1; sub < 32; ++sub) F.incidence[F.maximal[i].face(sub)].push_back(i);
  return F;
}

std::vector<std::uint32_t> cofaces(const FComplex& F, const FSimplex& s) {
  auto it = F.incidence.find(s.canonical());
  if (it == F.incidence.end()) throw Error(ErrorCode::NotInComplex, "simplex " + s.key() + " not in complex");
  return it->second;
}

LatticePolytope dual_polytope(const FSimplex& s, std::vector<FSimplex>* vertex_simplices) {
  FSimplex c = s.canonical();
  auto cof = maximal_cofaces(c);
  std::map<FSimplex, std::vector<int>> sup;
  auto cverts = c.vertices();
  for (std::size_t k = 0; k < cof.size(); ++k) {
    std::uint8_t need = 0;
    for (int j = 0; j < 5; ++j) {
      Vec4 v = cof[k].chain(j);
      if (std::find(cverts.begin(), cverts.end(), v) != cverts.end()) need |= static_cast<std::uint8_t>(1u << j);
    }
    for (std::uint8_t sub = 1; sub < 32; ++sub)
      if ((sub & need) == need) sup[cof[k].face(sub)].push_back(static_cast<int>(k));
  }
  std::vector<Face> faces;
  for (auto& [sim, vs] : sup) faces.push_back(Face{4 - sim.dim(), vs});
  std::vector<Point> verts;
  for (auto& m : cof) {
    Vec4 b = barycenter5(m);
    verts.push_back(make_point({b[0], b[1], b[2], b[3]}, 5));
  }
  if (vertex_simplices) *vertex_simplices = cof;
  return LatticePolytope::with_faces(verts, 5, faces);
}

DualCell dual_cell(const FComplex& F, const FSimplex& s) {
  FSimplex c = s.canonical();
  std::vector<FSimplex> cof;
  LatticePolytope P = dual_polytope(c, &cof);
  std::vector<std::uint32_t> idx;
  for (auto& m : cof) {
    int i = F.index_of(m);
    if (i < 0) throw Error(ErrorCode::IncompleteStar, "star of " + c.key() + " leaves the box");
    idx.push_back(static_cast<std::uint32_t>(i));
  }
  std::vector<Point> verts;
  for (auto i : idx) verts.push_back(F.barycenter(i));
  std::vector<Face> faces = P.faces();
  DualCell d;
  d.polytope = LatticePolytope::with_faces(verts, 5, faces);
  d.provenance = c;
  d.vertex_simplices = idx;
  return d;
}

TilingReport verify_dual_tiling(const FComplex& F, const Box& region) {
  TilingReport rep;
  std::set<FSimplex> sims;
  Vec4 b;
  std::array<std::uint8_t, 4> perm{0, 1, 2, 3};
  std::vector<std::array<std::uint8_t, 4>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  for (b[0] = region.r[0].first; b[0] < region.r[0].second; ++b[0])
    for (b[1] = region.r[1].first; b[1] < region.r[1].second; ++b[1])
      for (b[2] = region.r[2].first; b[2] < region.r[2].second; ++b[2])
        for (b[3] = region.r[3].first; b[3] < region.r[3].second; ++b[3])
          for (auto& p : perms)
            for (std::uint8_t sub = 1; sub < 32; ++sub) sims.insert(FSimplex::maximal(b, p).face(sub));
  for (auto& s : sims) {
    DualCell d = dual_cell(F, s);  // IncompleteStar propagates
    ++rep.cells_checked;
    const auto& V = d.polytope.vertices();
    auto fail = [&](const std::string& why) {
      rep.pass = false;
      rep.failures.push_back(s.key() + ": " + why);
    };
    LatticePolytope H;
    try {
      H = LatticePolytope::hull(V, 5);
    } catch (const Error& e) {
      fail(std::string("hull failed: ") + e.what());
      continue;
    }
    if (H.dim() != 4 - s.dim()) {
      fail("dimension " + std::to_string(H.dim()) + " != " + std::to_string(4 - s.dim()));
      continue;
    }
    if (H.vertices().size() != V.size()) {
      fail("only " + std::to_string(H.vertices().size()) + " of " + std::to_string(V.size()) + " barycenters are vertices");
      continue;
    }
    std::vector<int> to_comb(H.vertices().size());
    for (std::size_t i = 0; i < H.vertices().size(); ++i) to_comb[i] = d.polytope.find_vertex(H.vertices()[i]);
    std::set<std::pair<int, std::vector<int>>> geo, comb;
    for (auto& f : H.faces()) {
      std::vector<int> vs;
      for (int v : f.verts) vs.push_back(to_comb[v]);
      std::sort(vs.begin(), vs.end());
      geo.insert({f.dim, vs});
    }
    for (auto& f : d.polytope.faces()) comb.insert({f.dim, f.verts});
    if (geo != comb) fail("hull face lattice differs from the coface poset");
  }
  return rep;
}

}  // namespace polylc
