#include "polylc/complex.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "polylc/errors.hpp"

namespace polylc {

Point AffineMap::apply(const Point& x) const {
  Point y = b;
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      if (A[i][j] != 0) y[i] += A[i][j] * x[j];
  return y;
}

AffineMap AffineMap::identity(std::size_t d) {
  AffineMap m;
  m.A.assign(d, std::vector<Rational>(d, Rational(0)));
  for (std::size_t i = 0; i < d; ++i) m.A[i][i] = 1;
  m.b.assign(d, Rational(0));
  return m;
}

AffineMap compose(const AffineMap& outer, const AffineMap& inner) {
  AffineMap r;
  r.A = multiply(outer.A, inner.A);
  r.b = outer.apply(inner.b);
  return r;
}

std::optional<AffineMap> affine_from_points(const std::vector<Point>& src, const std::vector<Point>& dst) {
  if (src.empty() || src.size() != dst.size()) return std::nullopt;
  const std::size_t ds = src[0].size(), dt = dst[0].size();
  if (ds == 0) {
    AffineMap m;
    m.A.assign(dt, {});
    m.b = dst[0];
    return src.size() == 1 ? std::optional<AffineMap>(m) : std::nullopt;
  }
  // independent source directions, extended by unit vectors to a basis
  RatMatrix D, E;
  for (std::size_t i = 1; i < src.size(); ++i) {
    RatMatrix trial = D;
    trial.push_back(src[i] - src[0]);
    if (rank(trial) > D.size()) {
      D = trial;
      E.push_back(dst[i] - dst[0]);
    }
  }
  for (std::size_t j = 0; j < ds && D.size() < ds; ++j) {
    RatMatrix trial = D;
    std::vector<Rational> e(ds, Rational(0));
    e[j] = 1;
    trial.push_back(e);
    if (rank(trial) > D.size()) {
      D = trial;
      E.push_back(std::vector<Rational>(dt, Rational(0)));
    }
  }
  // A D^T = E^T  ->  A = E^T (D^T)^{-1}
  RatMatrix A = multiply(transpose(E), inverse(transpose(D)));
  AffineMap m;
  m.A = A;
  Point As0(dt, Rational(0));
  for (std::size_t i = 0; i < dt; ++i)
    for (std::size_t j = 0; j < ds; ++j) As0[i] += A[i][j] * src[0][j];
  m.b = dst[0] - As0;
  for (std::size_t i = 0; i < src.size(); ++i)
    if (m.apply(src[i]) != dst[i]) return std::nullopt;
  return m;
}

std::size_t PolyComplex::TripleHash::operator()(const std::tuple<const void*, const void*, const void*>& t) const {
  std::size_t h = std::hash<const void*>{}(std::get<0>(t));
  hash_mix(h, std::hash<const void*>{}(std::get<1>(t)));
  hash_mix(h, std::hash<const void*>{}(std::get<2>(t)));
  return h;
}

int PolyComplex::add_cell(const std::string& id, PolytopePtr p) {
  if (index_.count(id)) throw Error(ErrorCode::InvalidArgument, "duplicate cell id " + id);
  int i = static_cast<int>(cells_.size());
  index_.emplace(id, i);
  cells_.push_back(Cell{id, std::move(p)});
  in_.emplace_back();
  out_.emplace_back();
  return i;
}

int PolyComplex::add_morphism(int from, int to, MapPtr m) {
  if (from < 0 || to < 0 || from >= static_cast<int>(cells_.size()) || to >= static_cast<int>(cells_.size()))
    throw Error(ErrorCode::InvalidArgument, "morphism endpoint out of range");
  int k = static_cast<int>(morphs_.size());
  auto key = std::make_tuple(static_cast<const void*>(m.get()), static_cast<const void*>(cells_[from].poly.get()),
                             static_cast<const void*>(cells_[to].poly.get()));
  auto it = vmap_cache_.find(key);
  VertexMap vm;
  if (it != vmap_cache_.end()) {
    vm = it->second;
  } else {
    auto v = std::make_shared<std::vector<int>>();
    const auto& Y = *cells_[from].poly;
    const auto& X = *cells_[to].poly;
    bool ok = true;
    for (auto& p : Y.vertices()) {
      if (p.size() != (m->A.empty() ? 0 : m->A[0].size()) || m->A.size() != X.ambient_dim()) {
        ok = false;
        break;
      }
      int j = X.find_vertex(m->apply(p));
      if (j < 0) {
        ok = false;
        break;
      }
      v->push_back(j);
    }
    if (!ok) v->clear();
    vm = v;
    vmap_cache_.emplace(key, vm);
  }
  morphs_.push_back(Morphism{from, to, std::move(m)});
  vmaps_.push_back(vm);
  out_[from].push_back(k);
  in_[to].push_back(k);
  return k;
}

int PolyComplex::find(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

std::vector<int> PolyComplex::maximal_cells() const {
  std::vector<int> r;
  for (std::size_t i = 0; i < cells_.size(); ++i)
    if (out_[i].empty()) r.push_back(static_cast<int>(i));
  return r;
}

std::vector<int> PolyComplex::cells_of_dim(int d) const {
  std::vector<int> r;
  for (std::size_t i = 0; i < cells_.size(); ++i)
    if (cells_[i].dim() == d) r.push_back(static_cast<int>(i));
  return r;
}

std::vector<int> PolyComplex::up_set(int c) const {
  std::vector<int> seen{c};
  std::deque<int> q{c};
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (int k : out_[x]) {
      int y = morphs_[k].to;
      if (std::find(seen.begin(), seen.end(), y) == seen.end()) {
        seen.push_back(y);
        q.push_back(y);
      }
    }
  }
  std::sort(seen.begin(), seen.end());
  return seen;
}

std::vector<int> PolyComplex::maximal_cells_containing(int c) const {
  std::vector<int> r;
  for (int x : up_set(c))
    if (out_[x].empty()) r.push_back(x);
  return r;
}

std::vector<std::pair<int, std::vector<int>>> PolyComplex::face_cells(int c) const {
  std::vector<std::pair<int, std::vector<int>>> out;
  std::vector<int> id(cells_[c].poly->vertices().size());
  for (std::size_t i = 0; i < id.size(); ++i) id[i] = static_cast<int>(i);
  out.push_back({c, id});
  std::set<int> seen{c};
  // BFS downward composing vertex maps
  for (std::size_t head = 0; head < out.size(); ++head) {
    int x = out[head].first;
    std::vector<int> xm = out[head].second;
    for (int k : in_[x]) {
      int y = morphs_[k].from;
      if (seen.count(y)) continue;
      const auto& vm = *vmaps_[k];
      if (vm.empty()) continue;
      std::vector<int> ym;
      for (int v : vm) ym.push_back(xm[v]);
      seen.insert(y);
      out.push_back({y, ym});
    }
  }
  for (auto& [cell, vs] : out) {
    (void)cell;
    std::sort(vs.begin(), vs.end());
  }
  return out;
}

void ValidationReport::add(const std::string& kind, const std::string& witness) {
  pass = false;
  if (violations.size() < max_listed) violations.push_back(Violation{kind, witness});
}

namespace {

std::string verts_str(const LatticePolytope& P, const std::vector<int>& vs) {
  std::string s = "{";
  for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? " " : "") + to_string(P.vertices()[vs[i]]);
  return s + "}";
}

bool lattice_embedding(const LatticePolytope& Y, const AffineMap& f, const LatticePolytope& X) {
  const auto& V = Y.vertices();
  if (V.size() <= 1) return true;
  const std::size_t dy = Y.ambient_dim(), dx = X.ambient_dim();
  IntMatrix rows;
  for (std::size_t i = 1; i < V.size(); ++i) {
    IntVec r(dy);
    for (std::size_t j = 0; j < dy; ++j) {
      Rational y = (V[i][j] - V[0][j]) * Y.scale();
      r[j] = y.get_num();
    }
    rows.push_back(r);
  }
  IntMatrix W = saturation(rows, dy);
  IntMatrix img;
  for (auto& w : W) {
    IntVec r(dx);
    for (std::size_t i = 0; i < dx; ++i) {
      Rational s = 0;
      for (std::size_t j = 0; j < dy; ++j) s += f.A[i][j] * Rational(w[j]);
      s = s * X.scale() / Rational(Y.scale());
      if (s.get_den() != 1) return false;
      r[i] = s.get_num();
    }
    img.push_back(r);
  }
  return is_saturated_basis(img);
}

}  // namespace

ValidationReport validate(const PolyComplex& C) {
  ValidationReport rep;
  const auto& cells = C.cells();
  const auto& M = C.morphisms();
  // per-morphism checks, memoized on (map, source polytope, target polytope)
  std::map<std::tuple<const void*, const void*, const void*>, std::string> memo;
  std::set<std::pair<int, int>> pairs;
  for (std::size_t k = 0; k < M.size(); ++k) {
    const auto& m = M[k];
    const auto& Y = *cells[m.from].poly;
    const auto& X = *cells[m.to].poly;
    if (!pairs.insert({m.from, m.to}).second)
      rep.add("Uniqueness", "parallel morphisms " + cells[m.from].id + " -> " + cells[m.to].id);
    auto key = std::make_tuple(static_cast<const void*>(m.map.get()), static_cast<const void*>(&Y),
                               static_cast<const void*>(&X));
    auto it = memo.find(key);
    std::string err;
    if (it != memo.end()) {
      err = it->second;
    } else {
      const auto& vm = C.vertex_map(static_cast<int>(k));
      if (vm.empty()) {
        err = "image of a vertex is not a vertex of the target";
      } else {
        std::vector<int> s = vm;
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
          err = "map is not injective on vertices";
        } else {
          int fi = X.find_face(s);
          if (fi < 0 || X.faces()[fi].dim != Y.dim())
            err = "image " + verts_str(X, s) + " is not a face of the target";
          else if (!lattice_embedding(Y, *m.map, X))
            err = "not a lattice isomorphism onto the image span";
        }
      }
      memo.emplace(key, err);
    }
    if (!err.empty()) rep.add("FaceInclusion", cells[m.from].id + " -> " + cells[m.to].id + ": " + err);
  }
  // facet coverage and two-step consistency, per cell
  for (std::size_t x = 0; x < cells.size(); ++x) {
    const auto& X = *cells[x].poly;
    std::map<std::vector<int>, std::pair<int, std::vector<int>>> by_face;  // image -> (cell, vertex map)
    std::map<int, std::vector<int>> by_cell;                               // cell -> vertex map
    bool direct_conflict = false;
    auto record = [&](int z, const std::vector<int>& zm, bool direct) {
      std::vector<int> key = zm;
      std::sort(key.begin(), key.end());
      auto [it, fresh] = by_face.emplace(key, std::make_pair(z, zm));
      if (!fresh && it->second.first != z) {
        rep.add("Uniqueness", "face " + verts_str(X, key) + " of " + cells[x].id + " is both " +
                                  cells[it->second.first].id + " and " + cells[z].id);
        return;
      }
      auto [jt, fresh2] = by_cell.emplace(z, zm);
      if (!fresh2 && jt->second != zm) {
        std::vector<int> other = jt->second;
        std::sort(other.begin(), other.end());
        if (other != key)
          rep.add("Uniqueness", "two morphisms " + cells[z].id + " -> " + cells[x].id);
        else
          rep.add("Composition", "composite " + cells[z].id + " -> " + cells[x].id +
                                     (direct || direct_conflict ? " disagrees with the listed morphism" : " is path dependent"));
      }
    };
    for (int k : C.in_morphisms(static_cast<int>(x))) {
      const auto& vm = C.vertex_map(k);
      if (vm.empty()) continue;
      record(M[k].from, vm, true);
    }
    for (int k : C.in_morphisms(static_cast<int>(x))) {
      const auto& vm = C.vertex_map(k);
      if (vm.empty()) continue;
      int y = M[k].from;
      for (int k2 : C.in_morphisms(y)) {
        const auto& vm2 = C.vertex_map(k2);
        if (vm2.empty()) continue;
        std::vector<int> comp;
        for (int v : vm2) comp.push_back(vm[v]);
        record(M[k2].from, comp, false);
      }
    }
    if (X.dim() >= 1) {
      for (int fi : X.faces_of_dim(X.dim() - 1)) {
        const auto& f = X.faces()[fi];
        if (!by_face.count(f.verts)) rep.add("FaceClosure", "facet " + verts_str(X, f.verts) + " of " + cells[x].id + " has no cell");
      }
    }
  }
  return rep;
}

bool NerveComplex::is_simplex() const { return is_simplex_poset(poset, dim); }

bool is_simplex_poset(const FacePoset& P, int dim) {
  if (P.nverts != dim + 1 || dim < 0 || dim > 20) return false;
  if (P.faces.size() != (std::size_t{1} << P.nverts) - 1) return false;
  std::set<std::vector<int>> seen;
  for (auto& f : P.faces) {
    if (f.dim != static_cast<int>(f.verts.size()) - 1) return false;
    if (!seen.insert(f.verts).second) return false;
  }
  return true;
}

namespace {

bool is_polygon(const FacePoset& P) {
  if (P.nverts < 3) return false;
  std::vector<std::vector<int>> adj(P.nverts);
  std::size_t nedges = 0, ntop = 0;
  for (auto& f : P.faces) {
    if (f.dim == 1) {
      if (f.verts.size() != 2) return false;
      adj[f.verts[0]].push_back(f.verts[1]);
      adj[f.verts[1]].push_back(f.verts[0]);
      ++nedges;
    } else if (f.dim == 2) {
      if (static_cast<int>(f.verts.size()) != P.nverts) return false;
      ++ntop;
    } else if (f.dim != 0 || f.verts.size() != 1) {
      return false;
    }
  }
  if (ntop != 1 || nedges != static_cast<std::size_t>(P.nverts)) return false;
  for (auto& a : adj)
    if (a.size() != 2) return false;
  // single cycle
  int prev = -1, cur = 0, steps = 0;
  do {
    int nxt = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
    prev = cur;
    cur = nxt;
    ++steps;
  } while (cur != 0 && steps <= P.nverts);
  return steps == P.nverts;
}

const std::vector<std::pair<std::string, FacePoset>>& reference_posets() {
  static const std::vector<std::pair<std::string, FacePoset>> refs = [] {
    std::vector<std::pair<std::string, FacePoset>> r;
    r.push_back({"triangular_prism", face_poset(triangular_prism())});
    std::vector<Point> pyr{make_point({0, 0, 0}), make_point({1, 0, 0}), make_point({0, 1, 0}),
                           make_point({1, 1, 0}), make_point({0, 0, 1})};
    r.push_back({"square_pyramid", face_poset(LatticePolytope::hull(pyr))});
    r.push_back({"quadrilateral_prism", face_poset(quadrilateral_prism())});
    r.push_back({"hexagonal_prism", face_poset(hexagonal_prism())});
    r.push_back({"truncated_octahedron", face_poset(truncated_octahedron())});
    return r;
  }();
  return refs;
}

}  // namespace

std::string identify_shape(const FacePoset& P, int dim) {
  if (is_simplex_poset(P, dim)) {
    switch (dim) {
      case 0: return "point";
      case 1: return "segment";
      case 2: return "triangle";
      default: return "simplex" + std::to_string(dim);
    }
  }
  if (dim == 2 && is_polygon(P)) return P.nverts == 4 ? "quadrilateral" : "polygon" + std::to_string(P.nverts);
  for (auto& [name, ref] : reference_posets()) {
    if (ref.nverts != P.nverts || ref.faces.size() != P.faces.size() || ref.faces.back().dim != dim) continue;
    if (isomorphic(P, ref)) return name;
  }
  return "other";
}

bool is_pyramid_over(const FacePoset& P, const FacePoset& Q) {
  std::set<std::vector<int>> faces;
  for (auto& f : P.faces) faces.insert(f.verts);
  std::map<std::vector<int>, int> dims;
  for (auto& f : P.faces) dims[f.verts] = f.dim;
  for (int a = 0; a < P.nverts; ++a) {
    std::vector<int> base;
    for (int v = 0; v < P.nverts; ++v)
      if (v != a) base.push_back(v);
    if (!faces.count(base)) continue;
    bool ok = true;
    FacePoset B;
    B.nverts = P.nverts - 1;
    for (auto& f : P.faces) {
      bool has = std::binary_search(f.verts.begin(), f.verts.end(), a);
      if (!has) {
        std::vector<int> up = f.verts;
        up.insert(std::upper_bound(up.begin(), up.end(), a), a);
        auto it = dims.find(up);
        if (it == dims.end() || it->second != f.dim + 1) ok = false;
        Face g;
        g.dim = f.dim;
        for (int v : f.verts) g.verts.push_back(v > a ? v - 1 : v);
        B.faces.push_back(g);
      } else if (f.verts.size() > 1) {
        std::vector<int> down;
        for (int v : f.verts)
          if (v != a) down.push_back(v);
        auto it = dims.find(down);
        if (it == dims.end() || it->second != f.dim - 1) ok = false;
      }
      if (!ok) break;
    }
    if (!ok) continue;
    std::sort(B.faces.begin(), B.faces.end());
    if (B.nverts == Q.nverts && B.faces.size() == Q.faces.size() && isomorphic(B, Q)) return true;
  }
  return false;
}

NerveComplex nerve(const PolyComplex& C, int c) {
  if (c < 0 || c >= static_cast<int>(C.size())) throw Error(ErrorCode::NotInComplex, "cell index out of range");
  NerveComplex N;
  N.cell = c;
  auto up = C.up_set(c);
  N.vertices = C.maximal_cells_containing(c);
  N.dim = C.n - C.cell(c).dim();
  N.poset.nverts = static_cast<int>(N.vertices.size());
  std::set<std::vector<int>> seen;
  for (int h : up) {
    std::vector<int> s;
    for (int m : C.maximal_cells_containing(h))
      s.push_back(static_cast<int>(std::lower_bound(N.vertices.begin(), N.vertices.end(), m) - N.vertices.begin()));
    if (s.empty() || !seen.insert(s).second) continue;
    N.poset.faces.push_back(Face{C.n - C.cell(h).dim(), s});
  }
  std::sort(N.poset.faces.begin(), N.poset.faces.end());
  N.shape = identify_shape(N.poset, N.dim);
  return N;
}

NerveComplex nerve(const PolyComplex& C, const std::string& id) {
  int c = C.find(id);
  if (c < 0) throw Error(ErrorCode::NotInComplex, "no cell " + id);
  return nerve(C, c);
}

std::vector<std::vector<int>> containing_maximal_all(const PolyComplex& C) {
  const std::size_t N = C.size();
  std::vector<int> order(N);
  for (std::size_t i = 0; i < N; ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return C.cell(a).dim() > C.cell(b).dim(); });
  std::vector<std::vector<int>> S(N);
  for (int c : order) {
    if (C.is_maximal(c)) {
      S[c] = {c};
      continue;
    }
    std::vector<int> acc;
    for (int k : C.out_morphisms(c)) {
      const auto& t = S[C.morphisms()[k].to];
      acc.insert(acc.end(), t.begin(), t.end());
    }
    std::sort(acc.begin(), acc.end());
    acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
    S[c] = std::move(acc);
  }
  return S;
}

namespace {

void smooth_checks(const PolyComplex& C, CertificationReport& rep) {
  // combinatorial: nerve is a simplex of dimension n - dim
  auto S = containing_maximal_all(C);
  for (std::size_t c = 0; c < C.size(); ++c) {
    ++rep.cells_checked;
    int want = C.n - C.cell(static_cast<int>(c)).dim();
    if (static_cast<int>(S[c].size()) == want + 1 && want <= 1) continue;  // point / segment nerves
    // cheap rejection before building the poset
    if (static_cast<int>(S[c].size()) != want + 1 || want > 1) {
      NerveComplex N = nerve(C, static_cast<int>(c));
      if (!N.is_simplex()) {
        rep.pass = false;
        rep.witnesses.push_back(SmoothWitness{C.cell(static_cast<int>(c)).id, "CombinatorialSmoothness",
                                              "nerve is " + N.shape + " with " + std::to_string(N.vertices.size()) +
                                                  " vertices, expected a " + std::to_string(want) + "-simplex",
                                              "", 0});
      }
    }
  }
  // lattice smoothness, memoized per polytope
  std::map<const LatticePolytope*, std::vector<std::pair<int, Integer>>> memo;
  for (std::size_t c = 0; c < C.size(); ++c) {
    const auto* P = C.cell(static_cast<int>(c)).poly.get();
    auto it = memo.find(P);
    if (it == memo.end()) {
      std::vector<std::pair<int, Integer>> bad;
      for (std::size_t v = 0; v < P->vertices().size(); ++v) {
        Integer idx = vertex_cone_index(*P, static_cast<int>(v));
        if (idx != 1) bad.push_back({static_cast<int>(v), idx});
      }
      it = memo.emplace(P, bad).first;
    }
    for (auto& [v, idx] : it->second) {
      rep.pass = false;
      rep.witnesses.push_back(SmoothWitness{C.cell(static_cast<int>(c)).id, "LatticeSmoothness",
                                            idx == 0 ? "vertex is not simple" : "edge steps span a sublattice of index " + to_string(idx),
                                            to_string(P->vertices()[v]), idx});
    }
  }
}

void require_valid(const PolyComplex& C) {
  auto v = validate(C);
  if (!v.pass)
    throw Error(ErrorCode::InvalidComplex, v.violations.empty() ? "invalid complex"
                                                                 : v.violations[0].kind + ": " + v.violations[0].witness);
}

}  // namespace

CertificationReport certify_smooth(const PolyComplex& C, bool check_valid) {
  if (check_valid) require_valid(C);
  CertificationReport rep;
  smooth_checks(C, rep);
  if (!rep.pass) rep.failed_condition = "c";
  return rep;
}

CertificationReport certify_snc_cy(const PolyComplex& C, bool check_valid) {
  if (check_valid) require_valid(C);
  CertificationReport rep;
  auto S = containing_maximal_all(C);
  for (int m : C.maximal_cells())
    if (C.cell(m).dim() != C.n) {
      rep.pass = false;
      if (rep.failed_condition.empty()) rep.failed_condition = "a";
      rep.witnesses.push_back(SmoothWitness{C.cell(m).id, "Purity",
                                            "maximal cell of dimension " + std::to_string(C.cell(m).dim()), "", 0});
    }
  for (int r : C.cells_of_dim(C.n - 1))
    if (S[r].size() != 2) {
      rep.pass = false;
      if (rep.failed_condition.empty()) rep.failed_condition = "b";
      rep.witnesses.push_back(SmoothWitness{C.cell(r).id, "PseudoManifold",
                                            "in " + std::to_string(S[r].size()) + " maximal cells", "", 0});
    }
  CertificationReport sm;
  smooth_checks(C, sm);
  rep.cells_checked = sm.cells_checked;
  if (!sm.pass) {
    rep.pass = false;
    if (rep.failed_condition.empty()) rep.failed_condition = "c";
    rep.witnesses.insert(rep.witnesses.end(), sm.witnesses.begin(), sm.witnesses.end());
  }
  std::map<const LatticePolytope*, FacetData> memo;
  for (int m : C.maximal_cells()) {
    const auto* P = C.cell(m).poly.get();
    auto it = memo.find(P);
    if (it == memo.end()) {
      FacetData fd;
      try {
        fd = facet_presentation(P->dim() == static_cast<int>(P->ambient_dim()) ? *P : intrinsic(*P));
      } catch (const Error&) {
      }
      it = memo.emplace(P, fd).first;
    }
    rep.facet_data.push_back({C.cell(m).id, it->second});
  }
  return rep;
}

std::vector<Rational> Chart::coords(const Point& x) const {
  const std::size_t k = basis.size();
  if (k == 0) return {};
  RatMatrix A(origin.size(), std::vector<Rational>(k));
  for (std::size_t i = 0; i < origin.size(); ++i)
    for (std::size_t j = 0; j < k; ++j) A[i][j] = Rational(basis[j][i]);
  std::vector<Rational> rhs(origin.size());
  for (std::size_t i = 0; i < origin.size(); ++i) rhs[i] = (x[i] - origin[i]) * scale;
  auto sol = solve_linear(A, rhs);
  if (!sol) throw Error(ErrorCode::InvalidArgument, "point outside chart span");
  std::vector<Rational> c = *sol;
  for (auto& v : c) v /= scale;
  return c;
}

Point Chart::point(const std::vector<Rational>& c) const {
  Point p = origin;
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += c[j] * Rational(basis[j][i]);
  return p;
}

Chart lattice_chart(const LatticePolytope& P, const Point& origin) {
  Chart ch;
  ch.origin = origin;
  ch.scale = P.scale();
  IntMatrix rows;
  for (auto& v : P.vertices()) {
    IntVec r(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
      Rational y = (v[j] - origin[j]) * P.scale();
      r[j] = y.get_num();
    }
    rows.push_back(r);
  }
  ch.basis = saturation(rows, P.ambient_dim());
  return ch;
}

LatticePolytope intrinsic(const LatticePolytope& P, Chart* chart) {
  if (P.empty()) return P;
  Point o = *std::min_element(P.vertices().begin(), P.vertices().end());
  Chart ch = lattice_chart(P, o);
  std::vector<Point> vs;
  for (auto& v : P.vertices()) vs.push_back(ch.coords(v));
  std::vector<Face> faces = P.faces();
  auto Q = LatticePolytope::with_faces(vs, P.scale(), faces);
  if (chart) *chart = ch;
  return Q;
}

long CWData::euler() const {
  long e = 0;
  for (std::size_t d = 0; d < counts.size(); ++d) e += (d % 2 ? -1 : 1) * static_cast<long>(counts[d]);
  return e;
}

CWData amalgamate(const PolyComplex& C) {
  CWData cw;
  std::vector<int> order(C.size());
  for (std::size_t i = 0; i < C.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return C.cell(a).id < C.cell(b).id; });
  std::vector<int> vidx(C.size(), -1), eidx(C.size(), -1);
  for (int c : order) {
    int d = C.cell(c).dim();
    if (d < 0) throw Error(ErrorCode::InvalidComplex, "empty cell " + C.cell(c).id);
    if (cw.counts.size() <= static_cast<std::size_t>(d)) cw.counts.resize(d + 1, 0);
    ++cw.counts[d];
    if (d == 0) {
      vidx[c] = static_cast<int>(cw.vertex_ids.size());
      cw.vertex_ids.push_back(C.cell(c).id);
    }
  }
  for (int c : order) {
    if (C.cell(c).dim() != 1) continue;
    const auto& P = *C.cell(c).poly;
    int lo = P.vertices()[0] < P.vertices()[1] ? 0 : 1;
    CWData::Edge e;
    e.id = C.cell(c).id;
    for (int k : C.in_morphisms(c)) {
      const auto& vm = C.vertex_map(k);
      int z = C.morphisms()[k].from;
      if (vm.size() != 1 || vidx[z] < 0) continue;
      (vm[0] == lo ? e.a : e.b) = vidx[z];
    }
    if (e.a < 0 || e.b < 0) throw Error(ErrorCode::InvalidComplex, "edge " + e.id + " lacks endpoint cells");
    eidx[c] = static_cast<int>(cw.edges.size());
    cw.edges.push_back(e);
  }
  for (int c : order) {
    if (C.cell(c).dim() != 2) continue;
    const auto& P = *C.cell(c).poly;
    const std::size_t nv = P.vertices().size();
    std::vector<int> vcell(nv, -1);
    std::map<std::pair<int, int>, int> ecell;
    for (auto& [z, vs] : C.face_cells(c)) {
      if (C.cell(z).dim() == 0) vcell[vs[0]] = vidx[z];
      if (C.cell(z).dim() == 1) ecell[{vs[0], vs[1]}] = eidx[z];
    }
    for (int v : vcell)
      if (v < 0) throw Error(ErrorCode::InvalidComplex, "polygon " + C.cell(c).id + " lacks vertex cells");
    // cyclic order from polygon edges, then orient counterclockwise in the local chart
    std::vector<std::vector<int>> adj(nv);
    for (auto& [uv, e] : ecell) {
      (void)e;
      adj[uv.first].push_back(uv.second);
      adj[uv.second].push_back(uv.first);
    }
    int start = 0;
    for (std::size_t i = 1; i < nv; ++i)
      if (vcell[i] < vcell[start]) start = static_cast<int>(i);
    std::vector<int> cyc{start};
    int prev = -1, cur = start;
    while (cyc.size() < nv) {
      if (adj[cur].size() != 2) throw Error(ErrorCode::InvalidComplex, "polygon " + C.cell(c).id + " has a broken boundary");
      int nxt = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
      prev = cur;
      cur = nxt;
      cyc.push_back(cur);
    }
    std::vector<std::vector<Rational>> loc;
    if (P.ambient_dim() == 2) {
      for (auto& v : P.vertices()) loc.push_back(v);
    } else {
      Chart ch = lattice_chart(P, P.vertices()[0]);
      for (auto& v : P.vertices()) loc.push_back(ch.coords(v));
    }
    auto& a = loc[cyc[0]];
    auto& b = loc[cyc[1]];
    auto& d = loc[cyc[2]];
    Rational cross = (b[0] - a[0]) * (d[1] - a[1]) - (b[1] - a[1]) * (d[0] - a[0]);
    if (cross < 0) std::reverse(cyc.begin() + 1, cyc.end());
    std::vector<std::pair<int, int>> word;
    for (std::size_t i = 0; i < nv; ++i) {
      int u = cyc[i], w = cyc[(i + 1) % nv];
      auto it = ecell.find({std::min(u, w), std::max(u, w)});
      if (it == ecell.end()) throw Error(ErrorCode::InvalidComplex, "polygon " + C.cell(c).id + " lacks an edge cell");
      const auto& e = cw.edges[it->second];
      word.push_back({it->second, e.a == vcell[u] ? 1 : -1});
    }
    cw.face_ids.push_back(C.cell(c).id);
    cw.faces.push_back(word);
  }
  return cw;
}

PolyComplex scale_complex(const PolyComplex& C, const Integer& m) {
  PolyComplex R;
  R.n = C.n;
  std::map<const LatticePolytope*, PolytopePtr> memo;
  for (auto& c : C.cells()) {
    auto it = memo.find(c.poly.get());
    if (it == memo.end()) it = memo.emplace(c.poly.get(), std::make_shared<const LatticePolytope>(scale(*c.poly, m))).first;
    R.add_cell(c.id, it->second);
  }
  for (auto& mo : C.morphisms()) R.add_morphism(mo.from, mo.to, mo.map);
  return R;
}

PolyComplex subcomplex(const PolyComplex& C, const std::vector<char>& keep) {
  PolyComplex R;
  R.n = C.n;
  std::vector<int> idx(C.size(), -1);
  for (std::size_t i = 0; i < C.size(); ++i)
    if (keep[i]) idx[i] = R.add_cell(C.cell(static_cast<int>(i)).id, C.cell(static_cast<int>(i)).poly);
  for (auto& mo : C.morphisms())
    if (idx[mo.from] >= 0 && idx[mo.to] >= 0) R.add_morphism(idx[mo.from], idx[mo.to], mo.map);
  return R;
}

}  // namespace polylc

namespace polylc {

PolyComplex complex_from_cells(const std::vector<BuildCell>& maximal, int n, const FaceKeyFn& keyfn) {
  PolyComplex C;
  C.n = n;
  auto key_of = [&](std::vector<long> labels, const std::vector<Point>& pts) {
    std::sort(labels.begin(), labels.end());
    if (keyfn) return keyfn(labels, pts);
    std::string k;
    for (std::size_t i = 0; i < labels.size(); ++i) k += (i ? "," : "") + std::to_string(labels[i]);
    return k;
  };
  std::map<std::string, PolytopePtr> pool;
  auto intern = [&](const LatticePolytope& P) {
    std::string k = to_string(P.scale());
    for (auto& v : P.vertices()) k += "|" + to_string(v);
    auto it = pool.find(k);
    if (it == pool.end()) it = pool.emplace(k, std::make_shared<const LatticePolytope>(P)).first;
    return it->second;
  };
  std::map<std::string, MapPtr> map_pool;
  auto intern_map = [&](const AffineMap& m) {
    std::string k;
    for (auto& r : m.A) k += to_string(r) + ";";
    k += to_string(m.b);
    auto it = map_pool.find(k);
    if (it == map_pool.end()) it = map_pool.emplace(k, std::make_shared<const AffineMap>(m)).first;
    return it->second;
  };
  std::vector<std::vector<long>> labels_of;   // per cell, per vertex
  std::vector<std::vector<Point>> global_of;  // first occurrence
  std::map<std::string, int> by_key;
  for (auto& m : maximal) {
    if (m.labels.size() != m.poly.vertices().size())
      throw Error(ErrorCode::InvalidArgument, "cell " + m.id + ": one label per vertex required");
    C.add_cell(m.id, intern(m.poly));
    labels_of.push_back(m.labels);
    global_of.push_back(m.poly.vertices());
  }
  for (std::size_t x = 0; x < C.size(); ++x) {  // C grows while iterating
    const PolytopePtr Xp = C.cell(static_cast<int>(x)).poly;
    const LatticePolytope& X = *Xp;
    if (X.dim() <= 0) continue;
    for (int fi : X.faces_of_dim(X.dim() - 1)) {
      const auto& f = X.faces()[fi];
      std::vector<long> labels;
      std::vector<Point> global, local;
      for (int v : f.verts) {
        labels.push_back(labels_of[x][v]);
        global.push_back(global_of[x][v]);
        local.push_back(X.vertices()[v]);
      }
      std::string key = key_of(labels, global);
      auto found = by_key.find(key);
      if (found == by_key.end()) {
        LatticePolytope F = LatticePolytope::hull(local, X.scale());
        std::vector<long> fl;
        std::vector<Point> fg;
        for (auto& p : F.vertices()) {
          std::size_t j = std::find(local.begin(), local.end(), p) - local.begin();
          fl.push_back(labels[j]);
          fg.push_back(global[j]);
        }
        int y = C.add_cell((F.dim() == 0 ? "v" : "f") + key, intern(intrinsic(F)));
        labels_of.push_back(fl);
        global_of.push_back(fg);
        found = by_key.emplace(key, y).first;
      }
      int y = found->second;
      const LatticePolytope& Y = *C.cell(y).poly;
      std::vector<Point> src, dst;
      for (std::size_t j = 0; j < Y.vertices().size(); ++j) {
        auto pos = std::find(labels.begin(), labels.end(), labels_of[y][j]);
        if (pos == labels.end()) throw Error(ErrorCode::InvalidArgument, "face " + key + " has inconsistent labels");
        src.push_back(Y.vertices()[j]);
        dst.push_back(local[pos - labels.begin()]);
      }
      auto m = affine_from_points(src, dst);
      if (!m) throw Error(ErrorCode::InvalidArgument, "face " + key + " is not affinely identified");
      C.add_morphism(y, static_cast<int>(x), intern_map(*m));
    }
  }
  return C;
}

}  // namespace polylc
