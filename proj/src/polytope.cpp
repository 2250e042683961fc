#include "polylc/polytope.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <unordered_set>

#include "polylc/errors.hpp"

namespace polylc {

namespace {

struct Bits {
  std::vector<std::uint64_t> w;
  Bits() = default;
  explicit Bits(std::size_t n) : w((n + 63) / 64, 0) {}
  void set(std::size_t i) { w[i >> 6] |= 1ULL << (i & 63); }
  bool test(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1ULL; }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto x : w) c += static_cast<std::size_t>(__builtin_popcountll(x));
    return c;
  }
  bool any() const {
    for (auto x : w)
      if (x) return true;
    return false;
  }
  Bits operator&(const Bits& o) const {
    Bits r = *this;
    for (std::size_t i = 0; i < w.size(); ++i) r.w[i] &= o.w[i];
    return r;
  }
  bool subset_of(const Bits& o) const {
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] & ~o.w[i]) return false;
    return true;
  }
  bool operator==(const Bits& o) const { return w == o.w; }
  bool operator<(const Bits& o) const { return w < o.w; }
  std::vector<int> indices(std::size_t n) const {
    std::vector<int> r;
    for (std::size_t i = 0; i < n; ++i)
      if (test(i)) r.push_back(static_cast<int>(i));
    return r;
  }
};

Integer dot_int(const IntVec& a, const IntVec& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void normalize(IntVec& v) {
  Integer g = vec_gcd(v);
  if (g > 1)
    for (auto& x : v) x /= g;
}

// Facets of conv(X) for X affinely spanning Z^k (k >= 1), as incidence sets over X,
// together with the inequality (a, b): a·x + b >= 0.
std::vector<std::pair<Bits, IntVec>> dd_facets(const std::vector<IntVec>& X, std::size_t k) {
  const std::size_t n = X.size();
  std::vector<IntVec> C(n);
  for (std::size_t i = 0; i < n; ++i) {
    C[i] = X[i];
    C[i].push_back(Integer(1));
  }
  // initial simplicial cone
  std::vector<std::size_t> basis;
  RatMatrix chosen;
  for (std::size_t i = 0; i < n && basis.size() < k + 1; ++i) {
    RatMatrix trial = chosen;
    std::vector<Rational> row;
    for (auto& x : C[i]) row.emplace_back(x);
    trial.push_back(row);
    if (rank(trial) == trial.size()) {
      chosen = trial;
      basis.push_back(i);
    }
  }
  if (basis.size() != k + 1) throw Error(ErrorCode::InvalidArgument, "points do not span");
  RatMatrix inv = inverse(chosen);
  struct Ray {
    IntVec v;
    Bits z;
  };
  std::vector<Ray> rays;
  for (std::size_t j = 0; j <= k; ++j) {
    std::vector<Rational> col(k + 1);
    for (std::size_t i = 0; i <= k; ++i) col[i] = inv[i][j];
    Ray r{scale_to_integer(col), Bits(n)};
    for (std::size_t b = 0; b <= k; ++b)
      if (b != j) r.z.set(basis[b]);
    rays.push_back(std::move(r));
  }
  std::vector<char> done(n, 0);
  for (auto b : basis) done[b] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (done[i]) continue;
    done[i] = 1;
    std::vector<Integer> s(rays.size());
    bool any_neg = false;
    for (std::size_t j = 0; j < rays.size(); ++j) {
      s[j] = dot_int(C[i], rays[j].v);
      if (s[j] < 0) any_neg = true;
    }
    if (!any_neg) {
      for (std::size_t j = 0; j < rays.size(); ++j)
        if (s[j] == 0) rays[j].z.set(i);
      continue;
    }
    std::vector<Ray> next;
    for (std::size_t j = 0; j < rays.size(); ++j) {
      if (s[j] > 0) next.push_back(rays[j]);
      else if (s[j] == 0) {
        next.push_back(rays[j]);
        next.back().z.set(i);
      }
    }
    for (std::size_t p = 0; p < rays.size(); ++p) {
      if (s[p] <= 0) continue;
      for (std::size_t q = 0; q < rays.size(); ++q) {
        if (s[q] >= 0) continue;
        Bits common = rays[p].z & rays[q].z;
        if (common.count() + 2 < k + 1) continue;
        bool adj = true;
        for (std::size_t t = 0; t < rays.size() && adj; ++t) {
          if (t == p || t == q) continue;
          if (common.subset_of(rays[t].z)) adj = false;
        }
        if (!adj) continue;
        IntVec v(k + 1);
        for (std::size_t c = 0; c <= k; ++c) v[c] = s[p] * rays[q].v[c] - s[q] * rays[p].v[c];
        normalize(v);
        Ray r{v, common};
        r.z.set(i);
        next.push_back(std::move(r));
      }
    }
    rays.swap(next);
  }
  std::vector<std::pair<Bits, IntVec>> out;
  for (auto& r : rays) out.push_back({r.z, r.v});
  return out;
}

struct Chart {
  Point origin;
  std::vector<std::size_t> pivots;
};

Chart make_chart(const std::vector<Point>& pts) {
  Chart ch;
  ch.origin = pts[0];
  std::size_t d = pts[0].size();
  RatMatrix D;
  for (std::size_t i = 1; i < pts.size(); ++i) D.push_back(pts[i] - pts[0]);
  // pivot columns of the row echelon form
  std::size_t r = 0;
  for (std::size_t c = 0; c < d && r < D.size(); ++c) {
    std::size_t p = r;
    while (p < D.size() && D[p][c] == 0) ++p;
    if (p == D.size()) continue;
    std::swap(D[p], D[r]);
    for (std::size_t i = r + 1; i < D.size(); ++i) {
      if (D[i][c] == 0) continue;
      Rational f = D[i][c] / D[r][c];
      for (std::size_t j = c; j < d; ++j) D[i][j] -= f * D[r][j];
    }
    ch.pivots.push_back(c);
    ++r;
  }
  return ch;
}

std::vector<IntVec> chart_coords(const Chart& ch, const std::vector<Point>& pts) {
  Integer L = 1;
  for (auto& p : pts)
    for (auto c : ch.pivots) L = lcm(L, Rational(p[c] - ch.origin[c]).get_den());
  std::vector<IntVec> X(pts.size(), IntVec(ch.pivots.size()));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < ch.pivots.size(); ++j) {
      Rational v = (pts[i][ch.pivots[j]] - ch.origin[ch.pivots[j]]) * L;
      X[i][j] = v.get_num();
    }
  return X;
}

int affine_rank(const std::vector<Point>& verts, const std::vector<int>& idx) {
  if (idx.empty()) return -1;
  RatMatrix D;
  for (std::size_t i = 1; i < idx.size(); ++i) D.push_back(verts[idx[i]] - verts[idx[0]]);
  return static_cast<int>(rank(D));
}

}  // namespace

LatticePolytope LatticePolytope::hull(const std::vector<Point>& input, const Integer& scale) {
  if (scale <= 0) throw Error(ErrorCode::InvalidArgument, "scale must be positive");
  LatticePolytope P;
  P.scale_ = scale;
  if (input.empty()) return P;
  P.ambient_ = input[0].size();
  std::vector<Point> pts = input;
  for (auto& p : pts) {
    if (p.size() != P.ambient_) throw Error(ErrorCode::InvalidArgument, "mixed ambient dimensions");
    for (auto& x : p) {
      Rational y = x * scale;
      if (y.get_den() != 1)
        throw Error(ErrorCode::InvalidArgument, "point " + to_string(p) + " not in lattice at scale " + to_string(scale));
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  Chart ch = make_chart(pts);
  const std::size_t k = ch.pivots.size();
  std::vector<IntVec> X = chart_coords(ch, pts);
  const std::size_t n = pts.size();
  std::vector<Bits> facets;
  if (k == 0) {
    P.verts_ = {pts[0]};
    P.faces_ = {Face{0, {0}}};
    P.dim_ = 0;
    P.finish();
    return P;
  }
  if (k == 1) {
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (X[i][0] < X[lo][0]) lo = i;
      if (X[i][0] > X[hi][0]) hi = i;
    }
    Bits a(n), b(n);
    a.set(lo);
    b.set(hi);
    facets = {a, b};
  } else {
    for (auto& f : dd_facets(X, k)) facets.push_back(f.first);
  }
  // extreme points
  std::vector<int> keep;
  for (std::size_t i = 0; i < n; ++i) {
    Bits acc(n);
    bool first = true;
    for (auto& f : facets) {
      if (!f.test(i)) continue;
      acc = first ? f : (acc & f);
      first = false;
    }
    if (!first && acc.count() == 1) keep.push_back(static_cast<int>(i));
  }
  std::vector<int> newidx(n, -1);
  for (std::size_t j = 0; j < keep.size(); ++j) {
    newidx[keep[j]] = static_cast<int>(j);
    P.verts_.push_back(pts[keep[j]]);
  }
  const std::size_t m = keep.size();
  std::set<Bits> seen;
  std::vector<Bits> queue;
  std::vector<Bits> fac2;
  for (auto& f : facets) {
    Bits g(m);
    for (std::size_t i = 0; i < n; ++i)
      if (f.test(i) && newidx[i] >= 0) g.set(newidx[i]);
    fac2.push_back(g);
    if (seen.insert(g).second) queue.push_back(g);
  }
  for (std::size_t q = 0; q < queue.size(); ++q) {
    for (auto& f : fac2) {
      Bits h = queue[q] & f;
      if (!h.any()) continue;
      if (seen.insert(h).second) queue.push_back(h);
    }
  }
  Bits all(m);
  for (std::size_t i = 0; i < m; ++i) all.set(i);
  seen.insert(all);
  for (auto& b : seen) {
    Face f;
    f.verts = b.indices(m);
    f.dim = affine_rank(P.verts_, f.verts);
    P.faces_.push_back(std::move(f));
  }
  std::sort(P.faces_.begin(), P.faces_.end());
  P.dim_ = static_cast<int>(k);
  P.finish();
  return P;
}

LatticePolytope LatticePolytope::with_faces(std::vector<Point> verts, const Integer& scale, std::vector<Face> faces) {
  LatticePolytope P;
  P.scale_ = scale;
  P.ambient_ = verts.empty() ? 0 : verts[0].size();
  P.verts_ = std::move(verts);
  for (auto& f : faces) std::sort(f.verts.begin(), f.verts.end());
  std::sort(faces.begin(), faces.end());
  P.faces_ = std::move(faces);
  P.dim_ = P.faces_.empty() ? -1 : P.faces_.back().dim;
  P.finish();
  return P;
}

void LatticePolytope::finish() {
  edges_.clear();
  nbrs_.assign(verts_.size(), {});
  face_index_.clear();
  for (std::size_t i = 0; i < faces_.size(); ++i) {
    face_index_.emplace(faces_[i].verts, static_cast<int>(i));
    if (faces_[i].dim == 1 && faces_[i].verts.size() == 2) {
      int a = faces_[i].verts[0], b = faces_[i].verts[1];
      edges_.push_back({a, b});
      nbrs_[a].push_back(b);
      nbrs_[b].push_back(a);
    }
  }
}

std::vector<int> LatticePolytope::faces_of_dim(int k) const {
  std::vector<int> r;
  for (std::size_t i = 0; i < faces_.size(); ++i)
    if (faces_[i].dim == k) r.push_back(static_cast<int>(i));
  return r;
}

int LatticePolytope::find_vertex(const Point& p) const {
  for (std::size_t i = 0; i < verts_.size(); ++i)
    if (verts_[i] == p) return static_cast<int>(i);
  return -1;
}

int LatticePolytope::find_face(const std::vector<int>& v) const {
  auto it = face_index_.find(v);
  return it == face_index_.end() ? -1 : it->second;
}

std::vector<std::size_t> LatticePolytope::f_vector() const {
  std::vector<std::size_t> f(dim_ > 0 ? dim_ : 1, 0);
  for (auto& fc : faces_)
    if (fc.dim < dim_ || (dim_ == 0 && fc.dim == 0)) f[fc.dim]++;
  return f;
}

LatticePolytope LatticePolytope::with_scale(const Integer& s) const {
  LatticePolytope P = *this;
  P.scale_ = s;
  return P;
}

std::string LatticePolytope::describe() const {
  std::string s = "dim " + std::to_string(dim_) + " f=(";
  auto f = f_vector();
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + std::to_string(f[i]);
  return s + ") scale " + to_string(scale_);
}

std::vector<IntVec> primitive_edge_steps(const LatticePolytope& P, int v) {
  std::vector<IntVec> steps;
  for (int w : P.neighbors()[v]) {
    Point d = P.vertices()[w] - P.vertices()[v];
    IntVec iv(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      Rational y = d[i] * P.scale();
      iv[i] = y.get_num();
    }
    steps.push_back(primitive_step(iv));
  }
  return steps;
}

Integer vertex_cone_index(const LatticePolytope& P, int v) {
  if (P.dim() <= 0) return 1;
  auto steps = primitive_edge_steps(P, v);
  if (static_cast<int>(steps.size()) != P.dim()) return 0;
  auto d = elementary_divisors(steps);
  if (static_cast<int>(d.size()) != P.dim()) return 0;
  Integer prod = 1;
  for (auto& x : d) prod *= x;
  return prod;
}

bool smooth_at_vertex_index(const LatticePolytope& P, int v) { return vertex_cone_index(P, v) == 1; }

bool smooth_at_vertex(const LatticePolytope& P, const Point& v) {
  int i = P.find_vertex(v);
  if (i < 0) throw Error(ErrorCode::NotAVertex, to_string(v) + " is not a vertex");
  return smooth_at_vertex_index(P, i);
}

bool is_smooth(const LatticePolytope& P) {
  for (std::size_t i = 0; i < P.vertices().size(); ++i)
    if (!smooth_at_vertex_index(P, static_cast<int>(i))) return false;
  return true;
}

LatticePolytope truncate(const LatticePolytope& P, const Halfspace& h) {
  if (P.empty()) throw Error(ErrorCode::EmptyResult, "empty polytope");
  const auto& V = P.vertices();
  std::vector<Rational> val(V.size());
  bool any_out = false, any_in = false;
  for (std::size_t i = 0; i < V.size(); ++i) {
    val[i] = dot(h.a, V[i]) - h.b;
    if (val[i] < 0) any_out = true;
    else any_in = true;
  }
  if (!any_in) throw Error(ErrorCode::EmptyResult, "half-space misses the polytope");
  if (!any_out) return P;
  std::vector<Point> pts;
  for (std::size_t i = 0; i < V.size(); ++i)
    if (val[i] >= 0) pts.push_back(V[i]);
  for (auto [a, b] : P.edges()) {
    if ((val[a] > 0 && val[b] < 0) || (val[a] < 0 && val[b] > 0)) {
      Rational t = val[a] / (val[a] - val[b]);
      pts.push_back(V[a] + t * (V[b] - V[a]));
    }
  }
  Integer s = P.scale();
  for (auto& p : pts)
    for (auto& x : p) {
      Rational y = x * s;
      if (y.get_den() != 1) s *= y.get_den();
    }
  return LatticePolytope::hull(pts, s);
}

LatticePolytope truncate_halfspace(const LatticePolytope& P, const IntVec& u, const Rational& c) {
  Halfspace h;
  for (auto& x : u) h.a.emplace_back(x);
  h.b = c;
  return truncate(P, h);
}

LatticePolytope scale(const LatticePolytope& P, const Integer& m) {
  if (m <= 0) throw Error(ErrorCode::InvalidArgument, "scale factor must be positive");
  return P.with_scale(P.scale() * m);
}

Point barycenter(const LatticePolytope& S) {
  if (S.empty() || static_cast<int>(S.vertices().size()) != S.dim() + 1)
    throw Error(ErrorCode::NotASimplex, S.describe());
  Point b(S.ambient_dim(), Rational(0));
  for (auto& v : S.vertices()) b = b + v;
  return Rational(1, static_cast<long>(S.vertices().size())) * b;
}

FacetData facet_presentation(const LatticePolytope& P) {
  if (P.empty() || P.dim() < static_cast<int>(P.ambient_dim()))
    throw Error(ErrorCode::DegeneratePolytope, "polytope is not full-dimensional");
  const auto& V = P.vertices();
  const std::size_t d = P.ambient_dim();
  FacetData out;
  for (int fi : P.faces_of_dim(P.dim() - 1)) {
    const auto& fv = P.faces()[fi].verts;
    IntMatrix D;
    for (std::size_t i = 1; i < fv.size(); ++i) D.push_back(scale_to_integer(V[fv[i]] - V[fv[0]]));
    IntMatrix ker = integer_kernel(D, d);
    IntVec u = primitive_step(ker.at(0));
    Point uq = to_point(u);
    Rational base = dot(uq, V[fv[0]]);
    for (std::size_t i = 0; i < V.size(); ++i) {
      Rational v = dot(uq, V[i]) - base;
      if (v != 0) {
        if (v < 0)
          for (auto& x : u) x = -x;
        break;
      }
    }
    uq = to_point(u);
    out.push_back({u, -dot(uq, V[fv[0]])});
  }
  auto first_nz = [](const IntVec& u) {
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i] != 0) return i;
    return u.size();
  };
  std::sort(out.begin(), out.end(), [&](const FacetInequality& x, const FacetInequality& y) {
    if (x.a != y.a) return x.a < y.a;
    auto fx = first_nz(x.u), fy = first_nz(y.u);
    if (fx != fy) return fx < fy;
    return x.u > y.u;
  });
  return out;
}

std::vector<Point> vertices_from_facets(const FacetData& F, std::size_t d) {
  std::set<Point> found;
  std::vector<std::size_t> pick(d);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
    if (depth == d) {
      RatMatrix A;
      std::vector<Rational> b;
      for (auto i : pick) {
        A.push_back(to_point(F[i].u));
        b.push_back(-F[i].a);
      }
      if (rank(A) != d) return;
      auto x = solve_linear(A, b);
      if (!x) return;
      for (auto& f : F)
        if (dot(to_point(f.u), *x) < -f.a) return;
      found.insert(*x);
      return;
    }
    for (std::size_t i = start; i < F.size(); ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return {found.begin(), found.end()};
}

FacePoset face_poset(const LatticePolytope& P) {
  FacePoset fp;
  fp.nverts = static_cast<int>(P.vertices().size());
  fp.faces = P.faces();
  return fp;
}

namespace {

struct IsoSearch {
  const FacePoset& A;
  const FacePoset& B;
  std::unordered_set<std::vector<int>, VecHash<int>> bfaces;
  std::map<std::vector<int>, int> bface_dim;
  std::vector<std::vector<std::pair<int, int>>> sigA, sigB;
  std::vector<int> order;                 // assignment order of A's vertices
  std::vector<std::vector<int>> check_at;  // faces of A to check once order[step] assigned
  std::vector<int> map, used;

  IsoSearch(const FacePoset& a, const FacePoset& b) : A(a), B(b) {}

  bool run() {
    if (A.nverts != B.nverts || A.faces.size() != B.faces.size()) return false;
    std::vector<std::pair<int, int>> ka, kb;
    for (auto& f : A.faces) ka.push_back({f.dim, static_cast<int>(f.verts.size())});
    for (auto& f : B.faces) kb.push_back({f.dim, static_cast<int>(f.verts.size())});
    std::sort(ka.begin(), ka.end());
    std::sort(kb.begin(), kb.end());
    if (ka != kb) return false;
    for (auto& f : B.faces) {
      bfaces.insert(f.verts);
      bface_dim[f.verts] = f.dim;
    }
    sigA.assign(A.nverts, {});
    sigB.assign(B.nverts, {});
    for (auto& f : A.faces)
      for (int v : f.verts) sigA[v].push_back({f.dim, static_cast<int>(f.verts.size())});
    for (auto& f : B.faces)
      for (int v : f.verts) sigB[v].push_back({f.dim, static_cast<int>(f.verts.size())});
    for (auto& s : sigA) std::sort(s.begin(), s.end());
    for (auto& s : sigB) std::sort(s.begin(), s.end());
    // BFS order through small faces so partial checks bite early
    std::vector<std::vector<int>> adj(A.nverts);
    for (auto& f : A.faces)
      if (f.verts.size() == 2)
        for (int i = 0; i < 2; ++i) adj[f.verts[i]].push_back(f.verts[1 - i]);
    std::vector<int> pos(A.nverts, -1);
    for (int s = 0; s < A.nverts; ++s) {
      if (pos[s] >= 0) continue;
      std::vector<int> q{s};
      pos[s] = static_cast<int>(order.size());
      order.push_back(s);
      for (std::size_t h = 0; h < q.size(); ++h)
        for (int w : adj[q[h]])
          if (pos[w] < 0) {
            pos[w] = static_cast<int>(order.size());
            order.push_back(w);
            q.push_back(w);
          }
    }
    check_at.assign(A.nverts, {});
    for (std::size_t i = 0; i < A.faces.size(); ++i) {
      int mx = 0;
      for (int v : A.faces[i].verts) mx = std::max(mx, pos[v]);
      check_at[mx].push_back(static_cast<int>(i));
    }
    map.assign(A.nverts, -1);
    used.assign(B.nverts, 0);
    return rec(0);
  }

  bool rec(int step) {
    if (step == A.nverts) return true;
    int a = order[step];
    for (int b = 0; b < B.nverts; ++b) {
      if (used[b] || sigA[a] != sigB[b]) continue;
      map[a] = b;
      used[b] = 1;
      bool ok = true;
      for (int fi : check_at[step]) {
        std::vector<int> img;
        for (int v : A.faces[fi].verts) img.push_back(map[v]);
        std::sort(img.begin(), img.end());
        auto it = bface_dim.find(img);
        if (it == bface_dim.end() || it->second != A.faces[fi].dim) {
          ok = false;
          break;
        }
      }
      if (ok && rec(step + 1)) return true;
      used[b] = 0;
      map[a] = -1;
    }
    return false;
  }
};

}  // namespace

bool isomorphic(const FacePoset& a, const FacePoset& b) {
  IsoSearch s(a, b);
  return s.run();
}

bool isomorphic(const LatticePolytope& a, const LatticePolytope& b) {
  return a.dim() == b.dim() && isomorphic(face_poset(a), face_poset(b));
}

LatticePolytope truncated_octahedron() {
  std::vector<long> p{1, 2, 3, 4};
  std::vector<Point> pts;
  do pts.push_back(make_point(p));
  while (std::next_permutation(p.begin(), p.end()));
  return LatticePolytope::hull(pts);
}

LatticePolytope hexagonal_prism() {
  std::vector<std::vector<long>> hex{{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}};
  std::vector<Point> pts;
  for (auto& h : hex)
    for (long z : {0L, 1L}) pts.push_back(make_point({h[0], h[1], z}));
  return LatticePolytope::hull(pts);
}

LatticePolytope simplex_polytope(int k) {
  std::vector<Point> pts{Point(k, Rational(0))};
  for (int i = 0; i < k; ++i) {
    Point e(k, Rational(0));
    e[i] = 1;
    pts.push_back(e);
  }
  return LatticePolytope::hull(pts);
}

LatticePolytope triangular_prism() {
  std::vector<Point> pts;
  for (long z : {0L, 1L})
    for (auto& t : std::vector<std::vector<long>>{{0, 0}, {1, 0}, {0, 1}}) pts.push_back(make_point({t[0], t[1], z}));
  return LatticePolytope::hull(pts);
}

LatticePolytope quadrilateral_prism() {
  std::vector<Point> pts;
  for (long x : {0L, 1L})
    for (long y : {0L, 1L})
      for (long z : {0L, 1L}) pts.push_back(make_point({x, y, z}));
  return LatticePolytope::hull(pts);
}

LatticePolytope square_polytope() {
  return LatticePolytope::hull({make_point({0, 0}), make_point({1, 0}), make_point({0, 1}), make_point({1, 1})});
}

LatticePolytope associahedron3() {
  // cube with three pairwise skew edges cut off
  std::vector<Point> pts;
  for (long x : {0L, 4L})
    for (long y : {0L, 4L})
      for (long z : {0L, 4L}) pts.push_back(make_point({x, y, z}));
  LatticePolytope P = LatticePolytope::hull(pts);
  P = truncate_halfspace(P, to_intvec({0, 1, 1}), 1);
  P = truncate_halfspace(P, to_intvec({-1, 0, -1}), -7);
  P = truncate_halfspace(P, to_intvec({1, -1, 0}), -3);
  return P;
}

}  // namespace polylc
