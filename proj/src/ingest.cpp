#include "polylc/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "polylc/complex_io.hpp"
#include "polylc/errors.hpp"

namespace polylc {

namespace {

int sgn(const Rational& r) { return mpq_sgn(r.get_mpq_t()); }

// sign of p + q sqrt(W), W >= 0
int sign_sqrt(const Rational& p, const Rational& q, const Rational& W) {
  int sp = sgn(p), sq = (W == 0) ? 0 : sgn(q);
  if (sq == 0) return sp;
  if (sp == 0) return sq;
  if (sp == sq) return sp;
  Rational d = p * p - q * q * W;
  int sd = sgn(d);
  return sd == 0 ? 0 : (sd > 0 ? sp : sq);
}

}  // namespace

ManifoldSpec ManifoldSpec::sphere3(const Rational& R2) {
  if (R2 <= 0) throw Error(ErrorCode::InvalidArgument, "R^2 must be positive");
  ManifoldSpec s;
  s.kind = Kind::Sphere3;
  s.params = {R2};
  return s;
}

ManifoldSpec ManifoldSpec::s2xs1(const Rational& a, const Rational& b) {
  if (!(a > b && b > 0)) throw Error(ErrorCode::InvalidArgument, "s2xs1 needs a > b > 0");
  ManifoldSpec s;
  s.kind = Kind::S2xS1;
  s.params = {a, b};
  return s;
}

ManifoldSpec ManifoldSpec::torus3(const Rational& a, const Rational& b, const Rational& c) {
  if (!(a > b && b > c && c > 0)) throw Error(ErrorCode::InvalidArgument, "t3 needs a > b > c > 0");
  ManifoldSpec s;
  s.kind = Kind::Torus3;
  s.params = {a, b, c};
  return s;
}

ManifoldSpec ManifoldSpec::voxel_file(const std::string& path) {
  ManifoldSpec s;
  s.kind = Kind::VoxelFile;
  s.path = path;
  return s;
}

ManifoldSpec ManifoldSpec::constant(const Rational& v) {
  ManifoldSpec s;
  s.kind = Kind::Constant;
  s.params = {v};
  return s;
}

ManifoldSpec ManifoldSpec::parse(const std::string& text) {
  if (text.rfind("file:", 0) == 0) return voxel_file(text.substr(5));
  auto colon = text.find(':');
  std::string name = text.substr(0, colon);
  std::vector<Rational> ps;
  if (colon != std::string::npos) {
    std::stringstream ss(text.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) ps.push_back(parse_rational(tok));
  }
  auto need = [&](std::size_t n) {
    if (!ps.empty() && ps.size() != n)
      throw Error(ErrorCode::ParseError, "manifold " + name + " takes " + std::to_string(n) + " parameters");
  };
  if (name == "s3") {
    need(1);
    return ps.empty() ? sphere3() : sphere3(ps[0]);
  }
  if (name == "s2xs1") {
    need(2);
    return ps.empty() ? s2xs1() : s2xs1(ps[0], ps[1]);
  }
  if (name == "t3") {
    need(3);
    return ps.empty() ? torus3() : torus3(ps[0], ps[1], ps[2]);
  }
  throw Error(ErrorCode::ParseError, "unknown manifold '" + text + "'");
}

std::string ManifoldSpec::str() const {
  auto join = [&] {
    std::string s;
    for (std::size_t i = 0; i < params.size(); ++i) s += (i ? "," : "") + to_string(params[i]);
    return s;
  };
  switch (kind) {
    case Kind::Sphere3: return "s3:" + join();
    case Kind::S2xS1: return "s2xs1:" + join();
    case Kind::Torus3: return "t3:" + join();
    case Kind::VoxelFile: return "file:" + path;
    case Kind::Constant: return "const:" + join();
  }
  return "?";
}

int ManifoldSpec::sign_at(const std::vector<Rational>& x) const {
  switch (kind) {
    case Kind::Sphere3: {
      Rational s = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3] - params[0];
      return sgn(s);
    }
    case Kind::S2xS1: {
      const Rational &a = params[0], &b = params[1];
      Rational s = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
      Rational P = s + a * a + x[3] * x[3] - b * b;
      return sign_sqrt(P, -2 * a, s);
    }
    case Kind::Torus3: {
      const Rational &a = params[0], &b = params[1], &c = params[2];
      Rational W = x[0] * x[0] + x[1] * x[1];
      // rho = rp + rq sqrt(W);  P = Pp + Pq sqrt(W);  f = P - 2b sqrt(rho)
      Rational rp = W + a * a + x[2] * x[2], rq = -2 * a;
      Rational Pp = rp + b * b + x[3] * x[3] - c * c, Pq = rq;
      int sP = sign_sqrt(Pp, Pq, W);
      if (sP <= 0) {
        int srho = sign_sqrt(rp, rq, W);
        return (sP == 0 && srho == 0) ? 0 : -1;
      }
      Rational Dp = Pp * Pp + Pq * Pq * W - 4 * b * b * rp;
      Rational Dq = 2 * Pp * Pq - 4 * b * b * rq;
      return sign_sqrt(Dp, Dq, W);
    }
    case Kind::Constant: return sgn(params[0]);
    case Kind::VoxelFile: break;
  }
  throw Error(ErrorCode::InvalidArgument, "voxel files have no implicit function");
}

double ManifoldSpec::value_at(const std::vector<double>& x) const {
  auto d = [&](int i) { return params[i].get_d(); };
  switch (kind) {
    case Kind::Sphere3: return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3] - d(0);
    case Kind::S2xS1: {
      double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) - d(0);
      return r * r + x[3] * x[3] - d(1) * d(1);
    }
    case Kind::Torus3: {
      double r1 = std::sqrt(x[0] * x[0] + x[1] * x[1]) - d(0);
      double r2 = std::sqrt(r1 * r1 + x[2] * x[2]) - d(1);
      return r2 * r2 + x[3] * x[3] - d(2) * d(2);
    }
    case Kind::Constant: return d(0);
    case Kind::VoxelFile: break;
  }
  throw Error(ErrorCode::InvalidArgument, "voxel files have no implicit function");
}

bool voxels_connected(const std::vector<Vec4>& cubes) {
  if (cubes.empty()) return true;
  std::unordered_map<Vec4, int, Vec4Hash> idx;
  for (std::size_t i = 0; i < cubes.size(); ++i) idx.emplace(cubes[i], static_cast<int>(i));
  std::vector<char> seen(cubes.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    int c = stack.back();
    stack.pop_back();
    for (int i = 0; i < 4; ++i)
      for (int s : {-1, 1}) {
        Vec4 n = cubes[c];
        n[i] += s;
        auto it = idx.find(n);
        if (it != idx.end() && !seen[it->second]) {
          seen[it->second] = 1;
          ++count;
          stack.push_back(it->second);
        }
      }
  }
  return count == cubes.size();
}

VoxelSet read_voxel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open voxel file " + path);
  VoxelSet V;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::stringstream ss(line);
    std::vector<long> vals;
    long x;
    while (ss >> x) vals.push_back(x);
    if (!ss.eof()) throw Error(ErrorCode::ParseError, path + ":" + std::to_string(lineno) + ": not an integer");
    if (vals.empty()) continue;
    if (vals.size() != 4) throw Error(ErrorCode::ParseError, path + ":" + std::to_string(lineno) + ": expected 4 integers");
    V.cubes.push_back({static_cast<int>(vals[0]), static_cast<int>(vals[1]), static_cast<int>(vals[2]), static_cast<int>(vals[3])});
  }
  std::sort(V.cubes.begin(), V.cubes.end());
  V.cubes.erase(std::unique(V.cubes.begin(), V.cubes.end()), V.cubes.end());
  return V;
}

void write_voxel_file(const std::string& path, const VoxelSet& V) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  for (auto& c : V.cubes) out << c[0] << " " << c[1] << " " << c[2] << " " << c[3] << "\n";
}

VoxelSet voxelize(const ManifoldSpec& spec, int N, const VoxelizeOptions& opt) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "resolution must be >= 1");
  VoxelSet V;
  V.resolution = N;
  if (spec.kind == ManifoldSpec::Kind::VoxelFile) {
    V = read_voxel_file(spec.path);
    V.resolution = N;
  } else {
    std::array<double, 4> ext{};
    switch (spec.kind) {
      case ManifoldSpec::Kind::Sphere3: ext.fill(std::sqrt(spec.params[0].get_d())); break;
      case ManifoldSpec::Kind::S2xS1: {
        double a = spec.params[0].get_d(), b = spec.params[1].get_d();
        ext = {a + b, a + b, a + b, b};
        break;
      }
      case ManifoldSpec::Kind::Torus3: {
        double a = spec.params[0].get_d(), b = spec.params[1].get_d(), c = spec.params[2].get_d();
        ext = {a + b + c, a + b + c, b + c, c};
        break;
      }
      default: ext.fill(1.0);
    }
    std::array<int, 4> lo, hi;
    for (int i = 0; i < 4; ++i) {
      lo[i] = static_cast<int>(std::floor(-ext[i] * N)) - 1;
      hi[i] = static_cast<int>(std::ceil(ext[i] * N));
    }
    // sample offsets in quarters: corners (0,4) and interior grid (1,2,3)
    std::vector<std::array<int, 4>> offs;
    for (int m = 0; m < 16; ++m) offs.push_back({(m & 1) * 4, (m >> 1 & 1) * 4, (m >> 2 & 1) * 4, (m >> 3 & 1) * 4});
    for (int a = 1; a <= 3; ++a)
      for (int b = 1; b <= 3; ++b)
        for (int c = 1; c <= 3; ++c)
          for (int d = 1; d <= 3; ++d) offs.push_back({a, b, c, d});
    const double tol = 1e-7;
    Vec4 base;
    for (base[0] = lo[0]; base[0] < hi[0]; ++base[0])
      for (base[1] = lo[1]; base[1] < hi[1]; ++base[1])
        for (base[2] = lo[2]; base[2] < hi[2]; ++base[2])
          for (base[3] = lo[3]; base[3] < hi[3]; ++base[3]) {
            bool pos = false, neg = false, include = false;
            for (auto& o : offs) {
              std::vector<double> xd(4);
              for (int i = 0; i < 4; ++i) xd[i] = (base[i] + o[i] / 4.0) / N;
              double v = spec.value_at(xd);
              if (opt.epsilon && std::fabs(v) < *opt.epsilon) {
                include = true;
                break;
              }
              int s;
              if (std::fabs(v) > tol) {
                s = v > 0 ? 1 : -1;
              } else {
                std::vector<Rational> x(4);
                for (int i = 0; i < 4; ++i) x[i] = Rational(4 * base[i] + o[i], 4 * N);
                s = spec.sign_at(x);
              }
              if (s == 0) {
                include = true;
                break;
              }
              (s > 0 ? pos : neg) = true;
              if (pos && neg) {
                include = true;
                break;
              }
            }
            if (include) V.cubes.push_back(base);
          }
  }
  if (V.cubes.empty()) throw Error(ErrorCode::EmptyVoxelization, "no cube meets " + spec.str());
  if (!voxels_connected(V.cubes)) throw Error(ErrorCode::DisconnectedVoxelization, spec.str() + " at N=" + std::to_string(N));
  return V;
}

std::size_t BoundaryComplex::maximal_count() const { return complex.maximal_cells().size(); }

namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};

struct Shape {
  PolytopePtr poly;
  Chart chart;  // chart for the simplex translated to base 0
};

std::uint32_t shape_key(const FSimplex& s) {
  return static_cast<std::uint32_t>(s.perm[0] | s.perm[1] << 2 | s.perm[2] << 4 | s.perm[3] << 6 | s.subset << 8);
}

}  // namespace

std::vector<BoundaryComplex> boundary_dual(const VoxelSet& V, const BoundaryOptions& opt) {
  if (V.cubes.empty()) throw Error(ErrorCode::EmptyVoxelization, "empty voxel set");
  std::unordered_set<Vec4, Vec4Hash> inM;
  for (auto& c : V.cubes)
    for (int m = 0; m < 16; ++m) inM.insert({c[0] + (m & 1), c[1] + (m >> 1 & 1), c[2] + (m >> 2 & 1), c[3] + (m >> 3 & 1)});
  // mixed edges and the 4-simplices around them
  std::unordered_set<FSimplex, FSimplexHash> mixed4;
  std::vector<Vec4> inlist(inM.begin(), inM.end());
  std::sort(inlist.begin(), inlist.end());
  for (auto& v : inlist)
    for (int d = 1; d < 16; ++d)
      for (int s : {1, -1}) {
        Vec4 w = v;
        for (int i = 0; i < 4; ++i) w[i] += s * (d >> i & 1);
        if (inM.count(w)) continue;
        for (auto& m : maximal_cofaces(FSimplex::from_vertices({v, w}))) mixed4.insert(m);
      }
  auto mask_of = [&](const FSimplex& s) {
    std::uint8_t m = 0;
    auto vs = s.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i)
      if (inM.count(vs[i])) m |= static_cast<std::uint8_t>(1u << i);
    return m;
  };
  std::unordered_set<FSimplex, FSimplexHash> mixed;
  for (auto& m : mixed4) {
    std::uint8_t in5 = mask_of(m);  // chain positions
    for (std::uint8_t sub = 1; sub < 32; ++sub) {
      if (__builtin_popcount(sub) < 2) continue;
      if ((sub & in5) == 0 || (sub & ~in5 & 0x1f) == 0) continue;
      mixed.insert(m.face(sub));
    }
  }
  std::vector<FSimplex> all(mixed.begin(), mixed.end());
  std::sort(all.begin(), all.end());
  if (opt.box)
    for (auto& s : all)
      for (auto& v : s.vertices())
        if (!opt.box->contains(v)) throw Error(ErrorCode::IncompleteStar, "simplex " + s.key() + " leaves the working box");
  std::unordered_map<FSimplex, int, FSimplexHash> index;
  for (std::size_t i = 0; i < all.size(); ++i) index.emplace(all[i], static_cast<int>(i));
  // components: mixed edges joined through mixed triangles
  UnionFind uf(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i].dim() != 2) continue;
    auto vs = all[i].vertices();
    int first = -1;
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        if (inM.count(vs[a]) == inM.count(vs[b])) continue;
        int e = index.at(FSimplex::from_vertices({vs[a], vs[b]}));
        if (first < 0)
          first = e;
        else
          uf.unite(first, e);
      }
  }
  // every simplex joins the component of one of its mixed edges
  std::vector<int> comp(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i].dim() == 1) {
      comp[i] = uf.find(static_cast<int>(i));
      continue;
    }
    auto vs = all[i].vertices();
    int c = -1;
    for (std::size_t a = 0; a < vs.size() && c < 0; ++a)
      for (std::size_t b = a + 1; b < vs.size() && c < 0; ++b)
        if (inM.count(vs[a]) != inM.count(vs[b])) c = uf.find(index.at(FSimplex::from_vertices({vs[a], vs[b]})));
    comp[i] = c;
  }
  std::map<int, std::vector<int>> groups;
  for (std::size_t i = 0; i < all.size(); ++i) groups[comp[i]].push_back(static_cast<int>(i));

  std::unordered_map<std::uint32_t, Shape> shapes;
  auto shape_of = [&](const FSimplex& s) -> const Shape& {
    auto k = shape_key(s);
    auto it = shapes.find(k);
    if (it == shapes.end()) {
      FSimplex z = s;
      z.base = {0, 0, 0, 0};
      LatticePolytope P = dual_polytope(z);
      Shape sh;
      sh.poly = std::make_shared<const LatticePolytope>(intrinsic(P, &sh.chart));
      it = shapes.emplace(k, sh).first;
    }
    return it->second;
  };
  struct MapKey {
    std::uint32_t y, x;
    Vec4 off;
    bool operator==(const MapKey& o) const { return y == o.y && x == o.x && off == o.off; }
  };
  struct MapKeyHash {
    std::size_t operator()(const MapKey& k) const {
      std::size_t h = Vec4Hash{}(k.off);
      hash_mix(h, k.y);
      hash_mix(h, k.x);
      return h;
    }
  };
  std::unordered_map<MapKey, MapPtr, MapKeyHash> maps;
  auto map_for = [&](const FSimplex& ys, const FSimplex& xs) {
    MapKey k{shape_key(ys), shape_key(xs), {}};
    for (int i = 0; i < 4; ++i) k.off[i] = ys.base[i] - xs.base[i];
    auto it = maps.find(k);
    if (it != maps.end()) return it->second;
    const Shape& Y = shape_of(ys);
    const Shape& X = shape_of(xs);
    std::vector<Point> src, dst;
    Point off = make_point({k.off[0], k.off[1], k.off[2], k.off[3]});
    for (auto& v : Y.poly->vertices()) {
      src.push_back(v);
      dst.push_back(X.chart.coords(Y.chart.point(v) + off));
    }
    auto m = affine_from_points(src, dst);
    if (!m) throw Error(ErrorCode::InvalidComplex, "dual cell inclusion is not affine");
    auto p = std::make_shared<const AffineMap>(*m);
    maps.emplace(k, p);
    return MapPtr(p);
  };

  // order components by (maximal cells, least cell id) before building any of them
  auto cell_id = [&](int i) { return std::to_string(4 - all[i].dim()) + ":" + all[i].key(); };
  std::vector<std::tuple<std::size_t, std::string, int>> order;
  for (auto& [root, members] : groups) {
    std::size_t nmax = 0;
    std::string least;
    for (int i : members) {
      if (all[i].dim() == 1) ++nmax;
      std::string id = cell_id(i);
      if (least.empty() || id < least) least = id;
    }
    order.emplace_back(nmax, least, root);
  }
  std::sort(order.begin(), order.end());
  std::optional<int> only = opt.only_component;
  if (only && *only < 0) *only += static_cast<int>(order.size());  // -1 = largest
  if (only && (*only < 0 || *only >= static_cast<int>(order.size())))
    throw Error(ErrorCode::InvalidArgument, "component " + std::to_string(*opt.only_component) + " of " +
                                                std::to_string(order.size()));
  std::vector<BoundaryComplex> out;
  for (std::size_t ci = 0; ci < order.size(); ++ci) {
    if (only && static_cast<int>(ci) != *only) continue;
    const auto& members = groups.at(std::get<2>(order[ci]));
    BoundaryComplex B;
    B.component = static_cast<int>(ci);
    B.component_total = static_cast<int>(order.size());
    B.complex.n = 3;
    std::unordered_map<int, int> local;
    for (int i : members) {
      const FSimplex& s = all[i];
      int c = B.complex.add_cell(cell_id(i), shape_of(s).poly);
      local.emplace(i, c);
      B.provenance.push_back(CellProvenance{s, mask_of(s)});
    }
    for (int i : members) {
      const FSimplex& s = all[i];
      if (s.dim() < 2) continue;
      for (int j = 0; j < 5; ++j) {
        if (!(s.subset >> j & 1)) continue;
        FSimplex f = s;
        f.subset = static_cast<std::uint8_t>(s.subset & ~(1u << j));
        f = f.canonical();
        auto it = index.find(f);
        if (it == index.end()) continue;  // not mixed
        auto lt = local.find(it->second);
        if (lt == local.end()) throw Error(ErrorCode::NotPseudoManifold, "cell " + f.key() + " spans two components");
        B.complex.add_morphism(local.at(i), lt->second, map_for(s.canonical(), f));
      }
    }
    for (int c : B.complex.cells_of_dim(2))
      if (B.complex.out_morphisms(c).size() != 2)
        throw Error(ErrorCode::NotPseudoManifold, B.complex.cell(c).id + " lies in " +
                                                      std::to_string(B.complex.out_morphisms(c).size()) + " 3-cells");
    out.push_back(std::move(B));
  }
  return out;
}

Census census(const BoundaryComplex& B) {
  Census c;
  static const FacePoset to = face_poset(truncated_octahedron());
  static const FacePoset hp = face_poset(hexagonal_prism());
  std::map<const LatticePolytope*, int> memo;
  for (int m : B.complex.maximal_cells()) {
    const auto* P = B.complex.cell(m).poly.get();
    auto it = memo.find(P);
    if (it == memo.end()) {
      int kind = -1;
      auto fp = face_poset(*P);
      if (fp.nverts == to.nverts && isomorphic(fp, to))
        kind = 0;
      else if (fp.nverts == hp.nverts && isomorphic(fp, hp))
        kind = 1;
      it = memo.emplace(P, kind).first;
    }
    if (it->second < 0) throw Error(ErrorCode::UnknownCellType, B.complex.cell(m).id + ": " + P->describe());
    (it->second == 0 ? c.truncated_octahedra : c.hexagonal_prisms) += 1;
  }
  return c;
}

nlohmann::json boundary_to_json(const BoundaryComplex& B) {
  auto j = complex_to_json(B.complex);
  j["component"] = B.component;
  nlohmann::json prov = nlohmann::json::array();
  for (auto& p : B.provenance) {
    nlohmann::json e;
    e["base"] = std::vector<int>(p.simplex.base.begin(), p.simplex.base.end());
    e["perm"] = std::vector<int>(p.simplex.perm.begin(), p.simplex.perm.end());
    e["subset"] = p.simplex.subset;
    e["in"] = p.in_mask;
    prov.push_back(e);
  }
  j["provenance"] = prov;
  return j;
}

BoundaryComplex boundary_from_json(const nlohmann::json& j) {
  BoundaryComplex B;
  B.complex = complex_from_json(j);
  B.component = j.value("component", 0);
  if (j.contains("provenance")) {
    try {
      for (auto& e : j.at("provenance")) {
        CellProvenance p;
        auto base = e.at("base").get<std::vector<int>>();
        auto perm = e.at("perm").get<std::vector<int>>();
        if (base.size() != 4 || perm.size() != 4) throw Error(ErrorCode::ParseError, "bad provenance");
        for (int i = 0; i < 4; ++i) {
          p.simplex.base[i] = base[i];
          p.simplex.perm[i] = static_cast<std::uint8_t>(perm[i]);
        }
        p.simplex.subset = e.at("subset").get<std::uint8_t>();
        p.in_mask = e.at("in").get<std::uint8_t>();
        B.provenance.push_back(p);
      }
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::ParseError, std::string("provenance: ") + ex.what());
    }
    if (B.provenance.size() != B.complex.size()) throw Error(ErrorCode::ParseError, "provenance count mismatch");
  }
  return B;
}

}  // namespace polylc
