#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "polylc/complex_io.hpp"
#include "polylc/errors.hpp"
#include "polylc/resolve.hpp"

namespace polylc {

namespace {

int sgn(const Rational& r) { return mpq_sgn(r.get_mpq_t()); }

std::string key_of(const LatticePolytope& P) {
  std::string k = to_string(P.scale());
  for (auto& v : P.vertices()) k += "|" + to_string(v);
  return k;
}

// steps in lattice units between two points of a polytope at scale s
IntVec lattice_vector(const Point& from, const Point& to, const Integer& s) {
  IntVec r(from.size());
  for (std::size_t i = 0; i < from.size(); ++i) {
    Rational y = (to[i] - from[i]) * s;
    if (y.get_den() != 1) throw Error(ErrorCode::InvalidArgument, "points not in the lattice");
    r[i] = y.get_num();
  }
  return r;
}

Rational idot(const IntVec& u, const IntVec& v) {
  Integer s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return Rational(s);
}

Rational pdot(const IntVec& u, const Point& x) {
  Rational s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) s += Rational(u[i]) * x[i];
  return s;
}

Rational hdot(const Halfspace& h, const Point& x) { return dot(h.a, x) - h.b; }

Point step_point(const Point& v, const IntVec& step, const Rational& k, const Integer& s) {
  Point p = v;
  for (std::size_t i = 0; i < v.size(); ++i) p[i] += k * Rational(step[i]) / Rational(s);
  return p;
}

class PolyPool {
 public:
  PolytopePtr intern(const LatticePolytope& P) {
    std::string k = key_of(P);
    auto it = pool_.find(k);
    if (it == pool_.end()) it = pool_.emplace(k, std::make_shared<const LatticePolytope>(P)).first;
    return it->second;
  }

 private:
  std::unordered_map<std::string, PolytopePtr> pool_;
};

}  // namespace

// ---------------------------------------------------------------------------
// decompose / assemble

LabelledComplex decompose(const PolyComplex& C, std::vector<std::vector<int>>* cell_labels) {
  LabelledComplex L;
  L.n = C.n;
  std::vector<int> label(C.size(), -1);
  for (std::size_t c = 0; c < C.size(); ++c)
    if (C.cell(static_cast<int>(c)).dim() == 0) {
      label[c] = static_cast<int>(L.vertex_names.size());
      L.vertex_names.push_back(C.cell(static_cast<int>(c)).id);
    }
  if (cell_labels) cell_labels->assign(C.size(), {});
  std::vector<char> named(C.size(), 0);
  std::unordered_map<const LatticePolytope*, PolytopePtr> memo;
  PolyPool pool;
  for (int c : C.maximal_cells()) {
    const auto& P = *C.cell(c).poly;
    auto fc = C.face_cells(c);
    std::vector<int> lab(P.vertices().size(), -1);
    for (auto& [z, vs] : fc)
      if (C.cell(z).dim() == 0) lab[vs[0]] = label[z];
    for (int x : lab)
      if (x < 0) throw Error(ErrorCode::InvalidComplex, "cell " + C.cell(c).id + " has a vertex without a 0-cell");
    for (auto& [z, vs] : fc) {
      if (named[z]) continue;
      named[z] = 1;
      std::vector<int> key;
      for (int v : vs) key.push_back(lab[v]);
      std::sort(key.begin(), key.end());
      if (cell_labels) (*cell_labels)[z] = key;
      L.face_names.emplace(std::move(key), C.cell(z).id);
    }
    auto it = memo.find(&P);
    if (it == memo.end()) {
      PolytopePtr q = (P.dim() == static_cast<int>(P.ambient_dim())) ? C.cell(c).poly : pool.intern(intrinsic(P));
      it = memo.emplace(&P, q).first;
    }
    // intrinsic() keeps the vertex order
    L.cells.push_back(LabelledCell{C.cell(c).id, it->second, lab});
  }
  return L;
}

namespace {

struct MapKey {
  const LatticePolytope* y;
  const LatticePolytope* x;
  std::vector<int> idx;
  bool operator==(const MapKey& o) const { return y == o.y && x == o.x && idx == o.idx; }
};
struct MapKeyHash {
  std::size_t operator()(const MapKey& k) const {
    std::size_t h = VecHash<int>{}(k.idx);
    hash_mix(h, std::hash<const void*>{}(k.y));
    hash_mix(h, std::hash<const void*>{}(k.x));
    return h;
  }
};
struct FaceKeyHash {
  std::size_t operator()(const std::pair<const LatticePolytope*, int>& k) const {
    std::size_t h = std::hash<const void*>{}(k.first);
    hash_mix(h, static_cast<std::size_t>(k.second));
    return h;
  }
};

}  // namespace

PolyComplex assemble(const LabelledComplex& L) {
  PolyComplex C;
  C.n = L.n;
  PolyPool pool;
  std::vector<std::vector<int>> labels;
  std::unordered_map<std::vector<int>, int, VecHash<int>> by_key;
  struct FaceMemo {
    PolytopePtr F;
    std::vector<int> idx;  // F vertex j = S vertex idx[j]
  };
  std::unordered_map<std::pair<const LatticePolytope*, int>, FaceMemo, FaceKeyHash> face_memo;
  std::unordered_map<const LatticePolytope*, std::vector<int>> facets_memo;
  std::unordered_map<MapKey, MapPtr, MapKeyHash> maps;
  std::size_t fresh = 0;
  for (auto& m : L.cells) {
    if (m.labels.size() != m.poly->vertices().size())
      throw Error(ErrorCode::InvalidArgument, "cell " + m.id + ": one label per vertex required");
    int c = C.add_cell(m.id, m.poly);
    labels.push_back(m.labels);
    std::vector<int> key = m.labels;
    std::sort(key.begin(), key.end());
    by_key.emplace(std::move(key), c);
  }
  for (std::size_t x = 0; x < C.size(); ++x) {  // C grows while iterating
    const PolytopePtr Sp = C.cell(static_cast<int>(x)).poly;
    const LatticePolytope& S = *Sp;
    if (S.dim() <= 0) continue;
    auto fit = facets_memo.find(&S);
    if (fit == facets_memo.end()) fit = facets_memo.emplace(&S, S.faces_of_dim(S.dim() - 1)).first;
    for (int fi : fit->second) {
      const auto& fverts = S.faces()[fi].verts;
      std::vector<int> key;
      for (int v : fverts) key.push_back(labels[x][v]);
      std::sort(key.begin(), key.end());
      auto found = by_key.find(key);
      if (found == by_key.end()) {
        auto mit = face_memo.find({&S, fi});
        if (mit == face_memo.end()) {
          std::vector<Point> pts;
          for (int v : fverts) pts.push_back(S.vertices()[v]);
          LatticePolytope H = LatticePolytope::hull(pts, S.scale());
          FaceMemo fm;
          for (auto& p : H.vertices()) fm.idx.push_back(S.find_vertex(p));
          fm.F = pool.intern(intrinsic(H));
          mit = face_memo.emplace(std::make_pair(&S, fi), fm).first;
        }
        std::vector<int> fl;
        for (int j : mit->second.idx) fl.push_back(labels[x][j]);
        std::string name;
        if (key.size() == 1) {
          name = L.vertex_names.at(key[0]);
        } else {
          auto nit = L.face_names.find(key);
          name = nit != L.face_names.end() ? nit->second : L.fresh_prefix + "f" + std::to_string(fresh++);
        }
        int y = C.add_cell(name, mit->second.F);
        labels.push_back(fl);
        found = by_key.emplace(key, y).first;
      }
      int y = found->second;
      const LatticePolytope& Y = *C.cell(y).poly;
      MapKey mk{&Y, &S, {}};
      for (int l : labels[y]) {
        int pos = -1;
        for (int v : fverts)
          if (labels[x][v] == l) pos = v;
        mk.idx.push_back(pos);
      }
      auto mp = maps.find(mk);
      if (mp == maps.end()) {
        std::vector<Point> src, dst;
        for (std::size_t j = 0; j < Y.vertices().size(); ++j) {
          src.push_back(Y.vertices()[j]);
          dst.push_back(S.vertices()[mk.idx[j]]);
        }
        auto m = affine_from_points(src, dst);
        if (!m) throw Error(ErrorCode::InvalidComplex, "face " + C.cell(y).id + " is not affinely identified");
        mp = maps.emplace(mk, std::make_shared<const AffineMap>(*m)).first;
      }
      C.add_morphism(y, static_cast<int>(x), mp->second);
    }
  }
  return C;
}

BlowUpContext make_context(const PolyComplex& C) {
  BlowUpContext ctx;
  ctx.C = &C;
  ctx.L = decompose(C, &ctx.cell_labels);
  ctx.label_of_cell.assign(C.size(), -1);
  int k = 0;
  for (std::size_t c = 0; c < C.size(); ++c)
    if (C.cell(static_cast<int>(c)).dim() == 0) ctx.label_of_cell[c] = k++;
  ctx.incidence.assign(ctx.L.vertex_names.size(), {});
  for (std::size_t i = 0; i < ctx.L.cells.size(); ++i)
    for (std::size_t j = 0; j < ctx.L.cells[i].labels.size(); ++j)
      ctx.incidence[ctx.L.cells[i].labels[j]].push_back({static_cast<int>(i), static_cast<int>(j)});
  return ctx;
}

// ---------------------------------------------------------------------------
// truncation batches

namespace {

struct CutOrigin {
  int old = -1;     // surviving vertex of S
  int cut = -1;     // index into the cut list
  int a = -1, b = -1;  // S edge: a removed, b kept
};

struct TruncResult {
  PolytopePtr poly;
  std::vector<CutOrigin> origin;
};

// nullopt when regions overlap, a vertex lies on a cut, or new vertices miss the lattice
std::optional<std::pair<LatticePolytope, std::vector<CutOrigin>>> truncate_all(const LatticePolytope& S,
                                                                                const std::vector<Halfspace>& cuts) {
  const auto& V = S.vertices();
  std::vector<std::vector<Rational>> val(cuts.size(), std::vector<Rational>(V.size()));
  std::vector<int> removed_by(V.size(), -1);
  for (std::size_t k = 0; k < cuts.size(); ++k)
    for (std::size_t i = 0; i < V.size(); ++i) {
      val[k][i] = hdot(cuts[k], V[i]);
      int s = sgn(val[k][i]);
      if (s == 0) return std::nullopt;
      if (s < 0) {
        if (removed_by[i] >= 0) return std::nullopt;
        removed_by[i] = static_cast<int>(k);
      }
    }
  std::vector<Point> pts;
  std::vector<CutOrigin> org;
  for (std::size_t i = 0; i < V.size(); ++i)
    if (removed_by[i] < 0) {
      pts.push_back(V[i]);
      org.push_back(CutOrigin{static_cast<int>(i), -1, -1, -1});
    }
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    bool any = false;
    for (std::size_t i = 0; i < V.size(); ++i) any = any || removed_by[i] == static_cast<int>(k);
    if (!any) return std::nullopt;  // cut misses the cell
    for (auto [p, q] : S.edges()) {
      int a = p, b = q;
      if (sgn(val[k][a]) > 0) std::swap(a, b);
      if (!(sgn(val[k][a]) < 0 && sgn(val[k][b]) > 0)) continue;
      Rational t = val[k][a] / (val[k][a] - val[k][b]);
      Point x = V[a] + t * (V[b] - V[a]);
      for (std::size_t m = 0; m < cuts.size(); ++m)
        if (m != k && sgn(hdot(cuts[m], x)) <= 0) return std::nullopt;
      for (auto& c : x) {
        Rational y = c * S.scale();
        if (y.get_den() != 1) return std::nullopt;
      }
      pts.push_back(x);
      org.push_back(CutOrigin{-1, static_cast<int>(k), a, b});
    }
  }
  LatticePolytope R = S;
  for (auto& h : cuts) R = truncate(R, h);
  if (R.scale() != S.scale() || R.vertices().size() != pts.size()) return std::nullopt;
  std::vector<CutOrigin> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    int j = R.find_vertex(pts[i]);
    if (j < 0) return std::nullopt;
    out[j] = org[i];
  }
  return std::make_pair(R, out);
}

std::string cuts_key(const std::vector<Halfspace>& cuts) {
  std::string k;
  for (auto& h : cuts) k += to_string(h.a) + ">=" + to_string(h.b) + ";";
  return k;
}

}  // namespace

bool truncations_disjoint(const LatticePolytope& S, const std::vector<Halfspace>& cuts) {
  return truncate_all(S, cuts).has_value();
}

namespace {

std::map<std::string, std::vector<std::pair<int, int>>> cuts_by_cell(const std::vector<BlowUpRecord>& batch) {
  std::map<std::string, std::vector<std::pair<int, int>>> m;  // cell -> (record, truncation)
  for (std::size_t r = 0; r < batch.size(); ++r)
    for (std::size_t t = 0; t < batch[r].truncations.size(); ++t)
      m[batch[r].truncations[t].cell].push_back({static_cast<int>(r), static_cast<int>(t)});
  return m;
}

Integer batch_scale(const std::vector<BlowUpRecord>& batch) {
  if (batch.empty()) return 1;
  for (auto& r : batch)
    if (r.scale != batch[0].scale || r.batch != batch[0].batch)
      throw Error(ErrorCode::InvalidArgument, "records of one batch must share batch number and scale");
  if (batch[0].scale <= 0) throw Error(ErrorCode::InvalidArgument, "scale must be positive");
  return batch[0].scale;
}

}  // namespace

bool batch_disjoint(const BlowUpContext& ctx, const std::vector<BlowUpRecord>& batch) {
  Integer f = batch_scale(batch);
  auto by_cell = cuts_by_cell(batch);
  std::unordered_map<std::string, int> cell_index;
  for (std::size_t i = 0; i < ctx.L.cells.size(); ++i) cell_index.emplace(ctx.L.cells[i].id, static_cast<int>(i));
  std::map<std::pair<const LatticePolytope*, std::string>, bool> memo;
  for (auto& [cell, list] : by_cell) {
    auto it = cell_index.find(cell);
    if (it == cell_index.end()) return false;
    const auto& P = *ctx.L.cells[it->second].poly;
    std::vector<Halfspace> hs;
    for (auto [r, t] : list) hs.push_back(batch[r].truncations[t].keep);
    auto key = std::make_pair(&P, cuts_key(hs));
    auto m = memo.find(key);
    if (m == memo.end()) m = memo.emplace(key, truncations_disjoint(P.with_scale(P.scale() * f), hs)).first;
    if (!m->second) return false;
  }
  return true;
}

PolyComplex apply_batch(const PolyComplex& C, const std::vector<BlowUpRecord>& batch, CutNames* names) {
  return apply_batch(make_context(C), batch, names);
}

PolyComplex apply_batch(const BlowUpContext& ctx, const std::vector<BlowUpRecord>& batch, CutNames* names) {
  if (batch.empty()) return *ctx.C;
  const Integer f = batch_scale(batch);
  const int bno = batch[0].batch;
  LabelledComplex out;
  out.n = ctx.L.n;
  out.vertex_names = ctx.L.vertex_names;
  out.face_names = ctx.L.face_names;
  out.fresh_prefix = "b" + std::to_string(bno) + ":";
  std::unordered_map<std::string, int> label_of;
  for (std::size_t i = 0; i < out.vertex_names.size(); ++i) label_of.emplace(out.vertex_names[i], static_cast<int>(i));
  std::map<std::tuple<int, int, int>, int> cut_label;  // (record, from label, to label)
  auto cut_vertex = [&](int r, int a, int b) {
    auto k = std::make_tuple(r, a, b);
    auto it = cut_label.find(k);
    if (it == cut_label.end()) {
      int l = static_cast<int>(out.vertex_names.size());
      out.vertex_names.push_back(out.fresh_prefix + "v" + std::to_string(cut_label.size()));
      it = cut_label.emplace(k, l).first;
    }
    return it->second;
  };
  auto by_cell = cuts_by_cell(batch);
  std::unordered_map<const LatticePolytope*, PolytopePtr> scaled;
  PolyPool pool;
  std::map<std::pair<const LatticePolytope*, std::string>, TruncResult> memo;
  std::set<std::string> seen_cells;
  for (auto& cell : ctx.L.cells) {
    auto sit = scaled.find(cell.poly.get());
    if (sit == scaled.end())
      sit = scaled.emplace(cell.poly.get(), pool.intern(cell.poly->with_scale(cell.poly->scale() * f))).first;
    const PolytopePtr S = sit->second;
    auto bc = by_cell.find(cell.id);
    if (bc == by_cell.end()) {
      out.cells.push_back(LabelledCell{cell.id, S, cell.labels});
      continue;
    }
    seen_cells.insert(cell.id);
    std::vector<Halfspace> hs;
    for (auto [r, t] : bc->second) hs.push_back(batch[r].truncations[t].keep);
    auto key = std::make_pair(S.get(), cuts_key(hs));
    auto mit = memo.find(key);
    if (mit == memo.end()) {
      auto res = truncate_all(*S, hs);
      if (!res) throw Error(ErrorCode::InvalidArgument, "truncations of cell " + cell.id + " overlap or miss the lattice");
      mit = memo.emplace(key, TruncResult{pool.intern(res->first), res->second}).first;
    }
    std::vector<int> lab;
    for (auto& o : mit->second.origin) {
      if (o.old >= 0)
        lab.push_back(cell.labels[o.old]);
      else
        lab.push_back(cut_vertex(bc->second[o.cut].first, cell.labels[o.a], cell.labels[o.b]));
    }
    out.cells.push_back(LabelledCell{cell.id, mit->second.poly, lab});
  }
  for (auto& [cell, list] : by_cell)
    if (!seen_cells.count(cell)) throw Error(ErrorCode::NotInComplex, "truncated cell " + cell + " is not a maximal cell");
  for (std::size_t r = 0; r < batch.size(); ++r) {
    const auto& rec = batch[r];
    if (!rec.new_poly) continue;
    if (rec.new_vertices.size() != rec.new_poly->vertices().size())
      throw Error(ErrorCode::InvalidArgument, "record " + rec.target + ": one cut vertex per new-cell vertex");
    std::vector<int> lab;
    for (auto& cv : rec.new_vertices) {
      auto a = label_of.find(cv.from), b = label_of.find(cv.to);
      if (a == label_of.end() || b == label_of.end())
        throw Error(ErrorCode::NotInComplex, "cut vertex " + cv.from + ">" + cv.to);
      auto it = cut_label.find(std::make_tuple(static_cast<int>(r), a->second, b->second));
      if (it == cut_label.end())
        throw Error(ErrorCode::InvalidArgument, "record " + rec.target + ": vertex " + cv.from + ">" + cv.to +
                                                    " is not produced by its truncations");
      lab.push_back(it->second);
    }
    out.cells.push_back(LabelledCell{rec.new_cell, rec.new_poly, lab});
  }
  if (names)
    for (auto& [k, l] : cut_label)
      (*names)[std::make_tuple(std::get<0>(k), out.vertex_names[std::get<1>(k)], out.vertex_names[std::get<2>(k)])] =
          out.vertex_names[l];
  return assemble(out);
}

PolyComplex replay(const PolyComplex& C, const std::vector<BlowUpRecord>& records) {
  PolyComplex cur = C;
  std::size_t i = 0;
  while (i < records.size()) {
    std::size_t j = i;
    while (j < records.size() && records[j].batch == records[i].batch) ++j;
    std::vector<BlowUpRecord> batch(records.begin() + static_cast<long>(i), records.begin() + static_cast<long>(j));
    cur = apply_batch(cur, batch);
    i = j;
  }
  return cur;
}

// ---------------------------------------------------------------------------
// records as JSON

namespace {

json polytope_json(const LatticePolytope& P) {
  json j;
  j["scale"] = to_string(P.scale());
  json vs = json::array();
  for (auto& v : P.vertices()) vs.push_back(point_to_json(v));
  j["vertices"] = vs;
  return j;
}

}  // namespace

nlohmann::json record_to_json(const BlowUpRecord& r) {
  json j;
  j["kind"] = r.kind;
  j["target"] = r.target;
  j["batch"] = r.batch;
  j["scale"] = to_string(r.scale);
  json ts = json::array();
  for (auto& t : r.truncations) {
    json e;
    e["cell"] = t.cell;
    e["normal"] = point_to_json(t.keep.a);
    e["value"] = to_string(t.keep.b);
    ts.push_back(e);
  }
  j["truncations"] = ts;
  if (r.new_poly) {
    j["new_cell"] = r.new_cell;
    j["new_polytope"] = polytope_json(*r.new_poly);
    json nv = json::array();
    for (auto& c : r.new_vertices) nv.push_back(json::array({c.from, c.to}));
    j["new_vertices"] = nv;
  }
  return j;
}

BlowUpRecord record_from_json(const nlohmann::json& j) {
  try {
    BlowUpRecord r;
    r.kind = j.at("kind").get<std::string>();
    r.target = j.at("target").get<std::string>();
    r.batch = j.at("batch").get<int>();
    r.scale = Integer(j.at("scale").get<std::string>());
    for (auto& e : j.at("truncations")) {
      Truncation t;
      t.cell = e.at("cell").get<std::string>();
      t.keep.a = point_from_json(e.at("normal"));
      t.keep.b = parse_rational(e.at("value").get<std::string>());
      r.truncations.push_back(t);
    }
    if (j.contains("new_cell")) {
      r.new_cell = j.at("new_cell").get<std::string>();
      const auto& p = j.at("new_polytope");
      std::vector<Point> vs;
      for (auto& v : p.at("vertices")) vs.push_back(point_from_json(v));
      auto P = LatticePolytope::hull(vs, Integer(p.at("scale").get<std::string>()));
      if (P.vertices().size() != vs.size()) throw Error(ErrorCode::ParseError, "new_polytope vertices are not in convex position");
      std::vector<CutVertex> cv;
      for (auto& e : j.at("new_vertices")) cv.push_back(CutVertex{e.at(0).get<std::string>(), e.at(1).get<std::string>()});
      if (cv.size() != vs.size()) throw Error(ErrorCode::ParseError, "new_vertices count");
      r.new_vertices.resize(vs.size());
      for (std::size_t i = 0; i < vs.size(); ++i) r.new_vertices[P.find_vertex(vs[i])] = cv[i];
      r.new_poly = std::make_shared<const LatticePolytope>(P);
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("record: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::ParseError, std::string("record: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// classification

VertexClass classify_vertex(const BoundaryComplex& B, const std::string& id) {
  int v = B.complex.find(id);
  if (v < 0) throw Error(ErrorCode::NotInComplex, id);
  return classify_vertex(B, v);
}

namespace {

int case_of_pair(int a, int b) {
  static const std::map<std::pair<int, int>, int> table{{{0, 1}, 1}, {{0, 2}, 2}, {{0, 3}, 3},
                                                        {{0, 4}, 4}, {{1, 2}, 5}, {{1, 3}, 6}};
  auto it = table.find({std::min(a, b), std::max(a, b)});
  return it == table.end() ? 0 : it->second;
}

}  // namespace

VertexClass classify_vertex(const BoundaryComplex& B, int v) {
  const auto& C = B.complex;
  if (v < 0 || v >= static_cast<int>(C.size()) || C.cell(v).dim() != 0)
    throw Error(ErrorCode::NotInComplex, "not a vertex of the complex");
  if (B.provenance.size() != C.size()) throw Error(ErrorCode::InvalidArgument, "complex has no provenance");
  const auto& P = B.provenance[v];
  if (P.simplex.dim() != 4) throw Error(ErrorCode::InvalidArgument, "vertex provenance is not a 4-simplex");
  VertexClass out;
  out.in_count = __builtin_popcount(P.in_mask);
  if (out.in_count != 2 && out.in_count != 3) return out;
  out.prism = true;
  auto& vc = out.vcase;
  std::vector<int> side;
  vc.complemented = out.in_count == 3;
  for (int i = 0; i < 5; ++i)
    if (((P.in_mask >> i) & 1) != (vc.complemented ? 1 : 0)) side.push_back(i);
  vc.pair = {side[0], side[1]};
  vc.number = case_of_pair(side[0], side[1]);
  if (vc.number == 0) {
    vc.reversed = true;
    vc.number = case_of_pair(4 - side[0], 4 - side[1]);
  }
  // edges at v by omitted chain position
  const auto verts = P.simplex.vertices();
  std::array<int, 5> by_omit;
  by_omit.fill(-1);
  for (int e : C.up_set(v)) {
    if (C.cell(e).dim() != 1) continue;
    auto ev = B.provenance[e].simplex.vertices();
    int omit = -1;
    for (int i = 0; i < 5; ++i)
      if (std::find(ev.begin(), ev.end(), verts[i]) == ev.end()) omit = i;
    by_omit[omit] = e;
  }
  const Vec4 b0 = barycenter5(P.simplex);
  for (int k = 0; k < 5; ++k) {
    if (by_omit[k] < 0) throw Error(ErrorCode::InvalidComplex, "prism vertex " + C.cell(v).id + " lacks an edge");
    int label = vc.reversed ? 4 - k : k;
    vc.ray_cells[label] = by_omit[k];
    auto facet = P.simplex.face(static_cast<std::uint8_t>(0x1f & ~(1u << k)));
    Vec4 other{};
    for (auto& m : maximal_cofaces(facet))
      if (!(m == P.simplex.canonical())) other = barycenter5(m);
    IntVec d(4);
    for (int i = 0; i < 4; ++i) d[i] = other[i] - b0[i];
    vc.directions[label] = d;
  }
  return out;
}

// ---------------------------------------------------------------------------
// fans

std::vector<std::vector<int>> case_cones(int c) {
  static const char* table[6][6] = {{"BDE", "BCE", "BCD", "ADE", "ACE", "ACD"}, {"CDE", "BCE", "BCD", "ADE", "ABE", "ABD"},
                                    {"CDE", "BDE", "BCD", "ACE", "ABE", "ABC"}, {"CDE", "BDE", "BCE", "ACD", "ABD", "ABC"},
                                    {"CDE", "ACE", "ACD", "BDE", "ABE", "ABD"}, {"CDE", "ADE", "ACD", "BCE", "ABE", "ABC"}};
  if (c < 1 || c > 6) throw Error(ErrorCode::InvalidCase, "case " + std::to_string(c));
  std::vector<std::vector<int>> out;
  for (auto* t : table[c - 1]) {
    std::vector<int> cone;
    for (const char* p = t; *p; ++p) cone.push_back(*p - 'A');
    std::sort(cone.begin(), cone.end());
    out.push_back(cone);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::array<IntVec, 5> table_directions() {
  return {to_intvec({-1, -1, -1, -2}), to_intvec({0, 0, -1, 1}), to_intvec({0, -1, 1, 0}), to_intvec({-1, 1, 0, 0}),
          to_intvec({2, 1, 1, 1})};
}

namespace {

FanEmbedding make_fan(int number, std::vector<std::string> labels, std::vector<IntVec> image,
                      std::vector<std::vector<int>> cones) {
  FanEmbedding f;
  f.case_number = number;
  f.labels = std::move(labels);
  f.image = std::move(image);
  for (auto& c : cones) std::sort(c.begin(), c.end());
  std::sort(cones.begin(), cones.end());
  f.cones = std::move(cones);
  std::vector<Point> pts;
  for (auto& p : f.image) pts.push_back(to_point(p));
  f.polytope = std::make_shared<const LatticePolytope>(LatticePolytope::hull(pts));
  return f;
}

}  // namespace

bool FanEmbedding::strongly_polytopal(std::string* why) const {
  auto fail = [&](const std::string& w) {
    if (why) *why = w;
    return false;
  };
  if (!polytope || image.empty()) return fail("empty fan");
  const auto& P = *polytope;
  const std::size_t n = image[0].size();
  if (P.dim() != static_cast<int>(n)) return fail("image points do not span");
  if (P.vertices().size() != image.size()) return fail("image points not in convex position");
  std::vector<int> lab(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) {
    int j = P.find_vertex(to_point(image[i]));
    if (j < 0) return fail("image point " + to_string(to_point(image[i])) + " is not a vertex");
    lab[j] = static_cast<int>(i);
  }
  std::vector<std::vector<int>> facets;
  for (int fi : P.faces_of_dim(P.dim() - 1)) {
    std::vector<int> c;
    for (int v : P.faces()[fi].verts) c.push_back(lab[v]);
    std::sort(c.begin(), c.end());
    facets.push_back(c);
  }
  std::sort(facets.begin(), facets.end());
  if (facets != cones) return fail("facets of the hull differ from the cones");
  // origin interior: then the face fan is complete; its cones must be smooth
  auto fd = facet_presentation(P);
  bool interior = true;
  for (auto& F : fd) interior = interior && F.a > 0;
  if (interior) {
    for (auto& c : cones) {
      if (c.size() != n) return fail("cone with wrong ray count");
      IntMatrix M;
      for (int r : c) M.push_back(image[r]);
      Integer d = determinant(M);
      if (d != 1 && d != -1) return fail("cone not smooth");
    }
  }
  return true;
}

FanEmbedding fan_embedding(int c) {
  static const long img[6][5][3] = {
      {{0, 0, 1}, {0, 0, -1}, {1, 0, 0}, {0, 1, 0}, {-1, -1, 0}}, {{0, 0, 1}, {1, 0, 0}, {0, 0, -1}, {0, 1, 0}, {-1, -1, 0}},
      {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}, {0, 0, -1}, {-1, -1, 0}}, {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}, {-1, -1, 0}, {0, 0, -1}},
      {{1, 0, 0}, {0, 0, 1}, {0, 0, -1}, {0, 1, 0}, {-1, -1, 0}}, {{1, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 0, -1}, {-1, -1, 0}}};
  if (c < 1 || c > 6) throw Error(ErrorCode::InvalidCase, "case " + std::to_string(c));
  std::vector<IntVec> image;
  for (auto& p : img[c - 1]) image.push_back(to_intvec({p[0], p[1], p[2]}));
  auto f = make_fan(c, {"A", "B", "C", "D", "E"}, image, case_cones(c));
  std::string why;
  if (!f.strongly_polytopal(&why)) throw Error(ErrorCode::FanNotPolytopal, "case " + std::to_string(c) + ": " + why);
  return f;
}

namespace {

// edge sequences of smooth polygons with primitive edges (found by exhaustive search over
// sequences of primitive steps with consecutive determinant 1 summing to zero)
const std::map<int, std::vector<std::array<long, 2>>>& polygon_steps() {
  static const std::map<int, std::vector<std::array<long, 2>>> t{
      {3, {{1, 0}, {-1, 1}, {0, -1}}},
      {4, {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}},
      {6, {{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}}},
      {8, {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}},
      {9, {{1, 0}, {3, 1}, {2, 1}, {1, 1}, {0, 1}, {-1, 0}, {-2, -1}, {-3, -2}, {-1, -1}}},
      {10, {{1, 0}, {4, 1}, {3, 1}, {2, 1}, {1, 1}, {-1, 0}, {-4, -1}, {-3, -1}, {-2, -1}, {-1, -1}}},
      {12, {{1, 0}, {4, 1}, {3, 1}, {2, 1}, {3, 2}, {1, 1}, {-1, 0}, {-4, -1}, {-3, -1}, {-2, -1}, {-3, -2}, {-1, -1}}}};
  return t;
}

}  // namespace

std::vector<int> unit_edge_polygon_degrees() {
  std::vector<int> d;
  for (auto& [k, v] : polygon_steps()) d.push_back(k);
  return d;
}

std::optional<LatticePolytope> unit_edge_polygon(int d) {
  auto it = polygon_steps().find(d);
  if (it == polygon_steps().end()) return std::nullopt;
  std::vector<Point> pts;
  long x = 0, y = 0;
  for (auto& s : it->second) {
    pts.push_back(make_point({x, y}));
    x += s[0];
    y += s[1];
  }
  auto P = LatticePolytope::hull(pts);
  if (static_cast<int>(P.vertices().size()) != d || !is_smooth(P))
    throw Error(ErrorCode::InvalidArgument, "polygon table entry " + std::to_string(d) + " is broken");
  return P;
}

// ---------------------------------------------------------------------------
// vertex blow-ups

namespace {

std::pair<int, int> edge_endpoints(const BlowUpContext& ctx, int e) {
  const auto& l = ctx.cell_labels.at(e);
  if (ctx.C->cell(e).dim() != 1 || l.size() != 2) throw Error(ErrorCode::InvalidArgument, "not an edge cell");
  return {l[0], l[1]};
}

int label_of(const BlowUpContext& ctx, int cell) {
  int l = ctx.label_of_cell.at(cell);
  if (l < 0) throw Error(ErrorCode::InvalidArgument, ctx.C->cell(cell).id + " is not a vertex");
  return l;
}

}  // namespace

BlowUpRecord plan_vertex_blow_up(const BlowUpContext& ctx, int v, const FanEmbedding& emb,
                                 const std::vector<int>& ray_cells, const Integer& factor) {
  const auto& C = *ctx.C;
  const int lv = label_of(ctx, v);
  if (ray_cells.size() != emb.image.size()) throw Error(ErrorCode::InvalidArgument, "one ray cell per fan label");
  std::map<int, int> ray_of_nbr;  // neighbour label -> fan label index
  for (std::size_t j = 0; j < ray_cells.size(); ++j) {
    auto [a, b] = edge_endpoints(ctx, ray_cells[j]);
    if (a != lv && b != lv) throw Error(ErrorCode::InvalidArgument, "ray cell does not contain the vertex");
    ray_of_nbr[a == lv ? b : a] = static_cast<int>(j);
  }
  BlowUpRecord rec;
  rec.kind = "vertex";
  rec.target = C.cell(v).id;
  rec.scale = factor;
  rec.new_cell = "P:" + rec.target;
  std::set<std::vector<int>> cones_seen;
  for (auto [ci, local] : ctx.incidence.at(lv)) {
    const auto& cell = ctx.L.cells[ci];
    const LatticePolytope S = cell.poly->with_scale(cell.poly->scale() * factor);
    const auto& nb = S.neighbors()[local];
    if (static_cast<int>(nb.size()) != S.dim() || vertex_cone_index(S, local) != 1)
      throw Error(ErrorCode::SmoothnessRequired, "cell " + cell.id + " is not smooth at " + rec.target);
    auto steps = primitive_edge_steps(S, local);
    std::vector<int> cone;
    RatMatrix E;
    for (std::size_t k = 0; k < nb.size(); ++k) {
      auto it = ray_of_nbr.find(cell.labels[nb[k]]);
      if (it == ray_of_nbr.end())
        throw Error(ErrorCode::FanNotPolytopal, "edge of " + cell.id + " at " + rec.target + " has no ray");
      cone.push_back(it->second);
      E.emplace_back(steps[k].begin(), steps[k].end());
    }
    std::sort(cone.begin(), cone.end());
    if (!std::binary_search(emb.cones.begin(), emb.cones.end(), cone) || !cones_seen.insert(cone).second)
      throw Error(ErrorCode::FanNotPolytopal, "cone of " + cell.id + " at " + rec.target + " is not a cone of the fan");
    auto u = solve_linear(E, std::vector<Rational>(E.size(), Rational(1)));
    if (!u) throw Error(ErrorCode::SmoothnessRequired, "degenerate corner in " + cell.id);
    Truncation t;
    t.cell = cell.id;
    t.keep.a = *u;
    t.keep.b = dot(*u, S.vertices()[local]) + Rational(1) / Rational(S.scale());
    rec.truncations.push_back(t);
  }
  if (cones_seen.size() != emb.cones.size())
    throw Error(ErrorCode::FanNotPolytopal, "fan has cones without cells at " + rec.target);
  rec.new_poly = emb.polytope;
  for (const auto& p : emb.polytope->vertices()) {
    int j = -1;
    for (std::size_t k = 0; k < emb.image.size(); ++k)
      if (to_point(emb.image[k]) == p) j = static_cast<int>(k);
    auto [a, b] = edge_endpoints(ctx, ray_cells[j]);
    int w = a == lv ? b : a;
    rec.new_vertices.push_back(CutVertex{rec.target, ctx.L.vertex_names[w]});
  }
  return rec;
}

BlowUpResult blow_up_vertex(const PolyComplex& C, int v, const FanEmbedding& emb, const std::vector<int>& ray_cells) {
  std::string why;
  if (!emb.strongly_polytopal(&why)) throw Error(ErrorCode::FanNotPolytopal, why);
  auto ctx = make_context(C);
  BlowUpResult r;
  r.record = plan_vertex_blow_up(ctx, v, emb, ray_cells, 2);
  r.complex = apply_batch(ctx, {r.record});
  return r;
}

std::pair<FanEmbedding, std::vector<int>> neighbourhood_fan(const PolyComplex& C, int v) {
  if (v < 0 || v >= static_cast<int>(C.size()) || C.cell(v).dim() != 0)
    throw Error(ErrorCode::NotInComplex, "not a vertex");
  auto ctx = make_context(C);
  const int lv = ctx.label_of_cell[v];
  // rays = edge cells at v, cones = their sets per maximal cell
  std::vector<int> rays;
  for (int e : C.up_set(v))
    if (C.cell(e).dim() == 1) rays.push_back(e);
  std::map<int, int> ray_of_nbr;
  for (std::size_t j = 0; j < rays.size(); ++j) {
    auto [a, b] = edge_endpoints(ctx, rays[j]);
    ray_of_nbr[a == lv ? b : a] = static_cast<int>(j);
  }
  std::vector<std::vector<int>> cones;
  for (auto [ci, local] : ctx.incidence[lv]) {
    const auto& cell = ctx.L.cells[ci];
    const auto& S = *cell.poly;
    if (!smooth_at_vertex_index(S, local))
      throw Error(ErrorCode::SmoothnessRequired, "cell " + cell.id + " is not smooth at " + C.cell(v).id);
    std::vector<int> cone;
    for (int w : S.neighbors()[local]) cone.push_back(ray_of_nbr.at(cell.labels[w]));
    std::sort(cone.begin(), cone.end());
    cones.push_back(cone);
  }
  std::sort(cones.begin(), cones.end());
  std::vector<std::string> names;
  for (int e : rays) names.push_back(C.cell(e).id);
  const int n = C.n;
  std::vector<int> count(rays.size(), 0);
  for (auto& c : cones)
    for (int r : c) ++count[r];
  std::vector<IntVec> image(rays.size());
  auto notreal = [&](const std::string& w) {
    return Error(ErrorCode::NotRealizable, "vertex " + C.cell(v).id + ": " + w);
  };
  if (n == 2) {
    const int d = static_cast<int>(rays.size());
    auto P = unit_edge_polygon(d);
    if (!P || static_cast<int>(cones.size()) != d) throw notreal("no smooth unit-edge polygon with " + std::to_string(d) + " vertices");
    // cyclic order of rays through the cones, matched to the polygon's boundary
    std::vector<std::vector<int>> adj(d);
    for (auto& c : cones) {
      adj[c[0]].push_back(c[1]);
      adj[c[1]].push_back(c[0]);
    }
    std::vector<int> cyc{0};
    int prev = -1;
    while (static_cast<int>(cyc.size()) < d) {
      int cur = cyc.back(), nxt = -1;
      for (int w : adj[cur])
        if (w != prev && std::find(cyc.begin(), cyc.end(), w) == cyc.end()) nxt = w;
      if (nxt < 0) throw notreal("rays do not form a cycle");
      prev = cur;
      cyc.push_back(nxt);
    }
    // polygon vertices in boundary order
    std::vector<int> pv{0};
    prev = -1;
    while (static_cast<int>(pv.size()) < d) {
      int cur = pv.back(), nxt = -1;
      for (int w : P->neighbors()[cur])
        if (w != prev && std::find(pv.begin(), pv.end(), w) == pv.end()) nxt = w;
      prev = cur;
      pv.push_back(nxt);
    }
    for (int k = 0; k < d; ++k) {
      IntVec p(2);
      for (int i = 0; i < 2; ++i) p[i] = P->vertices()[pv[k]][i].get_num();
      image[cyc[k]] = p;
    }
  } else if (n == 3) {
    auto shape = nerve(C, v).shape;
    if (shape == "simplex3" && rays.size() == 4) {
      const long e[4][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}};
      for (int k = 0; k < 4; ++k) image[k] = to_intvec({e[k][0], e[k][1], e[k][2]});
    } else if (shape == "triangular_prism" && rays.size() == 5) {
      const long eq[3][3] = {{1, 0, 0}, {0, 1, 0}, {-1, -1, 0}};
      int apex = 0, equ = 0;
      for (std::size_t k = 0; k < rays.size(); ++k) {
        if (count[k] == 3 && apex < 2)
          image[k] = to_intvec({0, 0, apex++ ? -1 : 1});
        else if (count[k] == 4 && equ < 3) {
          image[k] = to_intvec({eq[equ][0], eq[equ][1], eq[equ][2]});
          ++equ;
        } else {
          throw notreal("unexpected ray multiplicities");
        }
      }
    } else {
      throw notreal("nerve " + shape + " has no polytopal fan in the library");
    }
  } else {
    throw notreal("vertex blow-ups are implemented in dimensions 2 and 3");
  }
  auto f = make_fan(0, names, image, cones);
  std::string why;
  if (!f.strongly_polytopal(&why)) throw notreal(why);
  return {f, rays};
}

// ---------------------------------------------------------------------------
// edge blow-ups

EdgeCut canonical_corner_cut(const LatticePolytope& P, int a) {
  auto steps = primitive_edge_steps(P, a);
  const std::size_t d = P.ambient_dim();
  std::optional<IntVec> best;
  Integer best_sum = 0;
  IntVec u(d, Integer(-3));
  for (bool more = true; more;) {
    if (vec_gcd(u) == 1) {
      bool ok = true;
      Integer sum = 0;
      for (auto& s : steps) {
        Integer x = 0;
        for (std::size_t i = 0; i < d; ++i) x += u[i] * s[i];
        ok = ok && x >= 1;
        sum += x;
      }
      if (ok && (!best || sum < best_sum)) {  // odometer runs in lex order
        best = u;
        best_sum = sum;
      }
    }
    more = false;
    for (std::size_t i = d; i-- > 0;) {
      if (u[i] < 3) {
        ++u[i];
        more = true;
        break;
      }
      u[i] = -3;
    }
  }
  if (!best) throw Error(ErrorCode::NotRealizable, "no corner cut within the search box");
  EdgeCut c;
  c.functional = *best;
  c.depth = 1;
  for (auto& s : steps) {
    Integer x = 0;
    for (std::size_t i = 0; i < d; ++i) x += c.functional[i] * s[i];
    c.depth = lcm(c.depth, x);
  }
  return c;
}

namespace {

// unique maximal cell at label a not containing label b
int blow_up_cell_at(const BlowUpContext& ctx, int a, int b, const std::string& what) {
  int found = -1;
  for (auto [ci, local] : ctx.incidence[a]) {
    (void)local;
    const auto& lab = ctx.L.cells[ci].labels;
    if (std::find(lab.begin(), lab.end(), b) != lab.end()) continue;
    if (found >= 0) throw Error(ErrorCode::ConeMismatch, what + ": several cells at the endpoint avoid the edge");
    found = ci;
  }
  if (found < 0) throw Error(ErrorCode::ConeMismatch, what + ": no blow-up cell at the endpoint");
  return found;
}

int local_index(const LabelledCell& c, int label) {
  for (std::size_t i = 0; i < c.labels.size(); ++i)
    if (c.labels[i] == label) return static_cast<int>(i);
  return -1;
}

IntVec step_to(const LatticePolytope& S, int from, int to) {
  return primitive_step(lattice_vector(S.vertices()[from], S.vertices()[to], S.scale()));
}

}  // namespace

std::vector<BlowUpRecord> plan_edge_blow_ups(const BlowUpContext& ctx, const std::vector<int>& edges,
                                             const Integer& factor, int batch,
                                             std::vector<std::pair<int, std::string>>* skipped) {
  std::vector<BlowUpRecord> out;
  for (int e : edges) {
    if (!skipped) {
      out.push_back(plan_edge_blow_up(ctx, e, factor, batch));
      continue;
    }
    try {
      out.push_back(plan_edge_blow_up(ctx, e, factor, batch));
    } catch (const Error& err) {
      skipped->push_back({e, err.what()});
    }
  }
  return out;
}

BlowUpRecord plan_edge_blow_up(const BlowUpContext& ctx, int e, const Integer& factor, int batch) {
  const auto& C = *ctx.C;
  const std::string eid = C.cell(e).id;
  auto nv = nerve(C, e);
  if (nv.shape != "quadrilateral") throw Error(ErrorCode::NerveNotQuadrilateral, eid + " has nerve " + nv.shape);
  auto [la, lb] = edge_endpoints(ctx, e);
  const int PA = blow_up_cell_at(ctx, la, lb, eid), PB = blow_up_cell_at(ctx, lb, la, eid);
  auto scaled = [&](int ci) { return ctx.L.cells[ci].poly->with_scale(ctx.L.cells[ci].poly->scale() * factor); };
  const LatticePolytope SA = scaled(PA), SB = scaled(PB);
  const int a = local_index(ctx.L.cells[PA], la), b = local_index(ctx.L.cells[PB], lb);
  // cells around the edge; per 2-face at the edge the neighbour of A and of B
  std::vector<int> around;
  for (auto [ci, local] : ctx.incidence[la]) {
    (void)local;
    if (local_index(ctx.L.cells[ci], lb) >= 0) around.push_back(ci);
  }
  if (around.size() != 4) throw Error(ErrorCode::NerveNotQuadrilateral, eid + " lies in " + std::to_string(around.size()) + " cells");
  std::map<int, int> partner;  // A-neighbour label -> B-neighbour label
  for (int ci : around) {
    const auto& cell = ctx.L.cells[ci];
    const auto& S = *cell.poly;
    int ia = local_index(cell, la), ib = local_index(cell, lb);
    for (int fi : S.faces_of_dim(S.dim() - 1)) {
      const auto& fv = S.faces()[fi].verts;
      if (!std::binary_search(fv.begin(), fv.end(), ia) || !std::binary_search(fv.begin(), fv.end(), ib)) continue;
      int na = -1, nb = -1;
      for (int w : S.neighbors()[ia])
        if (w != ib && std::binary_search(fv.begin(), fv.end(), w)) na = w;
      for (int w : S.neighbors()[ib])
        if (w != ia && std::binary_search(fv.begin(), fv.end(), w)) nb = w;
      if (na < 0 || nb < 0) throw Error(ErrorCode::InvalidComplex, "2-face at " + eid + " is not a polygon");
      auto [it, fresh] = partner.emplace(cell.labels[na], cell.labels[nb]);
      if (!fresh && it->second != cell.labels[nb]) throw Error(ErrorCode::ConeMismatch, eid + ": 2-faces disagree");
    }
  }
  const auto& cellA = ctx.L.cells[PA];
  const auto& cellB = ctx.L.cells[PB];
  const auto& nbA = SA.neighbors()[a];
  if (nbA.size() != partner.size()) throw Error(ErrorCode::ConeMismatch, eid + ": cone at A does not match the edge's 2-faces");
  std::vector<IntVec> sA, sB;
  std::vector<int> nA, nB;
  for (int w : nbA) {
    auto it = partner.find(cellA.labels[w]);
    if (it == partner.end()) throw Error(ErrorCode::ConeMismatch, eid + ": edge of P_A outside the edge's 2-faces");
    int wb = local_index(cellB, it->second);
    if (wb < 0 || std::find(SB.neighbors()[b].begin(), SB.neighbors()[b].end(), wb) == SB.neighbors()[b].end())
      throw Error(ErrorCode::ConeMismatch, eid + ": cones at the two endpoints differ");
    sA.push_back(step_to(SA, a, w));
    sB.push_back(step_to(SB, b, wb));
    nA.push_back(cellA.labels[w]);
    nB.push_back(it->second);
  }
  // lattice isomorphism of the cones: M sA = sB
  const std::size_t d = SA.ambient_dim();
  std::vector<int> basis;
  {
    IntMatrix rows;
    for (std::size_t k = 0; k < sA.size() && basis.size() < d; ++k) {
      rows.push_back(sA[k]);
      if (rank(rows) == rows.size())
        basis.push_back(static_cast<int>(k));
      else
        rows.pop_back();
    }
  }
  if (basis.size() != d) throw Error(ErrorCode::ConeMismatch, eid + ": cone at A is degenerate");
  RatMatrix XA(d, std::vector<Rational>(d)), XB(d, std::vector<Rational>(d));  // columns = basis steps
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t r = 0; r < d; ++r) {
      XA[r][c] = sA[basis[c]][r];
      XB[r][c] = sB[basis[c]][r];
    }
  RatMatrix M = multiply(XB, inverse(XA));
  for (auto& row : M)
    for (auto& x : row)
      if (x.get_den() != 1) throw Error(ErrorCode::ConeMismatch, eid + ": cone map is not integral");
  if (abs(determinant(M)) != 1) throw Error(ErrorCode::ConeMismatch, eid + ": cone map is not unimodular");
  for (std::size_t k = 0; k < sA.size(); ++k) {
    auto img = polylc::apply(M, Point(sA[k].begin(), sA[k].end()));
    if (img != Point(sB[k].begin(), sB[k].end())) throw Error(ErrorCode::ConeMismatch, eid + ": cones at A and B are not isomorphic");
  }
  EdgeCut cut = canonical_corner_cut(SA, a);
  // "the same equations" at B: uB = uA M^-1
  RatMatrix Minv = inverse(M);
  IntVec uB(d, Integer(0));
  for (std::size_t j = 0; j < d; ++j) {
    Rational s = 0;
    for (std::size_t i = 0; i < d; ++i) s += Rational(cut.functional[i]) * Minv[i][j];
    uB[j] = s.get_num();
  }
  std::vector<Integer> depth;  // steps per edge
  for (auto& s : sA) {
    Rational x = idot(cut.functional, s);
    depth.push_back(cut.depth / x.get_num());
  }
  BlowUpRecord rec;
  rec.kind = "edge";
  rec.target = eid;
  rec.batch = batch;
  rec.scale = factor;
  rec.new_cell = "L:" + eid;
  auto corner = [&](const LabelledCell& cell, const LatticePolytope& S, int loc, const IntVec& u) {
    Truncation t;
    t.cell = cell.id;
    t.keep.a = Point(u.begin(), u.end());
    t.keep.b = pdot(u, S.vertices()[loc]) + Rational(cut.depth) / Rational(S.scale());
    rec.truncations.push_back(t);
  };
  corner(cellA, SA, a, cut.functional);
  corner(cellB, SB, b, uB);
  // wedge cuts in the four cells around the edge
  std::vector<Integer> side_len(nA.size(), Integer(-1));  // per wall, in lattice steps
  std::map<int, Point> qa;  // A-neighbour label -> point of H_A ∩ P_A (P_A coordinates)
  for (std::size_t k = 0; k < nA.size(); ++k) qa[nA[k]] = step_point(SA.vertices()[a], sA[k], Rational(depth[k]), SA.scale());
  for (int ci : around) {
    const auto& cell = ctx.L.cells[ci];
    const LatticePolytope S = cell.poly->with_scale(cell.poly->scale() * factor);
    int ia = local_index(cell, la), ib = local_index(cell, lb);
    std::vector<Point> pa, pb;
    for (int w : S.neighbors()[ia]) {
      if (w == ib) continue;
      int k = static_cast<int>(std::find(nA.begin(), nA.end(), cell.labels[w]) - nA.begin());
      if (k == static_cast<int>(nA.size())) throw Error(ErrorCode::ConeMismatch, eid + ": cell " + cell.id + " leaves P_A");
      pa.push_back(step_point(S.vertices()[ia], step_to(S, ia, w), Rational(depth[k]), S.scale()));
      int wb = local_index(cell, nB[k]);
      if (wb < 0) throw Error(ErrorCode::ConeMismatch, eid + ": partner vertex missing in " + cell.id);
      Point q = step_point(S.vertices()[ib], step_to(S, ib, wb), Rational(depth[k]), S.scale());
      pb.push_back(q);
      IntVec side = lattice_vector(pa.back(), q, S.scale());
      IntVec ldir = lattice_vector(S.vertices()[ia], S.vertices()[ib], S.scale());
      if (primitive_step(side) != primitive_step(ldir))
        throw Error(ErrorCode::ConeMismatch, eid + ": cut in " + cell.id + " is not parallel to the edge");
      Integer h = vec_gcd(side);
      if (side_len[k] < 0) side_len[k] = h;
      if (h != side_len[k]) throw Error(ErrorCode::ConeMismatch, eid + ": wall lengths disagree in " + cell.id);
    }
    if (pa.size() != 2) throw Error(ErrorCode::InvalidComplex, eid + ": cell " + cell.id + " is not simple at the edge");
    // u.(B-A) = 0, u.(pa_i - A) = 1
    RatMatrix Aeq;
    std::vector<Rational> rhs;
    Aeq.push_back(S.vertices()[ib] - S.vertices()[ia]);
    rhs.push_back(0);
    for (auto& p : pa) {
      Aeq.push_back(p - S.vertices()[ia]);
      rhs.push_back(1);
    }
    auto u = solve_linear(Aeq, rhs);
    if (!u) throw Error(ErrorCode::InvalidComplex, eid + ": degenerate wedge in " + cell.id);
    IntVec ui = scale_to_integer(*u);
    Truncation t;
    t.cell = cell.id;
    t.keep.a = Point(ui.begin(), ui.end());
    t.keep.b = pdot(ui, pa[0]);
    for (auto& q : pb)
      if (pdot(ui, q) != t.keep.b) throw Error(ErrorCode::ConeMismatch, eid + ": parallelogram not planar in " + cell.id);
    rec.truncations.push_back(t);
  }
  // New cell over Q = H_A ∩ P_A: wall k contributes a trapezoid whose sides along the
  // edge have lengths side_len. With a height function affine on Q the cell is
  // {(q, z) : q in Q, 0 <= z <= lambda(q)}; when the walls are parallelograms it is Q x [0, h].
  std::vector<Point> quad;
  for (int l : nA) quad.push_back(qa[l]);
  Chart ch;
  LatticePolytope Q = intrinsic(LatticePolytope::hull(quad, SA.scale()), &ch);
  if (Q.dim() != 2 || Q.vertices().size() != nA.size()) throw Error(ErrorCode::InvalidComplex, eid + ": corner cut is not a polygon");
  RatMatrix Al;
  std::vector<Rational> bl;
  for (std::size_t k = 0; k < nA.size(); ++k) {
    if (side_len[k] < 0) throw Error(ErrorCode::InvalidComplex, eid + ": wall without a cell");
    Point c = ch.coords(qa[nA[k]]);
    Al.push_back({c[0], c[1], Rational(1)});
    bl.push_back(Rational(side_len[k]));
  }
  if (!solve_linear(Al, bl))
    throw Error(ErrorCode::NotRealizable,
                eid + ": wall offsets along the edge are not linear on the cone at A, no prism fits the trapezoids");
  std::vector<Point> pv;
  std::vector<CutVertex> cv;
  for (std::size_t k = 0; k < nA.size(); ++k) {
    Point c = ch.coords(qa[nA[k]]);
    Point lo = c, hi = c;
    lo.push_back(0);
    hi.push_back(Rational(side_len[k]) / Rational(Q.scale()));
    pv.push_back(lo);
    cv.push_back(CutVertex{ctx.L.vertex_names[la], ctx.L.vertex_names[nA[k]]});
    pv.push_back(hi);
    cv.push_back(CutVertex{ctx.L.vertex_names[lb], ctx.L.vertex_names[nB[k]]});
  }
  LatticePolytope prism = LatticePolytope::hull(pv, Q.scale());
  if (prism.vertices().size() != pv.size()) throw Error(ErrorCode::InvalidComplex, eid + ": prism degenerate");
  rec.new_vertices.resize(pv.size());
  for (std::size_t k = 0; k < pv.size(); ++k) rec.new_vertices[prism.find_vertex(pv[k])] = cv[k];
  rec.new_poly = std::make_shared<const LatticePolytope>(prism);
  return rec;
}

BlowUpResult blow_up_edge(const PolyComplex& C, int edge) {
  if (edge < 0 || edge >= static_cast<int>(C.size()) || C.cell(edge).dim() != 1)
    throw Error(ErrorCode::NotInComplex, "not an edge");
  auto ctx = make_context(C);
  for (Integer f = 1; f <= 64; f *= 2) {
    std::vector<BlowUpRecord> recs{plan_edge_blow_up(ctx, edge, f, 0)};
    if (!batch_disjoint(ctx, recs)) continue;
    BlowUpResult r;
    r.record = recs[0];
    r.complex = apply_batch(ctx, recs);
    return r;
  }
  throw Error(ErrorCode::NotRealizable, "edge cut regions overlap at every scale up to 64");
}

BlowUpResult blow_up(const PolyComplex& C, int cell) {
  if (cell < 0 || cell >= static_cast<int>(C.size())) throw Error(ErrorCode::NotInComplex, "no such cell");
  if (C.is_maximal(cell)) throw Error(ErrorCode::InvalidArgument, "cannot blow up a maximal cell");
  const int d = C.cell(cell).dim();
  if (d == 0) {
    auto [fan, rays] = neighbourhood_fan(C, cell);
    auto r = blow_up_vertex(C, cell, fan, rays);
    r.record.kind = "generic";
    return r;
  }
  if (d == 1 && C.n == 3 && nerve(C, cell).shape == "quadrilateral") {
    auto r = blow_up_edge(C, cell);
    r.record.kind = "generic";
    return r;
  }
  throw Error(ErrorCode::NotRealizable, "no lattice realization of the blow-up at " + C.cell(cell).id);
}

// ---------------------------------------------------------------------------
// property checks

FacePoset dual_poset(const FacePoset& P, int dim) {
  std::vector<int> facets;
  for (std::size_t i = 0; i < P.faces.size(); ++i)
    if (P.faces[i].dim == dim - 1) facets.push_back(static_cast<int>(i));
  FacePoset D;
  D.nverts = static_cast<int>(facets.size());
  for (auto& f : P.faces) {
    if (f.dim == dim) continue;
    Face g;
    g.dim = dim - 1 - f.dim;
    for (std::size_t k = 0; k < facets.size(); ++k) {
      const auto& fv = P.faces[facets[k]].verts;
      if (std::includes(fv.begin(), fv.end(), f.verts.begin(), f.verts.end())) g.verts.push_back(static_cast<int>(k));
    }
    D.faces.push_back(g);
  }
  Face top;
  top.dim = dim;
  for (int k = 0; k < D.nverts; ++k) top.verts.push_back(k);
  D.faces.push_back(top);
  std::sort(D.faces.begin(), D.faces.end());
  return D;
}

std::vector<std::string> nerve_pyramid_failures(const PolyComplex& pre, const PolyComplex& post, const BlowUpRecord& rec,
                                                int rec_index, const CutNames& names) {
  std::vector<std::string> bad;
  int t = pre.find(rec.target);
  if (t < 0) throw Error(ErrorCode::NotInComplex, rec.target);
  std::vector<std::vector<int>> pre_labels;
  auto Lpre = decompose(pre, &pre_labels);
  std::vector<std::vector<int>> post_labels;
  auto Lpost = decompose(post, &post_labels);
  std::unordered_map<std::string, int> post_label;
  for (std::size_t i = 0; i < Lpost.vertex_names.size(); ++i) post_label.emplace(Lpost.vertex_names[i], static_cast<int>(i));
  std::unordered_map<std::vector<int>, int, VecHash<int>> post_cell;
  for (std::size_t c = 0; c < post.size(); ++c) post_cell.emplace(post_labels[c], static_cast<int>(c));
  const auto& tv = pre_labels[t];
  // edges of pre as label pairs
  std::set<std::pair<int, int>> edges;
  for (int e : pre.cells_of_dim(1)) edges.insert({pre_labels[e][0], pre_labels[e][1]});
  for (std::size_t r = 0; r < pre.size(); ++r) {
    const auto& rv = pre_labels[r];
    std::vector<int> meet;
    std::set_intersection(rv.begin(), rv.end(), tv.begin(), tv.end(), std::back_inserter(meet));
    if (meet.empty() || std::includes(tv.begin(), tv.end(), rv.begin(), rv.end())) continue;
    std::vector<int> want;
    for (int x : meet)
      for (int y : rv) {
        if (std::binary_search(tv.begin(), tv.end(), y)) continue;
        if (!edges.count({std::min(x, y), std::max(x, y)})) continue;
        auto it = names.find(std::make_tuple(rec_index, Lpre.vertex_names[x], Lpre.vertex_names[y]));
        if (it == names.end()) continue;
        want.push_back(post_label.at(it->second));
      }
    std::sort(want.begin(), want.end());
    auto pc = post_cell.find(want);
    const std::string rid = pre.cell(static_cast<int>(r)).id;
    if (pc == post_cell.end()) {
      bad.push_back(rid + " (no R_P)");
      continue;
    }
    auto before = nerve(pre, static_cast<int>(r));
    auto after = nerve(post, pc->second);
    if (!is_pyramid_over(after.poset, before.poset)) bad.push_back(rid);
  }
  return bad;
}

}  // namespace polylc
