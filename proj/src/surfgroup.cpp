#include "polylc/surfgroup.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <set>

#include "polylc/errors.hpp"

namespace polylc {

int ResolutionGraph::index_of(int id) const {
  for (std::size_t i = 0; i < curves.size(); ++i)
    if (curves[i].id == id) return static_cast<int>(i);
  return -1;
}

void check_graph(const ResolutionGraph& g, const BoundaryData& b) {
  auto bad = [](const std::string& w) { return Error(ErrorCode::InvalidArgument, "graph: " + w); };
  std::set<int> ids;
  for (auto& c : g.curves) {
    if (!ids.insert(c.id).second) throw bad("duplicate curve id " + std::to_string(c.id));
    if (c.genus != 0 && c.genus != 1) throw bad("curve " + std::to_string(c.id) + " has genus outside {0,1}");
    if (c.self > -1) throw bad("curve " + std::to_string(c.id) + " needs negative self-intersection");
  }
  std::set<std::pair<int, int>> seen;
  for (auto [i, j] : g.edges) {
    if (!ids.count(i) || !ids.count(j)) throw bad("edge references an unknown curve");
    if (i == j) throw bad("self-intersecting curve " + std::to_string(i));
    if (!seen.insert({std::min(i, j), std::max(i, j)}).second)
      throw bad("curves " + std::to_string(i) + " and " + std::to_string(j) + " meet more than once");
  }
  for (auto& s : b.strands) {
    if (g.curves.empty() ? s.curve != -1 : !ids.count(s.curve)) throw bad("strand on an unknown curve");
    if (s.m != kInfinite && s.m < 2) throw bad("strand index must be >= 2 or infinite");
  }
  for (auto& o : b.orbifold) {
    if (!ids.count(o.curve)) throw bad("orbifold point on an unknown curve");
    if (!(0 < o.q && o.q < o.n) || std::gcd(o.n, o.q) != 1)
      throw Error(ErrorCode::InvalidFraction, "orbifold point (" + std::to_string(o.n) + "," + std::to_string(o.q) + ")");
  }
}

std::pair<ResolutionGraph, BoundaryData> expand_orbifold_points(const ResolutionGraph& g, const BoundaryData& b) {
  check_graph(g, b);
  ResolutionGraph G = g;
  BoundaryData B = b;
  B.orbifold.clear();
  int next = 0;
  for (auto& c : g.curves) next = std::max(next, c.id + 1);
  for (auto& o : b.orbifold) {
    int prev = o.curve;
    for (long m : hj_expand(o.n, o.q)) {
      G.curves.push_back({next, 0, -m});
      G.edges.push_back({prev, next});
      prev = next++;
    }
  }
  return {G, B};
}

namespace {

nlohmann::json index_json(long m) { return m == kInfinite ? nlohmann::json("inf") : nlohmann::json(m); }

long index_from_json(const nlohmann::json& j) {
  if (j.is_null()) return kInfinite;
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return kInfinite;
    throw Error(ErrorCode::ParseError, "strand index '" + s + "'");
  }
  return j.get<long>();
}

}  // namespace

nlohmann::json graph_to_json(const ResolutionGraph& g, const BoundaryData& b) {
  nlohmann::json j;
  j["curves"] = nlohmann::json::array();
  for (auto& c : g.curves) j["curves"].push_back({{"id", c.id}, {"genus", c.genus}, {"self", c.self}});
  j["edges"] = nlohmann::json::array();
  for (auto [x, y] : g.edges) j["edges"].push_back({x, y});
  j["strands"] = nlohmann::json::array();
  for (auto& s : b.strands) j["strands"].push_back({{"curve", s.curve}, {"m", index_json(s.m)}});
  j["orbifold"] = nlohmann::json::array();
  for (auto& o : b.orbifold) j["orbifold"].push_back({{"curve", o.curve}, {"n", o.n}, {"q", o.q}});
  return j;
}

std::pair<ResolutionGraph, BoundaryData> graph_from_json(const nlohmann::json& j) {
  ResolutionGraph g;
  BoundaryData b;
  try {
    for (auto& c : j.at("curves")) g.curves.push_back({c.at("id").get<int>(), c.value("genus", 0), c.at("self").get<long>()});
    if (j.contains("edges"))
      for (auto& e : j.at("edges")) g.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    if (j.contains("strands"))
      for (auto& s : j.at("strands")) b.strands.push_back({s.value("curve", -1), index_from_json(s.at("m"))});
    if (j.contains("orbifold"))
      for (auto& o : j.at("orbifold")) b.orbifold.push_back({o.at("curve").get<int>(), o.at("n").get<long>(), o.at("q").get<long>()});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("graph: ") + e.what());
  }
  check_graph(g, b);
  return {g, b};
}

// ---------------------------------------------------------------------------

std::vector<long> hj_expand(long n, long q) {
  if (!(0 < q && q < n) || std::gcd(n, q) != 1)
    throw Error(ErrorCode::InvalidFraction, "need 0 < q < n coprime, got " + std::to_string(n) + "/" + std::to_string(q));
  std::vector<long> m;
  while (q > 0) {
    long k = (n + q - 1) / q;
    m.push_back(k);
    long r = k * q - n;
    n = q;
    q = r;
  }
  return m;
}

Rational hj_evaluate(const std::vector<long>& m) {
  if (m.empty()) throw Error(ErrorCode::InvalidWeights, "empty continued fraction");
  Rational v(m.back());
  for (std::size_t i = m.size() - 1; i-- > 0;) {
    if (v == 0) throw Error(ErrorCode::InvalidWeights, "continued fraction divides by zero");
    v = Rational(m[i]) - 1 / v;
  }
  return v;
}

ChainData hj_sequences(const std::vector<long>& r) {
  for (long x : r)
    if (x < (r.size() == 1 ? 1 : 2))
      throw Error(ErrorCode::InvalidWeights, "chain weight " + std::to_string(x) + " below 2");
  ChainData c;
  c.r = r;
  c.b = {0, 1};
  c.a = {1, 0};
  for (std::size_t i = 0; i < r.size(); ++i) {
    c.b.push_back(r[i] * c.b[i + 1] - c.b[i]);
    c.a.push_back(r[i] * c.a[i + 1] - c.a[i]);
  }
  return c;
}

bool verify_chain(const ChainData& c) {
  // words in <alpha, x1>; x_0 = alpha
  auto x = [&](std::size_t i) { return concat(Word{{0, c.a[i]}}, Word{{1, c.b[i]}}); };
  auto sums = [](const Word& w) {
    long s0 = 0, s1 = 0;
    for (auto& [g, e] : w) (g == 0 ? s0 : s1) += e;
    return std::make_pair(s0, s1);
  };
  const std::size_t m = c.r.size();
  for (std::size_t i = 1; i <= m; ++i) {
    Word w = x(i - 1);
    if (i < m) w = concat(w, x(i + 1));
    w = concat(w, power(x(i), -c.r[i - 1]));
    auto [s0, s1] = sums(w);
    if (i < m && (s0 != 0 || s1 != 0)) return false;
    if (i == m && (s0 != -c.a[m + 1] || s1 != -c.b[m + 1])) return false;
  }
  return true;
}

long chain_order(const std::vector<long>& r) {
  auto c = hj_sequences(r);
  return c.b.back();
}

Integer chain_determinant(const std::vector<long>& r) {
  if (r.empty()) return 1;
  IntMatrix M(r.size(), IntVec(r.size(), 0));
  for (std::size_t i = 0; i < r.size(); ++i) {
    M[i][i] = -r[i];
    if (i + 1 < r.size()) M[i][i + 1] = M[i + 1][i] = 1;
  }
  Integer d = determinant(M);
  return d < 0 ? Integer(-d) : d;
}

std::vector<Word> delta_relations(long t, const Word& x, int y, DeltaKind kind) {
  const Word Y{{y, 1}};
  auto inconsistent = [&](const char* why) {
    return Error(ErrorCode::InconsistentKind, std::string(why) + " (t = " + (t == kInfinite ? "inf" : std::to_string(t)) + ")");
  };
  switch (kind) {
    case DeltaKind::Exceptional:
      if (t == kInfinite || t < 2) throw inconsistent("exceptional loop needs finite t >= 2");
      return {free_reduce(concat(x, power(Y, -t)))};
    case DeltaKind::StrictFinite:
      if (t == kInfinite || t < 2) throw inconsistent("finite strand needs t >= 2");
      return {power(Y, t), free_reduce(commutator(x, Y))};
    case DeltaKind::StrictInfinite:
      if (t != kInfinite) throw inconsistent("coefficient-one strand needs t = infinity");
      return {free_reduce(commutator(x, Y))};
    case DeltaKind::Trivial:
      return {};
  }
  return {};
}

// ---------------------------------------------------------------------------

namespace {

struct Tree {
  ResolutionGraph g;
  BoundaryData b;
  std::vector<std::vector<int>> adj;         // by curve index, sorted
  std::vector<std::vector<int>> strands_at;  // strand indices per curve index
  int n = 0;

  Tree(ResolutionGraph g0, BoundaryData b0) : g(std::move(g0)), b(std::move(b0)) {
    n = static_cast<int>(g.curves.size());
    adj.assign(n, {});
    strands_at.assign(n, {});
    for (auto [x, y] : g.edges) {
      int i = g.index_of(x), j = g.index_of(y);
      adj[i].push_back(j);
      adj[j].push_back(i);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    for (std::size_t s = 0; s < b.strands.size(); ++s)
      if (b.strands[s].curve >= 0) strands_at[g.index_of(b.strands[s].curve)].push_back(static_cast<int>(s));
  }
  long r(int v) const { return -g.curves[v].self; }
  int val(int v) const { return static_cast<int>(adj[v].size() + strands_at[v].size()); }
  bool connected() const {
    if (n == 0) return true;
    std::vector<char> seen(n, 0);
    std::vector<int> st{0};
    seen[0] = 1;
    int count = 1;
    while (!st.empty()) {
      int v = st.back();
      st.pop_back();
      for (int w : adj[v])
        if (!seen[w]) seen[w] = 1, ++count, st.push_back(w);
    }
    return count == n;
  }
  long m(int s) const { return b.strands[s].m; }
  std::vector<long> weights(const std::vector<int>& path) const {
    std::vector<long> w;
    for (int v : path) w.push_back(r(v));
    return w;
  }
};

// Path leaving `from` through `first`, up to a leaf or a node.
struct Arm {
  std::vector<int> curves;
  bool to_node = false;
  std::vector<int> end_strands;
};

Arm walk(const Tree& T, int from, int first) {
  Arm a;
  int prev = from, cur = first;
  a.curves.push_back(cur);
  while (T.val(cur) < 3 && T.adj[cur].size() == 2) {
    int next = T.adj[cur][0] == prev ? T.adj[cur][1] : T.adj[cur][0];
    prev = cur;
    cur = next;
    a.curves.push_back(cur);
  }
  a.to_node = T.val(cur) >= 3;
  if (!a.to_node) a.end_strands = T.strands_at[cur];
  return a;
}

bool is_leaf2(const Tree& T, const Arm& a) {
  return a.curves.size() == 1 && !a.to_node && a.end_strands.empty() && T.r(a.curves[0]) == 2;
}
bool is_plain(const Arm& a) { return !a.to_node && a.end_strands.empty(); }

std::string idx_str(long m) { return m == kInfinite ? "inf" : std::to_string(m); }

Error not_lc(const std::string& witness) { return Error(ErrorCode::NotLogCanonicalConfiguration, witness); }

// sum of 1/n over a basket, infinite entries count 0
Rational basket_sum(const std::vector<long>& v) {
  Rational s = 0;
  for (long n : v)
    if (n != kInfinite) s += Rational(1, n);
  return s;
}

std::string basket_str(const std::vector<long>& v) {
  std::string s = "((";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + idx_str(v[i]);
  return s + "))";
}

// --- relator templates: "a^{A} (a b)^{-B}", "[a^2, c]"

std::string substitute(const std::string& t, const std::map<std::string, long>& vals) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] != '{') {
      out += t[i];
      continue;
    }
    auto j = t.find('}', i);
    std::string key = t.substr(i + 1, j - i - 1);
    bool neg = !key.empty() && key[0] == '-';
    if (neg) key = key.substr(1);
    long v = vals.at(key);
    out += std::to_string(neg ? -v : v);
    i = j;
  }
  // drop "^1"
  std::string clean;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] == '^' && i + 1 < out.size() && out[i + 1] == '1' &&
        (i + 2 == out.size() || !std::isdigit(static_cast<unsigned char>(out[i + 2])))) {
      ++i;
      continue;
    }
    clean += out[i];
  }
  return clean;
}

struct WordParser {
  const GroupPresentation& G;
  const std::string& s;
  std::size_t i = 0;

  void skip() {
    while (i < s.size() && s[i] == ' ') ++i;
  }
  Error fail(const std::string& w) const { return Error(ErrorCode::ParseError, "word '" + s + "': " + w); }
  Word sequence() {
    Word w;
    while (true) {
      skip();
      if (i >= s.size() || s[i] == ')' || s[i] == ']' || s[i] == ',') return w;
      w = concat(w, factor());
    }
  }
  Word factor() {
    skip();
    Word w;
    if (s[i] == '(') {
      ++i;
      w = sequence();
      if (i >= s.size() || s[i] != ')') throw fail("missing )");
      ++i;
    } else if (s[i] == '[') {
      ++i;
      Word u = sequence();
      if (i >= s.size() || s[i] != ',') throw fail("missing ,");
      ++i;
      Word v = sequence();
      if (i >= s.size() || s[i] != ']') throw fail("missing ]");
      ++i;
      w = commutator(u, v);
    } else {
      std::size_t j = i;
      while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j]))) ++j;
      if (j == i) throw fail("unexpected '" + std::string(1, s[i]) + "'");
      int g = G.generator(s.substr(i, j - i));
      if (g < 0) throw fail("unknown generator " + s.substr(i, j - i));
      i = j;
      w = {{g, 1}};
    }
    if (i < s.size() && s[i] == '^') {
      ++i;
      std::size_t j = i;
      if (j < s.size() && s[j] == '-') ++j;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j == i) throw fail("missing exponent");
      long e = std::stol(s.substr(i, j - i));
      i = j;
      w = power(w, e);
    }
    return w;
  }
};

Word parse_word(const GroupPresentation& G, const std::string& s) {
  WordParser p{G, s};
  Word w = p.sequence();
  if (p.i != s.size()) throw p.fail("trailing input");
  return free_reduce(w);
}

struct RowBuilder {
  Classification C;
  std::map<std::string, long> vals;
  std::vector<std::string> shown;

  RowBuilder(int number, const char* exc, const char* bnd) {
    C.row.number = number;
    C.row.exceptional = exc;
    C.row.boundary = bnd;
  }
  void gens(std::initializer_list<const char*> names) {
    for (auto n : names) C.presentation.add_generator(n);
  }
  void param(const std::string& k, long v, const std::string& legend = "") {
    vals[k] = v;
    C.row.parameters[k] = v;
    if (!legend.empty()) C.row.legend[k] = legend;
  }
  void hidden(const std::string& k, long v) { vals[k] = v; }
  void rel(const std::string& tmpl) {
    std::string s = substitute(tmpl, vals);
    Word w = parse_word(C.presentation, s);
    C.presentation.relators.push_back(w);
    shown.push_back(s);
  }
  Classification finish() {
    std::string s = "<";
    for (std::size_t i = 0; i < C.presentation.generators.size(); ++i) s += (i ? ", " : "") + C.presentation.generators[i];
    s += " | ";
    for (std::size_t i = 0; i < shown.size(); ++i) s += (i ? ", " : "") + shown[i];
    C.row.group = s + ">";
    return std::move(C);
  }
};

struct ArmSeq {
  long n = 1, t = 0;  // determinant and exponent of the loop next to the centre
};
// arm listed from the centre outward; its chain runs from the far end inward
ArmSeq arm_seq(const Tree& T, const Arm& a) {
  std::vector<int> far_first(a.curves.rbegin(), a.curves.rend());
  auto c = hj_sequences(T.weights(far_first));
  const std::size_t l = far_first.size();
  return {c.b[l + 1], c.b[l]};
}

Classification row_single_star(const Tree& T, int v, const std::vector<Arm>& arms) {
  // four half-branches around one curve
  int leaves = 0;
  for (auto& a : arms) leaves += is_leaf2(T, a);
  const long m = T.r(v);
  auto legend_m = "E^2 = -m at the central curve";
  if (leaves == 4) {
    RowBuilder R(3, "A rational curve intersected by 4 other (-2)-curves", "B_s = 0");
    R.gens({"a", "b", "c"});
    R.param("m", m, legend_m);
    R.hidden("P", 2 * m - 1);
    R.rel("a^2 b^-2");
    R.rel("a^2 c^-2");
    R.rel("a^2 (a^{P} b^-1 c^-1)^-2");
    return R.finish();
  }
  if (leaves == 0) {
    RowBuilder R(18, "Rational curve", "B_s = 1/2 B1 + 1/2 B2 + 1/2 B3 + 1/2 B4");
    R.gens({"a", "b", "c", "x"});
    R.param("m", m, legend_m);
    R.rel("[a, x]");
    R.rel("[b, x]");
    R.rel("[c, x]");
    R.rel("a^2");
    R.rel("b^2");
    R.rel("c^2");
    R.rel("(a b c x^{m})^2");
    return R.finish();
  }
  static const char* exc[] = {"", "A rational curve intersected by 1 other (-2) curves",
                              "A rational curve intersected by 2 other (-2) curves",
                              "A rational curve intersected by 3 other (-2) curves"};
  static const char* bnd[] = {"", "B_s = 1/2 B1 + 1/2 B2 + 1/2 B3", "B_s = 1/2 B1 + 1/2 B2", "B_s = 1/2 B1"};
  static const int num[] = {0, 12, 11, 10};
  RowBuilder R(num[leaves], exc[leaves], bnd[leaves]);
  R.gens({"a", "b", "c"});
  R.param("m", m, legend_m);
  R.hidden("P", 1 - 2 * m);
  if (leaves == 3) {
    R.rel("a^2 b^-2");
    R.rel("a^2 c^-2");
  } else if (leaves == 2) {
    R.rel("a^2 b^-2");
    R.rel("c^2");
    R.rel("[a^2, c]");
  } else {
    R.rel("b^2");
    R.rel("c^2");
    R.rel("[a^2, b]");
    R.rel("[a^2, c]");
  }
  R.rel("(a^{P} b c)^2");
  return R.finish();
}

// chain x_1..x_n given by curve indices; returns its sequences
ChainData chain_of(const Tree& T, const std::vector<int>& path) { return hj_sequences(T.weights(path)); }

std::vector<int> join_path(int v, const Arm& a) {
  std::vector<int> p{v};
  p.insert(p.end(), a.curves.begin(), a.curves.end());
  return p;
}

bool index_less(long x, long y) {
  auto key = [](long m) { return m == kInfinite ? LONG_MAX : m; };
  return key(x) < key(y);
}

Classification classify_tree(const Tree& T) {
  const int n = T.n;
  for (int v = 0; v < n; ++v)
    if (T.r(v) < 2)
      throw not_lc("curve " + std::to_string(T.g.curves[v].id) + " is a (-1)-curve; the graph is not a minimal resolution");
  std::vector<int> nodes;
  for (int v = 0; v < n; ++v) {
    if (T.val(v) >= 5)
      throw not_lc("curve " + std::to_string(T.g.curves[v].id) + " meets " + std::to_string(T.val(v)) +
                   " branches; the different has degree above 2");
    if (T.val(v) >= 3) nodes.push_back(v);
  }

  if (nodes.empty()) {
    // a chain; strands only at its ends
    int start = 0;
    for (int v = 0; v < n; ++v)
      if (T.adj[v].size() <= 1) {
        start = v;
        break;
      }
    std::vector<int> path{start};
    if (n > 1) {
      auto a = walk(T, start, T.adj[start][0]);
      path.insert(path.end(), a.curves.begin(), a.curves.end());
    }
    std::vector<int> ss;
    for (int v : path)
      for (int s : T.strands_at[v]) ss.push_back(s);
    if (ss.empty()) {
      RowBuilder R(5, "Chain of rational curves", "B_s = 0");
      R.gens({"x"});
      R.param("n", chain_order(T.weights(path)), "r_m b_m - b_{m-1} of the chain");
      R.rel("x^{n}");
      return R.finish();
    }
    // orient so that the strand of smallest index sits on x_1
    std::sort(ss.begin(), ss.end(), [&](int s, int t) { return index_less(T.m(s), T.m(t)) || (T.m(s) == T.m(t) && s < t); });
    if (T.strands_at[path.front()].empty() ||
        (ss.size() == 2 && n > 1 && std::find(T.strands_at[path.back()].begin(), T.strands_at[path.back()].end(), ss[0]) !=
                                        T.strands_at[path.back()].end()))
      std::reverse(path.begin(), path.end());
    auto c = chain_of(T, path);
    const std::size_t len = path.size();
    if (ss.size() == 1) {
      RowBuilder R(20, "Chain of rational curves", "B = (m1-1)/m1 B1, intersecting E in an end curve");
      R.gens({"a", "x"});
      R.param("m1", T.m(ss[0]), "index of B1 (0 = infinite)");
      R.param("A", c.a[len + 1], "a_{n+1}");
      R.param("B", c.b[len + 1], "b_{n+1}");
      if (T.m(ss[0]) != kInfinite) R.rel("a^{m1}");
      R.rel("[a, x]");
      R.rel("a^{A} x^{B}");
      return R.finish();
    }
    RowBuilder R(21, "Chain of rational curves",
                 "B_s = (m1-1)/m1 B1 + (m2-1)/m2 B2, each B_i intersecting E in a different end curve");
    R.gens({"a", "x"});
    R.param("m1", T.m(ss[0]), "index of B1 (0 = infinite)");
    R.param("m2", T.m(ss[1]), "index of B2 (0 = infinite)");
    R.param("A", c.a[len + 1], "a_{n+1}");
    R.param("B", c.b[len + 1], "b_{n+1}");
    if (T.m(ss[0]) != kInfinite) R.rel("a^{m1}");
    R.rel("[a, x]");
    R.rel(T.m(ss[1]) != kInfinite ? "(a^{A} x^{B})^{m2}" : "[a^{A} x^{B}, a]");
    return R.finish();
  }

  if (nodes.size() == 1) {
    const int v = nodes[0];
    std::vector<Arm> arms;
    for (int w : T.adj[v]) arms.push_back(walk(T, v, w));
    const auto& sv = T.strands_at[v];
    const long m = T.r(v);

    if (T.val(v) == 4) {
      for (auto& a : arms)
        if (!is_leaf2(T, a)) throw not_lc("four branches at curve " + std::to_string(T.g.curves[v].id) + " but not all are (-2)-curves or 1/2-strands");
      for (int s : sv)
        if (T.m(s) != 2) throw not_lc("four branches at curve " + std::to_string(T.g.curves[v].id) + " but a strand has index " + idx_str(T.m(s)));
      auto C = row_single_star(T, v, arms);
      C.basket = {2, 2, 2, 2};
      return C;
    }

    // val 3
    if (sv.size() == 3) {
      std::vector<int> ss = sv;
      std::sort(ss.begin(), ss.end(), [&](int s, int t) { return index_less(T.m(s), T.m(t)) || (T.m(s) == T.m(t) && s < t); });
      std::vector<long> basket{T.m(ss[0]), T.m(ss[1]), T.m(ss[2])};
      if (basket_sum(basket) < 1) throw not_lc("basket " + basket_str(basket) + " at a single curve has degree above 2");
      RowBuilder R(13, "Rational curve", "B_s = (m1-1)/m1 B1 + (m2-1)/m2 B2 + (m3-1)/m3 B3");
      R.gens({"a", "b", "x"});
      R.param("m", m, "E^2 = -m");
      R.param("m1", basket[0], "index of B1 (0 = infinite)");
      R.param("m2", basket[1], "index of B2 (0 = infinite)");
      R.param("m3", basket[2], "index of B3 (0 = infinite)");
      if (basket[0] != kInfinite) R.rel("a^{m1}");
      if (basket[1] != kInfinite) R.rel("b^{m2}");
      R.rel("[a, x]");
      R.rel("[b, x]");
      if (basket[2] != kInfinite) R.rel("(b^-1 a^-1 x^{m})^{m3}");
      auto C = R.finish();
      C.basket = basket;
      return C;
    }

    if (sv.size() == 2) {
      const Arm& A = arms[0];
      if (T.m(sv[0]) != 2 || T.m(sv[1]) != 2 || !(is_plain(A) || A.end_strands.size() == 1))
        throw not_lc("two strands at curve " + std::to_string(T.g.curves[v].id) + " with a chain: configuration not in the table");
      auto path = join_path(v, A);
      auto c = chain_of(T, path);
      const std::size_t len = path.size();
      long m1 = A.end_strands.empty() ? 1 : T.m(A.end_strands[0]);
      RowBuilder R(22, "Chain of rational curves",
                   "B_s = (m1-1)/m1 B1 + 1/2 B2 + 1/2 B3, B1 intersecting E in an end curve and B2 and B3 intersecting E in the other end curve");
      R.gens({"a", "b", "x"});
      R.param("m1", m1, "index of B1 (1 = no B1, 0 = infinite)");
      R.param("A", c.a[len + 1], "a_{n+1}");
      R.param("B", c.b[len + 1], "b_{n+1}");
      R.rel("a^2");
      R.rel("[a, x]");
      R.rel("b^2");
      R.rel("[b, x]");
      R.rel(m1 != kInfinite ? "((a b)^{A} x^{B})^{m1}" : "[(a b)^{A} x^{B}, a b]");
      auto C = R.finish();
      C.basket = {2, 2, m1};
      return C;
    }

    if (sv.size() == 1) {
      const long ms = T.m(sv[0]);
      // a (-2)-leaf beside a 1/2-strand: the strand meets the second to last curve
      int leaf = -1;
      for (int k = 0; k < 2; ++k)
        if (is_leaf2(T, arms[k]) && is_plain(arms[1 - k])) {
          leaf = k;
          break;
        }
      if (ms == 2 && leaf >= 0) {
        auto path = join_path(v, arms[1 - leaf]);
        auto c = chain_of(T, path);
        const std::size_t len = path.size();
        RowBuilder R(15, "Chain of rational curves, where the last curve is a (-2)-curve",
                     "B_s = 1/2 B1, intersecting E in the second to last curve");
        R.gens({"a", "b", "x"});
        R.param("A", c.a[len + 1], "a_{n+1}");
        R.param("B", c.b[len + 1], "b_{n+1}");
        R.rel("a^2");
        R.rel("x b^-2");
        R.rel("[a, x]");
        R.rel("(a b)^{A} x^{B}");
        auto C = R.finish();
        C.basket = {2, 2};
        return C;
      }
      if (!is_plain(arms[0]) || !is_plain(arms[1]))
        throw not_lc("strand at curve " + std::to_string(T.g.curves[v].id) + " with decorated chain ends: configuration not in the table");
      ArmSeq s1 = arm_seq(T, arms[0]), s2 = arm_seq(T, arms[1]);
      if (s2.n < s1.n) std::swap(s1, s2);
      std::vector<long> basket{ms, s1.n, s2.n};
      if (basket_sum(basket) < 1) throw not_lc("basket " + basket_str(basket) + " at curve " + std::to_string(T.g.curves[v].id) + " has degree above 2");
      RowBuilder R(14, "Chain of rational curves", "B_s = (m1-1)/m1 B1, not intersecting E in an end curve");
      R.gens({"a", "b", "c", "x"});
      R.param("m", m, "E^2 = -m at the curve B1 meets");
      R.param("m1", ms, "index of B1 (0 = infinite)");
      R.param("B", s1.n, "determinant of the first side chain");
      R.param("C", s2.n, "determinant of the second side chain");
      R.param("B'", s1.t, "b_l of the first side chain");
      R.param("C'", s2.t, "b_l of the second side chain");
      if (ms != kInfinite) R.rel("a^{m1}");
      R.rel("[a, x]");
      R.rel("x b^{-B}");
      R.rel("x c^{-C}");
      R.rel("a b^{B'} c^{C'} x^{-m}");
      auto C = R.finish();
      C.basket = basket;
      return C;
    }

    // three chains
    std::vector<int> leaves;
    for (int k = 0; k < 3; ++k)
      if (is_leaf2(T, arms[k])) leaves.push_back(k);
    if (leaves.size() >= 2) {
      int third = 3 - leaves[0] - leaves[1];
      if (!is_plain(arms[third]))
        throw not_lc("chain with two (-2)-curves at one end and a strand at the other: configuration not in the table");
      auto path = join_path(v, arms[third]);
      auto c = chain_of(T, path);
      const std::size_t len = path.size();
      RowBuilder R(6, "A chain of rational curves intersected by 2 other (-2) curves in one end", "B_s = 0");
      R.gens({"a", "b"});
      R.param("A", 2 * c.b[len + 1], "2 b_{n+1}");
      R.param("B", c.a[len + 1], "a_{n+1}");
      R.rel("a^2 b^-2");
      R.rel("a^{A} (a b)^{B}");
      auto C = R.finish();
      C.basket = {2, 2, 2, 2};
      return C;
    }
    for (auto& a : arms)
      if (!is_plain(a)) throw not_lc("three chains at curve " + std::to_string(T.g.curves[v].id) + " with a strand at a chain end: configuration not in the table");
    std::vector<ArmSeq> s{arm_seq(T, arms[0]), arm_seq(T, arms[1]), arm_seq(T, arms[2])};
    std::stable_sort(s.begin(), s.end(), [](const ArmSeq& x, const ArmSeq& y) { return x.n < y.n; });
    std::vector<long> basket{s[0].n, s[1].n, s[2].n};
    if (basket_sum(basket) < 1) throw not_lc("basket " + basket_str(basket) + " at curve " + std::to_string(T.g.curves[v].id) + " has degree above 2");
    RowBuilder R(4, "A rational curve intersected by 3 chains of rational curves", "B_s = 0");
    R.gens({"a", "b", "c"});
    R.param("m", m, "E^2 = -m at the central curve");
    R.param("A", s[0].n, "determinant of chain a");
    R.param("B", s[1].n, "determinant of chain b");
    R.param("C", s[2].n, "determinant of chain c");
    R.param("A'", s[0].t - m * s[0].n, "t_a - m A");
    R.param("B'", s[1].t, "t_b = b_l of chain b");
    R.param("C'", s[2].t, "t_c = b_l of chain c");
    R.param("t_a", s[0].t, "b_l of chain a");
    R.rel("a^{A} b^{-B}");
    R.rel("a^{A} c^{-C}");
    R.rel("a^{A'} b^{B'} c^{C'}");
    auto C = R.finish();
    C.basket = basket;
    return C;
  }

  if (nodes.size() == 2) {
    // chain between the two nodes, two half-branches at each
    struct End {
      int node;
      int leaves = 0;
      std::vector<int> strands;
    };
    std::vector<End> ends;
    std::vector<int> path;
    for (int v : nodes) {
      if (T.val(v) != 3) throw not_lc("curve " + std::to_string(T.g.curves[v].id) + " meets four branches inside a chain");
      End e{v};
      for (int w : T.adj[v]) {
        auto a = walk(T, v, w);
        if (a.to_node) {
          if (path.empty()) path = join_path(v, a);
          continue;
        }
        if (!is_leaf2(T, a)) throw not_lc("end curve " + std::to_string(T.g.curves[v].id) + " carries a chain that is not a (-2)-curve");
        ++e.leaves;
      }
      for (int s : T.strands_at[v]) {
        if (T.m(s) != 2) throw not_lc("strand of index " + idx_str(T.m(s)) + " at a branched end curve");
        e.strands.push_back(s);
      }
      ends.push_back(e);
    }
    if (ends[0].leaves < ends[1].leaves) {
      std::swap(ends[0], ends[1]);
    }
    if (path.front() != ends[0].node) std::reverse(path.begin(), path.end());
    const std::size_t len = path.size();
    auto c = chain_of(T, path);
    const long rn = T.r(path.back());
    const int l0 = ends[0].leaves, l1 = ends[1].leaves;
    if (l0 == 2 && l1 == 2) {
      RowBuilder R(7, "A chain of rational curves intersected by 2 other (-2) curves in each end", "B_s = 0");
      R.gens({"a", "b", "c"});
      R.param("A", 2 * c.b[len], "2 b_n");
      R.param("B", c.a[len], "a_n");
      R.param("A'", -2 * c.b[len - 1], "-2 b_{n-1}");
      R.param("B'", -c.a[len - 1], "-a_{n-1}");
      R.param("C'", 2 * rn - 1, "2 m_n - 1");
      R.rel("a^2 b^-2");
      R.rel("a^{A} (a b)^{B} c^-2");
      R.rel("c^2 (a^{A'} (a b)^{B'} c^{C'})^-2");
      auto C = R.finish();
      C.basket = {2, 2, 2, 2};
      return C;
    }
    if (l0 == 1 && l1 == 1) {
      RowBuilder R(16, "Chain of rational curves, where each end curve is a (-2)-curve",
                   "B_s = 1/2 B1 + 1/2 B2, B1 intersecting E in the second curve and B2 intersecting E in the second to last curve");
      R.gens({"a", "b", "c"});
      R.param("A", c.b[len], "b_n");
      R.param("B", c.a[len], "a_n");
      R.param("A'", c.b[len - 1], "b_{n-1}");
      R.param("B'", c.a[len - 1], "a_{n-1}");
      R.param("C'", rn, "m_n");
      R.hidden("2A", 2 * c.b[len]);
      R.hidden("2A'", 2 * c.b[len - 1]);
      R.hidden("C1", 1 - 2 * rn);
      R.rel("b^2");
      R.rel("[a^2, b]");
      R.rel("a^{2A} (a b)^{B} c^-2");
      R.rel("(a^{2A'} (a b)^{B'} c^{C1})^2");
      auto C = R.finish();
      C.basket = {2, 2, 2, 2};
      return C;
    }
    if (l0 == 1 && l1 == 0) {
      RowBuilder R(17, "Chain of rational curves, where the last curve is a (-2)-curve",
                   "B_s = 1/2 B1 + 1/2 B2 + 1/2 B3, B1 intersecting E in the second to last curve and B2, B3 intersecting the first curve");
      R.gens({"a", "b", "c"});
      R.param("A", c.b[len], "b_n");
      R.param("B", c.a[len], "a_n");
      R.param("A'", c.b[len - 1], "b_{n-1}");
      R.param("B'", c.a[len - 1], "a_{n-1}");
      R.param("C", rn, "m_n");
      R.hidden("2A", 2 * c.b[len]);
      R.hidden("2A'", 2 * c.b[len - 1]);
      R.rel("b^2");
      R.rel("[a^2, b]");
      R.rel("c^2");
      R.rel("[a^{2A} (a b)^{B}, c]");
      R.rel("(a^{2A'} (a b)^{B'} (a^{2A} (a b)^{B})^{-C} c)^2");
      auto C = R.finish();
      C.basket = {2, 2, 2, 2};
      return C;
    }
    if (l0 == 0 && l1 == 0) {
      RowBuilder R(19, "Chain of rational curves",
                   "B_s = 1/2 B1 + 1/2 B2 + 1/2 B3 + 1/2 B4, B1 and B2 intersecting E in an end curve and B3 and B4 intersecting E in the other end curve");
      R.gens({"a", "b", "c", "x"});
      R.param("A", c.a[len], "a_n");
      R.param("B", c.b[len], "b_n");
      R.param("A'", c.a[len + 1], "a_{n+1}");
      R.param("B'", c.b[len + 1], "b_{n+1}");
      R.rel("[c, (a b)^{A} x^{B}]");
      R.rel("[b, x]");
      R.rel("a^2");
      R.rel("b^2");
      R.rel("c^2");
      R.rel("[a, x]");
      R.rel("((a b)^{A'} x^{B'} c)^2");
      auto C = R.finish();
      C.basket = {2, 2, 2, 2};
      return C;
    }
    throw not_lc("chain ends with " + std::to_string(l0) + " and " + std::to_string(l1) +
                 " (-2)-curves among their half-branches: configuration not in the table");
  }
  throw not_lc(std::to_string(nodes.size()) + " branched curves; the dual graph is not a chain, cycle or star");
}

AbelianInvariants abel(const GroupPresentation& G) { return abelianization(G); }

}  // namespace

GroupPresentation mumford_presentation(const ResolutionGraph& g0, const BoundaryData& b0) {
  auto [g, b] = expand_orbifold_points(g0, b0);
  GroupPresentation G;
  if (g.curves.empty()) {
    if (b.strands.size() > 2) throw Error(ErrorCode::InvalidArgument, "more than two branches through a smooth point");
    for (std::size_t s = 0; s < b.strands.size(); ++s) G.add_generator("g" + std::to_string(s));
    if (b.strands.size() == 2) G.relators.push_back(commutator({{0, 1}}, {{1, 1}}));
    for (std::size_t s = 0; s < b.strands.size(); ++s)
      if (b.strands[s].m != kInfinite) G.relators.push_back({{static_cast<int>(s), b.strands[s].m}});
    return G;
  }
  for (auto& c : g.curves)
    if (c.genus != 0) throw Error(ErrorCode::GenusOne, "curve " + std::to_string(c.id) + " has genus 1; use classify");
  Tree T(g, b);
  if (!T.connected() || g.edges.size() + 1 != g.curves.size())
    throw Error(ErrorCode::NotATree, "the dual graph is not a tree; use classify");
  for (auto& c : g.curves) G.add_generator("e" + std::to_string(c.id));
  for (std::size_t s = 0; s < b.strands.size(); ++s) G.add_generator("g" + std::to_string(s));
  const int nc = T.n;
  for (int i = 0; i < nc; ++i)
    for (int j : T.adj[i])
      if (i < j) G.relators.push_back(commutator({{i, 1}}, {{j, 1}}));
  for (int i = 0; i < nc; ++i)
    for (int s : T.strands_at[i]) G.relators.push_back(commutator({{i, 1}}, {{nc + s, 1}}));
  for (int i = 0; i < nc; ++i) {
    Word w;
    for (int j : T.adj[i]) w.push_back({j, 1});
    for (int s : T.strands_at[i]) w.push_back({nc + s, 1});
    w.push_back({i, g.curves[i].self});
    G.relators.push_back(free_reduce(w));
  }
  for (std::size_t s = 0; s < b.strands.size(); ++s)
    if (b.strands[s].m != kInfinite) G.relators.push_back({{nc + static_cast<int>(s), b.strands[s].m}});
  return G;
}

IntMatrix intersection_matrix(const ResolutionGraph& g) {
  IntMatrix M(g.curves.size(), IntVec(g.curves.size(), 0));
  for (std::size_t i = 0; i < g.curves.size(); ++i) M[i][i] = g.curves[i].self;
  for (auto [x, y] : g.edges) {
    int i = g.index_of(x), j = g.index_of(y);
    M[i][j] = M[j][i] = 1;
  }
  return M;
}

Classification classify(const ResolutionGraph& g0, const BoundaryData& b0) {
  auto [g, b] = expand_orbifold_points(g0, b0);
  Classification C;
  bool genus1 = std::any_of(g.curves.begin(), g.curves.end(), [](const Curve& c) { return c.genus == 1; });
  if (genus1) {
    if (g.curves.size() != 1 || !b.strands.empty())
      throw not_lc("a genus-one curve must be the whole exceptional divisor, with no boundary");
    C.row = {1, "Elliptic curve", "B_s = 0", "Z ⋊ Z^2", "1 -> Z -> G -> Z^2 -> 1", {{"e", -g.curves[0].self}}, {}};
    C.row.legend["e"] = "-E^2, the degree of the circle bundle";
    return C;
  }
  if (g.curves.empty()) {
    if (b.strands.empty() || b.strands.size() > 2)
      throw not_lc(b.strands.empty() ? "nothing to classify: no curves and no boundary" : "more than two boundary branches through a smooth point");
    std::vector<long> ms;
    for (auto& s : b.strands) ms.push_back(s.m);
    std::sort(ms.begin(), ms.end(), index_less);
    if (ms.size() == 1) {
      RowBuilder R(9, "E = 0", "B_s = (m1-1)/m1 B1");
      R.gens({"a"});
      R.param("m1", ms[0], "index of B1 (0 = infinite)");
      if (ms[0] != kInfinite) R.rel("a^{m1}");
      C = R.finish();
    } else {
      RowBuilder R(8, "E = 0", "B_s = 1/2 B1 + 1/2 B2");
      R.gens({"a", "b"});
      R.param("m1", ms[0], "index of B1 (0 = infinite)");
      R.param("m2", ms[1], "index of B2 (0 = infinite)");
      if (ms[0] != kInfinite) R.rel("a^{m1}");
      if (ms[1] != kInfinite) R.rel("b^{m2}");
      R.rel("[a, b]");
      C = R.finish();
    }
    C.basket = ms;
  } else {
    Tree T(g, b);
    if (!T.connected()) throw not_lc("the exceptional divisor is disconnected");
    if (g.edges.size() >= g.curves.size()) {
      bool cycle = g.edges.size() == g.curves.size() && b.strands.empty();
      for (int v = 0; v < T.n && cycle; ++v) cycle = T.adj[v].size() == 2;
      if (!cycle) throw not_lc("the dual graph has a loop but is not a boundary-free cycle");
      C.row = {2, "Cycle of rational curves", "B_s = 0", "Z^2 ⋊ Z", "1 -> Z^2 -> G -> Z -> 1", {{"length", T.n}}, {}};
      C.row.legend["length"] = "number of curves in the cycle";
      return C;
    }
    C = classify_tree(T);
  }
  auto ab = abel(C.presentation);
  C.abelian_checked = true;
  C.abelian_check = ab == abel(mumford_presentation(g, b));
  return C;
}

// ---------------------------------------------------------------------------

namespace {

long abelianized_index(const GroupPresentation& G, const std::vector<Word>& extra) {
  IntMatrix M;
  auto row = [&](const Word& w) {
    IntVec r(G.generators.size(), 0);
    for (auto& [g, e] : w) r[g] += e;
    M.push_back(r);
  };
  for (auto& w : G.relators) row(w);
  for (auto& w : extra) row(w);
  auto inv = smith_normal_form(M, G.generators.size());
  if (inv.free_rank) return 0;
  Integer p = 1;
  for (auto& t : inv.torsion) p *= t;
  return p.get_si();
}

}  // namespace

SolvableWitness solvable_witness(const Classification& c) {
  SolvableWitness W;
  const auto& G = c.presentation;
  const int row = c.row.number;
  auto set = [&](std::vector<std::string> words, long k) {
    for (auto& s : words) {
      W.normal_generators.push_back(parse_word(G, s));
      W.normal_text.push_back(G.word_str(W.normal_generators.back()));
    }
    W.quotient_order = k;
    W.quotient = k == 1 ? "trivial" : "Z/" + std::to_string(k);
  };
  auto whole = [&] {
    W.whole_group = true;
    std::vector<std::string> all(G.generators.begin(), G.generators.end());
    set(all, 1);
  };
  switch (row) {
    case 1:
    case 2:
      W.whole_group = true;
      W.normal_text = {"G"};
      W.quotient = "trivial";
      W.abelianized_index = 1;
      return W;
    case 5:
    case 8:
    case 9:
    case 20:
    case 21:
      whole();
      break;
    case 3:
    case 10:
    case 11:
    case 12:
      set({"a b", "b c", "a^2"}, 2);
      break;
    case 18:
      set({"a b", "b c", "x"}, 2);
      break;
    case 6:
      set({"a b", "a^2"}, 2);
      break;
    case 7:
    case 16:
    case 17:
      set({"a c", "a b", "a^2"}, 2);
      break;
    case 15:
    case 22:
      set({"a b", "x"}, 2);
      break;
    case 19:
      set({"a b", "a c", "x"}, 2);
      break;
    case 4:
    case 13:
    case 14: {
      // x central; the three branch loops p, q, r with p^n1 = q^n2 = r^n3 = 1 and pqr = 1 modulo x
      struct Role {
        long n;
        std::string w;
      };
      std::vector<Role> roles;
      std::string x;
      const auto& P = c.row.parameters;
      if (row == 4) {
        roles = {{P.at("A"), "a^" + std::to_string(P.at("t_a"))},
                 {P.at("B"), "b^" + std::to_string(P.at("B'"))},
                 {P.at("C"), "c^" + std::to_string(P.at("C'"))}};
        x = "a^" + std::to_string(P.at("A"));
      } else if (row == 13) {
        roles = {{P.at("m1"), "a"}, {P.at("m2"), "b"}, {P.at("m3"), "(b^-1 a^-1 x^" + std::to_string(P.at("m")) + ")"}};
        x = "x";
      } else {
        roles = {{P.at("m1"), "a"}, {P.at("B"), "b^" + std::to_string(P.at("B'"))}, {P.at("C"), "c^" + std::to_string(P.at("C'"))}};
        x = "x";
      }
      std::stable_sort(roles.begin(), roles.end(), [](const Role& u, const Role& v) { return index_less(u.n, v.n); });
      std::vector<long> bk{roles[0].n, roles[1].n, roles[2].n};
      auto inv = [](const std::string& w) { return "(" + w + ")^-1"; };
      const std::string &p = roles[0].w, &q = roles[1].w, &r = roles[2].w;
      if (bk == std::vector<long>{3, 3, 3})
        set({x, p + " " + inv(q), inv(p) + " " + q}, 3);
      else if (bk == std::vector<long>{2, 4, 4})
        set({x, q + " " + inv(r), inv(q) + " " + r}, 4);
      else if (bk == std::vector<long>{2, 3, 6})
        set({x, q + " (" + r + ")^4", "(" + r + ")^4 " + q}, 6);
      else if (bk == std::vector<long>{2, 2, kInfinite})
        set({x, p + " " + q}, 2);
      else
        throw Error(ErrorCode::UnknownRow, "row " + std::to_string(row) + " with basket " + basket_str(bk) +
                                               ": finite quotient case outside the solvable-extension argument");
      break;
    }
    default:
      throw Error(ErrorCode::UnknownRow, "row " + std::to_string(row));
  }
  W.abelianized_index = abelianized_index(G, W.normal_generators);
  return W;
}

nlohmann::json classification_to_json(const Classification& c) {
  nlohmann::json j;
  j["row"] = {{"number", c.row.number},
              {"label", c.row.label()},
              {"exceptional", c.row.exceptional},
              {"boundary", c.row.boundary},
              {"group", c.row.group}};
  if (!c.row.exact_sequence.empty()) j["row"]["exact_sequence"] = c.row.exact_sequence;
  nlohmann::json params = nlohmann::json::object();
  for (auto& [k, v] : c.row.parameters) params[k] = v;
  j["row"]["parameters"] = params;
  nlohmann::json legend = nlohmann::json::object();
  for (auto& [k, v] : c.row.legend) legend[k] = v;
  j["row"]["legend"] = legend;
  j["presentation"] = presentation_to_json(c.presentation);
  j["generators"] = c.presentation.generators.size();
  j["relators"] = c.presentation.relators.size();
  nlohmann::json bk = nlohmann::json::array();
  for (long n : c.basket) bk.push_back(index_json(n));
  j["basket"] = bk;
  if (c.abelian_checked) {
    j["abelianization"] = abelianization(c.presentation).str();
    j["abelianization_matches_mumford"] = c.abelian_check;
  }
  j["check"] = "abelianization only; group isomorphism is not decided";
  return j;
}

nlohmann::json witness_to_json(const SolvableWitness& w, const GroupPresentation&) {
  nlohmann::json j;
  j["normal_subgroup"] = w.normal_text;
  j["whole_group"] = w.whole_group;
  j["quotient"] = w.quotient;
  j["quotient_order"] = w.quotient_order;
  j["abelianized_index"] = w.abelianized_index;
  return j;
}

}  // namespace polylc
