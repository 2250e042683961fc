#include "polylc/groups.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "polylc/errors.hpp"

namespace polylc {

int GroupPresentation::generator(const std::string& name) const {
  auto it = std::find(generators.begin(), generators.end(), name);
  return it == generators.end() ? -1 : static_cast<int>(it - generators.begin());
}

int GroupPresentation::add_generator(const std::string& name) {
  generators.push_back(name);
  return static_cast<int>(generators.size()) - 1;
}

std::string GroupPresentation::word_str(const Word& w) const {
  if (w.empty()) return "1";
  std::string s;
  for (auto& [g, e] : w) {
    if (!s.empty()) s += " ";
    s += generators[g];
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s;
}

std::string GroupPresentation::str() const {
  std::string s = "<";
  for (std::size_t i = 0; i < generators.size(); ++i) s += (i ? ", " : "") + generators[i];
  s += " | ";
  for (std::size_t i = 0; i < relators.size(); ++i) s += (i ? ", " : "") + word_str(relators[i]);
  return s + ">";
}

std::size_t GroupPresentation::total_length() const {
  std::size_t n = 0;
  for (auto& r : relators) n += static_cast<std::size_t>(word_length(r));
  return n;
}

long word_length(const Word& w) {
  long n = 0;
  for (auto& l : w) n += std::labs(l.second);
  return n;
}

Word free_reduce(const Word& w) {
  Word out;
  for (auto l : w) {
    if (l.second == 0) continue;
    if (!out.empty() && out.back().first == l.first) {
      out.back().second += l.second;
      if (out.back().second == 0) out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

Word cyclic_reduce(const Word& w) {
  Word r = free_reduce(w);
  while (r.size() >= 2 && r.front().first == r.back().first) {
    r.front().second += r.back().second;
    r.pop_back();
    if (r.front().second == 0) r.erase(r.begin());
  }
  return r;
}

Word word_inverse(const Word& w) {
  Word r(w.rbegin(), w.rend());
  for (auto& l : r) l.second = -l.second;
  return r;
}

Word concat(const Word& a, const Word& b) {
  Word r = a;
  r.insert(r.end(), b.begin(), b.end());
  return free_reduce(r);
}

Word power(const Word& w, long e) {
  Word base = e < 0 ? word_inverse(w) : w;
  Word r;
  for (long i = 0; i < std::labs(e); ++i) r.insert(r.end(), base.begin(), base.end());
  return free_reduce(r);
}

Word commutator(const Word& a, const Word& b) {
  return free_reduce(concat(concat(a, b), concat(word_inverse(a), word_inverse(b))));
}

GroupPresentation presentation(const CWData& cw, TreePolicy policy) {
  const std::size_t V = cw.vertex_ids.size();
  if (V == 0) throw Error(ErrorCode::Disconnected, "no 0-cells");
  std::vector<std::vector<std::pair<int, int>>> adj(V);  // (neighbour, edge)
  for (std::size_t e = 0; e < cw.edges.size(); ++e) {
    adj[cw.edges[e].a].push_back({cw.edges[e].b, static_cast<int>(e)});
    adj[cw.edges[e].b].push_back({cw.edges[e].a, static_cast<int>(e)});
  }
  std::vector<char> seen(V, 0), tree(cw.edges.size(), 0);
  std::deque<int> work{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!work.empty()) {
    int x;
    if (policy == TreePolicy::BFS) {
      x = work.front();
      work.pop_front();
    } else {
      x = work.back();
      work.pop_back();
    }
    auto nb = adj[x];
    if (policy == TreePolicy::DFS) std::reverse(nb.begin(), nb.end());
    for (auto [y, e] : nb) {
      if (seen[y]) continue;
      seen[y] = 1;
      tree[e] = 1;
      ++reached;
      work.push_back(y);
    }
  }
  if (reached != V) throw Error(ErrorCode::Disconnected, std::to_string(V - reached) + " vertices unreachable from " + cw.vertex_ids[0]);
  GroupPresentation G;
  std::vector<int> gen(cw.edges.size(), -1);
  for (std::size_t e = 0; e < cw.edges.size(); ++e)
    if (!tree[e]) gen[e] = G.add_generator(cw.edges[e].id);
  for (auto& f : cw.faces) {
    Word w;
    for (auto [e, s] : f)
      if (gen[e] >= 0) w.push_back({gen[e], s});
    w = cyclic_reduce(w);
    if (!w.empty()) G.relators.push_back(w);
  }
  return G;
}

namespace {

// substitute g -> expr in w
Word substitute(const Word& w, int g, const Word& expr) {
  Word out;
  for (auto& l : w) {
    if (l.first == g) {
      Word p = power(expr, l.second);
      out.insert(out.end(), p.begin(), p.end());
    } else {
      out.push_back(l);
    }
  }
  return cyclic_reduce(out);
}

Word normalize(const Word& w) {
  Word r = cyclic_reduce(w);
  if (r.size() == 1 && r[0].second < 0) r[0].second = -r[0].second;
  return r;
}

}  // namespace

GroupPresentation tietze_simplify(const GroupPresentation& G, const TietzeOptions& opt) {
  const std::size_t ng = G.generators.size();
  std::vector<Word> rel;
  for (auto& r : G.relators) rel.push_back(normalize(r));
  std::vector<char> gen_alive(ng, 1), rel_alive(rel.size(), 1);
  std::vector<std::set<int>> occ(ng);
  for (std::size_t i = 0; i < rel.size(); ++i)
    for (auto& l : rel[i]) occ[l.first].insert(static_cast<int>(i));
  auto set_rel = [&](int i, Word w) {
    for (auto& l : rel[i]) occ[l.first].erase(i);
    rel[i] = normalize(w);
    for (auto& l : rel[i]) occ[l.first].insert(i);
  };
  std::deque<int> work;
  std::vector<char> queued(rel.size(), 0);
  auto push = [&](int i) {
    if (!queued[i]) {
      queued[i] = 1;
      work.push_back(i);
    }
  };
  auto eliminate = [&](int g, const Word& expr, int source) {
    gen_alive[g] = 0;
    std::vector<int> users(occ[g].begin(), occ[g].end());
    for (int j : users) {
      if (j == source) continue;
      set_rel(j, substitute(rel[j], g, expr));
      push(j);
    }
    if (source >= 0) {
      set_rel(source, {});
      rel_alive[source] = 0;
    }
  };
  for (std::size_t i = 0; i < rel.size(); ++i) push(static_cast<int>(i));
  bool changed = true;
  while (changed) {
    changed = false;
    while (!work.empty()) {
      int i = work.front();
      work.pop_front();
      queued[i] = 0;
      if (!rel_alive[i]) continue;
      if (rel[i].empty()) {
        rel_alive[i] = 0;
        continue;
      }
      if (word_length(rel[i]) > opt.max_substitution_length) continue;
      // generator occurring once with exponent +-1; prefer the last declared
      std::map<int, int> count;
      for (auto& l : rel[i]) count[l.first] += 1;
      int pick = -1, pos = -1;
      for (std::size_t k = 0; k < rel[i].size(); ++k) {
        auto [g, e] = rel[i][k];
        if (std::labs(e) == 1 && count[g] == 1 && g > pick) {
          pick = g;
          pos = static_cast<int>(k);
        }
      }
      if (pick < 0) continue;
      // rotate so the letter comes first: g^e W = 1  =>  g = W^{-e}
      Word W(rel[i].begin() + pos + 1, rel[i].end());
      W.insert(W.end(), rel[i].begin(), rel[i].begin() + pos);
      long e = rel[i][pos].second;
      eliminate(pick, power(W, -e), i);
      changed = true;
    }
    // power relators of one generator combine by gcd
    for (std::size_t g = 0; g < ng; ++g) {
      if (!gen_alive[g]) continue;
      std::vector<int> pows;
      for (int i : occ[g])
        if (rel_alive[i] && rel[i].size() == 1) pows.push_back(i);
      if (pows.size() < 2) continue;
      long d = 0;
      for (int i : pows) d = std::gcd(d, rel[i][0].second);
      for (std::size_t k = 1; k < pows.size(); ++k) {
        set_rel(pows[k], {});
        rel_alive[pows[k]] = 0;
      }
      set_rel(pows[0], {{static_cast<int>(g), d}});
      push(pows[0]);
      changed = true;
    }
    if (!work.empty()) changed = true;
  }
  GroupPresentation R;
  std::vector<int> idx(ng, -1);
  for (std::size_t g = 0; g < ng; ++g)
    if (gen_alive[g]) idx[g] = R.add_generator(G.generators[g]);
  std::set<Word> seen;
  for (std::size_t i = 0; i < rel.size(); ++i) {
    if (!rel_alive[i] || rel[i].empty()) continue;
    Word w;
    for (auto& l : rel[i]) w.push_back({idx[l.first], l.second});
    if (seen.insert(w).second) R.relators.push_back(w);
  }
  return R;
}

AbelianInvariants abelianization(const GroupPresentation& G) {
  SparseRelations m;
  m.ncols = G.generators.size();
  for (auto& r : G.relators) {
    std::map<std::uint32_t, long> row;
    for (auto& [g, e] : r) row[static_cast<std::uint32_t>(g)] += e;
    std::vector<std::pair<std::uint32_t, long>> v;
    for (auto& [c, x] : row)
      if (x != 0) v.push_back({c, x});
    if (!v.empty()) m.rows.push_back(v);
  }
  return sparse_cokernel(m);
}

long euler_characteristic(const CWData& cw) { return cw.euler(); }

nlohmann::json presentation_to_json(const GroupPresentation& G) {
  nlohmann::json j;
  j["generators"] = G.generators;
  nlohmann::json rels = nlohmann::json::array();
  for (auto& r : G.relators) {
    nlohmann::json w = nlohmann::json::array();
    for (auto& [g, e] : r) w.push_back(nlohmann::json::array({G.generators[g], e}));
    rels.push_back(w);
  }
  j["relators"] = rels;
  return j;
}

GroupPresentation presentation_from_json(const nlohmann::json& j) {
  try {
    GroupPresentation G;
    for (auto& g : j.at("generators")) G.add_generator(g.get<std::string>());
    for (auto& r : j.at("relators")) {
      Word w;
      for (auto& l : r) {
        int g = G.generator(l.at(0).get<std::string>());
        if (g < 0) throw Error(ErrorCode::ParseError, "undeclared generator " + l.at(0).get<std::string>());
        long e = l.at(1).get<long>();
        if (e == 0) throw Error(ErrorCode::ParseError, "zero exponent");
        w.push_back({g, e});
      }
      G.relators.push_back(w);
    }
    return G;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("presentation JSON: ") + e.what());
  }
}

}  // namespace polylc
