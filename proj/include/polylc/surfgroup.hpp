#pragma once
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "polylc/groups.hpp"

namespace polylc {

// Resolution graphs of surface singularities and the groups read off them.

struct Curve {
  int id = 0;
  int genus = 0;
  long self = -2;  // E^2 = -r, r >= 1
};

struct ResolutionGraph {
  std::vector<Curve> curves;
  std::vector<std::pair<int, int>> edges;  // by curve id
  int index_of(int id) const;              // -1 if absent
};

constexpr long kInfinite = 0;  // strand index m = infinity (coefficient 1)

struct Strand {
  int curve = -1;  // curve id; -1 only when the graph is empty (E = 0)
  long m = 2;      // coefficient 1 - 1/m, kInfinite for 1
};

struct OrbifoldPoint {
  int curve = 0;
  long n = 2, q = 1;
};

struct BoundaryData {
  std::vector<Strand> strands;
  std::vector<OrbifoldPoint> orbifold;
};

// Structure checks: ids unique, edges between known distinct curves and not repeated,
// r >= 1, genus in {0,1}, strand m >= 2 or infinite, orbifold 0 < q < n coprime.
// InvalidArgument / InvalidFraction.
void check_graph(const ResolutionGraph& g, const BoundaryData& b);

// Orbifold points replaced by chains n/q = [m1..ml], the m1 curve meeting the carrier.
std::pair<ResolutionGraph, BoundaryData> expand_orbifold_points(const ResolutionGraph& g, const BoundaryData& b);

nlohmann::json graph_to_json(const ResolutionGraph& g, const BoundaryData& b);
std::pair<ResolutionGraph, BoundaryData> graph_from_json(const nlohmann::json& j);  // ParseError

// ---------------------------------------------------------------------------
// Hirzebruch-Jung

std::vector<long> hj_expand(long n, long q);               // InvalidFraction
Rational hj_evaluate(const std::vector<long>& m);          // m1 - 1/(m2 - 1/(...))

struct ChainData {
  std::vector<long> r;  // r_1..r_m
  std::vector<long> b;  // b_0..b_{m+1}: b_0 = 0, b_1 = 1, b_{i+1} = r_i b_i - b_{i-1}
  std::vector<long> a;  // a_0..a_{m+1}: a_0 = 1, a_1 = 0, same recursion
  // x_i = alpha^{a_i} x_1^{b_i} solves alpha x_2 x_1^{-r_1}, x_{i-1} x_{i+1} x_i^{-r_i}
};

ChainData hj_sequences(const std::vector<long>& r);  // InvalidWeights unless every r_i >= 2
// Rewrites every chain relation under the substitution (exponents in <alpha, x_1>);
// true when all but the last vanish and the last is alpha^{-a_{m+1}} x_1^{-b_{m+1}}.
bool verify_chain(const ChainData& c);
long chain_order(const std::vector<long>& r);  // r_m b_m - b_{m-1}
Integer chain_determinant(const std::vector<long>& r);  // |det| of the tridiagonal intersection matrix

// ---------------------------------------------------------------------------
// delta relations

enum class DeltaKind { Exceptional, StrictFinite, StrictInfinite, Trivial };

// t >= 2, or kInfinite for StrictInfinite. InconsistentKind otherwise.
std::vector<Word> delta_relations(long t, const Word& x, int y, DeltaKind kind);

// ---------------------------------------------------------------------------
// Presentations

// One generator per curve ("e<id>") and per strand ("g<k>"); relators: commutators of
// meeting loops, the star relation per curve, g^m per finite strand.
// NotATree / GenusOne.
GroupPresentation mumford_presentation(const ResolutionGraph& g, const BoundaryData& b);

// Intersection matrix (diag -r, 1 per edge) in curve order.
IntMatrix intersection_matrix(const ResolutionGraph& g);

struct TableRow {
  int number = 0;  // 1..22 in table order
  std::string exceptional;
  std::string boundary;
  std::string group;           // instantiated presentation as printed, or the group label
  std::string exact_sequence;  // elliptic and cycle rows only
  std::map<std::string, long> parameters;  // A, B, m, ... as computed integers
  std::map<std::string, std::string> legend;  // parameter -> its meaning in the chain sequences
  std::string label() const { return exceptional + " / " + boundary; }
};

struct Classification {
  TableRow row;
  GroupPresentation presentation;   // empty for the elliptic and cycle rows
  std::vector<long> basket;         // branch indices, 0 = infinite
  bool abelian_check = false;       // abelianization agrees with the Mumford presentation
  bool abelian_checked = false;     // false where Mumford does not apply (genus 1, cycles)
};

// NotLogCanonicalConfiguration with a witness when the graph is outside every row.
Classification classify(const ResolutionGraph& g, const BoundaryData& b);

struct SolvableWitness {
  std::vector<Word> normal_generators;  // words in the classification's generators
  std::vector<std::string> normal_text;
  long quotient_order = 1;              // G/N cyclic of this order
  std::string quotient;                 // "Z/2", "trivial"
  long abelianized_index = 0;           // |G^ab / image(N)|, 0 if infinite
  bool whole_group = false;
};

// UnknownRow for rows (or baskets) the solvability argument does not cover.
SolvableWitness solvable_witness(const Classification& c);

nlohmann::json classification_to_json(const Classification& c);
nlohmann::json witness_to_json(const SolvableWitness& w, const GroupPresentation& G);

}  // namespace polylc
