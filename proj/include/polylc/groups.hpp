#pragma once
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "polylc/complex.hpp"
#include "polylc/linalg.hpp"

namespace polylc {

using Letter = std::pair<int, long>;  // (generator index, nonzero exponent)
using Word = std::vector<Letter>;

struct GroupPresentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;

  int generator(const std::string& name) const;  // -1 if absent
  int add_generator(const std::string& name);
  std::string word_str(const Word& w) const;
  std::string str() const;
  std::size_t total_length() const;
  bool operator==(const GroupPresentation& o) const {
    return generators == o.generators && relators == o.relators;
  }
};

Word free_reduce(const Word& w);
Word cyclic_reduce(const Word& w);
Word word_inverse(const Word& w);
Word concat(const Word& a, const Word& b);
Word power(const Word& w, long e);
Word commutator(const Word& a, const Word& b);  // a b a^-1 b^-1
long word_length(const Word& w);                // sum of |exponent|

enum class TreePolicy { BFS, DFS };

GroupPresentation presentation(const CWData& cw, TreePolicy policy = TreePolicy::BFS);

struct TietzeOptions {
  long max_substitution_length = 6;
};
GroupPresentation tietze_simplify(const GroupPresentation& G, const TietzeOptions& opt = {});

AbelianInvariants abelianization(const GroupPresentation& G);
long euler_characteristic(const CWData& cw);

nlohmann::json presentation_to_json(const GroupPresentation& G);
GroupPresentation presentation_from_json(const nlohmann::json& j);  // ParseError

}  // namespace polylc
