#ifndef SENTIKIT_WINDOWS_H_
#define SENTIKIT_WINDOWS_H_

#include <functional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sentikit/corpus.h"

namespace sentikit {

struct WindowSpec {
  enum class Kind { kSliding, kSubclause };
  enum class Orientation { kSymmetric, kRight };

  Kind kind = Kind::kSliding;
  int k = 15;
  Orientation orientation = Orientation::kSymmetric;
  std::set<std::string> cut_relations = {"conj", "ccomp"};
  // UPOS tags treated as verbs. A node also counts as verbal when it governs
  // a copula, since UD makes the predicate the head of "was great".
  std::set<std::string> verb_pos = {"VERB", "AUX"};
  std::set<std::string> redundant_conjunctions = {"and", "or", "nor", "&",
                                                  "ve",  "veya", "ya"};

  static WindowSpec sliding(int k, Orientation o = Orientation::kSymmetric);
  static WindowSpec subclause(std::set<std::string> relations = {"conj",
                                                                 "ccomp"});

  // Throws UsageError on k < 1 or an empty relation set.
  void validate() const;
  // "sliding:15:symmetric", "sliding:4:right", "subclause:conj,ccomp".
  std::string describe() const;
};

WindowSpec parse_window_spec(const std::string& text);

struct Subclause {
  std::vector<int> token_indices;  // strictly increasing
  // Sentence-final mark shown after the clause; not one of the indices.
  std::string final_punct;
};

// Clause heads are the root and every verbal node attached to its head by a
// cut relation. Each clause collects its head's descendants without entering
// other clause heads, then loses boundary punctuation and redundant
// conjunctions. Throws DataError on a tree/token length mismatch.
std::vector<Subclause> extract_subclauses(const DependencyTree& tree,
                                          std::span<const Token> tokens,
                                          const WindowSpec& spec);
std::vector<Subclause> extract_subclauses(const DependencyTree& tree,
                                          std::span<const std::string> words,
                                          const WindowSpec& spec);

// Space-joined tokens (no space before punctuation or clitics), an ASCII
// first letter upper-cased, then the sentence's final mark.
std::string render_subclause(const Subclause& clause,
                             std::span<const std::string> words);

// Calls fn(center, context) for every window pair of token positions, each
// pair carrying weight 1. Subclause windows need doc.tree (DataError if
// absent).
void for_each_window_pair(const Document& doc, const WindowSpec& spec,
                          const std::function<void(int, int)>& fn);
std::vector<std::pair<int, int>> window_pairs(const Document& doc,
                                              const WindowSpec& spec);

}  // namespace sentikit

#endif  // SENTIKIT_WINDOWS_H_
