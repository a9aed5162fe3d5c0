#ifndef SENTIKIT_TESTS_HELPERS_H_
#define SENTIKIT_TESTS_HELPERS_H_

#include <algorithm>
#include <initializer_list>
#include <string>
#include <vector>

#include "sentikit/corpus.h"
#include "sentikit/random.h"
#include "sentikit/text.h"

namespace sentikit::testing {

inline Token tok(const std::string& surface, const std::string& root = {},
                 std::vector<Morpheme> morphemes = {}) {
  Token t;
  t.surface = surface;
  t.root = root.empty() ? surface : root;
  t.morphemes = std::move(morphemes);
  return t;
}

inline std::vector<Token> toks(const std::string& words) {
  std::vector<Token> out;
  for (const auto& w : text::split_whitespace(words)) out.push_back(tok(w));
  return out;
}

inline std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

inline Document doc(const std::string& id, Label label,
                    const std::string& words) {
  Document d;
  d.id = id;
  d.label = label;
  d.tokens = toks(words);
  return d;
}

// Documents given as (label, space-separated words); ids d0, d1, ...
inline Corpus corpus(const std::vector<std::pair<Label, std::string>>& docs) {
  std::vector<Document> out;
  int i = 0;
  for (const auto& [label, words] : docs)
    out.push_back(doc("d" + std::to_string(i++), label, words));
  return Corpus(std::move(out));
}

constexpr Label P = Label::kPositive;
constexpr Label N = Label::kNegative;

// Random labelled corpus over a small vocabulary w0..w{vocab-1}; positive
// documents lean towards the lower half of the vocabulary.
inline Corpus random_corpus(Rng& rng, int docs, int vocab, int min_len,
                            int max_len, double lean = 0.0) {
  std::vector<Document> out;
  for (int d = 0; d < docs; ++d) {
    Document doc;
    doc.id = "d" + std::to_string(d);
    doc.label = d % 2 == 0 ? Label::kPositive : Label::kNegative;
    int len = min_len + static_cast<int>(rng.below(max_len - min_len + 1));
    for (int i = 0; i < len; ++i) {
      int w = static_cast<int>(rng.below(vocab));
      if (rng.uniform() < lean) {
        int half = std::max(1, vocab / 2);
        w = static_cast<int>(rng.below(half)) +
            (doc.label == Label::kPositive ? 0 : vocab - half);
      }
      doc.tokens.push_back(tok("w" + std::to_string(w)));
    }
    out.push_back(std::move(doc));
  }
  return Corpus(std::move(out));
}

}  // namespace sentikit::testing

#endif  // SENTIKIT_TESTS_HELPERS_H_
