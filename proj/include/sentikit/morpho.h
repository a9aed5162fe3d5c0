#ifndef SENTIKIT_MORPHO_H_
#define SENTIKIT_MORPHO_H_

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sentikit/corpus.h"

namespace sentikit {

// Morpheme tag -> polarity, where a morpheme inherits the mean delta tf-idf
// score of the surface forms hosting it.
struct MorphemeLexicon {
  std::map<std::string, double> scores;
  std::map<std::string, int> host_counts;
};

struct PartialFormPolicy {
  int top_percent = 100;               // 0, 10, ..., 100
  std::set<std::string> always_keep;   // negator morpheme tags
};

struct MorphemeSelection {
  bool all = false;
  std::set<std::string> tags;

  bool keeps(const std::string& tag) const { return all || tags.count(tag); }
  KeyScheme scheme() const {
    KeyScheme s;
    s.base = KeyScheme::Base::kPartial;
    s.keep = tags;
    s.keep_all = all;
    return s;
  }
};

// Surface-form scores are delta tf-idf values averaged over the documents holding
// the form; a morpheme's per-corpus score is the mean over its distinct host
// forms, and the final score is the mean of the per-corpus scores.
MorphemeLexicon build_morpheme_lexicon(std::span<const Corpus* const> corpora);
MorphemeLexicon build_morpheme_lexicon(const Corpus& corpus);

// Top m positive and top m negative morphemes with m = floor(p*|lex|/200),
// capped so both sides stay equal, plus every always_keep tag.
// p = 100 keeps everything.
MorphemeSelection select_morphemes(const MorphemeLexicon& lex,
                                   const PartialFormPolicy& policy);

// Root followed by the kept morphemes in attachment order. Morphemes with a
// form are spelled by their form ("yap" + "sa" -> "yapsa"), tag-only
// morphemes as "+TAG".
std::string partial_surface_form(const Token& token,
                                 const MorphemeSelection& keep);
std::string partial_surface_form(const Token& token,
                                 const std::set<std::string>& keep,
                                 bool keep_all = false);

void save_morpheme_lexicon(const MorphemeLexicon& lex, const std::string& path);
MorphemeLexicon load_morpheme_lexicon(const std::string& path);

}  // namespace sentikit

#endif  // SENTIKIT_MORPHO_H_
