#ifndef SENTIKIT_LEXICON_H_
#define SENTIKIT_LEXICON_H_

#include <array>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sentikit/cooc.h"
#include "sentikit/corpus.h"
#include "sentikit/windows.h"

namespace sentikit {

enum class Provenance {
  kUnsupervised,
  kSemisupervised,
  kDeltaIdf,
  kDeltaTfidf,
  kWt,
  kCombined,
};

std::string provenance_name(Provenance p);
Provenance parse_provenance(const std::string& name);

struct SentimentLexicon {
  std::unordered_map<std::string, double> scores;
  Provenance provenance = Provenance::kUnsupervised;
  // Identifies the training split a lexicon was built from; empty when built
  // on a whole corpus.
  std::string split_id;

  double score(const std::string& word) const {
    auto it = scores.find(word);
    return it == scores.end() ? 0.0 : it->second;
  }
  bool contains(const std::string& word) const { return scores.count(word); }
};

// TSV "word\tscore\tprovenance"; a leading "# split_id=..." line carries the
// split stamp. Words are written sorted.
void save_lexicon(const SentimentLexicon& lex, const std::string& path);
SentimentLexicon load_lexicon(const std::string& path);

struct SeedSet {
  std::vector<std::pair<std::string, std::string>> pairs;  // (pos, neg)

  std::vector<std::string> positives() const;
  std::vector<std::string> negatives() const;
  // Throws DataError if a word plays both roles.
  void validate() const;
  SeedSet swapped() const;
};

// TSV "positive\tnegative" per line, '#' comments allowed.
SeedSet load_seeds(const std::string& path);
SeedSet parse_seeds(const std::string& text);

// Score of one token as used by every document-level consumer:
// intensity * lex(key) where a negated token uses its underscored key when
// the lexicon has it, and otherwise the negated score of its plain key.
double effective_score(const Token& token, const SentimentLexicon& lex,
                       const KeyScheme& scheme = KeyScheme::surface());
double document_score(const Document& doc, const SentimentLexicon& lex,
                      const KeyScheme& scheme = KeyScheme::surface());

// --- unsupervised -----------------------------------------------------------

// Mean over seed pairs of log2((near(w,p)+a)/(count(p)+a) *
// (count(n)+a)/(near(w,n)+a)), a = 0.001, counts taken from a symmetric
// sliding co-occurrence matrix and its vocabulary counts. near(w,w) is
// count(w). Unknown words score 0 with a warning.
double unsupervised_sc(const std::string& word, const CoocMatrix& near,
                       const SeedSet& seeds);
SentimentLexicon unsupervised_lexicon(const CoocMatrix& near,
                                      const SeedSet& seeds);

// --- semi-supervised --------------------------------------------------------

struct PropagationConfig {
  double g0 = 0.5;
  double decay = 0.9;
  double g_floor = 0.05;
  int max_iter = 50;
  double tol = 1e-12;
  double smoothing = 1e-9;
};

// g for the update producing iteration k+1.
double propagation_g(const PropagationConfig& config, int k);

struct PropagationResult {
  SentimentLexicon lexicon;
  Eigen::VectorXd positive;  // summed factorial series
  Eigen::VectorXd negative;
  int iterations = 0;
};

// Random-walk propagation over clamped cosine edges; seeds missing from the
// vocabulary are skipped with a warning.
PropagationResult propagate(const EdgeMatrix& edges, const SeedSet& seeds,
                            const PropagationConfig& config = {});

// --- supervised -------------------------------------------------------------

// Labeled document frequencies of feature keys.
struct DocumentFrequencies {
  std::unordered_map<std::string, int> positive;
  std::unordered_map<std::string, int> negative;
  int n_positive = 0;
  int n_negative = 0;

  static DocumentFrequencies from(const Corpus& corpus,
                                  const KeyScheme& scheme);
  int pos(const std::string& w) const;
  int neg(const std::string& w) const;
};

// ln((N_P,w/N_P + 0.001) / (N_N,w/N_N + 0.001)).
double delta_idf(const std::string& word, const DocumentFrequencies& df);
// (0.5 + 0.5 f/max f) * delta_idf for a word of a keyed document. Throws
// DataError on an empty document.
double delta_tfidf(const std::string& word,
                   const std::vector<std::string>& doc_keys,
                   const DocumentFrequencies& df);
// ln((N_t/N + 0.01) / (N'_t/N' + 0.01)).
double wt_score(const std::string& word, const DocumentFrequencies& df);

SentimentLexicon delta_idf_lexicon(const Corpus& corpus,
                                   const KeyScheme& scheme);
// Per word, the mean of its delta tf-idf over the documents holding it.
SentimentLexicon delta_tfidf_lexicon(const Corpus& corpus,
                                     const KeyScheme& scheme);
SentimentLexicon wt_lexicon(const Corpus& corpus, const KeyScheme& scheme);

// --- fusion -----------------------------------------------------------------

// Opposite non-zero signs -> c_s * sup, else c_u * unsup + c_s * sup.
double combine(double sup, double unsup, double c_u, double c_s);
SentimentLexicon combine(const SentimentLexicon& sup,
                         const SentimentLexicon& unsup, double c_u,
                         double c_s);

// c_s over {0.1, ..., 0.9} (c_u = 1 - c_s) by LS accuracy on `dev`; ties
// go to the larger c_s.
std::pair<double, double> grid_search_coefficients(
    const SentimentLexicon& sup, const SentimentLexicon& unsup,
    const Corpus& dev, const KeyScheme& scheme = KeyScheme::surface(),
    double step = 0.1);

// --- per-word and per-document features -------------------------------------

using FourScores = std::array<double, 4>;  // self, min, max, mean

// Neighbour statistics over every window occurrence of each word.
std::unordered_map<std::string, FourScores> four_scores_all(
    const Corpus& corpus, const WindowSpec& spec, const SentimentLexicon& base,
    const KeyScheme& scheme = KeyScheme::surface());
FourScores four_scores(const std::string& word, const Corpus& corpus,
                       const WindowSpec& spec, const SentimentLexicon& base,
                       const KeyScheme& scheme = KeyScheme::surface());

using ThreeFeats = std::array<double, 3>;  // min, mean, max

ThreeFeats three_feats(const Document& doc, const SentimentLexicon& lex,
                       const KeyScheme& scheme = KeyScheme::surface());
// Same statistics over per-token delta tf-idf values (tf factor of the
// token's key in this document times its delta idf score).
ThreeFeats three_feats_tfidf(const Document& doc,
                             const SentimentLexicon& delta_idf_lex,
                             const KeyScheme& scheme = KeyScheme::surface());

}  // namespace sentikit

#endif  // SENTIKIT_LEXICON_H_
