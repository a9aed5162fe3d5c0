#ifndef SENTIKIT_EMBED_H_
#define SENTIKIT_EMBED_H_

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sentikit/cooc.h"
#include "sentikit/corpus.h"
#include "sentikit/lexicon.h"

namespace sentikit {

struct WordVectors {
  Vocabulary vocab;
  Eigen::MatrixXd matrix;  // one row per vocabulary word
  std::string source;      // svd-u, glove, dictionary, four-scores, concat

  size_t dim() const { return static_cast<size_t>(matrix.cols()); }
};

struct SvdResult {
  Eigen::MatrixXd u;
  Eigen::VectorXd s;  // non-increasing
  Eigen::MatrixXd v;
};

// Leading d singular triplets. Small problems use a dense divide-and-conquer
// SVD; larger ones a seeded randomized range finder with power iterations.
// Columns are sign-canonical: the largest-magnitude entry of each U column
// is positive. Throws UsageError when d exceeds min(rows, cols).
SvdResult truncated_svd(const SparseMatrix& m, int d, uint64_t seed = 1);
SvdResult truncated_svd(const Eigen::MatrixXd& m, int d, uint64_t seed = 1);

// Rows of U (no singular value weighting).
WordVectors truncated_svd_u(const PpmiMatrix& ppmi, int d, uint64_t seed = 1);

struct GloveConfig {
  int dim = 100;
  int epochs = 10;
  double x_max = 100.0;
  double alpha = 0.75;
  double learning_rate = 0.05;
  uint64_t seed = 1;
};

struct GloveResult {
  WordVectors vectors;          // word + context vectors
  std::vector<double> losses;   // mean weighted loss per epoch
};

// AdaGrad on the weighted least-squares objective over non-zero cells.
// Throws DataError on an empty matrix and NumericError on a non-finite loss.
GloveResult train_glove(const CoocMatrix& cooc, const GloveConfig& config);

// Headword -> definition tokens, in file order.
struct Dictionary {
  std::vector<std::pair<std::string, std::vector<std::string>>> entries;
};

// TSV "headword\tspace-joined definition tokens".
Dictionary load_dictionary(const std::string& path);
Dictionary parse_dictionary(const std::string& text);

struct DictionaryMatrix {
  Vocabulary headwords;
  Vocabulary definition_words;
  Eigen::MatrixXd boolean;  // headword x definition word, entries 0/1
};

DictionaryMatrix dictionary_matrix(const Dictionary& dict);

// Boolean rows multiplied by sign(lex(headword)) (sign(0) = +1), reduced to
// d dimensions with truncated_svd_u. With `target` given, the result is
// aligned to it; target words without an entry get zero rows.
WordVectors dictionary_vectors(const Dictionary& dict,
                               const SentimentLexicon& lex, int d,
                               const Vocabulary* target = nullptr,
                               uint64_t seed = 1);

// Four-score rows for every vocabulary word (zeros when unseen).
WordVectors four_score_vectors(
    const Vocabulary& vocab,
    const std::unordered_map<std::string, FourScores>& scores);

// Row-wise concatenation. Throws DataError on a vocabulary mismatch.
WordVectors concat_vectors(std::span<const WordVectors> parts);

// Mean of the in-vocabulary token vectors (zeros if none) followed by
// three_feats(doc, lex).
Eigen::VectorXd document_vector(const Document& doc, const WordVectors& vectors,
                                const SentimentLexicon& lex,
                                const KeyScheme& scheme = KeyScheme::surface());

// Text format "word v1 ... vd", one line per word.
void save_vectors(const WordVectors& v, const std::string& path);
WordVectors load_vectors(const std::string& path);

}  // namespace sentikit

#endif  // SENTIKIT_EMBED_H_
