#ifndef SENTIKIT_EVAL_H_
#define SENTIKIT_EVAL_H_

#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sentikit/classify.h"
#include "sentikit/corpus.h"
#include "sentikit/embed.h"
#include "sentikit/lexicon.h"
#include "sentikit/windows.h"

namespace sentikit {

// --- metrics ----------------------------------------------------------------

enum class F1Averaging { kBinaryPositive, kMacro };

// Throw UsageError on empty or unequal-length input.
double accuracy(std::span<const Label> preds, std::span<const Label> golds);
double f1(std::span<const Label> preds, std::span<const Label> golds,
          F1Averaging averaging = F1Averaging::kBinaryPositive);

// --- significance -----------------------------------------------------------

// Two-sided paired t-test over per-fold scores. Identical inputs give 1.
double paired_t_test(std::span<const double> a, std::span<const double> b);

// Two-sided test on the accuracy difference. Each discordant pair is swapped
// with probability 1/2. When the swap space has at most max(R, 2^20)
// elements it is enumerated exactly; otherwise R seeded replicates are drawn
// and p = (hits + 1) / (R + 1). allow_exact = false always samples.
double approx_randomization(std::span<const Label> preds_a,
                            std::span<const Label> preds_b,
                            std::span<const Label> golds, int replicates = 10000,
                            uint64_t seed = 1, bool allow_exact = true);

struct McNemarResult {
  int b = 0;  // a right, b wrong
  int c = 0;  // a wrong, b right
  double statistic = 0.0;  // continuity-corrected chi-square
  double p_value = 1.0;
  bool exact = false;
};

// Continuity-corrected chi-square; the exact two-sided binomial test is used
// when b + c < 10. No discordant pairs gives p = 1.
McNemarResult mcnemar(std::span<const Label> preds_a,
                      std::span<const Label> preds_b,
                      std::span<const Label> golds);

// --- pipelines --------------------------------------------------------------

struct PipelineSpec {
  Schema schema = Schema::kDeltaTfidf;
  // svm, nb, knn, ls or ensemble
  std::string model = "svm";
  std::vector<std::string> members = {"svm", "nb", "ls"};
  // surface, root or partial
  std::string key = "surface";
  int top_percent = 100;
  std::set<std::string> always_keep;  // morpheme tags kept at every p
  int min_freq = 1;
  // Lexicon behind LS and ensemble LS voters: delta-idf, delta-tfidf, wt,
  // combined.
  std::string ls_lexicon = "delta-tfidf";
  double c_u = 0.3;
  double c_s = 0.7;
  SeedSet seeds;
  int near_k = 6;  // words per side for the unsupervised scores
  SvmConfig svm;
  int knn_k = 3;
  // Embeddings for the doc-embedding schema: svd, glove, or svd+dict+four
  // (the 404-dimensional concatenation, needs `dictionary`).
  std::string embedding = "svd";
  WindowSpec window = WindowSpec::sliding(15);
  int embed_dim = 200;
  int embed_min_freq = 4;
  int glove_epochs = 10;
  std::string dictionary;

  nlohmann::json to_json() const;
  // Throws UsageError on unknown keys or values.
  static PipelineSpec from_json(const nlohmann::json& j);
  static PipelineSpec load(const std::string& path);
};

// Everything a pipeline learns from one training split. Every lexicon is
// stamped with the split id; predict() refuses other splits and documents
// that were part of training.
class FittedPipeline {
 public:
  static FittedPipeline fit(const Corpus& train, const PipelineSpec& spec,
                            const std::string& split_id, uint64_t seed);

  std::vector<Label> predict(const Corpus& test,
                             const std::string& split_id) const;

  const std::string& split_id() const { return split_id_; }
  const KeyScheme& scheme() const { return scheme_; }
  // Lexicons consulted at prediction time (for inspection and the guard).
  std::vector<SentimentLexicon*> lexicons();

 private:
  PipelineSpec spec_;
  std::string split_id_;
  KeyScheme scheme_;
  std::set<std::string> train_ids_;
  std::shared_ptr<FeatureExtractor> features_;
  std::vector<std::shared_ptr<Classifier>> models_;  // one per member
  std::vector<std::string> member_kinds_;
  SentimentLexicon ls_lexicon_;
};

std::string fold_split_id(int fold, int k, uint64_t seed);

// Nested selection of (c_u, c_s): mean LS accuracy over an inner k-fold split
// of `train`, ties to the larger c_s.
std::pair<double, double> nested_coefficients(const Corpus& train,
                                              const PipelineSpec& spec,
                                              int inner_k, uint64_t seed);

struct FoldResult {
  int fold = 0;
  std::string split_id;
  double accuracy = 0.0;
  double f1 = 0.0;
  double macro_f1 = 0.0;
  double c_u = 0.0;
  double c_s = 0.0;
  std::vector<std::string> test_ids;
  std::vector<Label> predictions;
  std::vector<Label> golds;
};

struct CrossvalReport {
  PipelineSpec spec;
  int k = 10;
  uint64_t seed = 1;
  bool nested = false;
  std::vector<FoldResult> folds;

  double mean_accuracy() const;
  double stdev_accuracy() const;
  double mean_f1() const;
  double mean_macro_f1() const;
  std::vector<double> fold_accuracies() const;
  // Predictions and golds ordered by document id across all folds.
  std::vector<std::pair<std::string, std::pair<Label, Label>>> pooled() const;

  nlohmann::json to_json() const;
  static CrossvalReport from_json(const nlohmann::json& j);
  std::string to_tsv() const;
};

// k-fold cross-validation; every statistic is rebuilt per fold from that
// fold's training split. Folds run on up to `threads` workers; results do not
// depend on the thread count.
CrossvalReport crossval(const Corpus& corpus, const PipelineSpec& spec, int k,
                        uint64_t seed, bool nested = false, int threads = 1);

struct Comparison {
  double t_test_p = 1.0;
  double randomization_p = 1.0;
  McNemarResult mcnemar;
};

// Both reports must cover the same documents.
Comparison compare(const CrossvalReport& a, const CrossvalReport& b,
                   int replicates = 10000, uint64_t seed = 1);

}  // namespace sentikit

#endif  // SENTIKIT_EVAL_H_
