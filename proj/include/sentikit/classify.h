#ifndef SENTIKIT_CLASSIFY_H_
#define SENTIKIT_CLASSIFY_H_

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sentikit/corpus.h"
#include "sentikit/embed.h"
#include "sentikit/lexicon.h"

namespace sentikit {

enum class Schema {
  kDeltaIdf,
  kDeltaTfidf,
  kTfidf,
  kThreeFeats,
  kTfidfThreeFeats,
  kDocEmbedding,
};

std::string schema_name(Schema s);
Schema parse_schema(const std::string& name);
bool is_bag_schema(Schema s);

// Sorted by index, no explicit zeros.
struct FeatureRow {
  std::vector<int> index;
  std::vector<double> value;

  static FeatureRow dense(const Eigen::VectorXd& v);
  double dot(const FeatureRow& other) const;
  double norm() const;
  bool operator==(const FeatureRow&) const = default;
};

struct FeatureMatrix {
  Schema schema = Schema::kDeltaTfidf;
  int dim = 0;
  std::vector<FeatureRow> rows;
};

// Statistics learned from a training split: the bag vocabulary, idf-style
// weights and the delta idf lexicon behind the 3-feats columns. For the
// embedding schema the word vectors are supplied by the caller.
class FeatureExtractor {
 public:
  struct Options {
    KeyScheme scheme;
    int min_freq = 1;
  };

  static FeatureExtractor fit(const Corpus& train, Schema schema,
                              const Options& options,
                              std::optional<WordVectors> vectors = {});

  FeatureRow transform(const Document& doc) const;
  FeatureMatrix transform(const Corpus& corpus) const;

  Schema schema() const { return schema_; }
  int dim() const { return dim_; }
  // Delta idf lexicon, or the wt lexicon for the embedding schema.
  const SentimentLexicon& delta_idf() const { return delta_idf_; }
  SentimentLexicon& mutable_lexicon() { return delta_idf_; }
  void set_split_id(const std::string& id) { delta_idf_.split_id = id; }
  const Vocabulary& vocabulary() const { return vocab_; }

 private:
  Schema schema_ = Schema::kDeltaTfidf;
  Options options_;
  Vocabulary vocab_;
  std::vector<double> weight_;  // delta idf or idf per vocabulary entry
  SentimentLexicon delta_idf_;
  std::optional<WordVectors> vectors_;
  int dim_ = 0;
};

// Sign of the summed effective scores; ties (and empty documents) are
// negative.
Label log_score_predict(const Document& doc, const SentimentLexicon& lex,
                        const KeyScheme& scheme = KeyScheme::surface());

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual std::string kind() const = 0;
  virtual Label predict(const FeatureRow& row) const = 0;
  virtual void save(std::ostream& out) const = 0;

  std::vector<Label> predict(const FeatureMatrix& m) const;
};

struct SvmConfig {
  double lambda = 1e-4;
  int epochs = 50;
  uint64_t seed = 1;
};

// Linear hinge-loss SVM trained by projected stochastic subgradient descent
// (Pegasos) with a constant bias feature. Identical training rows are merged
// into one weighted example, so duplicating the data leaves the model
// unchanged.
class LinearSvm : public Classifier {
 public:
  static LinearSvm train(const FeatureMatrix& x, std::span<const Label> y,
                         const SvmConfig& config = {});
  static LinearSvm load(std::istream& in);

  std::string kind() const override { return "svm"; }
  Label predict(const FeatureRow& row) const override;
  void save(std::ostream& out) const override;
  double decision(const FeatureRow& row) const;
  const std::vector<double>& weights() const { return w_; }
  double bias() const { return b_; }

 private:
  std::vector<double> w_;
  double b_ = 0.0;
};

// Multinomial NB over absolute feature values (bag schemas) or Gaussian NB
// (dense schemas). Ties are negative.
class NaiveBayes : public Classifier {
 public:
  static NaiveBayes train(const FeatureMatrix& x, std::span<const Label> y,
                          bool multinomial);
  static NaiveBayes train(const FeatureMatrix& x, std::span<const Label> y) {
    return train(x, y, is_bag_schema(x.schema));
  }
  static NaiveBayes load(std::istream& in);

  std::string kind() const override { return "nb"; }
  Label predict(const FeatureRow& row) const override;
  void save(std::ostream& out) const override;
  // log P(pos | x) - log P(neg | x) up to a shared constant.
  double log_odds(const FeatureRow& row) const;

 private:
  bool multinomial_ = true;
  int dim_ = 0;
  std::array<double, 2> log_prior_{};
  // multinomial: log theta per class; gaussian: mean and variance per class
  std::array<std::vector<double>, 2> a_;
  std::array<std::vector<double>, 2> b_;
};

// Cosine k-nearest neighbours; equal similarities favour the lower training
// index, and an even split goes to the nearest neighbour's label.
class Knn : public Classifier {
 public:
  static Knn train(const FeatureMatrix& x, std::span<const Label> y, int k = 3);
  static Knn load(std::istream& in);

  std::string kind() const override { return "knn"; }
  Label predict(const FeatureRow& row) const override;
  void save(std::ostream& out) const override;

 private:
  int k_ = 3;
  std::vector<FeatureRow> rows_;
  std::vector<double> norms_;
  std::vector<Label> labels_;
};

std::unique_ptr<Classifier> load_classifier(std::istream& in);

// Most frequent label; a tie goes to votes[tie_breaker] (the SVM member).
// Throws UsageError on an empty vote list.
Label majority_vote(std::span<const Label> votes, size_t tie_breaker = 0);

}  // namespace sentikit

#endif  // SENTIKIT_CLASSIFY_H_
