#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "helpers.h"
#include "sentikit/classify.h"
#include "sentikit/errors.h"

using namespace sentikit;
using namespace sentikit::testing;

namespace {

FeatureMatrix points(const std::vector<std::vector<double>>& rows,
                     Schema schema = Schema::kThreeFeats) {
  FeatureMatrix m;
  m.schema = schema;
  m.dim = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  for (const auto& r : rows)
    m.rows.push_back(FeatureRow::dense(Eigen::Map<const Eigen::VectorXd>(r.data(), r.size())));
  return m;
}

double accuracy_of(const Classifier& c, const FeatureMatrix& x, const std::vector<Label>& y) {
  auto p = c.predict(x);
  int ok = 0;
  for (size_t i = 0; i < y.size(); ++i) ok += p[i] == y[i];
  return static_cast<double>(ok) / y.size();
}

// Two Gaussian-ish blobs separated along the first axis.
void separable(Rng& rng, int n, FeatureMatrix& x, std::vector<Label>& y) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < n; ++i) {
    bool pos = i % 2 == 0;
    rows.push_back({(pos ? 2.0 : -2.0) + rng.uniform() - 0.5, rng.uniform() * 4 - 2});
    y.push_back(pos ? P : N);
  }
  x = points(rows);
}

}  // namespace

TEST(LogScore, SignRuleAndTies) {
  SentimentLexicon lex;
  lex.scores = {{"çok_güzel", 3.0}, {":))", 2.0}, {"a", 1.0}, {"b", -1.0}};
  EXPECT_EQ(log_score_predict(doc("x", N, "çok_güzel :))"), lex), P);
  EXPECT_EQ(log_score_predict(Document{}, lex), N);
  EXPECT_EQ(log_score_predict(doc("x", P, "a b"), lex), N);
}

TEST(LogScore, InvariantUnderPositiveScaling) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    Corpus c = random_corpus(rng, 30, 20, 1, 12, 0.4);
    SentimentLexicon lex = wt_lexicon(c, KeyScheme::surface());
    SentimentLexicon scaled = lex;
    double k = std::exp(rng.uniform() * 8 - 4);
    for (auto& [w, v] : scaled.scores) v *= k;
    for (const Document& d : c.documents())
      EXPECT_EQ(log_score_predict(d, lex), log_score_predict(d, scaled));
  }
}

TEST(Features, SchemaDimensionsAndValues) {
  Corpus train = corpus({{P, "good good film"}, {P, "good"}, {N, "bad film"}, {N, "bad"}});
  FeatureExtractor::Options o;
  auto idf = FeatureExtractor::fit(train, Schema::kDeltaIdf, o);
  auto tfidf = FeatureExtractor::fit(train, Schema::kDeltaTfidf, o);
  auto plain = FeatureExtractor::fit(train, Schema::kTfidf, o);
  auto three = FeatureExtractor::fit(train, Schema::kThreeFeats, o);
  auto both = FeatureExtractor::fit(train, Schema::kTfidfThreeFeats, o);
  EXPECT_EQ(idf.dim(), 3);
  EXPECT_EQ(three.dim(), 3);
  EXPECT_EQ(both.dim(), 6);
  Document d = doc("t", P, "good good film unseen");
  const double good = idf.delta_idf().score("good");
  const int gi = idf.vocabulary().index("good");
  FeatureRow r = idf.transform(d);
  EXPECT_EQ(r.value[std::find(r.index.begin(), r.index.end(), gi) - r.index.begin()], good);
  // good appears once against a max frequency of two.
  FeatureRow t = tfidf.transform(doc("t", P, "good bad bad"));
  auto at = std::find(t.index.begin(), t.index.end(), gi);
  ASSERT_NE(at, t.index.end());
  EXPECT_DOUBLE_EQ(t.value[at - t.index.begin()], 0.75 * good);
  FeatureRow p = plain.transform(d);
  EXPECT_NEAR(p.norm(), 1.0, 1e-12);
  // ln(4/2) for both good and film; counts 2 and 1.
  EXPECT_NEAR(p.value[0] / p.value[1], 2.0, 1e-12);
  for (const FeatureRow& row : both.transform(train).rows)
    for (int i : row.index) EXPECT_LT(i, both.dim());
}

TEST(Features, EmbeddingSchemaNeedsVectors) {
  Corpus train = corpus({{P, "a"}, {N, "b"}});
  EXPECT_THROW(FeatureExtractor::fit(train, Schema::kDocEmbedding, {}), UsageError);
  WordVectors v;
  v.vocab = Vocabulary({"a", "b"});
  v.matrix = Eigen::MatrixXd::Identity(2, 2);
  auto fx = FeatureExtractor::fit(train, Schema::kDocEmbedding, {}, v);
  EXPECT_EQ(fx.dim(), 5);
  EXPECT_EQ(fx.delta_idf().provenance, Provenance::kWt);
}

TEST(Svm, SeparableTrainingAccuracy) {
  Rng rng(2);
  FeatureMatrix x;
  std::vector<Label> y;
  separable(rng, 100, x, y);
  LinearSvm m = LinearSvm::train(x, y);
  EXPECT_EQ(accuracy_of(m, x, y), 1.0);
}

TEST(Svm, DuplicatingEveryExampleLeavesModelUnchanged) {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    FeatureMatrix x;
    std::vector<Label> y;
    separable(rng, 40, x, y);
    // Some label noise so the hinge stays active.
    y[0] = y[0] == P ? N : P;
    FeatureMatrix x2 = x;
    std::vector<Label> y2 = y;
    x2.rows.insert(x2.rows.end(), x.rows.begin(), x.rows.end());
    y2.insert(y2.end(), y.begin(), y.end());
    LinearSvm a = LinearSvm::train(x, y);
    LinearSvm b = LinearSvm::train(x2, y2);
    EXPECT_EQ(a.weights(), b.weights());
    EXPECT_EQ(a.bias(), b.bias());
  }
}

TEST(Svm, SeedDeterminismAndErrors) {
  Rng rng(1);
  FeatureMatrix x;
  std::vector<Label> y;
  separable(rng, 30, x, y);
  EXPECT_EQ(LinearSvm::train(x, y).weights(), LinearSvm::train(x, y).weights());
  std::vector<Label> one_class(y.size(), P);
  EXPECT_THROW(LinearSvm::train(x, one_class), DataError);
  SvmConfig bad;
  bad.lambda = 0;
  EXPECT_THROW(LinearSvm::train(x, y, bad), UsageError);
}

TEST(NaiveBayes, DisjointVocabulariesMultinomial) {
  Corpus train = corpus({{P, "a b a"}, {P, "b c"}, {N, "x y"}, {N, "y z z"}});
  auto fx = FeatureExtractor::fit(train, Schema::kTfidf, {});
  FeatureMatrix x = fx.transform(train);
  std::vector<Label> y = {P, P, N, N};
  NaiveBayes nb = NaiveBayes::train(x, y);
  EXPECT_EQ(accuracy_of(nb, x, y), 1.0);
}

TEST(NaiveBayes, GaussianClosedForm) {
  // One feature: positives at {1, 3}, negatives at {-1, -3}; equal priors and
  // unit variances, so the log odds at v is ((v+2)^2 - (v-2)^2)/2 = 4v.
  FeatureMatrix x = points({{1}, {3}, {-1}, {-3}});
  std::vector<Label> y = {P, P, N, N};
  NaiveBayes nb = NaiveBayes::train(x, y, false);
  for (double v : {-2.0, -0.5, 0.25, 4.0})
    EXPECT_NEAR(nb.log_odds(FeatureRow::dense(Eigen::VectorXd::Constant(1, v))), 4 * v, 1e-6);
}

TEST(Knn, ExactMatchWinsAndK1MemorizesTraining) {
  Rng rng(8);
  std::vector<std::vector<double>> rows;
  std::vector<Label> y;
  for (int i = 0; i < 40; ++i) {
    rows.push_back({rng.uniform() * 2 - 1, rng.uniform() * 2 - 1, rng.uniform() * 2 - 1});
    y.push_back(rng.coin() ? P : N);
  }
  y[0] = P;
  y[1] = N;
  FeatureMatrix x = points(rows);
  EXPECT_EQ(accuracy_of(Knn::train(x, y, 1), x, y), 1.0);
  Knn k3 = Knn::train(points({{1, 0}, {0.9, 0.1}, {0, 1}, {0.1, 0.9}}), std::vector<Label>{P, P, N, N});
  EXPECT_EQ(k3.predict(FeatureRow::dense(Eigen::Vector2d(0.05, 1))), N);
}

TEST(Models, SaveLoadPreservesPredictions) {
  Rng rng(3);
  FeatureMatrix x;
  std::vector<Label> y;
  separable(rng, 50, x, y);
  y[3] = y[3] == P ? N : P;
  std::vector<std::unique_ptr<Classifier>> models;
  models.push_back(std::make_unique<LinearSvm>(LinearSvm::train(x, y)));
  models.push_back(std::make_unique<NaiveBayes>(NaiveBayes::train(x, y, false)));
  models.push_back(std::make_unique<Knn>(Knn::train(x, y, 3)));
  for (const auto& m : models) {
    std::stringstream ss;
    m->save(ss);
    auto back = load_classifier(ss);
    EXPECT_EQ(back->kind(), m->kind());
    EXPECT_EQ(back->predict(x), m->predict(x));
  }
  std::stringstream junk("tree\n");
  EXPECT_THROW(load_classifier(junk), DataError);
}

TEST(MajorityVote, Rules) {
  EXPECT_EQ(majority_vote(std::vector<Label>{P, P, N}), P);
  EXPECT_EQ(majority_vote(std::vector<Label>{P, N}, 1), N);
  EXPECT_EQ(majority_vote(std::vector<Label>{N, N, N}), N);
  EXPECT_THROW(majority_vote(std::vector<Label>{}), UsageError);
}

// Each voter misses two of three items, in different pairs; the vote misses
// all three. Ensemble accuracy >= weakest member is not guaranteed.
TEST(MajorityVote, CanFallBelowEveryMember) {
  const std::vector<Label> gold = {P, P, P};
  const std::vector<std::vector<Label>> voters = {{N, P, N}, {N, N, P}, {P, N, N}};
  int vote_right = 0;
  for (size_t i = 0; i < gold.size(); ++i) {
    std::vector<Label> v = {voters[0][i], voters[1][i], voters[2][i]};
    vote_right += majority_vote(v) == gold[i];
  }
  EXPECT_EQ(vote_right, 0);
  for (const auto& v : voters) EXPECT_EQ(std::count(v.begin(), v.end(), P), 1);
}
