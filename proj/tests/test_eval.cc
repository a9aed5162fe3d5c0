#include <gtest/gtest.h>

#include <cmath>

#include "helpers.h"
#include "oracles.h"
#include "sentikit/errors.h"
#include "sentikit/eval.h"

using namespace sentikit;
using namespace sentikit::testing;

namespace {

std::vector<Label> labels(const std::string& s) {
  std::vector<Label> out;
  for (char ch : s) out.push_back(ch == '+' ? P : N);
  return out;
}

// Student t density integrated with Simpson's rule.
double t_two_sided(double t, double nu) {
  auto pdf = [nu](double x) {
    return std::tgamma((nu + 1) / 2) / (std::sqrt(nu * M_PI) * std::tgamma(nu / 2)) *
           std::pow(1 + x * x / nu, -(nu + 1) / 2);
  };
  const int steps = 20000;
  const double h = std::abs(t) / steps;
  double s = pdf(0) + pdf(std::abs(t));
  for (int i = 1; i < steps; ++i) s += (i % 2 ? 4 : 2) * pdf(i * h);
  return 1.0 - 2.0 * s * h / 3;
}

void discordant(int b, int c, int agree, std::vector<Label>& a, std::vector<Label>& bb,
                std::vector<Label>& g) {
  a.clear(), bb.clear(), g.clear();
  for (int i = 0; i < b; ++i) a.push_back(P), bb.push_back(N), g.push_back(P);
  for (int i = 0; i < c; ++i) a.push_back(N), bb.push_back(P), g.push_back(P);
  for (int i = 0; i < agree; ++i) a.push_back(N), bb.push_back(N), g.push_back(i % 2 ? P : N);
}

Corpus majority_corpus() {
  std::vector<std::pair<Label, std::string>> docs;
  for (int i = 0; i < 100; ++i) docs.push_back({i % 5 < 3 ? P : N, "film"});
  return corpus(docs);
}

Corpus separable_corpus(Rng& rng) {
  const std::vector<std::string> pos = {"good", "great", "fine"}, neg = {"bad", "awful", "poor"},
                                  filler = {"film", "plot", "actor", "scene"};
  std::vector<std::pair<Label, std::string>> docs;
  for (int i = 0; i < 80; ++i) {
    bool p = i % 2 == 0;
    std::string text;
    for (int w = 0; w < 6; ++w) {
      const auto& pool = w % 2 ? filler : (p ? pos : neg);
      text += pool[rng.below(pool.size())] + " ";
    }
    docs.push_back({p ? P : N, text});
  }
  return corpus(docs);
}

}  // namespace

TEST(Metrics, AccuracyAndF1Examples) {
  auto g = labels("++++-----+");
  EXPECT_EQ(accuracy(g, g), 1.0);
  EXPECT_EQ(f1(g, g), 1.0);
  auto half = labels("++--");
  EXPECT_EQ(accuracy(labels("++++"), half), 0.5);
  // TP=3 FP=1 FN=1 TN=5.
  auto gold = labels("++++------");
  auto pred = labels("+++-+-----");
  EXPECT_DOUBLE_EQ(f1(pred, gold), 0.75);
  EXPECT_DOUBLE_EQ(accuracy(pred, gold), 0.8);
  // Negative class: TP=5 FP=1 FN=1.
  EXPECT_DOUBLE_EQ(f1(pred, gold, F1Averaging::kMacro), (0.75 + 10.0 / 12) / 2);
  EXPECT_EQ(f1(labels("----"), half), 0.0);
  EXPECT_THROW(accuracy(std::vector<Label>{}, std::vector<Label>{}), UsageError);
  EXPECT_THROW(accuracy(labels("+"), half), UsageError);
}

TEST(Metrics, AccuracyAndErrorSumToOne) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Label> p, g;
    for (int i = 0, n = 1 + rng.below(40); i < n; ++i)
      p.push_back(rng.coin() ? P : N), g.push_back(rng.coin() ? P : N);
    int wrong = 0;
    for (size_t i = 0; i < p.size(); ++i) wrong += p[i] != g[i];
    EXPECT_NEAR(accuracy(p, g) + static_cast<double>(wrong) / p.size(), 1.0, 1e-15);
  }
}

TEST(McNemar, TenToZero) {
  std::vector<Label> a, b, g;
  discordant(10, 0, 30, a, b, g);
  McNemarResult r = mcnemar(a, b, g);
  EXPECT_EQ(r.b, 10);
  EXPECT_EQ(r.c, 0);
  EXPECT_FALSE(r.exact);
  EXPECT_NEAR(r.statistic, 8.1, 1e-12);
  EXPECT_NEAR(r.p_value, std::erfc(std::sqrt(8.1 / 2)), 1e-12);
  EXPECT_NEAR(r.p_value, 0.0044, 1e-4);
}

TEST(McNemar, SmallCountsMatchSignTestEnumeration) {
  for (int b = 0; b < 10; ++b)
    for (int c = 0; b + c < 10; ++c) {
      std::vector<Label> x, y, g;
      discordant(b, c, 5, x, y, g);
      McNemarResult r = mcnemar(x, y, g);
      if (b + c == 0) {
        EXPECT_EQ(r.p_value, 1.0);
        continue;
      }
      EXPECT_TRUE(r.exact);
      EXPECT_NEAR(r.p_value, oracle::sign_test(b, c), 1e-12) << b << "," << c;
    }
}

TEST(Significance, IdenticalSystemsGivePOne) {
  auto g = labels("+-+-++--+");
  auto p = labels("++--+-+-+");
  EXPECT_EQ(approx_randomization(p, p, g), 1.0);
  EXPECT_EQ(approx_randomization(p, p, g, 100, 1, false), 1.0);
  EXPECT_EQ(mcnemar(p, p, g).p_value, 1.0);
  std::vector<double> f = {0.7, 0.8, 0.75};
  EXPECT_EQ(paired_t_test(f, f), 1.0);
}

TEST(Randomization, ExactPathMatchesEnumerationOverRawVectors) {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    size_t n = 1 + rng.below(14);
    std::vector<Label> a, b, g;
    for (size_t i = 0; i < n; ++i) {
      g.push_back(rng.coin() ? P : N);
      a.push_back(rng.below(4) ? g.back() : (g.back() == P ? N : P));
      b.push_back(rng.coin() ? P : N);
    }
    EXPECT_NEAR(approx_randomization(a, b, g), oracle::randomization(a, b, g), 1e-15);
  }
}

TEST(Randomization, SampledPathAgreesWithEnumeration) {
  for (auto [b, c] : {std::pair{6, 1}, {5, 5}, {9, 2}, {3, 0}, {8, 4}}) {
    std::vector<Label> x, y, g;
    discordant(b, c, 4, x, y, g);
    double exact = oracle::randomization(x, y, g);
    double sampled = approx_randomization(x, y, g, 10000, 5, false);
    EXPECT_NEAR(sampled, exact, 0.01) << b << "," << c;
    EXPECT_EQ(sampled, approx_randomization(x, y, g, 10000, 5, false));
  }
}

TEST(Randomization, PValueShrinksAsGapGrows) {
  for (int m : {12, 40}) {
    double prev = 1.0;
    for (int b = m / 2; b <= m; ++b) {
      std::vector<Label> x, y, g;
      discordant(b, m - b, 3, x, y, g);
      double p = approx_randomization(x, y, g, 20000, 2);
      EXPECT_GT(p, 0.0);
      EXPECT_LE(p, 1.0);
      EXPECT_LE(p, prev + 0.01) << m << " " << b;
      prev = p;
    }
    EXPECT_LT(prev, 0.01);
  }
}

TEST(TTest, MatchesIntegratedDensity) {
  std::vector<double> a = {2, 3, 4, 5, 6}, b = {1, 1, 1, 1, 1};
  // Differences 1..5: mean 3, sd sqrt(2.5), t = 3 / sqrt(0.5).
  double t = 3 / std::sqrt(0.5);
  EXPECT_NEAR(paired_t_test(a, b), t_two_sided(t, 4), 1e-8);
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x, y;
    for (int i = 0; i < 10; ++i) x.push_back(rng.uniform()), y.push_back(rng.uniform());
    double mean = 0, ss = 0;
    for (int i = 0; i < 10; ++i) mean += (x[i] - y[i]) / 10;
    for (int i = 0; i < 10; ++i) ss += std::pow(x[i] - y[i] - mean, 2);
    double tt = mean / std::sqrt(ss / 9 / 10);
    EXPECT_NEAR(paired_t_test(x, y), t_two_sided(tt, 9), 1e-7);
  }
  EXPECT_THROW(paired_t_test(std::vector<double>{1}, std::vector<double>{2}), UsageError);
}

TEST(Pipeline, LeakageGuardRejectsOtherSplitsAndTrainingDocuments) {
  Rng rng(1);
  Corpus c = separable_corpus(rng);
  auto folds = split_folds(c, 5, 1);
  Corpus train = c.subset(folds[0].train_ids), test = c.subset(folds[0].test_ids);
  PipelineSpec spec;
  spec.model = "ensemble";
  FittedPipeline p = FittedPipeline::fit(train, spec, "fold0", 1);
  EXPECT_NO_THROW(p.predict(test, "fold0"));
  EXPECT_THROW(p.predict(test, "fold1"), DataError);
  EXPECT_THROW(p.predict(c, "fold0"), DataError);
  // A lexicon swapped in from another split is caught.
  ASSERT_EQ(p.lexicons().size(), 2u);
  p.lexicons()[0]->split_id = "fold3";
  EXPECT_THROW(p.predict(test, "fold0"), DataError);
}

TEST(Pipeline, MajorityBaselineOnSixtyFortyCorpus) {
  // Every document is the same word, so NB falls back on its prior.
  PipelineSpec spec;
  spec.model = "nb";
  spec.schema = Schema::kTfidf;
  CrossvalReport r = crossval(majority_corpus(), spec, 10, 1);
  EXPECT_DOUBLE_EQ(r.mean_accuracy(), 0.6);
}

TEST(Pipeline, SeparableCorpusWithSvm) {
  Rng rng(2);
  Corpus c = separable_corpus(rng);
  PipelineSpec spec;
  CrossvalReport r = crossval(c, spec, 10, 1);
  EXPECT_EQ(r.mean_accuracy(), 1.0);
  spec.model = "ls";
  EXPECT_EQ(crossval(c, spec, 10, 1).mean_accuracy(), 1.0);
}

TEST(Crossval, DeterministicAcrossRunsAndThreads) {
  Rng rng(9);
  Corpus c = random_corpus(rng, 60, 25, 3, 15, 0.3);
  PipelineSpec spec;
  spec.model = "ensemble";
  std::string one = crossval(c, spec, 5, 4).to_json().dump();
  EXPECT_EQ(one, crossval(c, spec, 5, 4).to_json().dump());
  EXPECT_EQ(one, crossval(c, spec, 5, 4, false, 3).to_json().dump());
  EXPECT_NE(one, crossval(c, spec, 5, 5).to_json().dump());
}

TEST(Crossval, NestedPicksFromGridAndReportsRoundTrip) {
  Rng rng(11);
  Corpus c = random_corpus(rng, 40, 12, 3, 10, 0.4);
  PipelineSpec spec;
  spec.model = "ls";
  spec.ls_lexicon = "combined";
  spec.seeds.pairs = {{"w0", "w1"}};
  CrossvalReport r = crossval(c, spec, 4, 2, true, 2);
  for (const FoldResult& f : r.folds) {
    double steps = f.c_s * 10;
    EXPECT_NEAR(steps, std::round(steps), 1e-12);
    EXPECT_GE(f.c_s, 0.1 - 1e-12);
    EXPECT_LE(f.c_s, 0.9 + 1e-12);
    EXPECT_NEAR(f.c_u + f.c_s, 1.0, 1e-12);
  }
  CrossvalReport back = CrossvalReport::from_json(r.to_json());
  EXPECT_EQ(back.to_json().dump(), r.to_json().dump());
  EXPECT_EQ(back.pooled().size(), c.size());
  EXPECT_EQ(r.to_tsv().substr(0, 5), "fold\t");
  Comparison same = compare(r, back);
  EXPECT_EQ(same.randomization_p, 1.0);
  EXPECT_EQ(same.mcnemar.p_value, 1.0);
  EXPECT_EQ(same.t_test_p, 1.0);
}

TEST(PipelineSpec, JsonRoundTripAndErrors) {
  PipelineSpec s;
  s.model = "ensemble";
  s.members = {"svm", "knn", "ls"};
  s.key = "partial";
  s.top_percent = 40;
  s.always_keep = {"Neg"};
  s.schema = Schema::kTfidfThreeFeats;
  s.seeds.pairs = {{"iyi", "kötü"}};
  s.window = WindowSpec::sliding(4);
  PipelineSpec back = PipelineSpec::from_json(s.to_json());
  EXPECT_EQ(back.to_json(), s.to_json());
  using nlohmann::json;
  EXPECT_THROW(PipelineSpec::from_json(json{{"modle", "svm"}}), UsageError);
  EXPECT_THROW(PipelineSpec::from_json(json{{"model", "tree"}}), UsageError);
  EXPECT_THROW(PipelineSpec::from_json(json{{"key", "lemma"}}), UsageError);
  EXPECT_THROW(PipelineSpec::from_json(json{{"top_percent", "ten"}}), UsageError);
  EXPECT_THROW(PipelineSpec::load("/nonexistent/spec.json"), DataError);
}
