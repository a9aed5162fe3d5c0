#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>

#include "helpers.h"
#include "oracles.h"
#include "sentikit/cooc.h"
#include "sentikit/errors.h"

using namespace sentikit;
using namespace sentikit::testing;

namespace {

Eigen::MatrixXd dense(const SparseMatrix& m) { return Eigen::MatrixXd(m); }

CoocMatrix from_dense(const Eigen::MatrixXd& x) {
  CoocMatrix m;
  std::vector<std::string> words;
  for (int i = 0; i < x.rows(); ++i) words.push_back("v" + std::to_string(i));
  m.vocab = Vocabulary(words);
  m.counts = x.sparseView();
  m.total = x.sum();
  return m;
}

}  // namespace

TEST(Cooc, TwoWordDocument) {
  Corpus c = corpus({{P, "a b"}});
  CoocMatrix m = build_cooc(c, WindowSpec::sliding(1), 0);
  int a = m.vocab.index("a"), b = m.vocab.index("b");
  EXPECT_EQ(m.counts.coeff(a, b), 1.0);
  EXPECT_EQ(m.counts.coeff(b, a), 1.0);
  EXPECT_EQ(m.total, 2.0);
}

TEST(Cooc, EmptyCorpusGivesEmptyMatrix) {
  CoocMatrix m = build_cooc(Corpus{}, WindowSpec::sliding(3), 0);
  EXPECT_EQ(m.counts.nonZeros(), 0);
  EXPECT_EQ(m.total, 0.0);
  EXPECT_THROW(ppmi(m), DataError);
}

TEST(Cooc, MatchesBruteForce) {
  Rng rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    Corpus c = random_corpus(rng, 12, 15, 1, 25);
    int k = 1 + static_cast<int>(rng.below(6));
    bool right = rng.coin();
    int min_freq = static_cast<int>(rng.below(3));
    Vocabulary v = vocabulary(c, min_freq);
    auto o = right ? WindowSpec::Orientation::kRight : WindowSpec::Orientation::kSymmetric;
    CoocMatrix m = build_cooc(c, WindowSpec::sliding(k, o), v);
    Eigen::MatrixXd want = oracle::window_counts(c, v, k, right);
    EXPECT_TRUE(dense(m.counts) == want) << "trial " << trial;
    EXPECT_EQ(m.total, want.sum());
    if (!right) EXPECT_TRUE(want == want.transpose());
  }
}

TEST(Cooc, ThreadCountDoesNotChangeResult) {
  Rng rng(4);
  Corpus c = random_corpus(rng, 50, 30, 1, 30);
  CoocMatrix one = build_cooc(c, WindowSpec::sliding(4), 0, KeyScheme::surface(), 1);
  CoocMatrix three = build_cooc(c, WindowSpec::sliding(4), 0, KeyScheme::surface(), 3);
  EXPECT_TRUE(dense(one.counts) == dense(three.counts));
  EXPECT_EQ(one.total, three.total);
}

TEST(Ppmi, MatchesDenseOracleExactly) {
  Rng rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    Corpus c = random_corpus(rng, 15, 20, 1, 20, 0.5);
    bool right = rng.coin();
    int k = 1 + static_cast<int>(rng.below(5));
    auto o = right ? WindowSpec::Orientation::kRight : WindowSpec::Orientation::kSymmetric;
    CoocMatrix m = build_cooc(c, WindowSpec::sliding(k, o), 0);
    if (m.total == 0) continue;
    Eigen::MatrixXd got = dense(ppmi(m).values);
    Eigen::MatrixXd want = oracle::ppmi(oracle::window_counts(c, m.vocab, k, right));
    EXPECT_TRUE(got == want) << "trial " << trial << " max diff "
                             << (got - want).cwiseAbs().maxCoeff();
    EXPECT_GE(got.minCoeff(), 0.0);
  }
}

TEST(Ppmi, HandComputedValue) {
  // x = [[0 2][1 1]]: T = 4, r = (2, 2), c = (1, 3).
  Eigen::MatrixXd x(2, 2);
  x << 0, 2, 1, 1;
  Eigen::MatrixXd p = dense(ppmi(from_dense(x)).values);
  EXPECT_NEAR(p(0, 1), std::log(2.0 * 4 / (2 * 3)), 1e-15);
  EXPECT_NEAR(p(1, 0), std::log(1.0 * 4 / (2 * 1)), 1e-15);
  EXPECT_EQ(p(1, 1), 0.0);  // ln(4/6) < 0 is clipped
}

TEST(Ppmi, InvariantUnderDocumentOrder) {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    Corpus c = random_corpus(rng, 20, 25, 1, 15);
    std::vector<Document> docs;
    for (size_t i = 0; i < c.size(); ++i) docs.push_back(c[i]);
    rng.shuffle(docs);
    Corpus shuffled(docs);
    Vocabulary v = vocabulary(c, 0);
    PpmiMatrix a = ppmi(build_cooc(c, WindowSpec::sliding(3), v));
    PpmiMatrix b = ppmi(build_cooc(shuffled, WindowSpec::sliding(3), v));
    EXPECT_TRUE(dense(a.values) == dense(b.values));
  }
}

// Adding one co-occurrence also grows the row, column and total masses, and
// that can lower PMI: a single pair among 100 has PMI ln 100, two among 101
// with doubled marginals have ln 50.5.
TEST(Ppmi, AddedPairCanLowerPmiWhenMarginalsGrow) {
  // r0 = 1, c1 = 1, T = 100.
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(3, 3);
  x(0, 1) = 1;
  x(2, 2) = 99;
  double before = dense(ppmi(from_dense(x)).values)(0, 1);
  EXPECT_NEAR(before, std::log(100.0), 1e-12);
  x(0, 1) += 1;
  double after = dense(ppmi(from_dense(x)).values)(0, 1);
  EXPECT_NEAR(after, std::log(2.0 * 101 / (2 * 2)), 1e-12);
  EXPECT_LT(after, before);
}

// With all marginals fixed, moving mass into (a, b) never lowers its PPMI.
// The move adds to (a,b) and (c,d) and takes from (a,d) and (c,b).
TEST(Ppmi, MonotoneInCellWithMarginalsFixed) {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 4 + static_cast<int>(rng.below(4));
    Eigen::MatrixXd x(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) x(i, j) = static_cast<double>(rng.below(6));
    int a = static_cast<int>(rng.below(n)), b = static_cast<int>(rng.below(n));
    int c = (a + 1 + static_cast<int>(rng.below(n - 1))) % n;
    int d = (b + 1 + static_cast<int>(rng.below(n - 1))) % n;
    if (x(a, d) < 1 || x(c, b) < 1) continue;
    double before = dense(ppmi(from_dense(x)).values)(a, b);
    Eigen::MatrixXd y = x;
    y(a, b) += 1;
    y(c, d) += 1;
    y(a, d) -= 1;
    y(c, b) -= 1;
    ASSERT_TRUE(y.rowwise().sum() == x.rowwise().sum());
    ASSERT_TRUE(y.colwise().sum() == x.colwise().sum());
    double after = dense(ppmi(from_dense(y)).values)(a, b);
    EXPECT_GE(after, before) << "trial " << trial;
  }
}

TEST(CosineEdges, IdenticalAndOrthogonalRows) {
  PpmiMatrix p;
  p.vocab = Vocabulary({"a", "b", "c"});
  Eigen::MatrixXd v(3, 3);
  v << 1, 2, 0,
       1, 2, 0,
       0, 0, 3;
  p.values = v.sparseView();
  Eigen::MatrixXd e = dense(cosine_edges(p).values);
  EXPECT_NEAR(e(0, 1), 1.0, 1e-15);
  EXPECT_EQ(e(0, 2), 0.0);
  EXPECT_EQ(e(1, 2), 0.0);
}

TEST(CosineEdges, MatchesDenseCosineAndIsSymmetric) {
  Rng rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    Corpus c = random_corpus(rng, 15, 25, 1, 15, 0.4);
    CoocMatrix m = build_cooc(c, WindowSpec::sliding(2), 0);
    if (m.total == 0) continue;
    PpmiMatrix p = ppmi(m);
    Eigen::MatrixXd a = dense(p.values);
    Eigen::MatrixXd e = dense(cosine_edges(p).values);
    ASSERT_TRUE(e == e.transpose());
    for (int i = 0; i < a.rows(); ++i) {
      double ni = a.row(i).norm();
      EXPECT_EQ(e(i, i), ni > 0 ? 1.0 : 0.0);
      for (int j = 0; j < a.rows(); ++j) {
        EXPECT_LE(std::abs(e(i, j)), 1.0 + 1e-12);
        if (i == j) continue;
        double nj = a.row(j).norm();
        double want = ni > 0 && nj > 0 ? a.row(i).dot(a.row(j)) / (ni * nj) : 0.0;
        EXPECT_NEAR(e(i, j), want, 1e-12);
      }
    }
  }
}

TEST(SparseIo, RoundTrip) {
  Rng rng(2);
  Corpus c = random_corpus(rng, 10, 12, 2, 10);
  CoocMatrix m = build_cooc(c, WindowSpec::sliding(2), 0);
  PpmiMatrix p = ppmi(m);
  std::string path = ::testing::TempDir() + "ppmi.tsv";
  save_sparse(p.values, p.vocab, path, path + ".vocab");
  Vocabulary v = load_vocabulary(path + ".vocab");
  EXPECT_EQ(v, p.vocab);
  EXPECT_TRUE(dense(load_sparse(path, v.size())) == dense(p.values));
  std::remove(path.c_str());
  std::remove((path + ".vocab").c_str());
}
