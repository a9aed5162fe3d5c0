#include "sentikit/embed.h"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "sentikit/errors.h"
#include "sentikit/random.h"
#include "sentikit/text.h"

namespace sentikit {

namespace {

constexpr int kDenseLimit = 1200;

void canonicalize(SvdResult& r) {
  for (int c = 0; c < r.u.cols(); ++c) {
    Eigen::Index arg = 0;
    r.u.col(c).cwiseAbs().maxCoeff(&arg);
    if (r.u(arg, c) < 0.0) {
      r.u.col(c) *= -1.0;
      r.v.col(c) *= -1.0;
    }
  }
}

void check_rank(Eigen::Index rows, Eigen::Index cols, int d) {
  if (d < 1 || d > std::min(rows, cols))
    throw UsageError("SVD dimension " + std::to_string(d) +
                     " must be within 1.." +
                     std::to_string(std::min(rows, cols)));
}

SvdResult dense_svd(const Eigen::MatrixXd& m, int d) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdResult r;
  r.u = svd.matrixU().leftCols(d);
  r.s = svd.singularValues().head(d);
  r.v = svd.matrixV().leftCols(d);
  return r;
}

Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      double u1 = 1.0 - rng.uniform();
      double u2 = rng.uniform();
      g(i, j) = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
  return g;
}

Eigen::MatrixXd orthonormal(const Eigen::MatrixXd& a) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), a.cols());
}

// Halko, Martinsson & Tropp range finder with subspace iteration.
template <typename Matrix>
SvdResult randomized_svd(const Matrix& m, int d, uint64_t seed) {
  const Eigen::Index k =
      std::min<Eigen::Index>(d + 20, std::min(m.rows(), m.cols()));
  Eigen::MatrixXd q = orthonormal(m * gaussian(m.cols(), k, seed));
  for (int it = 0; it < 6; ++it) {
    Eigen::MatrixXd z = orthonormal(m.transpose() * q);
    q = orthonormal(m * z);
  }
  Eigen::MatrixXd b = (m.transpose() * q).transpose();  // k x cols
  SvdResult small = dense_svd(b, d);
  SvdResult r;
  r.u = q * small.u;
  r.s = small.s;
  r.v = small.v;
  return r;
}

}  // namespace

SvdResult truncated_svd(const Eigen::MatrixXd& m, int d, uint64_t seed) {
  check_rank(m.rows(), m.cols(), d);
  SvdResult r = std::min(m.rows(), m.cols()) <= kDenseLimit
                    ? dense_svd(m, d)
                    : randomized_svd(m, d, seed);
  canonicalize(r);
  return r;
}

SvdResult truncated_svd(const SparseMatrix& m, int d, uint64_t seed) {
  check_rank(m.rows(), m.cols(), d);
  SvdResult r = std::min(m.rows(), m.cols()) <= kDenseLimit
                    ? dense_svd(Eigen::MatrixXd(m), d)
                    : randomized_svd(m, d, seed);
  canonicalize(r);
  return r;
}

WordVectors truncated_svd_u(const PpmiMatrix& ppmi, int d, uint64_t seed) {
  WordVectors out;
  out.vocab = ppmi.vocab;
  out.matrix = truncated_svd(ppmi.values, d, seed).u;
  out.source = "svd-u";
  return out;
}

GloveResult train_glove(const CoocMatrix& cooc, const GloveConfig& c) {
  const SparseMatrix& x = cooc.counts;
  if (x.nonZeros() == 0) throw DataError("GloVe needs a non-empty matrix");
  if (c.dim < 1 || c.epochs < 1)
    throw UsageError("GloVe dimension and epochs must be >= 1");
  const int n = static_cast<int>(x.rows());
  const int d = c.dim;
  Rng rng(c.seed);
  auto init = [&](Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i)
      m.data()[i] = (rng.uniform() - 0.5) / d;
  };
  // Column-major d x n so each word vector is contiguous.
  Eigen::MatrixXd w(d, n), wc(d, n);
  init(w);
  init(wc);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n), bc = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd gw = Eigen::MatrixXd::Ones(d, n),
                  gwc = Eigen::MatrixXd::Ones(d, n);
  Eigen::VectorXd gb = Eigen::VectorXd::Ones(n), gbc = Eigen::VectorXd::Ones(n);

  struct Cell {
    int i, j;
    double weight, log_x;
  };
  std::vector<Cell> cells;
  cells.reserve(x.nonZeros());
  for (int i = 0; i < x.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(x, i); it; ++it) {
      if (it.value() <= 0.0) continue;
      double f = it.value() < c.x_max ? std::pow(it.value() / c.x_max, c.alpha)
                                      : 1.0;
      cells.push_back({static_cast<int>(it.row()), static_cast<int>(it.col()),
                       f, std::log(it.value())});
    }

  GloveResult result;
  Eigen::VectorXd grad_w(d), grad_c(d);
  for (int epoch = 0; epoch < c.epochs; ++epoch) {
    rng.shuffle(cells);
    double loss = 0.0;
    for (const Cell& cell : cells) {
      auto wi = w.col(cell.i);
      auto wj = wc.col(cell.j);
      double diff = wi.dot(wj) + b[cell.i] + bc[cell.j] - cell.log_x;
      double fdiff = cell.weight * diff;
      loss += 0.5 * fdiff * diff;
      grad_w = fdiff * wj;
      grad_c = fdiff * wi;
      w.col(cell.i).array() -=
          c.learning_rate * grad_w.array() / gw.col(cell.i).array().sqrt();
      wc.col(cell.j).array() -=
          c.learning_rate * grad_c.array() / gwc.col(cell.j).array().sqrt();
      gw.col(cell.i).array() += grad_w.array().square();
      gwc.col(cell.j).array() += grad_c.array().square();
      b[cell.i] -= c.learning_rate * fdiff / std::sqrt(gb[cell.i]);
      bc[cell.j] -= c.learning_rate * fdiff / std::sqrt(gbc[cell.j]);
      gb[cell.i] += fdiff * fdiff;
      gbc[cell.j] += fdiff * fdiff;
    }
    loss /= cells.size();
    if (!std::isfinite(loss))
      throw NumericError("GloVe loss became non-finite in epoch " +
                         std::to_string(epoch + 1));
    result.losses.push_back(loss);
  }
  result.vectors.vocab = cooc.vocab;
  result.vectors.matrix = (w + wc).transpose();
  result.vectors.source = "glove";
  return result;
}

Dictionary parse_dictionary(const std::string& content) {
  Dictionary dict;
  std::istringstream in(content);
  std::string line;
  int lineno = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    std::string head = std::string(text::trim(line.substr(0, tab)));
    if (head.empty())
      throw DataError("dictionary: line " + std::to_string(lineno) +
                      ": empty headword");
    if (!seen.insert(head).second)
      throw DataError("dictionary: line " + std::to_string(lineno) +
                      ": duplicate headword '" + head + "'");
    std::vector<std::string> defs;
    if (tab != std::string::npos)
      defs = text::split_whitespace(line.substr(tab + 1));
    dict.entries.emplace_back(head, std::move(defs));
  }
  return dict;
}

Dictionary load_dictionary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dictionary '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_dictionary(ss.str());
}

DictionaryMatrix dictionary_matrix(const Dictionary& dict) {
  std::vector<std::string> heads;
  std::set<std::string> defs;
  for (const auto& [h, d] : dict.entries) {
    heads.push_back(h);
    defs.insert(d.begin(), d.end());
  }
  DictionaryMatrix m;
  m.headwords = Vocabulary(heads);
  m.definition_words = Vocabulary({defs.begin(), defs.end()});
  m.boolean = Eigen::MatrixXd::Zero(heads.size(), defs.size());
  for (size_t r = 0; r < dict.entries.size(); ++r)
    for (const auto& w : dict.entries[r].second)
      m.boolean(r, m.definition_words.index(w)) = 1.0;
  return m;
}

WordVectors dictionary_vectors(const Dictionary& dict,
                               const SentimentLexicon& lex, int d,
                               const Vocabulary* target, uint64_t seed) {
  DictionaryMatrix dm = dictionary_matrix(dict);
  Eigen::MatrixXd signed_rows = dm.boolean;
  for (size_t r = 0; r < dm.headwords.size(); ++r)
    if (lex.score(dm.headwords.word(r)) < 0.0) signed_rows.row(r) *= -1.0;
  Eigen::MatrixXd u = truncated_svd(signed_rows, d, seed).u;
  WordVectors out;
  out.source = "dictionary";
  if (!target) {
    out.vocab = dm.headwords;
    out.matrix = std::move(u);
    return out;
  }
  out.vocab = *target;
  out.matrix = Eigen::MatrixXd::Zero(target->size(), d);
  for (size_t i = 0; i < target->size(); ++i) {
    int r = dm.headwords.index(target->word(i));
    if (r >= 0) out.matrix.row(i) = u.row(r);
  }
  return out;
}

WordVectors four_score_vectors(
    const Vocabulary& vocab,
    const std::unordered_map<std::string, FourScores>& scores) {
  WordVectors out;
  out.vocab = vocab;
  out.source = "four-scores";
  out.matrix = Eigen::MatrixXd::Zero(vocab.size(), 4);
  for (size_t i = 0; i < vocab.size(); ++i) {
    auto it = scores.find(vocab.word(i));
    if (it == scores.end()) continue;
    for (int k = 0; k < 4; ++k) out.matrix(i, k) = it->second[k];
  }
  return out;
}

WordVectors concat_vectors(std::span<const WordVectors> parts) {
  if (parts.empty()) throw UsageError("nothing to concatenate");
  Eigen::Index cols = 0;
  for (const auto& p : parts) {
    if (!(p.vocab == parts[0].vocab))
      throw DataError("cannot concatenate vectors over different vocabularies");
    cols += p.matrix.cols();
  }
  WordVectors out;
  out.vocab = parts[0].vocab;
  out.source = parts.size() == 1 ? parts[0].source : "concat";
  out.matrix.resize(out.vocab.size(), cols);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.matrix.middleCols(at, p.matrix.cols()) = p.matrix;
    at += p.matrix.cols();
  }
  return out;
}

Eigen::VectorXd document_vector(const Document& doc, const WordVectors& vectors,
                                const SentimentLexicon& lex,
                                const KeyScheme& scheme) {
  const Eigen::Index d = vectors.matrix.cols();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d + 3);
  int found = 0;
  for (const Token& t : doc.tokens) {
    int i = vectors.vocab.index(feature_key(t, scheme));
    if (i < 0) continue;
    out.head(d) += vectors.matrix.row(i).transpose();
    ++found;
  }
  if (found) out.head(d) /= found;
  ThreeFeats f = three_feats(doc, lex, scheme);
  out.tail(3) << f[0], f[1], f[2];
  return out;
}

void save_vectors(const WordVectors& v, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  for (size_t i = 0; i < v.vocab.size(); ++i) {
    out << v.vocab.word(i);
    for (Eigen::Index c = 0; c < v.matrix.cols(); ++c)
      out << ' ' << text::format_double(v.matrix(i, c));
    out << '\n';
  }
}

WordVectors load_vectors(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open vectors '" + path + "'");
  std::vector<std::string> words;
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto f = text::split_whitespace(line);
    if (f.empty()) continue;
    std::vector<double> r;
    try {
      for (size_t k = 1; k < f.size(); ++k) r.push_back(std::stod(f[k]));
    } catch (const std::exception&) {
      throw DataError(path + ": line " + std::to_string(lineno) +
                      ": bad number");
    }
    if (!rows.empty() && r.size() != rows[0].size())
      throw DataError(path + ": line " + std::to_string(lineno) +
                      ": expected " + std::to_string(rows[0].size()) +
                      " values");
    words.push_back(f[0]);
    rows.push_back(std::move(r));
  }
  WordVectors v;
  v.vocab = Vocabulary(words);
  v.source = "file";
  v.matrix.resize(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t c = 0; c < rows[i].size(); ++c) v.matrix(i, c) = rows[i][c];
  return v;
}

}  // namespace sentikit
