#include "sentikit/cooc.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <thread>
#include <unordered_map>

#include "sentikit/errors.h"
#include "sentikit/text.h"

namespace sentikit {

namespace {

using PairCounts = std::unordered_map<uint64_t, double>;

uint64_t pack(int i, int j) {
  return (static_cast<uint64_t>(i) << 32) | static_cast<uint32_t>(j);
}

void count_range(const Corpus& corpus, size_t begin, size_t end,
                 const WindowSpec& spec, const Vocabulary& vocab,
                 const KeyScheme& scheme, PairCounts& out) {
  for (size_t d = begin; d < end; ++d) {
    const Document& doc = corpus[d];
    std::vector<int> ids;
    ids.reserve(doc.tokens.size());
    for (const Token& t : doc.tokens)
      ids.push_back(vocab.index(feature_key(t, scheme)));
    for_each_window_pair(doc, spec, [&](int i, int j) {
      if (ids[i] >= 0 && ids[j] >= 0) out[pack(ids[i], ids[j])] += 1.0;
    });
  }
}

SparseMatrix from_counts(const PairCounts& counts, size_t n) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(counts.size());
  for (const auto& [key, v] : counts)
    triplets.emplace_back(static_cast<int>(key >> 32),
                          static_cast<int>(key & 0xFFFFFFFFu), v);
  // Sorted so that the compressed layout is identical across runs.
  std::sort(triplets.begin(), triplets.end(), [](const auto& a, const auto& b) {
    return a.row() != b.row() ? a.row() < b.row() : a.col() < b.col();
  });
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

}  // namespace

CoocMatrix build_cooc(const Corpus& corpus, const WindowSpec& spec,
                      const Vocabulary& vocab, const KeyScheme& scheme,
                      int threads) {
  spec.validate();
  threads = std::max(1, std::min<int>(threads, corpus.size()));
  std::vector<PairCounts> partial(threads);
  if (threads == 1) {
    count_range(corpus, 0, corpus.size(), spec, vocab, scheme, partial[0]);
  } else {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(threads);
    const size_t chunk = (corpus.size() + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      size_t b = std::min(corpus.size(), t * chunk);
      size_t e = std::min(corpus.size(), b + chunk);
      workers.emplace_back([&, t, b, e] {
        try {
          count_range(corpus, b, e, spec, vocab, scheme, partial[t]);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    for (auto& err : errors)
      if (err) std::rethrow_exception(err);
    // Integer-valued sums, so merge order cannot change the result.
    for (int t = 1; t < threads; ++t)
      for (const auto& [k, v] : partial[t]) partial[0][k] += v;
  }
  CoocMatrix out;
  out.vocab = vocab;
  out.counts = from_counts(partial[0], vocab.size());
  out.total = out.counts.sum();
  return out;
}

CoocMatrix build_cooc(const Corpus& corpus, const WindowSpec& spec,
                      int min_freq, const KeyScheme& scheme, int threads) {
  return build_cooc(corpus, spec, vocabulary(corpus, min_freq, scheme), scheme,
                    threads);
}

PpmiMatrix ppmi(const CoocMatrix& cooc) {
  if (!(cooc.total > 0.0))
    throw DataError("PPMI needs a non-empty co-occurrence matrix");
  const SparseMatrix& x = cooc.counts;
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(x.rows());
  Eigen::VectorXd cols = Eigen::VectorXd::Zero(x.cols());
  for (int i = 0; i < x.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(x, i); it; ++it) {
      rows[it.row()] += it.value();
      cols[it.col()] += it.value();
    }
  std::vector<Eigen::Triplet<double>> kept;
  for (int i = 0; i < x.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(x, i); it; ++it) {
      if (it.value() <= 0.0) continue;
      double pmi =
          std::log(it.value() * cooc.total / (rows[it.row()] * cols[it.col()]));
      if (pmi > 0.0) kept.emplace_back(it.row(), it.col(), pmi);
    }
  PpmiMatrix out;
  out.vocab = cooc.vocab;
  out.values = SparseMatrix(x.rows(), x.cols());
  out.values.setFromTriplets(kept.begin(), kept.end());
  out.values.makeCompressed();
  return out;
}

EdgeMatrix cosine_edges(const PpmiMatrix& m) {
  const SparseMatrix& a = m.values;
  Eigen::VectorXd inv_norm(a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    double n = a.row(i).norm();
    inv_norm[i] = n > 0.0 ? 1.0 / n : 0.0;
  }
  SparseMatrix gram = (a * a.transpose()).pruned();
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(gram.nonZeros() + a.rows());
  for (int i = 0; i < gram.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(gram, i); it; ++it) {
      int r = it.row();
      int c = it.col();
      if (r == c) continue;
      double v = it.value() * inv_norm[r] * inv_norm[c];
      t.emplace_back(r, c, std::clamp(v, -1.0, 1.0));
    }
    if (inv_norm[i] > 0.0) t.emplace_back(i, i, 1.0);
  }
  EdgeMatrix out;
  out.vocab = m.vocab;
  out.values = SparseMatrix(a.rows(), a.rows());
  out.values.setFromTriplets(t.begin(), t.end());
  // a * a^T is symmetric in exact arithmetic; make it so bit for bit.
  SparseMatrix sym = SparseMatrix(out.values.transpose());
  out.values = (0.5 * (out.values + sym)).pruned();
  out.values.makeCompressed();
  return out;
}

void save_vocabulary(const Vocabulary& vocab, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  for (size_t i = 0; i < vocab.size(); ++i)
    out << i << '\t' << vocab.word(i) << '\t'
        << text::format_double(vocab.count(i)) << '\n';
}

Vocabulary load_vocabulary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open vocabulary '" + path + "'");
  std::vector<std::string> words;
  std::vector<double> counts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    auto f = text::split(line, '\t');
    if (f.size() < 2 || f[0] != std::to_string(words.size()))
      throw DataError(path + ": line " + std::to_string(lineno) +
                      ": expected 'index<TAB>word' with consecutive indices");
    words.push_back(f[1]);
    counts.push_back(f.size() > 2 ? std::stod(f[2]) : 0.0);
  }
  return Vocabulary(std::move(words), std::move(counts));
}

void save_sparse(const SparseMatrix& m, const Vocabulary& vocab,
                 const std::string& path, const std::string& vocab_path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  for (int i = 0; i < m.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(m, i); it; ++it)
      out << it.row() << '\t' << it.col() << '\t'
          << text::format_double(it.value()) << '\n';
  save_vocabulary(vocab, vocab_path);
}

SparseMatrix load_sparse(const std::string& path, size_t n) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open matrix '" + path + "'");
  std::vector<Eigen::Triplet<double>> t;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    auto f = text::split(line, '\t');
    try {
      if (f.size() != 3) throw std::invalid_argument("fields");
      long i = std::stol(f[0]);
      long j = std::stol(f[1]);
      if (i < 0 || j < 0 || static_cast<size_t>(i) >= n ||
          static_cast<size_t>(j) >= n)
        throw std::out_of_range("index");
      t.emplace_back(i, j, std::stod(f[2]));
    } catch (const std::exception&) {
      throw DataError(path + ": line " + std::to_string(lineno) +
                      ": expected 'i<TAB>j<TAB>value' within the vocabulary");
    }
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace sentikit
