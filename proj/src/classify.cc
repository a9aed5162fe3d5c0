#include "sentikit/classify.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>

#include "sentikit/errors.h"
#include "sentikit/random.h"
#include "sentikit/text.h"

namespace sentikit {

std::string schema_name(Schema s) {
  switch (s) {
    case Schema::kDeltaIdf:
      return "delta-idf";
    case Schema::kDeltaTfidf:
      return "delta-tfidf";
    case Schema::kTfidf:
      return "tfidf";
    case Schema::kThreeFeats:
      return "3feats";
    case Schema::kTfidfThreeFeats:
      return "tfidf+3feats";
    case Schema::kDocEmbedding:
      return "doc-embedding";
  }
  return "delta-tfidf";
}

Schema parse_schema(const std::string& name) {
  for (Schema s : {Schema::kDeltaIdf, Schema::kDeltaTfidf, Schema::kTfidf,
                   Schema::kThreeFeats, Schema::kTfidfThreeFeats,
                   Schema::kDocEmbedding})
    if (schema_name(s) == name) return s;
  throw UsageError("unknown feature schema '" + name +
                   "' (expected delta-idf, delta-tfidf, tfidf, 3feats, "
                   "tfidf+3feats or doc-embedding)");
}

bool is_bag_schema(Schema s) {
  return s == Schema::kDeltaIdf || s == Schema::kDeltaTfidf ||
         s == Schema::kTfidf;
}

FeatureRow FeatureRow::dense(const Eigen::VectorXd& v) {
  FeatureRow r;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) {
      r.index.push_back(static_cast<int>(i));
      r.value.push_back(v[i]);
    }
  return r;
}

double FeatureRow::dot(const FeatureRow& o) const {
  double s = 0.0;
  size_t a = 0;
  size_t b = 0;
  while (a < index.size() && b < o.index.size()) {
    if (index[a] == o.index[b]) {
      s += value[a++] * o.value[b++];
    } else if (index[a] < o.index[b]) {
      ++a;
    } else {
      ++b;
    }
  }
  return s;
}

double FeatureRow::norm() const {
  double s = 0.0;
  for (double v : value) s += v * v;
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Features

FeatureExtractor FeatureExtractor::fit(const Corpus& train, Schema schema,
                                       const Options& options,
                                       std::optional<WordVectors> vectors) {
  FeatureExtractor fx;
  fx.schema_ = schema;
  fx.options_ = options;
  if (schema == Schema::kDocEmbedding) {
    if (!vectors)
      throw UsageError("the doc-embedding schema needs word vectors");
    fx.vectors_ = std::move(vectors);
    fx.delta_idf_ = wt_lexicon(train, options.scheme);
    fx.dim_ = static_cast<int>(fx.vectors_->dim()) + 3;
    return fx;
  }
  fx.delta_idf_ = delta_idf_lexicon(train, options.scheme);
  if (schema == Schema::kThreeFeats) {
    fx.dim_ = 3;
    return fx;
  }
  fx.vocab_ = sentikit::vocabulary(train, options.min_freq, options.scheme);
  fx.weight_.resize(fx.vocab_.size());
  if (schema == Schema::kTfidf || schema == Schema::kTfidfThreeFeats) {
    std::vector<int> df(fx.vocab_.size(), 0);
    int n = 0;
    for (const Document& d : train.documents()) {
      if (d.label == Label::kUnlabeled) continue;
      ++n;
      std::set<int> seen;
      for (const auto& k : document_keys(d, options.scheme)) {
        int i = fx.vocab_.index(k);
        if (i >= 0 && seen.insert(i).second) ++df[i];
      }
    }
    for (size_t i = 0; i < df.size(); ++i)
      fx.weight_[i] = df[i] > 0 ? std::log(static_cast<double>(n) / df[i]) : 0.0;
  } else {
    for (size_t i = 0; i < fx.vocab_.size(); ++i)
      fx.weight_[i] = fx.delta_idf_.score(fx.vocab_.word(i));
  }
  fx.dim_ = static_cast<int>(fx.vocab_.size()) +
            (schema == Schema::kTfidfThreeFeats ? 3 : 0);
  return fx;
}

FeatureRow FeatureExtractor::transform(const Document& doc) const {
  const KeyScheme& scheme = options_.scheme;
  if (schema_ == Schema::kDocEmbedding)
    return FeatureRow::dense(
        document_vector(doc, *vectors_, delta_idf_, scheme));
  auto append_three = [&](FeatureRow& r, int offset) {
    ThreeFeats f = three_feats_tfidf(doc, delta_idf_, scheme);
    for (int k = 0; k < 3; ++k)
      if (f[k] != 0.0) {
        r.index.push_back(offset + k);
        r.value.push_back(f[k]);
      }
  };
  FeatureRow row;
  if (schema_ == Schema::kThreeFeats) {
    append_three(row, 0);
    return row;
  }
  std::map<int, int> counts;
  int max_f = 0;
  {
    std::unordered_map<std::string, int> all;
    for (const auto& k : document_keys(doc, scheme)) {
      max_f = std::max(max_f, ++all[k]);
      int i = vocab_.index(k);
      if (i >= 0) ++counts[i];
    }
  }
  std::vector<std::pair<int, double>> entries;
  for (const auto& [i, c] : counts) {
    double v = 0.0;
    switch (schema_) {
      case Schema::kDeltaIdf:
        v = weight_[i];
        break;
      case Schema::kDeltaTfidf:
        v = (0.5 + 0.5 * static_cast<double>(c) / max_f) * weight_[i];
        break;
      default:
        v = c * weight_[i];
        break;
    }
    if (v != 0.0) entries.emplace_back(i, v);
  }
  if (schema_ == Schema::kTfidf || schema_ == Schema::kTfidfThreeFeats) {
    double norm = 0.0;
    for (const auto& e : entries) norm += e.second * e.second;
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (auto& e : entries) e.second /= norm;
  }
  for (const auto& [i, v] : entries) {
    row.index.push_back(i);
    row.value.push_back(v);
  }
  if (schema_ == Schema::kTfidfThreeFeats)
    append_three(row, static_cast<int>(vocab_.size()));
  return row;
}

FeatureMatrix FeatureExtractor::transform(const Corpus& corpus) const {
  FeatureMatrix m;
  m.schema = schema_;
  m.dim = dim_;
  m.rows.reserve(corpus.size());
  for (const Document& d : corpus.documents()) m.rows.push_back(transform(d));
  return m;
}

Label log_score_predict(const Document& doc, const SentimentLexicon& lex,
                        const KeyScheme& scheme) {
  return document_score(doc, lex, scheme) > 0.0 ? Label::kPositive
                                                : Label::kNegative;
}

std::vector<Label> Classifier::predict(const FeatureMatrix& m) const {
  std::vector<Label> out;
  out.reserve(m.rows.size());
  for (const auto& r : m.rows) out.push_back(predict(r));
  return out;
}

namespace {

void check_training(const FeatureMatrix& x, std::span<const Label> y) {
  if (x.rows.size() != y.size())
    throw DataError("feature rows and labels differ in length");
  bool pos = false;
  bool neg = false;
  for (Label l : y) {
    if (l == Label::kUnlabeled)
      throw DataError("training labels must be positive or negative");
    (l == Label::kPositive ? pos : neg) = true;
  }
  if (!pos || !neg)
    throw DataError("training data needs at least one example of each class");
}

int cls(Label l) { return l == Label::kPositive ? 1 : 0; }

void expect(std::istream& in, const std::string& word) {
  std::string w;
  in >> w;
  if (w != word)
    throw DataError("model file: expected '" + word + "', found '" + w + "'");
}

void write_vector(std::ostream& out, const std::vector<double>& v) {
  out << v.size();
  for (double x : v) out << ' ' << text::format_double(x);
  out << '\n';
}

std::vector<double> read_vector(std::istream& in) {
  size_t n = 0;
  if (!(in >> n)) throw DataError("model file: truncated vector");
  std::vector<double> v(n);
  for (auto& x : v)
    if (!(in >> x)) throw DataError("model file: truncated vector");
  return v;
}

void write_row(std::ostream& out, const FeatureRow& r) {
  out << r.index.size();
  for (size_t k = 0; k < r.index.size(); ++k)
    out << ' ' << r.index[k] << ':' << text::format_double(r.value[k]);
  out << '\n';
}

FeatureRow read_row(std::istream& in) {
  size_t n = 0;
  if (!(in >> n)) throw DataError("model file: truncated row");
  FeatureRow r;
  for (size_t k = 0; k < n; ++k) {
    std::string cell;
    in >> cell;
    auto colon = cell.find(':');
    if (colon == std::string::npos) throw DataError("model file: bad row cell");
    r.index.push_back(std::stoi(cell.substr(0, colon)));
    r.value.push_back(std::stod(cell.substr(colon + 1)));
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// SVM

LinearSvm LinearSvm::train(const FeatureMatrix& x, std::span<const Label> y,
                           const SvmConfig& config) {
  check_training(x, y);
  if (!(config.lambda > 0.0) || config.epochs < 1)
    throw UsageError("SVM needs lambda > 0 and epochs >= 1");

  struct Example {
    const FeatureRow* row;
    double y;
    double weight;
  };
  std::vector<Example> examples;
  {
    std::map<std::pair<int, std::vector<std::pair<int, double>>>, size_t> seen;
    for (size_t i = 0; i < x.rows.size(); ++i) {
      std::vector<std::pair<int, double>> key;
      for (size_t k = 0; k < x.rows[i].index.size(); ++k)
        key.emplace_back(x.rows[i].index[k], x.rows[i].value[k]);
      auto [it, fresh] =
          seen.emplace(std::make_pair(cls(y[i]), std::move(key)),
                       examples.size());
      if (fresh) {
        examples.push_back(
            {&x.rows[i], y[i] == Label::kPositive ? 1.0 : -1.0, 1.0});
      } else {
        examples[it->second].weight += 1.0;
      }
    }
  }
  double mean_weight = 0.0;
  for (const auto& e : examples) mean_weight += e.weight;
  mean_weight /= examples.size();

  const double lambda = config.lambda;
  const double radius = 1.0 / std::sqrt(lambda);
  // w is kept as scale * v so the shrink step is O(1).
  std::vector<double> v(x.dim, 0.0);
  double vb = 0.0;
  double scale = 1.0;
  double sq_norm = 0.0;  // of v including bias
  std::vector<size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed);
  long t = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (size_t idx : order) {
      const Example& e = examples[idx];
      ++t;
      const double eta = 1.0 / (lambda * t);
      double margin = vb;
      for (size_t k = 0; k < e.row->index.size(); ++k)
        margin += v[e.row->index[k]] * e.row->value[k];
      margin *= scale * e.y;
      const double shrink = 1.0 - eta * lambda;
      if (shrink <= 0.0) {
        std::fill(v.begin(), v.end(), 0.0);
        vb = 0.0;
        scale = 1.0;
        sq_norm = 0.0;
      } else {
        scale *= shrink;
      }
      if (margin < 1.0) {
        const double step = eta * e.y * e.weight / mean_weight / scale;
        for (size_t k = 0; k < e.row->index.size(); ++k) {
          double& vk = v[e.row->index[k]];
          double nv = vk + step * e.row->value[k];
          sq_norm += nv * nv - vk * vk;
          vk = nv;
        }
        double nb = vb + step;
        sq_norm += nb * nb - vb * vb;
        vb = nb;
      }
      const double norm = scale * std::sqrt(std::max(sq_norm, 0.0));
      if (norm > radius) scale *= radius / norm;
      if (scale < 1e-100 || scale > 1e100) {
        for (double& vk : v) vk *= scale;
        vb *= scale;
        sq_norm *= scale * scale;
        scale = 1.0;
      }
    }
  }
  LinearSvm m;
  m.w_.resize(x.dim);
  for (int i = 0; i < x.dim; ++i) m.w_[i] = scale * v[i];
  m.b_ = scale * vb;
  for (double wi : m.w_)
    if (!std::isfinite(wi)) throw NumericError("SVM weights are not finite");
  return m;
}

double LinearSvm::decision(const FeatureRow& row) const {
  double s = b_;
  for (size_t k = 0; k < row.index.size(); ++k)
    if (row.index[k] < static_cast<int>(w_.size()))
      s += w_[row.index[k]] * row.value[k];
  return s;
}

Label LinearSvm::predict(const FeatureRow& row) const {
  return decision(row) > 0.0 ? Label::kPositive : Label::kNegative;
}

void LinearSvm::save(std::ostream& out) const {
  out << "svm\nbias " << text::format_double(b_) << "\nweights ";
  write_vector(out, w_);
}

LinearSvm LinearSvm::load(std::istream& in) {
  LinearSvm m;
  expect(in, "bias");
  in >> m.b_;
  expect(in, "weights");
  m.w_ = read_vector(in);
  return m;
}

// ---------------------------------------------------------------------------
// Naive Bayes

NaiveBayes NaiveBayes::train(const FeatureMatrix& x, std::span<const Label> y,
                             bool multinomial) {
  check_training(x, y);
  NaiveBayes m;
  m.multinomial_ = multinomial;
  m.dim_ = x.dim;
  std::array<double, 2> n{0.0, 0.0};
  for (Label l : y) n[cls(l)] += 1.0;
  for (int c = 0; c < 2; ++c) {
    m.log_prior_[c] = std::log(n[c] / (n[0] + n[1]));
    m.a_[c].assign(x.dim, 0.0);
    m.b_[c].assign(x.dim, 0.0);
  }
  if (multinomial) {
    for (size_t i = 0; i < x.rows.size(); ++i) {
      const int c = cls(y[i]);
      for (size_t k = 0; k < x.rows[i].index.size(); ++k)
        m.a_[c][x.rows[i].index[k]] += std::abs(x.rows[i].value[k]);
    }
    for (int c = 0; c < 2; ++c) {
      double total = std::accumulate(m.a_[c].begin(), m.a_[c].end(), 0.0);
      for (double& v : m.a_[c]) v = std::log((v + 1.0) / (total + x.dim));
    }
    return m;
  }
  // Gaussian: a = mean, b = variance (with a small floor as in common
  // implementations, relative to the largest feature variance).
  for (size_t i = 0; i < x.rows.size(); ++i) {
    const int c = cls(y[i]);
    for (size_t k = 0; k < x.rows[i].index.size(); ++k)
      m.a_[c][x.rows[i].index[k]] += x.rows[i].value[k];
  }
  for (int c = 0; c < 2; ++c)
    for (double& v : m.a_[c]) v /= n[c];
  for (size_t i = 0; i < x.rows.size(); ++i) {
    const int c = cls(y[i]);
    std::vector<double> dense(x.dim, 0.0);
    for (size_t k = 0; k < x.rows[i].index.size(); ++k)
      dense[x.rows[i].index[k]] = x.rows[i].value[k];
    for (int j = 0; j < x.dim; ++j) {
      double d = dense[j] - m.a_[c][j];
      m.b_[c][j] += d * d;
    }
  }
  double max_var = 0.0;
  for (int c = 0; c < 2; ++c)
    for (double& v : m.b_[c]) {
      v /= n[c];
      max_var = std::max(max_var, v);
    }
  const double floor = 1e-9 * std::max(max_var, 1.0);
  for (int c = 0; c < 2; ++c)
    for (double& v : m.b_[c]) v += floor;
  return m;
}

double NaiveBayes::log_odds(const FeatureRow& row) const {
  std::array<double, 2> score = log_prior_;
  if (multinomial_) {
    for (size_t k = 0; k < row.index.size(); ++k) {
      int j = row.index[k];
      if (j >= dim_) continue;
      for (int c = 0; c < 2; ++c) score[c] += std::abs(row.value[k]) * a_[c][j];
    }
  } else {
    std::vector<double> dense(dim_, 0.0);
    for (size_t k = 0; k < row.index.size(); ++k)
      if (row.index[k] < dim_) dense[row.index[k]] = row.value[k];
    for (int c = 0; c < 2; ++c)
      for (int j = 0; j < dim_; ++j) {
        double d = dense[j] - a_[c][j];
        score[c] += -0.5 * std::log(2.0 * M_PI * b_[c][j]) -
                    d * d / (2.0 * b_[c][j]);
      }
  }
  return score[1] - score[0];
}

Label NaiveBayes::predict(const FeatureRow& row) const {
  return log_odds(row) > 0.0 ? Label::kPositive : Label::kNegative;
}

void NaiveBayes::save(std::ostream& out) const {
  out << "nb\n" << (multinomial_ ? "multinomial" : "gaussian") << ' ' << dim_
      << '\n';
  for (int c = 0; c < 2; ++c) {
    out << text::format_double(log_prior_[c]) << '\n';
    write_vector(out, a_[c]);
    write_vector(out, b_[c]);
  }
}

NaiveBayes NaiveBayes::load(std::istream& in) {
  NaiveBayes m;
  std::string variant;
  in >> variant >> m.dim_;
  if (variant != "multinomial" && variant != "gaussian")
    throw DataError("model file: unknown NB variant '" + variant + "'");
  m.multinomial_ = variant == "multinomial";
  for (int c = 0; c < 2; ++c) {
    in >> m.log_prior_[c];
    m.a_[c] = read_vector(in);
    m.b_[c] = read_vector(in);
  }
  return m;
}

// ---------------------------------------------------------------------------
// kNN

Knn Knn::train(const FeatureMatrix& x, std::span<const Label> y, int k) {
  check_training(x, y);
  if (k < 1) throw UsageError("kNN needs k >= 1");
  Knn m;
  m.k_ = k;
  m.rows_ = x.rows;
  m.labels_.assign(y.begin(), y.end());
  for (const auto& r : m.rows_) m.norms_.push_back(r.norm());
  return m;
}

Label Knn::predict(const FeatureRow& row) const {
  const double n = row.norm();
  std::vector<std::pair<double, size_t>> sims;
  sims.reserve(rows_.size());
  for (size_t i = 0; i < rows_.size(); ++i) {
    double s = (n > 0.0 && norms_[i] > 0.0)
                   ? rows_[i].dot(row) / (n * norms_[i])
                   : 0.0;
    sims.emplace_back(-s, i);
  }
  const size_t k = std::min<size_t>(k_, sims.size());
  std::partial_sort(sims.begin(), sims.begin() + k, sims.end());
  int pos = 0;
  for (size_t i = 0; i < k; ++i) pos += labels_[sims[i].second] == Label::kPositive;
  if (2 * pos == static_cast<int>(k)) return labels_[sims[0].second];
  return 2 * pos > static_cast<int>(k) ? Label::kPositive : Label::kNegative;
}

void Knn::save(std::ostream& out) const {
  out << "knn\n" << k_ << ' ' << rows_.size() << '\n';
  for (size_t i = 0; i < rows_.size(); ++i) {
    out << (labels_[i] == Label::kPositive ? 1 : 0) << ' ';
    write_row(out, rows_[i]);
  }
}

Knn Knn::load(std::istream& in) {
  Knn m;
  size_t n = 0;
  in >> m.k_ >> n;
  for (size_t i = 0; i < n; ++i) {
    int l = 0;
    in >> l;
    m.labels_.push_back(l ? Label::kPositive : Label::kNegative);
    m.rows_.push_back(read_row(in));
    m.norms_.push_back(m.rows_.back().norm());
  }
  return m;
}

std::unique_ptr<Classifier> load_classifier(std::istream& in) {
  std::string kind;
  in >> kind;
  if (kind == "svm") return std::make_unique<LinearSvm>(LinearSvm::load(in));
  if (kind == "nb") return std::make_unique<NaiveBayes>(NaiveBayes::load(in));
  if (kind == "knn") return std::make_unique<Knn>(Knn::load(in));
  throw DataError("model file: unknown classifier '" + kind + "'");
}

Label majority_vote(std::span<const Label> votes, size_t tie_breaker) {
  if (votes.empty()) throw UsageError("majority vote over no models");
  if (tie_breaker >= votes.size())
    throw UsageError("tie-breaking voter out of range");
  int pos = 0;
  for (Label v : votes) pos += v == Label::kPositive;
  const int neg = static_cast<int>(votes.size()) - pos;
  if (pos == neg) return votes[tie_breaker];
  return pos > neg ? Label::kPositive : Label::kNegative;
}

}  // namespace sentikit
