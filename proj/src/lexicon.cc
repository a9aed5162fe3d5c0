#include "sentikit/lexicon.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "sentikit/errors.h"
#include "sentikit/text.h"

namespace sentikit {

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kUnsupervised:
      return "unsupervised";
    case Provenance::kSemisupervised:
      return "semisupervised";
    case Provenance::kDeltaIdf:
      return "supervised-delta-idf";
    case Provenance::kDeltaTfidf:
      return "supervised-delta-tfidf";
    case Provenance::kWt:
      return "supervised-wt";
    case Provenance::kCombined:
      return "combined";
  }
  return "unsupervised";
}

Provenance parse_provenance(const std::string& name) {
  for (Provenance p :
       {Provenance::kUnsupervised, Provenance::kSemisupervised,
        Provenance::kDeltaIdf, Provenance::kDeltaTfidf, Provenance::kWt,
        Provenance::kCombined})
    if (provenance_name(p) == name) return p;
  throw DataError("unknown lexicon provenance '" + name + "'");
}

void save_lexicon(const SentimentLexicon& lex, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  if (!lex.split_id.empty()) out << "# split_id=" << lex.split_id << '\n';
  std::map<std::string, double> sorted(lex.scores.begin(), lex.scores.end());
  const std::string prov = provenance_name(lex.provenance);
  for (const auto& [w, s] : sorted)
    out << w << '\t' << text::format_double(s) << '\t' << prov << '\n';
}

SentimentLexicon load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lexicon '" + path + "'");
  SentimentLexicon lex;
  std::string line;
  int lineno = 0;
  bool have_prov = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.starts_with("# split_id=")) {
      lex.split_id = line.substr(11);
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    auto f = text::split(line, '\t');
    if (f.size() != 3)
      throw DataError(path + ": line " + std::to_string(lineno) +
                      ": expected 'word<TAB>score<TAB>provenance'");
    double v;
    try {
      v = std::stod(f[1]);
    } catch (const std::exception&) {
      throw DataError(path + ": line " + std::to_string(lineno) +
                      ": bad score '" + f[1] + "'");
    }
    if (!std::isfinite(v))
      throw NumericError(path + ": line " + std::to_string(lineno) +
                         ": non-finite score");
    Provenance p = parse_provenance(f[2]);
    if (have_prov && p != lex.provenance)
      throw DataError(path + ": line " + std::to_string(lineno) +
                      ": mixed provenance in one lexicon");
    lex.provenance = p;
    have_prov = true;
    lex.scores[f[0]] = v;
  }
  return lex;
}

std::vector<std::string> SeedSet::positives() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& [p, n] : pairs)
    if (seen.insert(p).second) out.push_back(p);
  return out;
}

std::vector<std::string> SeedSet::negatives() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& [p, n] : pairs)
    if (seen.insert(n).second) out.push_back(n);
  return out;
}

void SeedSet::validate() const {
  auto pos = positives();
  std::set<std::string> p(pos.begin(), pos.end());
  for (const auto& n : negatives())
    if (p.count(n))
      throw DataError("seed word '" + n + "' is both positive and negative");
}

SeedSet SeedSet::swapped() const {
  SeedSet s;
  for (const auto& [p, n] : pairs) s.pairs.emplace_back(n, p);
  return s;
}

SeedSet parse_seeds(const std::string& content) {
  SeedSet seeds;
  std::istringstream in(content);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = text::trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto f = text::split(t, '\t');
    if (f.size() != 2 || f[0].empty() || f[1].empty())
      throw DataError("seeds: line " + std::to_string(lineno) +
                      ": expected 'positive<TAB>negative'");
    seeds.pairs.emplace_back(f[0], f[1]);
  }
  if (seeds.pairs.empty()) throw DataError("seed file has no pairs");
  seeds.validate();
  return seeds;
}

SeedSet load_seeds(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open seeds '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_seeds(ss.str());
}

double effective_score(const Token& token, const SentimentLexicon& lex,
                       const KeyScheme& scheme) {
  std::string key = feature_key(token, scheme);
  if (!token.negated) return token.intensity * lex.score(key);
  auto it = lex.scores.find(key);
  if (it != lex.scores.end()) return token.intensity * it->second;
  key.pop_back();
  return -token.intensity * lex.score(key);
}

double document_score(const Document& doc, const SentimentLexicon& lex,
                      const KeyScheme& scheme) {
  double sum = 0.0;
  for (const Token& t : doc.tokens) sum += effective_score(t, lex, scheme);
  return sum;
}

// ---------------------------------------------------------------------------
// Unsupervised

namespace {

constexpr double kNearSmoothing = 0.001;

double near_count(const CoocMatrix& m, int w, int s) {
  if (w < 0 || s < 0) return 0.0;
  if (w == s) return m.vocab.count(w);
  return m.counts.coeff(w, s);
}

double unigram(const CoocMatrix& m, int s) {
  return s < 0 ? 0.0 : m.vocab.count(s);
}

double sc_at(int w, const CoocMatrix& near,
             const std::vector<std::pair<int, int>>& seed_ids) {
  double sum = 0.0;
  for (const auto& [p, n] : seed_ids) {
    double a = (near_count(near, w, p) + kNearSmoothing) /
               (unigram(near, p) + kNearSmoothing);
    double b = (unigram(near, n) + kNearSmoothing) /
               (near_count(near, w, n) + kNearSmoothing);
    sum += std::log2(a * b);
  }
  return sum / seed_ids.size();
}

std::vector<std::pair<int, int>> seed_indices(const Vocabulary& vocab,
                                              const SeedSet& seeds) {
  std::vector<std::pair<int, int>> ids;
  for (const auto& [p, n] : seeds.pairs)
    ids.emplace_back(vocab.index(p), vocab.index(n));
  return ids;
}

}  // namespace

double unsupervised_sc(const std::string& word, const CoocMatrix& near,
                       const SeedSet& seeds) {
  if (seeds.pairs.empty()) throw DataError("no seed pairs");
  int w = near.vocab.index(word);
  if (w < 0) {
    warn("word '" + word + "' is not in the vocabulary; scoring it 0");
    return 0.0;
  }
  return sc_at(w, near, seed_indices(near.vocab, seeds));
}

SentimentLexicon unsupervised_lexicon(const CoocMatrix& near,
                                      const SeedSet& seeds) {
  if (seeds.pairs.empty()) throw DataError("no seed pairs");
  auto ids = seed_indices(near.vocab, seeds);
  for (size_t k = 0; k < ids.size(); ++k)
    if (ids[k].first < 0 || ids[k].second < 0)
      warn("seed pair (" + seeds.pairs[k].first + ", " +
           seeds.pairs[k].second + ") is not fully in the vocabulary");
  SentimentLexicon lex;
  lex.provenance = Provenance::kUnsupervised;
  for (size_t w = 0; w < near.vocab.size(); ++w)
    lex.scores[near.vocab.word(w)] = sc_at(static_cast<int>(w), near, ids);
  return lex;
}

// ---------------------------------------------------------------------------
// Propagation

double propagation_g(const PropagationConfig& c, int k) {
  return std::max(c.g0 * std::pow(c.decay, k), std::min(c.g_floor, c.g0));
}

PropagationResult propagate(const EdgeMatrix& edges, const SeedSet& seeds,
                            const PropagationConfig& config) {
  if (!(config.g0 > 0.0 && config.g0 <= 1.0))
    throw UsageError("g0 must be in (0, 1]");
  if (config.max_iter < 1) throw UsageError("max_iter must be >= 1");
  seeds.validate();
  const Vocabulary& vocab = edges.vocab;
  const int n = static_cast<int>(vocab.size());
  if (n == 0) throw DataError("empty edge matrix");

  auto seed_vector = [&](const std::vector<std::string>& words) {
    std::vector<int> present;
    for (const auto& w : words) {
      int i = vocab.index(w);
      if (i < 0) {
        warn("seed '" + w + "' is not in the vocabulary; skipped");
      } else {
        present.push_back(i);
      }
    }
    if (present.empty())
      throw DataError("none of the seeds of one polarity is in the vocabulary");
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
    for (int i : present) s[i] = 1.0 / present.size();
    return s;
  };
  const Eigen::VectorXd s_pos = seed_vector(seeds.positives());
  const Eigen::VectorXd s_neg = seed_vector(seeds.negatives());

  SparseMatrix e = edges.values;
  for (int i = 0; i < e.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(e, i); it; ++it)
      if (it.value() < 0.0) it.valueRef() = 0.0;

  Eigen::VectorXd p = Eigen::VectorXd::Constant(n, 1.0 / n);
  Eigen::VectorXd q = p;
  Eigen::VectorXd sum_p = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sum_q = Eigen::VectorXd::Zero(n);
  double inv_factorial = 1.0;
  int k = 0;
  while (k < config.max_iter) {
    const double g = propagation_g(config, k);
    Eigen::VectorXd p_next = (1.0 - g) * (e * p) + g * s_pos;
    Eigen::VectorXd q_next = (1.0 - g) * (e * q) + g * s_neg;
    ++k;
    if (!p_next.allFinite() || !q_next.allFinite())
      throw NumericError("propagation diverged at iteration " +
                         std::to_string(k));
    inv_factorial /= k;
    sum_p += inv_factorial * p_next;
    sum_q += inv_factorial * q_next;
    double delta = std::max((p_next - p).cwiseAbs().maxCoeff(),
                            (q_next - q).cwiseAbs().maxCoeff());
    p = std::move(p_next);
    q = std::move(q_next);
    if (delta < config.tol) break;
  }

  PropagationResult r;
  r.iterations = k;
  r.positive = sum_p;
  r.negative = sum_q;
  r.lexicon.provenance = Provenance::kSemisupervised;
  for (int i = 0; i < n; ++i) {
    double num = sum_p[i] + config.smoothing;
    double den = sum_q[i] + config.smoothing;
    if (!(den > 0.0))
      throw NumericError("zero negative mass for '" + vocab.word(i) + "'");
    // Difference of logs, so that swapping the seed roles negates exactly.
    double v = std::log(num) - std::log(den);
    if (!std::isfinite(v))
      throw NumericError("non-finite score for '" + vocab.word(i) + "'");
    r.lexicon.scores[vocab.word(i)] = v;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Supervised

DocumentFrequencies DocumentFrequencies::from(const Corpus& corpus,
                                              const KeyScheme& scheme) {
  DocumentFrequencies df;
  for (const Document& d : corpus.documents()) {
    if (d.label == Label::kUnlabeled) continue;
    auto keys = document_keys(d, scheme);
    std::set<std::string> distinct(keys.begin(), keys.end());
    auto& target = d.label == Label::kPositive ? df.positive : df.negative;
    for (const auto& k : distinct) ++target[k];
    if (d.label == Label::kPositive) {
      ++df.n_positive;
    } else {
      ++df.n_negative;
    }
  }
  return df;
}

int DocumentFrequencies::pos(const std::string& w) const {
  auto it = positive.find(w);
  return it == positive.end() ? 0 : it->second;
}

int DocumentFrequencies::neg(const std::string& w) const {
  auto it = negative.find(w);
  return it == negative.end() ? 0 : it->second;
}

namespace {

double class_ratio_log(const std::string& w, const DocumentFrequencies& df,
                       double smoothing) {
  if (df.n_positive <= 0 || df.n_negative <= 0)
    throw DataError(
        "supervised scores need both positive and negative documents");
  double p = static_cast<double>(df.pos(w)) / df.n_positive + smoothing;
  double n = static_cast<double>(df.neg(w)) / df.n_negative + smoothing;
  return std::log(p) - std::log(n);
}

double tf_factor(const std::string& word,
                 const std::vector<std::string>& doc_keys) {
  if (doc_keys.empty())
    throw DataError("delta tf-idf is undefined on an empty document");
  std::unordered_map<std::string, int> f;
  int max_f = 0;
  for (const auto& k : doc_keys) max_f = std::max(max_f, ++f[k]);
  auto it = f.find(word);
  double fw = it == f.end() ? 0.0 : it->second;
  return 0.5 + 0.5 * fw / max_f;
}

}  // namespace

double delta_idf(const std::string& word, const DocumentFrequencies& df) {
  return class_ratio_log(word, df, 0.001);
}

double delta_tfidf(const std::string& word,
                   const std::vector<std::string>& doc_keys,
                   const DocumentFrequencies& df) {
  return tf_factor(word, doc_keys) * delta_idf(word, df);
}

double wt_score(const std::string& word, const DocumentFrequencies& df) {
  return class_ratio_log(word, df, 0.01);
}

namespace {

std::set<std::string> all_keys(const DocumentFrequencies& df) {
  std::set<std::string> keys;
  for (const auto& [k, v] : df.positive) keys.insert(k);
  for (const auto& [k, v] : df.negative) keys.insert(k);
  return keys;
}

}  // namespace

SentimentLexicon delta_idf_lexicon(const Corpus& corpus,
                                   const KeyScheme& scheme) {
  auto df = DocumentFrequencies::from(corpus, scheme);
  SentimentLexicon lex;
  lex.provenance = Provenance::kDeltaIdf;
  for (const auto& k : all_keys(df)) lex.scores[k] = delta_idf(k, df);
  return lex;
}

SentimentLexicon delta_tfidf_lexicon(const Corpus& corpus,
                                     const KeyScheme& scheme) {
  auto df = DocumentFrequencies::from(corpus, scheme);
  std::unordered_map<std::string, double> idf;
  for (const auto& k : all_keys(df)) idf[k] = delta_idf(k, df);
  std::unordered_map<std::string, std::pair<double, int>> acc;
  for (const Document& d : corpus.documents()) {
    if (d.label == Label::kUnlabeled || d.tokens.empty()) continue;
    auto keys = document_keys(d, scheme);
    std::unordered_map<std::string, int> f;
    int max_f = 0;
    for (const auto& k : keys) max_f = std::max(max_f, ++f[k]);
    for (const auto& [k, c] : f) {
      auto& a = acc[k];
      a.first += (0.5 + 0.5 * static_cast<double>(c) / max_f) * idf[k];
      a.second += 1;
    }
  }
  SentimentLexicon lex;
  lex.provenance = Provenance::kDeltaTfidf;
  for (const auto& [k, a] : acc) lex.scores[k] = a.first / a.second;
  return lex;
}

SentimentLexicon wt_lexicon(const Corpus& corpus, const KeyScheme& scheme) {
  auto df = DocumentFrequencies::from(corpus, scheme);
  SentimentLexicon lex;
  lex.provenance = Provenance::kWt;
  for (const auto& k : all_keys(df)) lex.scores[k] = wt_score(k, df);
  return lex;
}

// ---------------------------------------------------------------------------
// Fusion

double combine(double sup, double unsup, double c_u, double c_s) {
  if ((sup > 0.0 && unsup < 0.0) || (sup < 0.0 && unsup > 0.0))
    return c_s * sup;
  return c_u * unsup + c_s * sup;
}

SentimentLexicon combine(const SentimentLexicon& sup,
                         const SentimentLexicon& unsup, double c_u,
                         double c_s) {
  if (c_u < 0.0 || c_s < 0.0 || std::abs(c_u + c_s - 1.0) > 1e-9)
    throw UsageError("combination coefficients must be >= 0 and sum to 1");
  SentimentLexicon out;
  out.provenance = Provenance::kCombined;
  out.split_id = sup.split_id;
  for (const auto& [w, s] : sup.scores)
    out.scores[w] = combine(s, unsup.score(w), c_u, c_s);
  for (const auto& [w, u] : unsup.scores)
    if (!sup.contains(w)) out.scores[w] = combine(0.0, u, c_u, c_s);
  return out;
}

std::pair<double, double> grid_search_coefficients(
    const SentimentLexicon& sup, const SentimentLexicon& unsup,
    const Corpus& dev, const KeyScheme& scheme, double step) {
  if (!(step > 0.0 && step < 1.0)) throw UsageError("step must be in (0, 1)");
  double best_acc = -1.0;
  std::pair<double, double> best{0.5, 0.5};
  const int steps = static_cast<int>(std::floor(1.0 / step + 1e-9));
  for (int i = 1; i < steps; ++i) {
    const double c_s = i * step;
    const double c_u = 1.0 - c_s;
    SentimentLexicon lex = combine(sup, unsup, c_u, c_s);
    int correct = 0;
    int total = 0;
    for (const Document& d : dev.documents()) {
      if (d.label == Label::kUnlabeled) continue;
      Label pred = document_score(d, lex, scheme) > 0.0 ? Label::kPositive
                                                        : Label::kNegative;
      correct += pred == d.label;
      ++total;
    }
    if (total == 0) throw DataError("grid search needs labeled dev documents");
    double acc = static_cast<double>(correct) / total;
    if (acc >= best_acc) {
      best_acc = acc;
      best = {c_u, c_s};
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Four scores and three feats

namespace {

struct NeighbourStats {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  long count = 0;

  void add(double v) {
    min = std::min(min, v);
    max = std::max(max, v);
    sum += v;
    ++count;
  }
};

FourScores finish(double self, const NeighbourStats& s) {
  if (s.count == 0) return {self, self, self, self};
  return {self, s.min, s.max, s.sum / s.count};
}

}  // namespace

std::unordered_map<std::string, FourScores> four_scores_all(
    const Corpus& corpus, const WindowSpec& spec, const SentimentLexicon& base,
    const KeyScheme& scheme) {
  std::unordered_map<std::string, NeighbourStats> stats;
  for (const Document& d : corpus.documents()) {
    auto keys = document_keys(d, scheme);
    for (const auto& k : keys) stats.try_emplace(k);
    for_each_window_pair(d, spec, [&](int i, int j) {
      stats[keys[i]].add(base.score(keys[j]));
    });
  }
  std::unordered_map<std::string, FourScores> out;
  out.reserve(stats.size());
  for (const auto& [w, s] : stats) out[w] = finish(base.score(w), s);
  return out;
}

FourScores four_scores(const std::string& word, const Corpus& corpus,
                       const WindowSpec& spec, const SentimentLexicon& base,
                       const KeyScheme& scheme) {
  NeighbourStats s;
  for (const Document& d : corpus.documents()) {
    auto keys = document_keys(d, scheme);
    if (std::find(keys.begin(), keys.end(), word) == keys.end()) continue;
    for_each_window_pair(d, spec, [&](int i, int j) {
      if (keys[i] == word) s.add(base.score(keys[j]));
    });
  }
  return finish(base.score(word), s);
}

namespace {

ThreeFeats summarize(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0, 0.0};
  double mn = v[0];
  double mx = v[0];
  double sum = 0.0;
  for (double x : v) {
    mn = std::min(mn, x);
    mx = std::max(mx, x);
    sum += x;
  }
  return {mn, sum / v.size(), mx};
}

}  // namespace

ThreeFeats three_feats(const Document& doc, const SentimentLexicon& lex,
                       const KeyScheme& scheme) {
  std::vector<double> v;
  v.reserve(doc.tokens.size());
  for (const Token& t : doc.tokens) v.push_back(effective_score(t, lex, scheme));
  return summarize(v);
}

ThreeFeats three_feats_tfidf(const Document& doc,
                             const SentimentLexicon& delta_idf_lex,
                             const KeyScheme& scheme) {
  if (doc.tokens.empty()) return {0.0, 0.0, 0.0};
  auto keys = document_keys(doc, scheme);
  std::unordered_map<std::string, int> f;
  int max_f = 0;
  for (const auto& k : keys) max_f = std::max(max_f, ++f[k]);
  std::vector<double> v;
  v.reserve(keys.size());
  for (size_t i = 0; i < keys.size(); ++i) {
    double tf = 0.5 + 0.5 * static_cast<double>(f[keys[i]]) / max_f;
    v.push_back(tf * effective_score(doc.tokens[i], delta_idf_lex, scheme));
  }
  return summarize(v);
}

}  // namespace sentikit
