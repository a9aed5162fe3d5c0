#include "sentikit/eval.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "sentikit/cooc.h"
#include "sentikit/errors.h"
#include "sentikit/morpho.h"
#include "sentikit/random.h"
#include "sentikit/text.h"

namespace sentikit {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Metrics

namespace {

void check_paired(size_t a, size_t b) {
  if (a == 0) throw UsageError("metrics need at least one prediction");
  if (a != b) throw UsageError("predictions and golds differ in length");
}

double class_f1(std::span<const Label> preds, std::span<const Label> golds,
                Label positive) {
  int tp = 0, fp = 0, fn = 0;
  for (size_t i = 0; i < preds.size(); ++i) {
    bool p = preds[i] == positive;
    bool g = golds[i] == positive;
    tp += p && g;
    fp += p && !g;
    fn += !p && g;
  }
  if (tp == 0) return 0.0;
  return 2.0 * tp / (2.0 * tp + fp + fn);
}

}  // namespace

double accuracy(std::span<const Label> preds, std::span<const Label> golds) {
  check_paired(preds.size(), golds.size());
  size_t correct = 0;
  for (size_t i = 0; i < preds.size(); ++i) correct += preds[i] == golds[i];
  return static_cast<double>(correct) / preds.size();
}

double f1(std::span<const Label> preds, std::span<const Label> golds,
          F1Averaging averaging) {
  check_paired(preds.size(), golds.size());
  double pos = class_f1(preds, golds, Label::kPositive);
  if (averaging == F1Averaging::kBinaryPositive) return pos;
  return 0.5 * (pos + class_f1(preds, golds, Label::kNegative));
}

// ---------------------------------------------------------------------------
// Significance

double paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw UsageError("paired samples differ in length");
  const size_t n = a.size();
  if (n < 2) throw UsageError("paired t-test needs at least two pairs");
  double mean = 0.0;
  for (size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= n;
  double ss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double d = a[i] - b[i] - mean;
    ss += d * d;
  }
  double sd = std::sqrt(ss / (n - 1));
  if (sd == 0.0) return mean == 0.0 ? 1.0 : 0.0;
  double t = mean / (sd / std::sqrt(static_cast<double>(n)));
  boost::math::students_t dist(static_cast<double>(n - 1));
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(
                                 dist, std::abs(t))));
}

namespace {

// +1 where only a is right, -1 where only b is right.
std::vector<int> discordant_signs(std::span<const Label> a,
                                  std::span<const Label> b,
                                  std::span<const Label> golds) {
  check_paired(a.size(), golds.size());
  check_paired(b.size(), golds.size());
  std::vector<int> d;
  for (size_t i = 0; i < golds.size(); ++i) {
    bool ra = a[i] == golds[i];
    bool rb = b[i] == golds[i];
    if (ra != rb) d.push_back(ra ? 1 : -1);
  }
  return d;
}

}  // namespace

double approx_randomization(std::span<const Label> preds_a,
                            std::span<const Label> preds_b,
                            std::span<const Label> golds, int replicates,
                            uint64_t seed, bool allow_exact) {
  if (replicates < 1) throw UsageError("randomization needs replicates >= 1");
  const std::vector<int> d = discordant_signs(preds_a, preds_b, golds);
  const int m = static_cast<int>(d.size());
  const int total = std::accumulate(d.begin(), d.end(), 0);
  const int observed = std::abs(total);
  if (m == 0) return 1.0;
  const uint64_t exact_limit =
      std::max<uint64_t>(static_cast<uint64_t>(replicates), 1ULL << 20);
  if (allow_exact && m < 63 && (1ULL << m) <= exact_limit) {
    uint64_t a_mask = 0;
    for (int i = 0; i < m; ++i)
      if (d[i] > 0) a_mask |= 1ULL << i;
    const uint64_t space = 1ULL << m;
    uint64_t hits = 0;
    for (uint64_t s = 0; s < space; ++s) {
      int swapped = std::popcount(s & a_mask) - std::popcount(s & ~a_mask);
      hits += std::abs(total - 2 * swapped) >= observed;
    }
    return static_cast<double>(hits) / space;
  }
  Rng rng(seed);
  long hits = 0;
  for (int r = 0; r < replicates; ++r) {
    int sum = 0;
    for (int x : d) sum += rng.coin() ? -x : x;
    hits += std::abs(sum) >= observed;
  }
  return (hits + 1.0) / (replicates + 1.0);
}

McNemarResult mcnemar(std::span<const Label> preds_a,
                      std::span<const Label> preds_b,
                      std::span<const Label> golds) {
  McNemarResult r;
  for (int x : discordant_signs(preds_a, preds_b, golds))
    (x > 0 ? r.b : r.c) += 1;
  const int n = r.b + r.c;
  if (n == 0) return r;
  double diff = std::max(0.0, std::abs(r.b - r.c) - 1.0);
  r.statistic = diff * diff / n;
  if (n < 10) {
    r.exact = true;
    boost::math::binomial_distribution<double> bin(n, 0.5);
    r.p_value =
        std::min(1.0, 2.0 * boost::math::cdf(bin, std::min(r.b, r.c)));
  } else {
    boost::math::chi_squared chi(1.0);
    r.p_value = boost::math::cdf(boost::math::complement(chi, r.statistic));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Pipeline spec

namespace {

const std::set<std::string> kModels = {"svm", "nb", "knn", "ls", "ensemble"};
const std::set<std::string> kLsLexicons = {"delta-idf", "delta-tfidf", "wt",
                                           "combined"};

}  // namespace

json PipelineSpec::to_json() const {
  json j;
  j["schema"] = schema_name(schema);
  j["model"] = model;
  j["members"] = members;
  j["key"] = key;
  j["top_percent"] = top_percent;
  j["always_keep"] = always_keep;
  j["min_freq"] = min_freq;
  j["ls_lexicon"] = ls_lexicon;
  j["c_u"] = c_u;
  j["c_s"] = c_s;
  j["seed_pairs"] = seeds.pairs;
  j["near_k"] = near_k;
  j["svm"] = {{"lambda", svm.lambda}, {"epochs", svm.epochs}};
  j["knn_k"] = knn_k;
  j["embedding"] = embedding;
  j["window"] = window.describe();
  j["embed_dim"] = embed_dim;
  j["embed_min_freq"] = embed_min_freq;
  j["glove_epochs"] = glove_epochs;
  j["dictionary"] = dictionary;
  return j;
}

PipelineSpec PipelineSpec::from_json(const json& j) {
  static const std::set<std::string> known = {
      "schema",     "model",     "members",     "key",
      "top_percent", "always_keep", "min_freq",  "ls_lexicon",
      "c_u",        "c_s",       "seeds",       "seed_pairs",
      "near_k",     "svm",       "knn_k",       "embedding",
      "window",     "embed_dim", "embed_min_freq", "glove_epochs",
      "dictionary"};
  if (!j.is_object()) throw UsageError("pipeline spec must be a JSON object");
  for (auto& [k, v] : j.items())
    if (!known.count(k)) throw UsageError("unknown pipeline key '" + k + "'");
  PipelineSpec s;
  try {
    if (j.contains("schema")) s.schema = parse_schema(j["schema"]);
    s.model = j.value("model", s.model);
    s.members = j.value("members", s.members);
    s.key = j.value("key", s.key);
    s.top_percent = j.value("top_percent", s.top_percent);
    s.always_keep = j.value("always_keep", s.always_keep);
    s.min_freq = j.value("min_freq", s.min_freq);
    s.ls_lexicon = j.value("ls_lexicon", s.ls_lexicon);
    s.c_u = j.value("c_u", s.c_u);
    s.c_s = j.value("c_s", s.c_s);
    if (j.contains("seeds")) s.seeds = load_seeds(j["seeds"].get<std::string>());
    if (j.contains("seed_pairs"))
      s.seeds.pairs = j["seed_pairs"]
                          .get<std::vector<std::pair<std::string, std::string>>>();
    s.near_k = j.value("near_k", s.near_k);
    if (j.contains("svm")) {
      s.svm.lambda = j["svm"].value("lambda", s.svm.lambda);
      s.svm.epochs = j["svm"].value("epochs", s.svm.epochs);
    }
    s.knn_k = j.value("knn_k", s.knn_k);
    s.embedding = j.value("embedding", s.embedding);
    if (j.contains("window")) s.window = parse_window_spec(j["window"]);
    s.embed_dim = j.value("embed_dim", s.embed_dim);
    s.embed_min_freq = j.value("embed_min_freq", s.embed_min_freq);
    s.glove_epochs = j.value("glove_epochs", s.glove_epochs);
    s.dictionary = j.value("dictionary", s.dictionary);
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad pipeline spec: ") + e.what());
  }
  if (!kModels.count(s.model))
    throw UsageError("unknown model '" + s.model + "'");
  for (const auto& m : s.members)
    if (m == "ensemble" || !kModels.count(m))
      throw UsageError("bad ensemble member '" + m + "'");
  if (s.key != "surface" && s.key != "root" && s.key != "partial")
    throw UsageError("key must be surface, root or partial");
  if (!kLsLexicons.count(s.ls_lexicon))
    throw UsageError("unknown LS lexicon '" + s.ls_lexicon + "'");
  if (s.embedding != "svd" && s.embedding != "glove" &&
      s.embedding != "svd+dict+four")
    throw UsageError("embedding must be svd, glove or svd+dict+four");
  s.seeds.validate();
  return s;
}

PipelineSpec PipelineSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open pipeline spec '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("pipeline spec '" + path + "': " + e.what());
  }
  return from_json(j);
}

// ---------------------------------------------------------------------------
// Fitted pipeline

namespace {

KeyScheme make_scheme(const Corpus& train, const PipelineSpec& spec) {
  if (spec.key == "root") return KeyScheme::root();
  if (spec.key == "partial") {
    PartialFormPolicy policy;
    policy.top_percent = spec.top_percent;
    policy.always_keep = spec.always_keep;
    return select_morphemes(build_morpheme_lexicon(train), policy).scheme();
  }
  return KeyScheme::surface();
}

SentimentLexicon unsupervised_for(const Corpus& train, const PipelineSpec& spec,
                                  const KeyScheme& scheme) {
  if (spec.seeds.pairs.empty())
    throw UsageError("the combined lexicon needs seed pairs");
  CoocMatrix near =
      build_cooc(train, WindowSpec::sliding(spec.near_k), 0, scheme);
  return unsupervised_lexicon(near, spec.seeds);
}

SentimentLexicon build_ls_lexicon(const Corpus& train, const PipelineSpec& spec,
                                  const KeyScheme& scheme) {
  if (spec.ls_lexicon == "delta-idf") return delta_idf_lexicon(train, scheme);
  if (spec.ls_lexicon == "wt") return wt_lexicon(train, scheme);
  SentimentLexicon sup = delta_tfidf_lexicon(train, scheme);
  if (spec.ls_lexicon == "delta-tfidf") return sup;
  return combine(sup, unsupervised_for(train, spec, scheme), spec.c_u,
                 spec.c_s);
}

WordVectors build_vectors(const Corpus& train, const PipelineSpec& spec,
                          const KeyScheme& scheme, uint64_t seed) {
  Vocabulary vocab = vocabulary(train, spec.embed_min_freq, scheme);
  if (vocab.empty())
    throw DataError("no word reaches the embedding frequency threshold");
  CoocMatrix cooc = build_cooc(train, spec.window, vocab, scheme);
  if (spec.embedding == "glove") {
    GloveConfig g;
    g.dim = spec.embed_dim;
    g.epochs = spec.glove_epochs;
    g.seed = seed;
    return train_glove(cooc, g).vectors;
  }
  int d = spec.embed_dim;
  if (d > static_cast<int>(vocab.size())) {
    warn("embedding dimension " + std::to_string(d) + " exceeds the " +
         std::to_string(vocab.size()) + "-word vocabulary; using " +
         std::to_string(vocab.size()));
    d = static_cast<int>(vocab.size());
  }
  WordVectors svd = truncated_svd_u(ppmi(cooc), d, seed);
  if (spec.embedding == "svd") return svd;
  if (spec.dictionary.empty())
    throw UsageError("svd+dict+four embeddings need a dictionary file");
  SentimentLexicon wt = wt_lexicon(train, scheme);
  Dictionary dict = load_dictionary(spec.dictionary);
  int dd = std::min<int>(spec.embed_dim,
                         std::min(dict.entries.size(),
                                  dictionary_matrix(dict).definition_words.size()));
  std::vector<WordVectors> parts = {
      svd, dictionary_vectors(dict, wt, dd, &vocab, seed),
      four_score_vectors(vocab,
                         four_scores_all(train, spec.window, wt, scheme))};
  return concat_vectors(parts);
}

std::vector<Label> labels_of(const Corpus& c) {
  std::vector<Label> y;
  for (const Document& d : c.documents()) y.push_back(d.label);
  return y;
}

}  // namespace

FittedPipeline FittedPipeline::fit(const Corpus& train, const PipelineSpec& spec,
                                   const std::string& split_id, uint64_t seed) {
  FittedPipeline p;
  p.spec_ = spec;
  p.split_id_ = split_id;
  p.scheme_ = make_scheme(train, spec);
  for (const Document& d : train.documents()) p.train_ids_.insert(d.id);
  p.member_kinds_ = spec.model == "ensemble"
                        ? spec.members
                        : std::vector<std::string>{spec.model};
  const bool needs_ls = std::count(p.member_kinds_.begin(),
                                   p.member_kinds_.end(), "ls") > 0;
  const bool needs_features =
      std::any_of(p.member_kinds_.begin(), p.member_kinds_.end(),
                  [](const std::string& m) { return m != "ls"; });
  if (needs_ls) {
    p.ls_lexicon_ = build_ls_lexicon(train, spec, p.scheme_);
    p.ls_lexicon_.split_id = split_id;
  }
  if (needs_features) {
    FeatureExtractor::Options opts;
    opts.scheme = p.scheme_;
    opts.min_freq = spec.min_freq;
    std::optional<WordVectors> vectors;
    if (spec.schema == Schema::kDocEmbedding)
      vectors = build_vectors(train, spec, p.scheme_, seed);
    p.features_ = std::make_shared<FeatureExtractor>(
        FeatureExtractor::fit(train, spec.schema, opts, std::move(vectors)));
    p.features_->set_split_id(split_id);
    FeatureMatrix x = p.features_->transform(train);
    std::vector<Label> y = labels_of(train);
    SvmConfig svm = spec.svm;
    svm.seed = seed;
    for (const auto& kind : p.member_kinds_) {
      if (kind == "svm") {
        p.models_.push_back(std::make_shared<LinearSvm>(LinearSvm::train(x, y, svm)));
      } else if (kind == "nb") {
        p.models_.push_back(std::make_shared<NaiveBayes>(NaiveBayes::train(x, y)));
      } else if (kind == "knn") {
        p.models_.push_back(std::make_shared<Knn>(Knn::train(x, y, spec.knn_k)));
      } else {
        p.models_.push_back(nullptr);
      }
    }
  } else {
    p.models_.assign(p.member_kinds_.size(), nullptr);
  }
  return p;
}

std::vector<SentimentLexicon*> FittedPipeline::lexicons() {
  std::vector<SentimentLexicon*> out;
  if (std::count(member_kinds_.begin(), member_kinds_.end(), "ls"))
    out.push_back(&ls_lexicon_);
  if (features_) out.push_back(&features_->mutable_lexicon());
  return out;
}

std::vector<Label> FittedPipeline::predict(const Corpus& test,
                                           const std::string& split_id) const {
  for (SentimentLexicon* lex : const_cast<FittedPipeline*>(this)->lexicons())
    if (lex->split_id != split_id)
      throw DataError("leakage guard: a lexicon built on split '" +
                      lex->split_id + "' was applied to split '" + split_id +
                      "'");
  for (const Document& d : test.documents())
    if (train_ids_.count(d.id))
      throw DataError("leakage guard: test document '" + d.id +
                      "' was part of the training split");
  size_t tie_breaker = 0;
  for (size_t i = 0; i < member_kinds_.size(); ++i)
    if (member_kinds_[i] == "svm") {
      tie_breaker = i;
      break;
    }
  std::vector<Label> out;
  out.reserve(test.size());
  std::vector<Label> votes(member_kinds_.size());
  for (const Document& d : test.documents()) {
    std::optional<FeatureRow> row;
    if (features_) row = features_->transform(d);
    for (size_t i = 0; i < member_kinds_.size(); ++i)
      votes[i] = models_[i] ? models_[i]->predict(*row)
                            : log_score_predict(d, ls_lexicon_, scheme_);
    out.push_back(majority_vote(votes, tie_breaker));
  }
  return out;
}

std::string fold_split_id(int fold, int k, uint64_t seed) {
  return "fold" + std::to_string(fold) + "of" + std::to_string(k) + "-seed" +
         std::to_string(seed);
}

std::pair<double, double> nested_coefficients(const Corpus& train,
                                              const PipelineSpec& spec,
                                              int inner_k, uint64_t seed) {
  constexpr int kSteps = 9;
  std::array<double, kSteps> acc{};
  for (const Fold& f : split_folds(train, inner_k, seed)) {
    Corpus inner = train.subset(f.train_ids);
    Corpus dev = train.subset(f.test_ids);
    KeyScheme scheme = make_scheme(inner, spec);
    SentimentLexicon sup = delta_tfidf_lexicon(inner, scheme);
    SentimentLexicon unsup = unsupervised_for(inner, spec, scheme);
    for (int s = 0; s < kSteps; ++s) {
      const double c_s = (s + 1) / 10.0;
      SentimentLexicon lex = combine(sup, unsup, 1.0 - c_s, c_s);
      int correct = 0;
      for (const Document& d : dev.documents())
        correct += log_score_predict(d, lex, scheme) == d.label;
      acc[s] += static_cast<double>(correct) / dev.size();
    }
  }
  int best = 0;
  for (int s = 1; s < kSteps; ++s)
    if (acc[s] >= acc[best]) best = s;
  const double c_s = (best + 1) / 10.0;
  return {1.0 - c_s, c_s};
}

// ---------------------------------------------------------------------------
// Cross-validation

double CrossvalReport::mean_accuracy() const {
  double s = 0.0;
  for (const auto& f : folds) s += f.accuracy;
  return folds.empty() ? 0.0 : s / folds.size();
}

double CrossvalReport::stdev_accuracy() const {
  if (folds.size() < 2) return 0.0;
  const double m = mean_accuracy();
  double ss = 0.0;
  for (const auto& f : folds) ss += (f.accuracy - m) * (f.accuracy - m);
  return std::sqrt(ss / (folds.size() - 1));
}

double CrossvalReport::mean_f1() const {
  double s = 0.0;
  for (const auto& f : folds) s += f.f1;
  return folds.empty() ? 0.0 : s / folds.size();
}

double CrossvalReport::mean_macro_f1() const {
  double s = 0.0;
  for (const auto& f : folds) s += f.macro_f1;
  return folds.empty() ? 0.0 : s / folds.size();
}

std::vector<double> CrossvalReport::fold_accuracies() const {
  std::vector<double> out;
  for (const auto& f : folds) out.push_back(f.accuracy);
  return out;
}

std::vector<std::pair<std::string, std::pair<Label, Label>>>
CrossvalReport::pooled() const {
  std::vector<std::pair<std::string, std::pair<Label, Label>>> out;
  for (const auto& f : folds)
    for (size_t i = 0; i < f.test_ids.size(); ++i)
      out.push_back({f.test_ids[i], {f.predictions[i], f.golds[i]}});
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

json CrossvalReport::to_json() const {
  json j;
  j["spec"] = spec.to_json();
  j["k"] = k;
  j["seed"] = seed;
  j["nested"] = nested;
  j["mean_accuracy"] = mean_accuracy();
  j["stdev_accuracy"] = stdev_accuracy();
  j["mean_f1"] = mean_f1();
  j["mean_macro_f1"] = mean_macro_f1();
  json folds_json = json::array();
  for (const auto& f : folds) {
    std::vector<std::string> preds, golds;
    for (Label l : f.predictions) preds.emplace_back(label_name(l));
    for (Label l : f.golds) golds.emplace_back(label_name(l));
    folds_json.push_back({{"fold", f.fold},
                          {"split_id", f.split_id},
                          {"accuracy", f.accuracy},
                          {"f1", f.f1},
                          {"macro_f1", f.macro_f1},
                          {"c_u", f.c_u},
                          {"c_s", f.c_s},
                          {"test_ids", f.test_ids},
                          {"predictions", preds},
                          {"golds", golds}});
  }
  j["folds"] = folds_json;
  return j;
}

CrossvalReport CrossvalReport::from_json(const json& j) {
  CrossvalReport r;
  try {
    r.spec = PipelineSpec::from_json(j.at("spec"));
    r.k = j.at("k");
    r.seed = j.at("seed");
    r.nested = j.at("nested");
    for (const auto& fj : j.at("folds")) {
      FoldResult f;
      f.fold = fj.at("fold");
      f.split_id = fj.at("split_id");
      f.accuracy = fj.at("accuracy");
      f.f1 = fj.at("f1");
      f.macro_f1 = fj.at("macro_f1");
      f.c_u = fj.at("c_u");
      f.c_s = fj.at("c_s");
      f.test_ids = fj.at("test_ids").get<std::vector<std::string>>();
      for (const auto& s : fj.at("predictions"))
        f.predictions.push_back(parse_label(s.get<std::string>()));
      for (const auto& s : fj.at("golds"))
        f.golds.push_back(parse_label(s.get<std::string>()));
      r.folds.push_back(std::move(f));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed evaluation summary: ") + e.what());
  }
  return r;
}

std::string CrossvalReport::to_tsv() const {
  std::ostringstream out;
  out << "fold\tsplit_id\taccuracy\tf1\tmacro_f1\tc_u\tc_s\n";
  for (const auto& f : folds)
    out << f.fold << '\t' << f.split_id << '\t'
        << text::format_double(f.accuracy) << '\t' << text::format_double(f.f1)
        << '\t' << text::format_double(f.macro_f1) << '\t'
        << text::format_double(f.c_u) << '\t' << text::format_double(f.c_s)
        << '\n';
  out << "mean\t-\t" << text::format_double(mean_accuracy()) << '\t'
      << text::format_double(mean_f1()) << '\t'
      << text::format_double(mean_macro_f1()) << "\t-\t-\n";
  out << "stdev\t-\t" << text::format_double(stdev_accuracy()) << "\t-\t-\t-\t-\n";
  return out.str();
}

CrossvalReport crossval(const Corpus& corpus, const PipelineSpec& spec, int k,
                        uint64_t seed, bool nested, int threads) {
  const std::vector<Fold> folds = split_folds(corpus, k, seed);
  CrossvalReport report;
  report.spec = spec;
  report.k = k;
  report.seed = seed;
  report.nested = nested;
  report.folds.resize(folds.size());

  auto run = [&](int i) {
    const Fold& fold = folds[i];
    Corpus train = corpus.subset(fold.train_ids);
    Corpus test = corpus.subset(fold.test_ids);
    PipelineSpec s = spec;
    if (nested)
      std::tie(s.c_u, s.c_s) =
          nested_coefficients(train, spec, k, derive_seed(seed, 1000 + i));
    const std::string split = fold_split_id(i, k, seed);
    FittedPipeline p = FittedPipeline::fit(train, s, split, derive_seed(seed, i));
    FoldResult& r = report.folds[i];
    r.fold = i;
    r.split_id = split;
    r.c_u = s.c_u;
    r.c_s = s.c_s;
    r.test_ids = fold.test_ids;
    r.predictions = p.predict(test, split);
    r.golds = labels_of(test);
    r.accuracy = accuracy(r.predictions, r.golds);
    r.f1 = f1(r.predictions, r.golds, F1Averaging::kBinaryPositive);
    r.macro_f1 = f1(r.predictions, r.golds, F1Averaging::kMacro);
  };

  threads = std::max(1, std::min<int>(threads, folds.size()));
  if (threads == 1) {
    for (int i = 0; i < static_cast<int>(folds.size()); ++i) run(i);
    return report;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> workers;
  for (int t = 0; t < threads; ++t)
    workers.emplace_back([&, t] {
      try {
        for (int i = next++; i < static_cast<int>(folds.size()); i = next++)
          run(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& w : workers) w.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return report;
}

Comparison compare(const CrossvalReport& a, const CrossvalReport& b,
                   int replicates, uint64_t seed) {
  auto pa = a.pooled();
  auto pb = b.pooled();
  if (pa.size() != pb.size())
    throw DataError("reports cover different numbers of documents");
  std::vector<Label> la, lb, gold;
  for (size_t i = 0; i < pa.size(); ++i) {
    if (pa[i].first != pb[i].first || pa[i].second.second != pb[i].second.second)
      throw DataError("reports cover different documents ('" + pa[i].first +
                      "' vs '" + pb[i].first + "')");
    la.push_back(pa[i].second.first);
    lb.push_back(pb[i].second.first);
    gold.push_back(pa[i].second.second);
  }
  Comparison c;
  auto fa = a.fold_accuracies();
  auto fb = b.fold_accuracies();
  if (fa.size() == fb.size() && fa.size() >= 2) c.t_test_p = paired_t_test(fa, fb);
  c.randomization_p = approx_randomization(la, lb, gold, replicates, seed);
  c.mcnemar = mcnemar(la, lb, gold);
  return c;
}

}  // namespace sentikit
