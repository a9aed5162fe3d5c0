// Quantitative checks on the English sentence-polarity movie corpus.
//
// Reads $SENTIKIT_MOVIE_DIR/movie.conllu (written by tools/parse_movie.py),
// or rt-polarity.pos / rt-polarity.neg for the bag-of-words checks alone.
// Exits 77 when neither is present. `--synthetic` runs the same harness on a
// small generated corpus with reduced settings; thresholds are reported but
// not enforced there.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "sentikit/eval.h"
#include "sentikit/random.h"
#include "sentikit/text.h"

using namespace sentikit;
namespace fs = std::filesystem;

namespace {

struct Settings {
  int folds = 10;
  uint64_t seed = 1;
  std::vector<int> dims = {100, 300};
  std::vector<int> sliding = {2, 5, 10, 15};
  std::vector<std::set<std::string>> relation_sets = {{"conj", "ccomp"}, {"conj"}, {"ccomp"}};
  int embed_min_freq = 4;
  bool enforce = true;
  int threads = 1;
};

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail, double secs,
            bool enforce) {
  const char* status = pass ? "PASS" : (enforce ? "FAIL" : "INFO");
  if (!pass && enforce) ++failures;
  std::printf("%s  %2d  %-26s %s (%.1f s)\n", status, id, name.c_str(), detail.c_str(), secs);
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100 * v);
  return buf;
}

Corpus read_polarity_files(const fs::path& dir) {
  std::vector<Document> docs;
  for (auto [name, label] : {std::pair{"rt-polarity.pos", Label::kPositive},
                             std::pair{"rt-polarity.neg", Label::kNegative}}) {
    std::ifstream in(dir / name, std::ios::binary);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
      Document d;
      d.id = std::string(label == Label::kPositive ? "pos" : "neg") + std::to_string(n++);
      d.label = label;
      for (const auto& w : text::split_whitespace(line)) {
        Token t;
        t.surface = t.root = w;
        d.tokens.push_back(std::move(t));
      }
      if (!d.tokens.empty()) docs.push_back(std::move(d));
    }
  }
  return Corpus(std::move(docs));
}

// "the NOUN was ADJ and the NOUN was ADJ" with UD-style trees: the first
// predicate is the root, the second attaches to it by conj.
Corpus synthetic_corpus(int docs, uint64_t seed) {
  const std::vector<std::string> nouns = {"film", "plot", "cast", "score", "script", "ending"};
  const std::vector<std::string> good = {"good", "great", "moving", "sharp", "funny"};
  const std::vector<std::string> bad = {"bad", "dull", "flat", "silly", "tedious"};
  Rng rng(seed);
  std::vector<Document> out;
  for (int i = 0; i < docs; ++i) {
    const bool positive = i % 2 == 0;
    std::vector<std::string> forms;
    std::vector<DependencyNode> nodes;
    for (int clause = 0; clause < 2; ++clause) {
      const int base = static_cast<int>(forms.size()) + (clause ? 1 : 0);
      const bool on_topic = rng.uniform() < (clause ? 0.55 : 0.8);
      const auto& adj = on_topic == positive ? good : bad;
      if (clause) {
        forms.push_back("and");
        nodes.push_back({base + 3, "cc", "CCONJ"});
      }
      forms.insert(forms.end(), {"the", nouns[rng.below(nouns.size())], "was",
                                 adj[rng.below(adj.size())]});
      nodes.push_back({base + 1, "det", "DET"});
      nodes.push_back({base + 3, "nsubj", "NOUN"});
      nodes.push_back({base + 3, "cop", "AUX"});
      nodes.push_back({clause ? 3 : -1, clause ? "conj" : "root", "ADJ"});
    }
    Document d;
    d.id = "s" + std::to_string(i);
    d.label = positive ? Label::kPositive : Label::kNegative;
    for (const auto& f : forms) {
      Token t;
      t.surface = t.root = f;
      d.tokens.push_back(t);
    }
    DependencyTree tree(nodes, d.id);
    tree.set_forms(forms);
    d.tree = tree;
    out.push_back(std::move(d));
  }
  return Corpus(std::move(out));
}

CrossvalReport run_cv(const Corpus& c, const PipelineSpec& spec, const Settings& s) {
  return crossval(c, spec, s.folds, s.seed, false, s.threads);
}

void bag_checks(const Corpus& corpus, const Settings& s) {
  auto t0 = std::chrono::steady_clock::now();
  PipelineSpec spec;
  spec.model = "svm";
  spec.schema = Schema::kDeltaTfidf;
  CrossvalReport delta = run_cv(corpus, spec, s);
  const double acc = delta.mean_accuracy();
  const double secs5 = seconds_since(t0);
  bool ok5 = acc >= 0.70 && acc <= 0.78 && secs5 < 600;
  report(5, "movie delta tf-idf + SVM", ok5,
         std::to_string(corpus.size()) + " reviews, " + std::to_string(s.folds) +
             "-fold accuracy " + pct(acc) + " (band 70-78%)",
         secs5, s.enforce);

  auto t1 = std::chrono::steady_clock::now();
  spec.schema = Schema::kThreeFeats;
  const double three = run_cv(corpus, spec, s).mean_accuracy();
  spec.schema = Schema::kTfidf;
  const double tfidf = run_cv(corpus, spec, s).mean_accuracy();
  report(6, "movie 3-feats vs tf-idf", three >= tfidf - 0.01,
         "3-feats " + pct(three) + ", tf-idf " + pct(tfidf) + " on the same folds",
         seconds_since(t1), s.enforce);
}

void window_check(const Corpus& corpus, const Settings& s, std::chrono::steady_clock::time_point t0) {
  PipelineSpec spec;
  spec.model = "svm";
  spec.schema = Schema::kDocEmbedding;
  spec.embedding = "svd";
  spec.embed_min_freq = s.embed_min_freq;
  struct Best {
    double margin = -1;
    int dim = 0;
    std::string relations, sliding;
    double sub_acc = 0, slide_acc = 0, p = 1;
  };
  Best replicated, closest;
  closest.margin = -2;
  for (int d : s.dims) {
    spec.embed_dim = d;
    CrossvalReport best_slide;
    double best_acc = -1;
    std::string best_name;
    for (int k : s.sliding) {
      spec.window = WindowSpec::sliding(k);
      CrossvalReport r = run_cv(corpus, spec, s);
      if (r.mean_accuracy() > best_acc) {
        best_acc = r.mean_accuracy();
        best_slide = r;
        best_name = spec.window.describe();
      }
    }
    for (const auto& rel : s.relation_sets) {
      spec.window = WindowSpec::subclause(rel);
      CrossvalReport sub = run_cv(corpus, spec, s);
      Comparison cmp = compare(sub, best_slide);
      Best b{sub.mean_accuracy() - best_acc, d, spec.window.describe(), best_name,
             sub.mean_accuracy(), best_acc, cmp.mcnemar.p_value};
      if (b.margin > 0 && b.p < 0.10 && b.margin > replicated.margin) replicated = b;
      if (b.margin > closest.margin) closest = b;
    }
  }
  const double secs = seconds_since(t0);
  auto describe = [](const Best& b) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", b.p);
    return "d=" + std::to_string(b.dim) + " " + b.relations + " " + pct(b.sub_acc) + " vs " +
           b.sliding + " " + pct(b.slide_acc) + ", McNemar p " + buf;
  };
  if (replicated.dim) {
    report(7, "movie subclause windows", secs < 1800, "replicated: " + describe(replicated), secs,
           s.enforce);
  } else {
    const bool within = closest.margin >= -0.02;
    report(7, "movie subclause windows", within && secs < 1800,
           std::string(within ? "FLAGGED, margin not replicated; within 2 points: "
                              : "not replicated and more than 2 points behind: ") +
               describe(closest),
           secs, s.enforce);
  }
}

}  // namespace

int main(int argc, char** argv) {
  Settings s;
  s.threads = std::max(1u, std::thread::hardware_concurrency());
  const bool synthetic = argc > 1 && std::string(argv[1]) == "--synthetic";
  Corpus corpus;
  bool trees = false;
  auto t0 = std::chrono::steady_clock::now();
  if (synthetic) {
    std::printf("movie acceptance, synthetic smoke run (thresholds not enforced)\n");
    s.enforce = false;
    s.folds = 3;
    s.dims = {4};
    s.sliding = {2, 5};
    s.relation_sets = {{"conj", "ccomp"}};
    s.embed_min_freq = 1;
    corpus = synthetic_corpus(120, 5);
    trees = true;
  } else {
    const char* env = std::getenv("SENTIKIT_MOVIE_DIR");
    if (!env) {
      std::printf("SKIP  SENTIKIT_MOVIE_DIR is not set\n");
      return 77;
    }
    const fs::path dir(env);
    try {
      if (fs::exists(dir / "movie.conllu")) {
        auto parsed = load_conllu((dir / "movie.conllu").string());
        corpus = documents_from_trees(parsed);
        trees = true;
      } else if (fs::exists(dir / "rt-polarity.pos") && fs::exists(dir / "rt-polarity.neg")) {
        corpus = read_polarity_files(dir);
      } else {
        std::printf("SKIP  no movie.conllu or rt-polarity.{pos,neg} in %s\n", env);
        return 77;
      }
    } catch (const std::exception& e) {
      std::printf("FAIL  cannot read the movie corpus: %s\n", e.what());
      return 1;
    }
    std::printf("movie acceptance on %zu reviews\n", corpus.size());
  }
  try {
    bag_checks(corpus, s);
    if (trees)
      window_check(corpus, s, t0);
    else
      std::printf("SKIP   7  movie subclause windows    needs movie.conllu\n");
  } catch (const std::exception& e) {
    std::printf("FAIL  harness error: %s\n", e.what());
    return 1;
  }
  return failures ? 1 : 0;
}
