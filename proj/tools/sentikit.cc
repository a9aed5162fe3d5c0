// sentikit command-line front end.

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "sentikit/classify.h"
#include "sentikit/cooc.h"
#include "sentikit/corpus.h"
#include "sentikit/embed.h"
#include "sentikit/errors.h"
#include "sentikit/eval.h"
#include "sentikit/lexicon.h"
#include "sentikit/morpho.h"
#include "sentikit/preprocess.h"
#include "sentikit/text.h"
#include "sentikit/windows.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sentikit;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr const char* kModelFormat = "sentikit-model 1";

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path + "'");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), in.gcount());
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

// Fails with the name of the artifact an earlier step should have produced.
void require_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw UsageError("no " + what + " given");
  if (!fs::exists(path))
    throw DataError("missing " + what + ": expected file '" + path + "'");
}

// Run record written beside the primary output as <output>.manifest.json.
class Manifest {
 public:
  void start(const std::string& command, int argc, char** argv) {
    doc_ = json::object();
    doc_["tool"] = "sentikit";
    doc_["version"] = kVersion;
    doc_["command"] = command;
    doc_["argv"] = std::vector<std::string>(argv + 1, argv + argc);
    doc_["inputs"] = json::array();
    doc_["outputs"] = json::array();
    doc_["seeds"] = json::object();
  }
  void options(const CLI::App* app) {
    json opts = json::object();
    for (const CLI::Option* o : app->get_options()) {
      std::string name = o->get_name(false, true);
      if (name.empty() || name == "--help" || name == "-h") continue;
      std::vector<std::string> vals = o->results();
      if (vals.empty()) {
        if (o->get_default_str().empty()) continue;
        vals = {o->get_default_str()};
      }
      opts[name] = vals.size() == 1 ? json(vals[0]) : json(vals);
    }
    doc_["config"] = opts;
  }
  void input(const std::string& path) {
    if (path.empty()) return;
    doc_["inputs"].push_back({{"path", path}, {"sha256", sha256_file(path)}});
  }
  void seed(const std::string& name, uint64_t value) {
    doc_["seeds"][name] = value;
  }
  void set(const std::string& key, json value) { doc_[key] = std::move(value); }
  void output(const std::string& path) {
    doc_["outputs"].push_back({{"path", path}, {"sha256", sha256_file(path)}});
    if (primary_.empty()) primary_ = path;
  }
  void write() const {
    if (primary_.empty()) return;
    std::ofstream out(primary_ + ".manifest.json");
    if (!out) throw DataError("cannot write manifest for '" + primary_ + "'");
    out << doc_.dump(2) << '\n';
  }

 private:
  json doc_;
  std::string primary_;
};

Manifest g_manifest;

// ----------------------------------------------------------------------------
// Shared option groups

struct CorpusOpts {
  std::string path;
  std::string conllu;

  void add(CLI::App* app, bool required = true) {
    auto* o = app->add_option("--corpus", path,
                              "Documents (JSONL store, or a .conllu file)");
    if (required) o->required();
    app->add_option("--conllu", conllu,
                    "Dependency parses referenced by the JSONL records");
  }
  Corpus load() const {
    require_file(path, "corpus");
    g_manifest.input(path);
    if (path.ends_with(".conllu")) {
      auto trees = load_conllu(path);
      return documents_from_trees(trees);
    }
    std::vector<DependencyTree> trees;
    if (!conllu.empty()) {
      require_file(conllu, "CoNLL-U parses");
      g_manifest.input(conllu);
      trees = load_conllu(conllu);
    }
    return load_documents(path, trees);
  }
};

struct KeyOpts {
  std::string key = "surface";
  std::string selection;

  void add(CLI::App* app) {
    app->add_option("--key", key, "Feature key: surface, root or partial")
        ->check(CLI::IsMember({"surface", "root", "partial"}))
        ->capture_default_str();
    app->add_option("--selection", selection,
                    "Morpheme selection from `morpho select` (partial keys)");
  }
  KeyScheme scheme() const {
    if (key == "surface") return KeyScheme::surface();
    if (key == "root") return KeyScheme::root();
    require_file(selection, "morpheme selection (run `morpho select`)");
    g_manifest.input(selection);
    std::ifstream in(selection);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw DataError("malformed selection '" + selection + "': " + e.what());
    }
    MorphemeSelection s;
    s.all = j.value("all", false);
    s.tags = j.value("tags", std::set<std::string>{});
    return s.scheme();
  }
};

int g_threads = 1;

void save_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

json read_json(const std::string& path, const std::string& what) {
  require_file(path, what);
  g_manifest.input(path);
  std::ifstream in(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("malformed " + what + " '" + path + "': " + e.what());
  }
}

SeedSet load_seed_file(const std::string& path) {
  require_file(path, "seed file");
  g_manifest.input(path);
  return load_seeds(path);
}

SentimentLexicon load_lexicon_file(const std::string& path) {
  require_file(path, "lexicon");
  g_manifest.input(path);
  return load_lexicon(path);
}

WordVectors load_vectors_file(const std::string& path) {
  require_file(path, "vector file");
  g_manifest.input(path);
  return load_vectors(path);
}

// Counts file plus its ".vocab" sidecar, as written by `cooc build`.
CoocMatrix load_cooc(const std::string& path) {
  require_file(path, "co-occurrence matrix (run `cooc build`)");
  require_file(path + ".vocab", "vocabulary sidecar");
  g_manifest.input(path);
  g_manifest.input(path + ".vocab");
  CoocMatrix m;
  m.vocab = load_vocabulary(path + ".vocab");
  m.counts = load_sparse(path, m.vocab.size());
  m.total = m.counts.sum();
  return m;
}

void report_lexicon(const SentimentLexicon& lex) {
  std::cerr << lex.scores.size() << " words scored\n";
}

// ----------------------------------------------------------------------------
// Commands

struct App {
  CLI::App app{"Statistical sentiment lexicon and classification toolkit"};
  std::function<void()> action;
  CLI::App* chosen = nullptr;

  void on(CLI::App* sub, std::function<void()> fn) {
    sub->callback([this, sub, fn] {
      chosen = sub;
      action = fn;
    });
  }
};

void add_ingest(App& a) {
  static std::string input, conllu, out;
  auto* sub = a.app.add_subcommand("ingest", "JSONL or CoNLL-U to the document store");
  sub->add_option("--input", input, "JSONL documents or a .conllu file")->required();
  sub->add_option("--conllu", conllu, "Parses referenced by JSONL records");
  sub->add_option("--out", out, "Output JSONL store")->required();
  a.on(sub, [] {
    CorpusOpts c{input, conllu};
    Corpus corpus = c.load();
    save_documents(corpus, out);
    g_manifest.output(out);
    std::cerr << corpus.size() << " documents (" << corpus.positive_count()
              << " positive, " << corpus.negative_count() << " negative)\n";
  });
}

void add_preprocess(App& a) {
  static CorpusOpts corpus;
  static std::string language = "tr", config, out, dump;
  auto* sub = a.app.add_subcommand("preprocess", "Normalize, mark negation and intensity");
  corpus.add(sub, false);
  sub->add_option("--language", language, "Shipped defaults: tr or en")
      ->check(CLI::IsMember({"tr", "en"}))
      ->capture_default_str();
  sub->add_option("--preprocess-config", config, "JSON preprocessing config");
  sub->add_option("--dump-config", dump, "Write the effective config as JSON");
  sub->add_option("--out", out);
  a.on(sub, [] {
    PreprocessConfig cfg = default_config(language);
    if (!config.empty()) {
      require_file(config, "preprocessing config");
      g_manifest.input(config);
      cfg = load_config(config);
    }
    g_manifest.set("preprocess_config", json::parse(serialize_config(cfg)));
    if (!dump.empty()) {
      std::ofstream(dump) << serialize_config(cfg);
      g_manifest.output(dump);
    }
    if (corpus.path.empty() != out.empty())
      throw UsageError("--corpus and --out go together");
    if (corpus.path.empty()) return;
    save_documents(preprocess(corpus.load(), cfg), out);
    g_manifest.output(out);
  });
}

void add_lexicon(App& a) {
  auto* lex = a.app.add_subcommand("lexicon", "Word polarity lexicons");
  lex->require_subcommand(1);

  {
    static CorpusOpts corpus;
    static KeyOpts key;
    static std::string seeds, out;
    static int near_k = 6, min_freq = 0;
    auto* sub = lex->add_subcommand("unsup", "Seed co-occurrence scores");
    corpus.add(sub);
    key.add(sub);
    sub->add_option("--seeds", seeds, "Seed pairs TSV")->required();
    sub->add_option("--near-k", near_k, "Words per side")->capture_default_str();
    sub->add_option("--min-freq", min_freq)->capture_default_str();
    sub->add_option("--out", out)->required();
    a.on(sub, [] {
      Corpus c = corpus.load();
      SeedSet s = load_seed_file(seeds);
      CoocMatrix near =
          build_cooc(c, WindowSpec::sliding(near_k), min_freq, key.scheme(), g_threads);
      SentimentLexicon l = unsupervised_lexicon(near, s);
      save_lexicon(l, out);
      g_manifest.output(out);
      report_lexicon(l);
    });
  }
  {
    static CorpusOpts corpus;
    static KeyOpts key;
    static std::string seeds, out, window = "sliding:15";
    static int min_freq = 1;
    static PropagationConfig pc;
    auto* sub = lex->add_subcommand("propagate", "Random-walk propagation from seeds");
    corpus.add(sub);
    key.add(sub);
    sub->add_option("--seeds", seeds, "Seed pairs TSV")->required();
    sub->add_option("--window", window, "sliding:K[:left|right] or subclause:REL,...")
        ->capture_default_str();
    sub->add_option("--min-freq", min_freq)->capture_default_str();
    sub->add_option("--g0", pc.g0)->capture_default_str();
    sub->add_option("--decay", pc.decay)->capture_default_str();
    sub->add_option("--g-floor", pc.g_floor)->capture_default_str();
    sub->add_option("--max-iter", pc.max_iter)->capture_default_str();
    sub->add_option("--tol", pc.tol)->capture_default_str();
    sub->add_option("--out", out)->required();
    a.on(sub, [] {
      Corpus c = corpus.load();
      SeedSet s = load_seed_file(seeds);
      CoocMatrix m = build_cooc(c, parse_window_spec(window), min_freq,
                                key.scheme(), g_threads);
      PropagationResult r = propagate(cosine_edges(ppmi(m)), s, pc);
      save_lexicon(r.lexicon, out);
      g_manifest.set("iterations", r.iterations);
      g_manifest.output(out);
      std::cerr << r.iterations << " iterations\n";
      report_lexicon(r.lexicon);
    });
  }
  {
    static CorpusOpts corpus;
    static KeyOpts key;
    static std::string method = "delta-tfidf", out;
    auto* sub = lex->add_subcommand("supervised", "Class-frequency word scores");
    corpus.add(sub);
    key.add(sub);
    sub->add_option("--method", method)
        ->check(CLI::IsMember({"delta-idf", "delta-tfidf", "wt"}))
        ->capture_default_str();
    sub->add_option("--out", out)->required();
    a.on(sub, [] {
      Corpus c = corpus.load();
      KeyScheme s = key.scheme();
      SentimentLexicon l = method == "delta-idf" ? delta_idf_lexicon(c, s)
                           : method == "wt"      ? wt_lexicon(c, s)
                                                 : delta_tfidf_lexicon(c, s);
      save_lexicon(l, out);
      g_manifest.output(out);
      report_lexicon(l);
    });
  }
  {
    static std::string sup, unsup, out;
    static double c_u = 0.3, c_s = 0.7;
    static CorpusOpts dev;
    static KeyOpts key;
    auto* sub = lex->add_subcommand("combine", "Fuse supervised and unsupervised scores");
    sub->add_option("--sup", sup, "Supervised lexicon")->required();
    sub->add_option("--unsup", unsup, "Unsupervised lexicon")->required();
    sub->add_option("--c-u", c_u)->capture_default_str();
    sub->add_option("--c-s", c_s)->capture_default_str();
    sub->add_option("--dev", dev.path,
                    "Grid-search the coefficients by LS accuracy on this corpus");
    key.add(sub);
    sub->add_option("--out", out)->required();
    a.on(sub, [] {
      SentimentLexicon s = load_lexicon_file(sup);
      SentimentLexicon u = load_lexicon_file(unsup);
      if (!dev.path.empty()) {
        std::tie(c_u, c_s) =
            grid_search_coefficients(s, u, dev.load(), key.scheme());
        std::cerr << "c_u=" << c_u << " c_s=" << c_s << '\n';
      }
      g_manifest.set("coefficients", {{"c_u", c_u}, {"c_s", c_s}});
      save_lexicon(combine(s, u, c_u, c_s), out);
      g_manifest.output(out);
    });
  }
}

void add_morpho(App& a) {
  auto* morpho = a.app.add_subcommand("morpho", "Morpheme polarity lexicons");
  morpho->require_subcommand(1);
  {
    static std::vector<std::string> corpora;
    static std::string out;
    auto* sub = morpho->add_subcommand("build", "Score morphemes by their host words");
    sub->add_option("--corpus", corpora, "One or more JSONL stores")->required();
    sub->add_option("--out", out)->required();
    a.on(sub, [] {
      std::vector<Corpus> loaded;
      for (const auto& p : corpora) loaded.push_back(CorpusOpts{p, {}}.load());
      std::vector<const Corpus*> ptrs;
      for (const auto& c : loaded) ptrs.push_back(&c);
      MorphemeLexicon lex = build_morpheme_lexicon(ptrs);
      save_morpheme_lexicon(lex, out);
      g_manifest.output(out);
      std::cerr << lex.scores.size() << " morphemes scored\n";
    });
  }
  {
    static std::string lexicon, out;
    static int top_percent = 100;
    static std::vector<std::string> keep = {"Neg", "Without"};
    auto* sub = morpho->add_subcommand("select", "Top-p% morphemes for partial forms");
    sub->add_option("--lexicon", lexicon, "Morpheme lexicon TSV")->required();
    sub->add_option("--top-percent", top_percent)
        ->check(CLI::Range(0, 100))
        ->capture_default_str();
    sub->add_option("--keep-negators", keep, "Tags kept at every p")
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--out", out, "Selection JSON")->required();
    a.on(sub, [] {
      require_file(lexicon, "morpheme lexicon (run `morpho build`)");
      g_manifest.input(lexicon);
      PartialFormPolicy policy;
      policy.top_percent = top_percent;
      policy.always_keep = {keep.begin(), keep.end()};
      MorphemeSelection s = select_morphemes(load_morpheme_lexicon(lexicon), policy);
      save_json({{"all", s.all}, {"tags", s.tags}, {"top_percent", top_percent}},
                out);
      g_manifest.output(out);
    });
  }
}

void add_cooc(App& a) {
  auto* cooc = a.app.add_subcommand("cooc", "Co-occurrence matrices");
  cooc->require_subcommand(1);
  static CorpusOpts corpus;
  static KeyOpts key;
  static std::string window = "sliding:15", out;
  static int min_freq = 1;
  static bool write_ppmi = false;
  auto* sub = cooc->add_subcommand("build", "Count window pairs");
  corpus.add(sub);
  key.add(sub);
  sub->add_option("--window", window)->capture_default_str();
  sub->add_option("--min-freq", min_freq)->capture_default_str();
  sub->add_flag("--ppmi", write_ppmi, "Write PPMI values instead of counts");
  sub->add_option("--out", out, "Coordinate list; vocabulary goes to OUT.vocab")
      ->required();
  a.on(sub, [] {
    Corpus c = corpus.load();
    CoocMatrix m = build_cooc(c, parse_window_spec(window), min_freq,
                              key.scheme(), g_threads);
    if (write_ppmi) {
      PpmiMatrix p = ppmi(m);
      save_sparse(p.values, p.vocab, out, out + ".vocab");
    } else {
      save_sparse(m.counts, m.vocab, out, out + ".vocab");
    }
    g_manifest.output(out);
    g_manifest.output(out + ".vocab");
    std::cerr << m.vocab.size() << " words, " << m.counts.nonZeros()
              << " non-zero cells\n";
  });
}

void add_embed(App& a) {
  auto* embed = a.app.add_subcommand("embed", "Word and document vectors");
  embed->require_subcommand(1);
  {
    static std::string cooc, out;
    static int dim = 200;
    static uint64_t seed = 1;
    auto* sub = embed->add_subcommand("svd", "Truncated SVD of the PPMI matrix");
    sub->add_option("--cooc", cooc, "Counts from `cooc build`")->required();
    sub->add_option("--dim", dim)->capture_default_str();
    sub->add_option("--seed", seed)->capture_default_str();
    sub->add_option("--out", out)->required();
    a.on(sub, [] {
      g_manifest.seed("svd", seed);
      save_vectors(truncated_svd_u(ppmi(load_cooc(cooc)), dim, seed), out);
      g_manifest.output(out);
    });
  }
  {
    static std::string cooc, out;
    static GloveConfig gc;
    auto* sub = embed->add_subcommand("glove", "Weighted least-squares vectors");
    sub->add_option("--cooc", cooc, "Counts from `cooc build`")->required();
    sub->add_option("--dim", gc.dim)->capture_default_str();
    sub->add_option("--epochs", gc.epochs)->capture_default_str();
    sub->add_option("--x-max", gc.x_max)->capture_default_str();
    sub->add_option("--alpha", gc.alpha)->capture_default_str();
    sub->add_option("--learning-rate", gc.learning_rate)->capture_default_str();
    sub->add_option("--seed", gc.seed)->capture_default_str();
    sub->add_option("--out", out)->required();
    a.on(sub, [] {
      g_manifest.seed("glove", gc.seed);
      GloveResult r = train_glove(load_cooc(cooc), gc);
      save_vectors(r.vectors, out);
      g_manifest.set("losses", r.losses);
      g_manifest.output(out);
    });
  }
  {
    static std::string dictionary, lexicon, align, out;
    static int dim = 200;
    static uint64_t seed = 1;
    auto* sub = embed->add_subcommand("dict", "Signed dictionary definition vectors");
    sub->add_option("--dictionary", dictionary, "Headword TSV")->required();
    sub->add_option("--lexicon", lexicon, "Supervised lexicon for the signs")->required();
    sub->add_option("--dim", dim)->capture_default_str();
    sub->add_option("--align-to", align, "Vector file whose vocabulary to follow");
    sub->add_option("--seed", seed)->capture_default_str();
    sub->add_option("--out", out)->required();
    a.on(sub, [] {
      require_file(dictionary, "dictionary");
      g_manifest.input(dictionary);
      g_manifest.seed("svd", seed);
      Dictionary d = load_dictionary(dictionary);
      SentimentLexicon lex = load_lexicon_file(lexicon);
      std::optional<WordVectors> target;
      if (!align.empty()) target = load_vectors_file(align);
      save_vectors(dictionary_vectors(d, lex, dim, target ? &target->vocab : nullptr,
                                      seed),
                   out);
      g_manifest.output(out);
    });
  }
  {
    static CorpusOpts corpus;
    static KeyOpts key;
    static std::string lexicon, align, window = "sliding:15", out;
    auto* sub = embed->add_subcommand("four", "Four neighbourhood scores per word");
    corpus.add(sub);
    key.add(sub);
    sub->add_option("--lexicon", lexicon, "Base word scores")->required();
    sub->add_option("--align-to", align, "Vector file whose vocabulary to follow")
        ->required();
    sub->add_option("--window", window)->capture_default_str();
    sub->add_option("--out", out)->required();
    a.on(sub, [] {
      Corpus c = corpus.load();
      SentimentLexicon lex = load_lexicon_file(lexicon);
      WordVectors target = load_vectors_file(align);
      auto scores = four_scores_all(c, parse_window_spec(window), lex, key.scheme());
      save_vectors(four_score_vectors(target.vocab, scores), out);
      g_manifest.output(out);
    });
  }
  {
    static std::vector<std::string> parts;
    static std::string out;
    auto* sub = embed->add_subcommand("concat", "Concatenate aligned vector files");
    sub->add_option("--parts", parts, "Vector files sharing one vocabulary")
        ->required()
        ->expected(2, -1);
    sub->add_option("--out", out)->required();
    a.on(sub, [] {
      std::vector<WordVectors> loaded;
      for (const auto& p : parts) loaded.push_back(load_vectors_file(p));
      WordVectors v = concat_vectors(loaded);
      save_vectors(v, out);
      g_manifest.output(out);
      std::cerr << v.vocab.size() << " words x " << v.dim() << " dimensions\n";
    });
  }
  {
    static CorpusOpts corpus;
    static KeyOpts key;
    static std::string vectors, lexicon, out;
    auto* sub = embed->add_subcommand("docvec", "Mean word vector plus 3 lexicon features");
    corpus.add(sub);
    key.add(sub);
    sub->add_option("--vectors", vectors)->required();
    sub->add_option("--lexicon", lexicon)->required();
    sub->add_option("--out", out, "TSV id, label, values")->required();
    a.on(sub, [] {
      Corpus c = corpus.load();
      WordVectors v = load_vectors_file(vectors);
      SentimentLexicon lex = load_lexicon_file(lexicon);
      KeyScheme s = key.scheme();
      std::ofstream o(out);
      if (!o) throw DataError("cannot write '" + out + "'");
      for (const Document& d : c.documents()) {
        o << d.id << '\t' << label_name(d.label);
        Eigen::VectorXd x = document_vector(d, v, lex, s);
        for (Eigen::Index i = 0; i < x.size(); ++i)
          o << '\t' << text::format_double(x[i]);
        o << '\n';
      }
      o.close();
      g_manifest.output(out);
    });
  }
}

void add_windows(App& a) {
  auto* windows = a.app.add_subcommand("windows", "Context windows");
  windows->require_subcommand(1);
  static std::string conllu, out;
  static std::vector<std::string> relations = {"conj", "ccomp"};
  auto* sub = windows->add_subcommand("extract", "Subclauses of parsed sentences as JSONL");
  sub->add_option("--conllu", conllu)->required();
  sub->add_option("--relations", relations, "Relations that start a subclause")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--out", out, "Output JSONL (stdout when omitted)");
  a.on(sub, [] {
    require_file(conllu, "CoNLL-U parses");
    g_manifest.input(conllu);
    WindowSpec spec = WindowSpec::subclause({relations.begin(), relations.end()});
    std::ofstream file;
    if (!out.empty()) {
      file.open(out);
      if (!file) throw DataError("cannot write '" + out + "'");
    }
    std::ostream& o = out.empty() ? std::cout : file;
    for (const DependencyTree& tree : load_conllu(conllu)) {
      const auto& words = tree.forms();
      auto clauses = extract_subclauses(tree, words, spec);
      for (size_t i = 0; i < clauses.size(); ++i)
        o << json{{"sentence_id", tree.sentence_id()},
                  {"clause", i},
                  {"token_indices", clauses[i].token_indices},
                  {"final_punct", clauses[i].final_punct},
                  {"text", render_subclause(clauses[i], words)}}
                 .dump()
          << '\n';
    }
    if (!out.empty()) {
      file.close();
      g_manifest.output(out);
    }
  });
}

struct ModelOpts {
  std::string schema = "delta-tfidf";
  std::string model = "svm";
  int min_freq = 1;
  std::string vectors;
  SvmConfig svm;
  int knn_k = 3;
};

void add_train_predict(App& a) {
  static CorpusOpts corpus;
  static KeyOpts key;
  static ModelOpts m;
  static std::string out;
  auto* train = a.app.add_subcommand("train", "Fit features and a classifier");
  corpus.add(train);
  key.add(train);
  train->add_option("--schema", m.schema)
      ->check(CLI::IsMember({"delta-idf", "delta-tfidf", "tfidf", "3feats",
                             "tfidf+3feats", "doc-embedding"}))
      ->capture_default_str();
  train->add_option("--model", m.model)
      ->check(CLI::IsMember({"svm", "nb", "knn"}))
      ->capture_default_str();
  train->add_option("--min-freq", m.min_freq)->capture_default_str();
  train->add_option("--vectors", m.vectors, "Word vectors for doc-embedding");
  train->add_option("--lambda", m.svm.lambda)->capture_default_str();
  train->add_option("--epochs", m.svm.epochs)->capture_default_str();
  train->add_option("--seed", m.svm.seed)->capture_default_str();
  train->add_option("--k", m.knn_k, "Neighbours for knn")->capture_default_str();
  train->add_option("--out", out, "Model file")->required();
  a.on(train, [] {
    Corpus c = corpus.load();
    Schema schema = parse_schema(m.schema);
    if (schema == Schema::kDocEmbedding && m.vectors.empty())
      throw UsageError("the doc-embedding schema needs --vectors");
    FeatureExtractor::Options opts{key.scheme(), m.min_freq};
    std::optional<WordVectors> vec;
    if (schema == Schema::kDocEmbedding) vec = load_vectors_file(m.vectors);
    FeatureExtractor fx = FeatureExtractor::fit(c, schema, opts, std::move(vec));
    FeatureMatrix x = fx.transform(c);
    std::vector<Label> y;
    for (const Document& d : c.documents()) y.push_back(d.label);
    std::unique_ptr<Classifier> clf;
    if (m.model == "svm") clf = std::make_unique<LinearSvm>(LinearSvm::train(x, y, m.svm));
    if (m.model == "nb") clf = std::make_unique<NaiveBayes>(NaiveBayes::train(x, y));
    if (m.model == "knn") clf = std::make_unique<Knn>(Knn::train(x, y, m.knn_k));
    g_manifest.seed("svm", m.svm.seed);
    // The header lets `predict` refit the feature statistics from the same
    // training data, checked by digest.
    json header = {{"format", kModelFormat},
                   {"schema", m.schema},
                   {"key", key.key},
                   {"selection", key.selection},
                   {"min_freq", m.min_freq},
                   {"corpus", corpus.path},
                   {"conllu", corpus.conllu},
                   {"corpus_sha256", sha256_file(corpus.path)},
                   {"vectors", m.vectors}};
    std::ofstream o(out);
    if (!o) throw DataError("cannot write '" + out + "'");
    o << header.dump() << '\n';
    clf->save(o);
    o.close();
    g_manifest.output(out);
    int correct = 0;
    for (size_t i = 0; i < y.size(); ++i) correct += clf->predict(x.rows[i]) == y[i];
    std::cerr << "training accuracy " << text::format_double(double(correct) / y.size())
              << '\n';
  });

  static CorpusOpts test;
  static std::string model_path, pred_out;
  auto* predict = a.app.add_subcommand("predict", "Label documents with a trained model");
  test.add(predict);
  predict->add_option("--model", model_path, "Model file from `train`")->required();
  predict->add_option("--out", pred_out, "TSV id, prediction, gold")->required();
  a.on(predict, [] {
    require_file(model_path, "model (run `train`)");
    g_manifest.input(model_path);
    std::ifstream in(model_path);
    std::string line;
    std::getline(in, line);
    json h;
    try {
      h = json::parse(line);
    } catch (const json::exception&) {
      throw DataError("'" + model_path + "' is not a sentikit model");
    }
    if (h.value("format", "") != kModelFormat)
      throw DataError("'" + model_path + "' has an unsupported model format");
    CorpusOpts train_corpus{h["corpus"], h["conllu"]};
    require_file(train_corpus.path, "training corpus named by the model");
    if (sha256_file(train_corpus.path) != h["corpus_sha256"])
      throw DataError("training corpus '" + train_corpus.path +
                      "' changed since the model was trained");
    Corpus train_c = train_corpus.load();
    KeyOpts k{h["key"], h["selection"]};
    Schema schema = parse_schema(h["schema"]);
    std::optional<WordVectors> vec;
    if (schema == Schema::kDocEmbedding) vec = load_vectors_file(h["vectors"]);
    FeatureExtractor fx = FeatureExtractor::fit(
        train_c, schema, {k.scheme(), h["min_freq"].get<int>()}, std::move(vec));
    std::unique_ptr<Classifier> clf = load_classifier(in);
    Corpus c = test.load();
    std::ofstream o(pred_out);
    if (!o) throw DataError("cannot write '" + pred_out + "'");
    std::vector<Label> preds, golds;
    for (const Document& d : c.documents()) {
      Label p = clf->predict(fx.transform(d));
      o << d.id << '\t' << label_name(p) << '\t' << label_name(d.label) << '\n';
      if (d.label != Label::kUnlabeled) {
        preds.push_back(p);
        golds.push_back(d.label);
      }
    }
    o.close();
    g_manifest.output(pred_out);
    if (!golds.empty())
      std::cerr << "accuracy " << text::format_double(accuracy(preds, golds)) << '\n';
  });
}

void add_evaluate(App& a) {
  static CorpusOpts corpus;
  static std::string pipeline, out, tsv;
  static int folds = 10;
  static uint64_t seed = 1;
  static bool nested = false;
  auto* sub = a.app.add_subcommand("evaluate", "k-fold cross-validation of a pipeline");
  corpus.add(sub);
  sub->add_option("--pipeline", pipeline, "Pipeline spec JSON")->required();
  sub->add_option("--folds", folds)->check(CLI::Range(2, 1000))->capture_default_str();
  sub->add_option("--seed", seed)->capture_default_str();
  sub->add_flag("--nested", nested, "Select combination coefficients per fold");
  sub->add_option("--out", out, "JSON summary")->required();
  sub->add_option("--tsv", tsv, "TSV report");
  a.on(sub, [] {
    Corpus c = corpus.load();
    json pj = read_json(pipeline, "pipeline spec");
    PipelineSpec spec;
    try {
      spec = PipelineSpec::from_json(pj);
    } catch (const UsageError& e) {
      throw DataError(std::string(pipeline) + ": " + e.what());
    }
    if (pj.contains("seeds")) g_manifest.input(pj["seeds"]);
    if (!spec.dictionary.empty()) g_manifest.input(spec.dictionary);
    g_manifest.seed("folds", seed);
    CrossvalReport r = crossval(c, spec, folds, seed, nested, g_threads);
    save_json(r.to_json(), out);
    g_manifest.output(out);
    if (!tsv.empty()) {
      std::ofstream t(tsv);
      t << r.to_tsv();
      t.close();
      g_manifest.output(tsv);
    }
    std::cout << r.to_tsv();
  });
}

void add_report(App& a) {
  static std::string summary, against, out;
  static int replicates = 10000;
  static uint64_t seed = 1;
  auto* sub = a.app.add_subcommand("report", "Summarize or compare evaluation runs");
  sub->add_option("--summary", summary, "JSON summary from `evaluate`")->required();
  sub->add_option("--against", against, "Second summary to test against");
  sub->add_option("--replicates", replicates)->capture_default_str();
  sub->add_option("--seed", seed)->capture_default_str();
  sub->add_option("--out", out, "JSON comparison");
  a.on(sub, [] {
    CrossvalReport ra = CrossvalReport::from_json(read_json(summary, "evaluation summary"));
    std::cout << ra.to_tsv();
    if (against.empty()) return;
    CrossvalReport rb = CrossvalReport::from_json(read_json(against, "evaluation summary"));
    Comparison cmp = compare(ra, rb, replicates, seed);
    g_manifest.seed("randomization", seed);
    json j = {{"a", summary},
              {"b", against},
              {"accuracy_a", ra.mean_accuracy()},
              {"accuracy_b", rb.mean_accuracy()},
              {"t_test_p", cmp.t_test_p},
              {"randomization_p", cmp.randomization_p},
              {"mcnemar",
               {{"b", cmp.mcnemar.b},
                {"c", cmp.mcnemar.c},
                {"statistic", cmp.mcnemar.statistic},
                {"p", cmp.mcnemar.p_value},
                {"exact", cmp.mcnemar.exact}}},
              {"significant_0.05", cmp.mcnemar.p_value < 0.05},
              {"significant_0.10", cmp.mcnemar.p_value < 0.10}};
    std::cout << "paired t-test p\t" << text::format_double(cmp.t_test_p) << '\n'
              << "randomization p\t" << text::format_double(cmp.randomization_p) << '\n'
              << "mcnemar p\t" << text::format_double(cmp.mcnemar.p_value) << '\n';
    if (!out.empty()) {
      save_json(j, out);
      g_manifest.output(out);
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  App a;
  a.app.set_version_flag("--version", kVersion);
  a.app.set_config("--config", "", "TOML file of option defaults (flags override)");
  g_threads = std::max(1u, std::thread::hardware_concurrency());
  a.app.add_option("--threads", g_threads, "Worker threads")->check(CLI::PositiveNumber);
  a.app.require_subcommand(1);
  add_ingest(a);
  add_preprocess(a);
  add_lexicon(a);
  add_morpho(a);
  add_cooc(a);
  add_embed(a);
  add_windows(a);
  add_train_predict(a);
  add_evaluate(a);
  add_report(a);

  try {
    a.app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = a.app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    std::string command;
    for (CLI::App* p = a.chosen; p && p != &a.app; p = p->get_parent())
      command = p->get_name() + (command.empty() ? "" : " " + command);
    g_manifest.start(command, argc, argv);
    g_manifest.options(a.chosen);
    g_manifest.set("threads", g_threads);
    a.action();
    g_manifest.write();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
