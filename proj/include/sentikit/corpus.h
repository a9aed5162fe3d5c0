#ifndef SENTIKIT_CORPUS_H_
#define SENTIKIT_CORPUS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sentikit {

enum class Label { kPositive, kNegative, kUnlabeled };

std::string_view label_name(Label label);
// Accepts "positive", "negative", "unlabeled"; anything else is a DataError
// since only the binary task is supported.
Label parse_label(std::string_view text);

// A morpheme as delivered by an external analyser. The tag drives the
// polarity lexicon; the form (possibly empty) is used to spell keys.
struct Morpheme {
  std::string tag;
  std::string form;

  bool operator==(const Morpheme&) const = default;
};

// Parses "TAG" or "TAG=form".
Morpheme parse_morpheme(std::string_view text);
std::string format_morpheme(const Morpheme& m);

struct Token {
  std::string surface;
  std::string root;
  std::vector<Morpheme> morphemes;  // attachment order
  std::string pos = "UNK";
  bool negated = false;
  double intensity = 1.0;
  // Negator words folded into this token by preprocessing. Kept so that
  // negation can be recomputed from persistent facts (idempotence).
  int word_negations = 0;

  bool operator==(const Token&) const = default;
};

struct DependencyNode {
  int head = -1;  // 0-based token index, -1 for ROOT
  std::string relation;
  std::string pos;

  bool operator==(const DependencyNode&) const = default;
};

// Validated dependency tree: exactly one root, no cycles, heads in range.
class DependencyTree {
 public:
  DependencyTree() = default;
  // Throws DataError when the node list is not a tree.
  explicit DependencyTree(std::vector<DependencyNode> nodes,
                          std::string sentence_id = {});

  size_t size() const { return nodes_.size(); }
  int root() const { return root_; }
  const DependencyNode& node(int i) const { return nodes_[i]; }
  const std::vector<DependencyNode>& nodes() const { return nodes_; }
  const std::vector<int>& children(int i) const { return children_[i]; }
  const std::string& sentence_id() const { return sentence_id_; }
  // Surface forms read from CoNLL-U column 2 (empty when built otherwise).
  const std::vector<std::string>& forms() const { return forms_; }
  void set_forms(std::vector<std::string> forms) { forms_ = std::move(forms); }
  // Column 3, falling back to the form when the lemma is "_".
  const std::vector<std::string>& lemmas() const { return lemmas_; }
  void set_lemmas(std::vector<std::string> lemmas) { lemmas_ = std::move(lemmas); }
  // "# key = value" comment lines of the sentence.
  const std::map<std::string, std::string>& metadata() const { return metadata_; }
  void set_metadata(std::map<std::string, std::string> m) { metadata_ = std::move(m); }

  bool operator==(const DependencyTree& other) const {
    return nodes_ == other.nodes_;
  }

 private:
  std::vector<DependencyNode> nodes_;
  std::vector<std::vector<int>> children_;
  std::vector<std::string> forms_;
  std::vector<std::string> lemmas_;
  std::map<std::string, std::string> metadata_;
  std::string sentence_id_;
  int root_ = -1;
};

struct Document {
  std::string id;
  std::vector<Token> tokens;
  Label label = Label::kUnlabeled;
  std::optional<DependencyTree> tree;

  bool operator==(const Document&) const = default;
};

class Corpus {
 public:
  Corpus() = default;
  // Throws DataError on duplicate ids or a tree/token length mismatch.
  explicit Corpus(std::vector<Document> documents);

  const std::vector<Document>& documents() const { return documents_; }
  size_t size() const { return documents_.size(); }
  const Document& operator[](size_t i) const { return documents_[i]; }

  int positive_count() const { return positive_; }
  int negative_count() const { return negative_; }
  int labeled_count() const { return positive_ + negative_; }

  // Index of a document id, or -1.
  int find(const std::string& id) const;
  // Sub-corpus in the order of `ids`; unknown ids are a DataError.
  Corpus subset(std::span<const std::string> ids) const;

  bool operator==(const Corpus& other) const {
    return documents_ == other.documents_;
  }

 private:
  std::vector<Document> documents_;
  std::unordered_map<std::string, int> index_;
  int positive_ = 0;
  int negative_ = 0;
};

// CoNLL-U reader. Multiword-token ("3-4") and empty-node ("3.1") lines are
// skipped. Sentence ids come from "# sent_id =" comments, falling back to
// the 1-based sentence number.
std::vector<DependencyTree> load_conllu(const std::string& path);
std::vector<DependencyTree> parse_conllu(std::string_view text);

// JSONL documents. A record may reference a tree by sentence id ("tree") or
// carry one inline ("tree_nodes", as written by save_documents).
Corpus load_documents(const std::string& path,
                      std::span<const DependencyTree> trees = {});
Corpus parse_documents(std::string_view text,
                       std::span<const DependencyTree> trees = {});
// One document per sentence: id from sent_id, tokens from FORM/LEMMA/UPOS,
// label from a "# label = ..." comment (unlabeled when absent), tree attached.
Corpus documents_from_trees(std::span<const DependencyTree> trees);

void save_documents(const Corpus& corpus, const std::string& path);
std::string serialize_documents(const Corpus& corpus);

struct Fold {
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
};

// Stratified k-fold split over labeled documents. Deterministic for a fixed
// seed on every platform (own shuffle, not std::shuffle).
std::vector<Fold> split_folds(const Corpus& corpus, int k, uint64_t seed);

// Dense word index in descending frequency order, ties lexicographic.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> words,
                      std::vector<double> counts = {});

  size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::string& word(size_t i) const { return words_[i]; }
  const std::vector<std::string>& words() const { return words_; }
  double count(size_t i) const { return counts_.empty() ? 0.0 : counts_[i]; }
  // -1 when absent.
  int index(std::string_view word) const;
  bool contains(std::string_view word) const { return index(word) >= 0; }

  bool operator==(const Vocabulary& other) const {
    return words_ == other.words_;
  }

 private:
  std::vector<std::string> words_;
  std::vector<double> counts_;
  std::unordered_map<std::string, int> index_;
};

// How a token is turned into a feature key. A negated token's key carries
// exactly one trailing underscore.
struct KeyScheme {
  enum class Base { kSurface, kRoot, kPartial };
  Base base = Base::kSurface;
  // Morpheme tags kept for kPartial; `keep_all` keeps every morpheme.
  std::set<std::string> keep;
  bool keep_all = false;

  static KeyScheme surface() { return {}; }
  static KeyScheme root() { return {Base::kRoot, {}, false}; }
};

std::string base_form(const Token& token, const KeyScheme& scheme);
std::string feature_key(const Token& token, const KeyScheme& scheme);
std::vector<std::string> document_keys(const Document& doc,
                                       const KeyScheme& scheme);

Vocabulary build_vocabulary(
    std::span<const std::vector<std::string>> keyed_documents, int min_freq);
Vocabulary vocabulary(const Corpus& corpus, int min_freq,
                      const KeyScheme& scheme = KeyScheme::surface());

}  // namespace sentikit

#endif  // SENTIKIT_CORPUS_H_
