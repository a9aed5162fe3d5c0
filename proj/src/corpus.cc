#include "sentikit/corpus.h"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "sentikit/errors.h"
#include "sentikit/morpho.h"
#include "sentikit/random.h"
#include "sentikit/text.h"

namespace sentikit {

using nlohmann::json;

void warn(const std::string& message) {
  std::cerr << "warning: " << message << "\n";
}

std::string_view label_name(Label label) {
  switch (label) {
    case Label::kPositive:
      return "positive";
    case Label::kNegative:
      return "negative";
    case Label::kUnlabeled:
      return "unlabeled";
  }
  return "unlabeled";
}

Label parse_label(std::string_view text) {
  if (text == "positive") return Label::kPositive;
  if (text == "negative") return Label::kNegative;
  if (text == "unlabeled") return Label::kUnlabeled;
  throw DataError("unsupported label '" + std::string(text) +
                  "' (expected positive, negative or unlabeled)");
}

Morpheme parse_morpheme(std::string_view text) {
  size_t eq = text.find('=');
  if (eq == std::string_view::npos) return {std::string(text), {}};
  return {std::string(text.substr(0, eq)), std::string(text.substr(eq + 1))};
}

std::string format_morpheme(const Morpheme& m) {
  return m.form.empty() ? m.tag : m.tag + "=" + m.form;
}

// ---------------------------------------------------------------------------
// DependencyTree

DependencyTree::DependencyTree(std::vector<DependencyNode> nodes,
                               std::string sentence_id)
    : nodes_(std::move(nodes)), sentence_id_(std::move(sentence_id)) {
  const int n = static_cast<int>(nodes_.size());
  if (n == 0) throw DataError("empty dependency tree");
  children_.assign(n, {});
  for (int i = 0; i < n; ++i) {
    int h = nodes_[i].head;
    if (h == -1) {
      if (root_ != -1)
        throw DataError("dependency tree has multiple roots (tokens " +
                        std::to_string(root_ + 1) + " and " +
                        std::to_string(i + 1) + ")");
      root_ = i;
    } else if (h < 0 || h >= n || h == i) {
      throw DataError("token " + std::to_string(i + 1) +
                      " has an invalid head index " + std::to_string(h + 1));
    } else {
      children_[h].push_back(i);
    }
  }
  if (root_ == -1) throw DataError("dependency tree has no root");
  // Every node must reach the root; otherwise there is a cycle.
  std::vector<int> state(n, 0);  // 0 unknown, 1 visiting, 2 reaches root
  state[root_] = 2;
  for (int i = 0; i < n; ++i) {
    std::vector<int> path;
    int cur = i;
    while (state[cur] == 0) {
      state[cur] = 1;
      path.push_back(cur);
      cur = nodes_[cur].head;
    }
    if (state[cur] == 1)
      throw DataError("dependency tree contains a cycle through token " +
                      std::to_string(cur + 1));
    for (int p : path) state[p] = 2;
  }
}

// ---------------------------------------------------------------------------
// Corpus

Corpus::Corpus(std::vector<Document> documents)
    : documents_(std::move(documents)) {
  for (size_t i = 0; i < documents_.size(); ++i) {
    const Document& d = documents_[i];
    if (!index_.emplace(d.id, static_cast<int>(i)).second)
      throw DataError("duplicate document id '" + d.id + "'");
    if (d.tree && d.tree->size() != d.tokens.size())
      throw DataError("document '" + d.id + "': tree has " +
                      std::to_string(d.tree->size()) + " nodes but " +
                      std::to_string(d.tokens.size()) + " tokens");
    if (d.label == Label::kPositive) ++positive_;
    if (d.label == Label::kNegative) ++negative_;
  }
}

int Corpus::find(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

Corpus Corpus::subset(std::span<const std::string> ids) const {
  std::vector<Document> docs;
  docs.reserve(ids.size());
  for (const std::string& id : ids) {
    int i = find(id);
    if (i < 0) throw DataError("unknown document id '" + id + "'");
    docs.push_back(documents_[i]);
  }
  return Corpus(std::move(docs));
}

// ---------------------------------------------------------------------------
// CoNLL-U

namespace {

DependencyTree finish_sentence(std::vector<std::vector<std::string>>& rows,
                               const std::string& sent_id, int sentence_index) {
  std::vector<DependencyNode> nodes;
  std::vector<std::string> forms;
  std::vector<std::string> lemmas;
  const int n = static_cast<int>(rows.size());
  for (int i = 0; i < n; ++i) {
    const auto& cols = rows[i];
    int id = 0;
    int head = 0;
    try {
      id = std::stoi(cols[0]);
      head = std::stoi(cols[6]);
    } catch (const std::exception&) {
      throw DataError("sentence " + std::to_string(sentence_index) +
                      ": non-numeric id or head on token " +
                      std::to_string(i + 1));
    }
    if (id != i + 1)
      throw DataError("sentence " + std::to_string(sentence_index) +
                      ": token ids are not consecutive");
    if (head < 0 || head > n)
      throw DataError("sentence " + std::to_string(sentence_index) +
                      ": head " + std::to_string(head) + " of token " +
                      std::to_string(id) + " points past the sentence end");
    nodes.push_back({head - 1, cols[7], cols[3]});
    forms.push_back(cols[1]);
    lemmas.push_back(cols[2] == "_" ? cols[1] : cols[2]);
  }
  try {
    DependencyTree tree(std::move(nodes), sent_id);
    tree.set_forms(std::move(forms));
    tree.set_lemmas(std::move(lemmas));
    return tree;
  } catch (const DataError& e) {
    throw DataError("sentence " + std::to_string(sentence_index) + ": " +
                    e.what());
  }
}

}  // namespace

std::vector<DependencyTree> parse_conllu(std::string_view text) {
  std::vector<DependencyTree> trees;
  std::vector<std::vector<std::string>> rows;
  std::map<std::string, std::string> metadata;
  int sentence_index = 0;
  auto flush = [&]() {
    if (rows.empty()) return;
    ++sentence_index;
    auto it = metadata.find("sent_id");
    std::string id = it == metadata.end() || it->second.empty()
                         ? std::to_string(sentence_index)
                         : it->second;
    trees.push_back(finish_sentence(rows, id, sentence_index));
    trees.back().set_metadata(std::move(metadata));
    rows.clear();
    metadata.clear();
  };
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') {
      auto body = text::trim(std::string_view(line).substr(1));
      size_t eq = body.find('=');
      if (eq != std::string_view::npos)
        metadata[std::string(text::trim(body.substr(0, eq)))] =
            std::string(text::trim(body.substr(eq + 1)));
      continue;
    }
    std::vector<std::string> cols = text::split(line, '\t');
    if (cols.size() != 10)
      throw DataError("sentence " + std::to_string(sentence_index + 1) +
                      ": expected 10 tab-separated columns, got " +
                      std::to_string(cols.size()));
    if (cols[0].find('-') != std::string::npos ||
        cols[0].find('.') != std::string::npos)
      continue;
    rows.push_back(std::move(cols));
  }
  flush();
  return trees;
}

std::vector<DependencyTree> load_conllu(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open CoNLL-U file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_conllu(ss.str());
}

Corpus documents_from_trees(std::span<const DependencyTree> trees) {
  std::vector<Document> docs;
  docs.reserve(trees.size());
  for (const DependencyTree& tree : trees) {
    if (tree.forms().size() != tree.size())
      throw DataError("sentence '" + tree.sentence_id() +
                      "' carries no surface forms");
    Document d;
    d.id = tree.sentence_id();
    for (size_t i = 0; i < tree.size(); ++i) {
      Token t;
      t.surface = tree.forms()[i];
      t.root = i < tree.lemmas().size() ? tree.lemmas()[i] : t.surface;
      t.pos = tree.node(static_cast<int>(i)).pos;
      d.tokens.push_back(std::move(t));
    }
    auto it = tree.metadata().find("label");
    if (it != tree.metadata().end()) d.label = parse_label(it->second);
    d.tree = tree;
    docs.push_back(std::move(d));
  }
  return Corpus(std::move(docs));
}

// ---------------------------------------------------------------------------
// JSONL documents

namespace {

Token parse_token(const json& j) {
  if (!j.is_object() || !j.contains("surface") || !j["surface"].is_string())
    throw DataError("token without a string 'surface'");
  Token t;
  t.surface = j["surface"].get<std::string>();
  if (t.surface.empty()) throw DataError("token with empty surface");
  t.root = j.value("root", t.surface);
  if (t.root.empty()) t.root = t.surface;
  t.pos = j.value("pos", std::string("UNK"));
  if (j.contains("morphemes")) {
    for (const auto& m : j["morphemes"])
      t.morphemes.push_back(parse_morpheme(m.get<std::string>()));
  }
  if (j.contains("negated")) t.negated = j["negated"].get<bool>();
  if (j.contains("intensity")) {
    t.intensity = j["intensity"].get<double>();
    if (!(t.intensity > 0)) throw DataError("token intensity must be > 0");
  }
  if (j.contains("word_negations"))
    t.word_negations = j["word_negations"].get<int>();
  return t;
}

json token_json(const Token& t) {
  json j;
  j["surface"] = t.surface;
  if (t.root != t.surface) j["root"] = t.root;
  if (!t.morphemes.empty()) {
    json ms = json::array();
    for (const auto& m : t.morphemes) ms.push_back(format_morpheme(m));
    j["morphemes"] = ms;
  }
  if (t.pos != "UNK") j["pos"] = t.pos;
  if (t.negated) j["negated"] = true;
  if (t.intensity != 1.0) j["intensity"] = t.intensity;
  if (t.word_negations) j["word_negations"] = t.word_negations;
  return j;
}

}  // namespace

Corpus parse_documents(std::string_view content,
                       std::span<const DependencyTree> trees) {
  std::map<std::string, const DependencyTree*> tree_index;
  for (const auto& t : trees) tree_index[t.sentence_id()] = &t;

  std::vector<Document> docs;
  std::map<std::string, int> seen;
  std::istringstream in{std::string(content)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    try {
      json j = json::parse(line);
      if (!j.is_object()) throw DataError("record is not an object");
      if (!j.contains("id") || !j["id"].is_string())
        throw DataError("missing string 'id'");
      if (!j.contains("label") || !j["label"].is_string())
        throw DataError("missing string 'label'");
      if (!j.contains("tokens") || !j["tokens"].is_array())
        throw DataError("missing 'tokens' array");
      Document d;
      d.id = j["id"].get<std::string>();
      d.label = parse_label(j["label"].get<std::string>());
      for (const auto& tj : j["tokens"]) d.tokens.push_back(parse_token(tj));
      if (j.contains("tree_nodes")) {
        std::vector<DependencyNode> nodes;
        for (const auto& nj : j["tree_nodes"])
          nodes.push_back({nj.at(0).get<int>(), nj.at(1).get<std::string>(),
                           nj.at(2).get<std::string>()});
        d.tree = DependencyTree(std::move(nodes), j.value("tree", d.id));
      } else if (j.contains("tree")) {
        std::string tid = j["tree"].is_string()
                              ? j["tree"].get<std::string>()
                              : std::to_string(j["tree"].get<long long>());
        auto it = tree_index.find(tid);
        if (it == tree_index.end())
          throw DataError("tree '" + tid + "' not found in CoNLL-U input");
        d.tree = *it->second;
      }
      if (d.tree && d.tree->size() != d.tokens.size())
        throw DataError("tree has " + std::to_string(d.tree->size()) +
                        " nodes but document has " +
                        std::to_string(d.tokens.size()) + " tokens");
      auto [it, inserted] = seen.emplace(d.id, line_no);
      if (!inserted)
        throw DataError("duplicate document id '" + d.id +
                        "' (first seen on line " +
                        std::to_string(it->second) + ")");
      docs.push_back(std::move(d));
    } catch (const json::exception& e) {
      throw DataError(where + "malformed record: " + e.what());
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    }
  }
  return Corpus(std::move(docs));
}

Corpus load_documents(const std::string& path,
                      std::span<const DependencyTree> trees) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open document file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_documents(ss.str(), trees);
}

std::string serialize_documents(const Corpus& corpus) {
  std::string out;
  for (const Document& d : corpus.documents()) {
    json j;
    j["id"] = d.id;
    j["label"] = std::string(label_name(d.label));
    json toks = json::array();
    for (const Token& t : d.tokens) toks.push_back(token_json(t));
    j["tokens"] = toks;
    if (d.tree) {
      json nodes = json::array();
      for (const auto& n : d.tree->nodes())
        nodes.push_back(json::array({n.head, n.relation, n.pos}));
      j["tree_nodes"] = nodes;
      j["tree"] = d.tree->sentence_id();
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

void save_documents(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << serialize_documents(corpus);
}

// ---------------------------------------------------------------------------
// Folds

std::vector<Fold> split_folds(const Corpus& corpus, int k, uint64_t seed) {
  if (k < 2) throw UsageError("fold count must be at least 2");
  if (corpus.labeled_count() < k)
    throw DataError("cannot split " + std::to_string(corpus.labeled_count()) +
                    " labeled documents into " + std::to_string(k) + " folds");
  std::vector<int> pos;
  std::vector<int> neg;
  for (size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].label == Label::kPositive) pos.push_back(static_cast<int>(i));
    if (corpus[i].label == Label::kNegative) neg.push_back(static_cast<int>(i));
  }
  Rng rng(seed);
  rng.shuffle(pos);
  rng.shuffle(neg);
  std::vector<int> order = pos;
  order.insert(order.end(), neg.begin(), neg.end());
  std::vector<int> fold_of(corpus.size(), -1);
  for (size_t r = 0; r < order.size(); ++r)
    fold_of[order[r]] = static_cast<int>(r % k);

  std::vector<Fold> folds(k);
  for (size_t i = 0; i < corpus.size(); ++i) {
    if (fold_of[i] < 0) continue;
    for (int f = 0; f < k; ++f) {
      if (fold_of[i] == f)
        folds[f].test_ids.push_back(corpus[i].id);
      else
        folds[f].train_ids.push_back(corpus[i].id);
    }
  }
  return folds;
}

// ---------------------------------------------------------------------------
// Vocabulary and keys

Vocabulary::Vocabulary(std::vector<std::string> words,
                       std::vector<double> counts)
    : words_(std::move(words)), counts_(std::move(counts)) {
  index_.reserve(words_.size());
  for (size_t i = 0; i < words_.size(); ++i)
    if (!index_.emplace(words_[i], static_cast<int>(i)).second)
      throw DataError("duplicate vocabulary word '" + words_[i] + "'");
}

int Vocabulary::index(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? -1 : it->second;
}

std::string base_form(const Token& token, const KeyScheme& scheme) {
  switch (scheme.base) {
    case KeyScheme::Base::kSurface:
      return token.surface;
    case KeyScheme::Base::kRoot:
      return token.root;
    case KeyScheme::Base::kPartial:
      return partial_surface_form(token, scheme.keep, scheme.keep_all);
  }
  return token.surface;
}

std::string feature_key(const Token& token, const KeyScheme& scheme) {
  std::string key = base_form(token, scheme);
  if (token.negated) {
    while (key.size() > 1 && key.back() == '_') key.pop_back();
    key.push_back('_');
  }
  return key;
}

std::vector<std::string> document_keys(const Document& doc,
                                       const KeyScheme& scheme) {
  std::vector<std::string> keys;
  keys.reserve(doc.tokens.size());
  for (const Token& t : doc.tokens) keys.push_back(feature_key(t, scheme));
  return keys;
}

Vocabulary build_vocabulary(
    std::span<const std::vector<std::string>> keyed_documents, int min_freq) {
  if (min_freq < 0) throw UsageError("min_freq must be >= 0");
  std::unordered_map<std::string, double> freq;
  for (const auto& doc : keyed_documents)
    for (const auto& k : doc) freq[k] += 1.0;
  std::vector<std::pair<std::string, double>> items;
  for (auto& [w, c] : freq)
    if (c >= min_freq) items.emplace_back(w, c);
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> words;
  std::vector<double> counts;
  for (auto& [w, c] : items) {
    words.push_back(w);
    counts.push_back(c);
  }
  return Vocabulary(std::move(words), std::move(counts));
}

Vocabulary vocabulary(const Corpus& corpus, int min_freq,
                      const KeyScheme& scheme) {
  std::vector<std::vector<std::string>> keyed;
  keyed.reserve(corpus.size());
  for (const Document& d : corpus.documents())
    keyed.push_back(document_keys(d, scheme));
  return build_vocabulary(keyed, min_freq);
}

}  // namespace sentikit
