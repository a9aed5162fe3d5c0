#include "sentikit/windows.h"

#include <algorithm>

#include "sentikit/errors.h"
#include "sentikit/text.h"

namespace sentikit {

WindowSpec WindowSpec::sliding(int k, Orientation o) {
  WindowSpec s;
  s.kind = Kind::kSliding;
  s.k = k;
  s.orientation = o;
  return s;
}

WindowSpec WindowSpec::subclause(std::set<std::string> relations) {
  WindowSpec s;
  s.kind = Kind::kSubclause;
  s.cut_relations = std::move(relations);
  return s;
}

void WindowSpec::validate() const {
  if (kind == Kind::kSliding && k < 1)
    throw UsageError("sliding window size must be >= 1, got " +
                     std::to_string(k));
  if (kind == Kind::kSubclause && cut_relations.empty())
    throw UsageError("subclause windows need at least one cut relation");
}

std::string WindowSpec::describe() const {
  if (kind == Kind::kSliding) {
    return "sliding:" + std::to_string(k) + ":" +
           (orientation == Orientation::kSymmetric ? "symmetric" : "right");
  }
  return "subclause:" +
         text::join({cut_relations.begin(), cut_relations.end()}, ",");
}

WindowSpec parse_window_spec(const std::string& s) {
  auto parts = text::split(s, ':');
  WindowSpec spec;
  if (parts[0] == "sliding" && (parts.size() == 2 || parts.size() == 3)) {
    int k = 0;
    try {
      k = std::stoi(parts[1]);
    } catch (const std::exception&) {
      throw UsageError("bad window size in '" + s + "'");
    }
    auto o = WindowSpec::Orientation::kSymmetric;
    if (parts.size() == 3) {
      if (parts[2] == "right") {
        o = WindowSpec::Orientation::kRight;
      } else if (parts[2] != "symmetric") {
        throw UsageError("window orientation must be symmetric or right: '" +
                         s + "'");
      }
    }
    spec = WindowSpec::sliding(k, o);
  } else if (parts[0] == "subclause" && parts.size() <= 2) {
    std::set<std::string> rels = {"conj", "ccomp"};
    if (parts.size() == 2) {
      rels.clear();
      for (auto& r : text::split(parts[1], ','))
        if (!r.empty()) rels.insert(r);
    }
    spec = WindowSpec::subclause(rels);
  } else {
    throw UsageError("bad window spec '" + s +
                     "' (expected sliding:K[:symmetric|right] or "
                     "subclause[:rel,rel])");
  }
  spec.validate();
  return spec;
}

namespace {

std::string base_relation(const std::string& rel) {
  return rel.substr(0, rel.find(':'));
}

}  // namespace

std::vector<Subclause> extract_subclauses(const DependencyTree& tree,
                                          std::span<const std::string> words,
                                          const WindowSpec& spec) {
  const int n = static_cast<int>(tree.size());
  if (static_cast<int>(words.size()) != n)
    throw DataError("dependency tree has " + std::to_string(n) +
                    " nodes but the sentence has " +
                    std::to_string(words.size()) + " tokens");
  if (n == 0) return {};

  auto verbal = [&](int i) {
    if (spec.verb_pos.count(tree.node(i).pos)) return true;
    for (int c : tree.children(i))
      if (base_relation(tree.node(c).relation) == "cop") return true;
    return false;
  };
  std::vector<bool> is_head(n, false);
  for (int i = 0; i < n; ++i) {
    if (i == tree.root()) continue;
    if (spec.cut_relations.count(base_relation(tree.node(i).relation)) &&
        verbal(i))
      is_head[i] = true;
  }
  is_head[tree.root()] = true;

  auto droppable = [&](int i) {
    return text::is_punctuation(words[i]) ||
           spec.redundant_conjunctions.count(text::to_lower(words[i]));
  };
  std::string final_punct;
  if (text::is_punctuation(words[n - 1])) final_punct = words[n - 1];

  std::vector<Subclause> out;
  for (int h = 0; h < n; ++h) {
    if (!is_head[h]) continue;
    std::vector<int> members;
    std::vector<int> stack = {h};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      members.push_back(v);
      for (int c : tree.children(v))
        if (!is_head[c]) stack.push_back(c);
    }
    std::sort(members.begin(), members.end());
    size_t b = 0;
    size_t e = members.size();
    while (b < e && (droppable(members[b]) || droppable(members[e - 1]))) {
      if (droppable(members[b])) ++b;
      if (b < e && droppable(members[e - 1])) --e;
    }
    if (b == e) continue;
    Subclause sc;
    sc.token_indices.assign(members.begin() + b, members.begin() + e);
    sc.final_punct = final_punct;
    out.push_back(std::move(sc));
  }
  std::sort(out.begin(), out.end(), [](const Subclause& a, const Subclause& b) {
    return a.token_indices.front() < b.token_indices.front();
  });
  return out;
}

std::vector<Subclause> extract_subclauses(const DependencyTree& tree,
                                          std::span<const Token> tokens,
                                          const WindowSpec& spec) {
  std::vector<std::string> words;
  words.reserve(tokens.size());
  for (const Token& t : tokens) words.push_back(t.surface);
  return extract_subclauses(tree, words, spec);
}

std::string render_subclause(const Subclause& clause,
                             std::span<const std::string> words) {
  std::string out;
  for (size_t k = 0; k < clause.token_indices.size(); ++k) {
    const std::string& w = words[clause.token_indices[k]];
    bool glue = text::is_punctuation(w) || w.starts_with("'") || w == "n't";
    if (k > 0 && !glue) out += ' ';
    out += w;
  }
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] -= 'a' - 'A';
  return out + clause.final_punct;
}

void for_each_window_pair(const Document& doc, const WindowSpec& spec,
                          const std::function<void(int, int)>& fn) {
  spec.validate();
  const int n = static_cast<int>(doc.tokens.size());
  if (spec.kind == WindowSpec::Kind::kSliding) {
    const bool symmetric =
        spec.orientation == WindowSpec::Orientation::kSymmetric;
    for (int i = 0; i < n; ++i) {
      int lo = symmetric ? std::max(0, i - spec.k) : i + 1;
      int hi = std::min(n - 1, i + spec.k);
      for (int j = lo; j <= hi; ++j)
        if (j != i) fn(i, j);
    }
    return;
  }
  if (!doc.tree)
    throw DataError("document '" + doc.id +
                    "' has no dependency tree; subclause windows need one");
  for (const Subclause& sc : extract_subclauses(*doc.tree, doc.tokens, spec))
    for (int i : sc.token_indices)
      for (int j : sc.token_indices)
        if (i != j) fn(i, j);
}

std::vector<std::pair<int, int>> window_pairs(const Document& doc,
                                              const WindowSpec& spec) {
  std::vector<std::pair<int, int>> out;
  for_each_window_pair(doc, spec,
                       [&](int i, int j) { out.emplace_back(i, j); });
  return out;
}

}  // namespace sentikit
