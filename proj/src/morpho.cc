#include "sentikit/morpho.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "sentikit/errors.h"
#include "sentikit/lexicon.h"
#include "sentikit/text.h"

namespace sentikit {

namespace {

// Host scores are keyed by plain surface form; negation marks are a key
// concern, not part of the word the morpheme attaches to.
Corpus without_negation(const Corpus& corpus) {
  std::vector<Document> docs = corpus.documents();
  for (Document& d : docs)
    for (Token& t : d.tokens) t.negated = false;
  return Corpus(std::move(docs));
}

}  // namespace

MorphemeLexicon build_morpheme_lexicon(
    std::span<const Corpus* const> corpora) {
  if (corpora.empty())
    throw DataError("morpheme lexicon needs at least one corpus");
  std::map<std::string, std::pair<double, int>> across;  // sum, corpus count
  std::map<std::string, std::set<std::string>> hosts;
  for (const Corpus* c : corpora) {
    const Corpus plain = without_negation(*c);
    const SentimentLexicon word_scores =
        delta_tfidf_lexicon(plain, KeyScheme::surface());
    std::map<std::string, std::set<std::string>> local_hosts;
    for (const Document& d : plain.documents()) {
      if (d.label == Label::kUnlabeled) continue;
      for (const Token& t : d.tokens)
        for (const Morpheme& m : t.morphemes) local_hosts[m.tag].insert(t.surface);
    }
    for (const auto& [tag, forms] : local_hosts) {
      double sum = 0.0;
      for (const auto& f : forms) sum += word_scores.score(f);
      auto& a = across[tag];
      a.first += sum / forms.size();
      a.second += 1;
      hosts[tag].insert(forms.begin(), forms.end());
    }
  }
  MorphemeLexicon lex;
  for (const auto& [tag, a] : across) {
    lex.scores[tag] = a.first / a.second;
    lex.host_counts[tag] = static_cast<int>(hosts[tag].size());
  }
  return lex;
}

MorphemeLexicon build_morpheme_lexicon(const Corpus& corpus) {
  const Corpus* one[] = {&corpus};
  return build_morpheme_lexicon(std::span<const Corpus* const>(one, 1));
}

MorphemeSelection select_morphemes(const MorphemeLexicon& lex,
                                   const PartialFormPolicy& policy) {
  if (policy.top_percent < 0 || policy.top_percent > 100)
    throw UsageError("top percent must be within 0..100");
  MorphemeSelection sel;
  if (policy.top_percent == 100) {
    sel.all = true;
    sel.tags = policy.always_keep;
    for (const auto& [tag, s] : lex.scores) sel.tags.insert(tag);
    return sel;
  }
  std::vector<std::pair<double, std::string>> pos;
  std::vector<std::pair<double, std::string>> neg;
  size_t ranked = 0;
  for (const auto& [tag, s] : lex.scores) {
    if (policy.always_keep.count(tag)) continue;
    ++ranked;
    if (s > 0.0) pos.emplace_back(s, tag);
    if (s < 0.0) neg.emplace_back(s, tag);
  }
  std::sort(pos.begin(), pos.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::sort(neg.begin(), neg.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second < b.second;
  });
  size_t m = static_cast<size_t>(policy.top_percent) * ranked / 200;
  m = std::min({m, pos.size(), neg.size()});
  sel.tags = policy.always_keep;
  for (size_t i = 0; i < m; ++i) {
    sel.tags.insert(pos[i].second);
    sel.tags.insert(neg[i].second);
  }
  return sel;
}

std::string partial_surface_form(const Token& token,
                                 const std::set<std::string>& keep,
                                 bool keep_all) {
  if (keep_all) return token.surface;
  std::string key = token.root;
  for (const Morpheme& m : token.morphemes) {
    if (!keep.count(m.tag)) continue;
    key += m.form.empty() ? "+" + m.tag : m.form;
  }
  return key;
}

std::string partial_surface_form(const Token& token,
                                 const MorphemeSelection& keep) {
  return partial_surface_form(token, keep.tags, keep.all);
}

void save_morpheme_lexicon(const MorphemeLexicon& lex,
                           const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  for (const auto& [tag, s] : lex.scores) {
    auto it = lex.host_counts.find(tag);
    out << tag << '\t' << text::format_double(s) << '\t'
        << (it == lex.host_counts.end() ? 0 : it->second) << '\n';
  }
}

MorphemeLexicon load_morpheme_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open morpheme lexicon '" + path + "'");
  MorphemeLexicon lex;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty() || line[0] == '#') continue;
    auto f = text::split(line, '\t');
    try {
      if (f.size() != 3) throw std::invalid_argument("fields");
      double s = std::stod(f[1]);
      int h = std::stoi(f[2]);
      if (!std::isfinite(s) || h < 1) throw std::out_of_range("value");
      lex.scores[f[0]] = s;
      lex.host_counts[f[0]] = h;
    } catch (const std::exception&) {
      throw DataError(path + ": line " + std::to_string(lineno) +
                      ": expected 'morpheme<TAB>score<TAB>host_count' with "
                      "host_count >= 1");
    }
  }
  return lex;
}

}  // namespace sentikit
