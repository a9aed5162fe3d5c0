#include "sentikit/preprocess.h"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

#include "json.hpp"
#include "sentikit/errors.h"
#include "sentikit/text.h"

namespace sentikit {

using nlohmann::json;

double intensifier_multiplier(IntensifierClass c) {
  switch (c) {
    case IntensifierClass::kMore:
      return 1.2;
    case IntensifierClass::kLess:
      return 0.8;
    case IntensifierClass::kMost:
      return 1.5;
    case IntensifierClass::kLeast:
      return 0.5;
  }
  return 1.0;
}

IntensifierClass parse_intensifier_class(const std::string& name) {
  if (name == "more") return IntensifierClass::kMore;
  if (name == "less") return IntensifierClass::kLess;
  if (name == "most") return IntensifierClass::kMost;
  if (name == "least") return IntensifierClass::kLeast;
  throw DataError("unknown intensifier class '" + name +
                  "' (expected more, less, most or least)");
}

std::string intensifier_class_name(IntensifierClass c) {
  switch (c) {
    case IntensifierClass::kMore: return "more";
    case IntensifierClass::kLess: return "less";
    case IntensifierClass::kMost: return "most";
    case IntensifierClass::kLeast: return "least";
  }
  return "more";
}

namespace {

const std::vector<std::string> kDefaultEmoticons = {
    R"([:;=8xX][-'^o]?[()\[\]DPpOo/\\|*3@$}{]+)",
    R"([()\[\]}{]+[-'^o]?[:;=8])",
    R"(<+3+)",
    R"([\^][_.\-]?[\^])",
    R"(-_+-)",
};

std::string lower(const std::string& s, const PreprocessConfig& c) {
  return text::to_lower(s, c.language == "tr");
}

bool is_url(const std::string& s) {
  static const std::regex url(R"(^(https?://|ftp://|www\.)\S+$)",
                              std::regex::icase);
  return std::regex_match(s, url) || s.find("://") != std::string::npos;
}

}  // namespace

PreprocessConfig default_config(const std::string& language) {
  PreprocessConfig c;
  c.language = language;
  c.emoticon_patterns = kDefaultEmoticons;
  if (language == "tr") {
    c.negator_words = {"değil", "yok"};
    c.negator_morphemes = {"Neg", "Without"};
    c.intensifiers = {{"çok", IntensifierClass::kMore},
                      {"bayağı", IntensifierClass::kMore},
                      {"daha", IntensifierClass::kMore},
                      {"oldukça", IntensifierClass::kMore},
                      {"gayet", IntensifierClass::kMore},
                      {"biraz", IntensifierClass::kLess},
                      {"az", IntensifierClass::kLess},
                      {"en", IntensifierClass::kMost}};
    c.stopwords = {"ve", "ile", "bu", "şu", "o", "bir", "de", "da", "ki",
                   "mi", "mı", "mu", "mü", "için", "gibi", "ama", "veya"};
    c.mwe_list = {{"nalları", "dikmek"}, {"kafayı", "yemek"}};
    c.elongation_collapse_to = 1;
  } else if (language == "en") {
    c.prefix_negator_words = {"not", "no", "never", "n't", "cannot",
                              "neither", "nor"};
    c.intensifiers = {{"very", IntensifierClass::kMore},
                      {"really", IntensifierClass::kMore},
                      {"quite", IntensifierClass::kMore},
                      {"so", IntensifierClass::kMore},
                      {"extremely", IntensifierClass::kMore},
                      {"too", IntensifierClass::kMore},
                      {"less", IntensifierClass::kLess},
                      {"slightly", IntensifierClass::kLess},
                      {"somewhat", IntensifierClass::kLess},
                      {"barely", IntensifierClass::kLess},
                      {"most", IntensifierClass::kMost},
                      {"least", IntensifierClass::kLeast}};
    c.stopwords = {"a",   "an",  "the", "of",   "to",   "in",   "on",
                   "at",  "by",  "for", "with", "and",  "or",   "is",
                   "are", "was", "be",  "it",   "this", "that", "as"};
    c.mwe_list = {{"kick", "the", "bucket"}, {"over", "the", "top"}};
    c.elongation_collapse_to = 2;
  } else {
    throw UsageError("no default preprocessing config for language '" +
                     language + "' (expected en or tr)");
  }
  return c;
}

PreprocessConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed preprocessing config: ") + e.what());
  }
  PreprocessConfig c = default_config(j.value("language", std::string("en")));
  auto str_set = [&](const char* key, std::set<std::string>& out) {
    if (j.contains(key)) out = j[key].get<std::set<std::string>>();
  };
  try {
    str_set("negator_words", c.negator_words);
    str_set("prefix_negator_words", c.prefix_negator_words);
    str_set("negator_morphemes", c.negator_morphemes);
    str_set("stopwords", c.stopwords);
    if (j.contains("intensifiers")) {
      c.intensifiers.clear();
      for (auto& [word, cls] : j["intensifiers"].items())
        c.intensifiers[word] = parse_intensifier_class(cls.get<std::string>());
    }
    if (j.contains("mwes"))
      c.mwe_list = j["mwes"].get<std::vector<std::vector<std::string>>>();
    if (j.contains("emoticon_patterns"))
      c.emoticon_patterns =
          j["emoticon_patterns"].get<std::vector<std::string>>();
    c.keep_hashtags = j.value("keep_hashtags", c.keep_hashtags);
    c.strip_urls = j.value("strip_urls", c.strip_urls);
    c.lowercase = j.value("lowercase", c.lowercase);
    c.remove_stopwords = j.value("remove_stopwords", c.remove_stopwords);
    c.elongation_collapse_to =
        j.value("elongation_collapse_to", c.elongation_collapse_to);
    c.boost_elongation = j.value("boost_elongation", c.boost_elongation);
    c.uppercase_emphasis = j.value("uppercase_emphasis", c.uppercase_emphasis);
  } catch (const json::exception& e) {
    throw DataError(std::string("bad preprocessing config: ") + e.what());
  }
  return c;
}

std::string serialize_config(const PreprocessConfig& c) {
  json j;
  j["language"] = c.language;
  j["negator_words"] = c.negator_words;
  j["prefix_negator_words"] = c.prefix_negator_words;
  j["negator_morphemes"] = c.negator_morphemes;
  json intens = json::object();
  for (const auto& [w, cls] : c.intensifiers) intens[w] = intensifier_class_name(cls);
  j["intensifiers"] = intens;
  j["stopwords"] = c.stopwords;
  j["mwes"] = c.mwe_list;
  j["emoticon_patterns"] = c.emoticon_patterns;
  j["keep_hashtags"] = c.keep_hashtags;
  j["strip_urls"] = c.strip_urls;
  j["lowercase"] = c.lowercase;
  j["remove_stopwords"] = c.remove_stopwords;
  j["elongation_collapse_to"] = c.elongation_collapse_to;
  j["boost_elongation"] = c.boost_elongation;
  j["uppercase_emphasis"] = c.uppercase_emphasis;
  return j.dump(2) + "\n";
}

PreprocessConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

bool is_emoticon(const std::string& token, const PreprocessConfig& config) {
  if (token.size() < 2) return false;
  // Compiled once per distinct pattern list.
  thread_local std::vector<std::string> cached_src;
  thread_local std::vector<std::regex> cached;
  if (cached_src != config.emoticon_patterns) {
    cached.clear();
    for (const auto& p : config.emoticon_patterns) cached.emplace_back(p);
    cached_src = config.emoticon_patterns;
  }
  for (const auto& re : cached)
    if (std::regex_match(token, re)) return true;
  return false;
}

std::string normalize_emoticon(const std::string& emoticon) {
  if (emoticon.size() < 3) return emoticon;
  const char last = emoticon.back();
  size_t run = 0;
  while (run < emoticon.size() && emoticon[emoticon.size() - 1 - run] == last)
    ++run;
  if (run <= 2) return emoticon;
  return emoticon.substr(0, emoticon.size() - run + 2);
}

std::vector<Token> normalize_emoticons(std::vector<Token> tokens,
                                       const PreprocessConfig& config) {
  for (Token& t : tokens) {
    if (!is_emoticon(t.surface, config)) continue;
    std::string n = normalize_emoticon(t.surface);
    if (t.root == t.surface) t.root = n;
    t.surface = n;
  }
  return tokens;
}

namespace {

bool is_scoring_eligible(const Token& t, const PreprocessConfig& config) {
  return !text::is_punctuation(t.surface) || is_emoticon(t.surface, config) ||
         t.surface == kExclamationEmphasis;
}

int negator_morpheme_count(const Token& t, const PreprocessConfig& config) {
  int n = 0;
  for (const auto& m : t.morphemes)
    if (config.negator_morphemes.count(m.tag)) ++n;
  return n;
}

}  // namespace

std::vector<Token> mark_negation(std::vector<Token> tokens,
                                 const PreprocessConfig& config) {
  const size_t n = tokens.size();
  std::vector<bool> consumed(n, false);
  auto is_postfix = [&](size_t i) {
    return config.negator_words.count(lower(tokens[i].surface, config)) > 0;
  };
  auto is_prefix = [&](size_t i) {
    return config.prefix_negator_words.count(lower(tokens[i].surface, config)) >
           0;
  };
  auto is_intensifier = [&](size_t i) {
    return config.intensifiers.count(lower(tokens[i].surface, config)) > 0;
  };
  auto target_ok = [&](size_t j) {
    return !is_postfix(j) && !is_prefix(j) && !is_intensifier(j) &&
           is_scoring_eligible(tokens[j], config);
  };
  for (size_t i = 0; i < n; ++i) {
    if (is_postfix(i)) {
      for (size_t j = i; j-- > 0;) {
        if (target_ok(j)) {
          tokens[j].word_negations += 1;
          consumed[i] = true;
          break;
        }
        if (!is_postfix(j) && !is_intensifier(j)) break;
      }
    } else if (is_prefix(i)) {
      for (size_t j = i + 1; j < n; ++j) {
        if (target_ok(j)) {
          tokens[j].word_negations += 1;
          consumed[i] = true;
          break;
        }
        if (!is_prefix(j) && !is_intensifier(j)) break;
      }
    }
  }
  std::vector<Token> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    if (consumed[i]) continue;
    Token t = std::move(tokens[i]);
    t.negated = (negator_morpheme_count(t, config) + t.word_negations) % 2 == 1;
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<Token> apply_intensifiers(std::vector<Token> tokens,
                                      const PreprocessConfig& config) {
  std::vector<Token> out;
  out.reserve(tokens.size());
  double pending = 1.0;
  bool have_pending = false;
  for (Token& t : tokens) {
    auto it = config.intensifiers.find(lower(t.surface, config));
    if (it != config.intensifiers.end()) {
      pending *= intensifier_multiplier(it->second);
      have_pending = true;
      continue;
    }
    if (have_pending) {
      if (is_scoring_eligible(t, config)) {
        t.intensity *= pending;
      }
      // A punctuation mark ends the intensifier's reach.
      pending = 1.0;
      have_pending = false;
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<Token> match_mwes(std::vector<Token> tokens,
                              const PreprocessConfig& config) {
  if (config.mwe_list.empty()) return tokens;
  std::vector<std::vector<std::string>> mwes;
  for (const auto& m : config.mwe_list) {
    if (m.size() < 2) continue;
    std::vector<std::string> words;
    for (const auto& w : m) words.push_back(lower(w, config));
    mwes.push_back(std::move(words));
  }
  std::stable_sort(mwes.begin(), mwes.end(),
                   [](const auto& a, const auto& b) {
                     return a.size() > b.size();
                   });
  auto matches = [&](const Token& t, const std::string& w) {
    return lower(t.surface, config) == w || lower(t.root, config) == w;
  };
  std::vector<Token> out;
  size_t i = 0;
  while (i < tokens.size()) {
    const std::vector<std::string>* hit = nullptr;
    for (const auto& m : mwes) {
      if (i + m.size() > tokens.size()) continue;
      bool ok = true;
      for (size_t k = 0; k < m.size() && ok; ++k)
        ok = matches(tokens[i + k], m[k]);
      if (ok) {
        hit = &m;
        break;
      }
    }
    if (!hit) {
      out.push_back(std::move(tokens[i]));
      ++i;
      continue;
    }
    Token merged;
    std::vector<std::string> surfaces;
    std::vector<std::string> roots;
    merged.intensity = 1.0;
    for (size_t k = 0; k < hit->size(); ++k) {
      Token& t = tokens[i + k];
      surfaces.push_back(t.surface);
      roots.push_back(t.root);
      merged.morphemes.insert(merged.morphemes.end(), t.morphemes.begin(),
                              t.morphemes.end());
      merged.intensity *= t.intensity;
      merged.word_negations += t.word_negations;
      merged.negated = merged.negated != t.negated;
    }
    merged.surface = text::join(surfaces, "+");
    merged.root = text::join(roots, "+");
    merged.pos = "MWE";
    out.push_back(std::move(merged));
    i += hit->size();
  }
  return out;
}

std::vector<Token> strip_urls_keep_hashtags(std::vector<Token> tokens,
                                            const PreprocessConfig& config) {
  std::vector<Token> out;
  out.reserve(tokens.size());
  for (Token& t : tokens) {
    if (config.strip_urls && is_url(t.surface)) continue;
    if (!config.keep_hashtags && t.surface.size() > 1 && t.surface[0] == '#') {
      t.surface.erase(0, 1);
      if (!t.root.empty() && t.root[0] == '#') t.root.erase(0, 1);
    }
    out.push_back(std::move(t));
  }
  return out;
}

namespace {

bool is_emphasis_run(const std::string& s) {
  if (s == kExclamationEmphasis) return true;
  if (s.empty()) return false;
  for (char c : s)
    if (c != '!' && c != '?') return false;
  return true;
}

}  // namespace

std::vector<Token> apply_punctuation_policy(std::vector<Token> tokens,
                                            const PreprocessConfig& config) {
  std::vector<Token> out;
  out.reserve(tokens.size());
  size_t i = 0;
  while (i < tokens.size()) {
    Token& t = tokens[i];
    if (is_emphasis_run(t.surface)) {
      // Merge a run of "!"/"?" marks (one token or several).
      size_t j = i;
      std::string chars;
      while (j < tokens.size() && is_emphasis_run(tokens[j].surface)) {
        chars += tokens[j].surface == kExclamationEmphasis
                     ? std::string("!!")
                     : tokens[j].surface;
        ++j;
      }
      Token mark = std::move(t);
      if (chars.size() >= 2 && chars.find('!') != std::string::npos) {
        mark.surface = kExclamationEmphasis;
      } else {
        mark.surface = chars.substr(0, 1);
      }
      mark.root = mark.surface;
      out.push_back(std::move(mark));
      i = j;
      continue;
    }
    if (text::is_punctuation(t.surface) && !is_emoticon(t.surface, config) &&
        t.surface != "(!)") {
      ++i;
      continue;
    }
    out.push_back(std::move(t));
    ++i;
  }
  return out;
}

std::vector<Token> normalize_case_and_elongation(
    std::vector<Token> tokens, const PreprocessConfig& config) {
  auto skip = [&](const Token& t) {
    return is_emoticon(t.surface, config) ||
           t.surface == kExclamationEmphasis || !text::has_letter(t.surface);
  };
  bool mixed = false;
  if (config.lowercase && config.uppercase_emphasis) {
    bool any_lower = false;
    for (const Token& t : tokens)
      if (!skip(t) && !text::is_all_upper(t.surface)) any_lower = true;
    mixed = any_lower;
  }
  for (Token& t : tokens) {
    if (skip(t)) continue;
    if (config.lowercase) {
      if (mixed && text::is_all_upper(t.surface) &&
          text::decode_utf8(t.surface).size() >= 2) {
        t.intensity *= intensifier_multiplier(IntensifierClass::kMore);
      }
      bool root_was_surface = t.root == t.surface;
      t.surface = lower(t.surface, config);
      t.root = root_was_surface ? t.surface : lower(t.root, config);
    }
    if (config.elongation_collapse_to > 0 && t.surface[0] != '#') {
      std::u32string cps = text::decode_utf8(t.surface);
      std::u32string collapsed;
      bool changed = false;
      size_t i = 0;
      while (i < cps.size()) {
        size_t j = i;
        while (j < cps.size() && cps[j] == cps[i]) ++j;
        size_t run = j - i;
        bool letter = text::has_letter(text::encode_utf8(cps.substr(i, 1)));
        if (letter && run >= 3) {
          collapsed.append(
              std::min<size_t>(run, config.elongation_collapse_to), cps[i]);
          changed = true;
        } else {
          collapsed.append(cps.substr(i, run));
        }
        i = j;
      }
      if (changed) {
        bool root_was_surface = t.root == t.surface;
        t.surface = text::encode_utf8(collapsed);
        if (root_was_surface) t.root = t.surface;
        if (config.boost_elongation)
          t.intensity *= intensifier_multiplier(IntensifierClass::kMore);
      }
    }
  }
  return tokens;
}

std::vector<Token> remove_stopwords(std::vector<Token> tokens,
                                    const PreprocessConfig& config) {
  if (!config.remove_stopwords) return tokens;
  std::vector<Token> out;
  out.reserve(tokens.size());
  for (Token& t : tokens) {
    std::string w = lower(t.surface, config);
    bool modifier = config.intensifiers.count(w) ||
                    config.negator_words.count(w) ||
                    config.prefix_negator_words.count(w);
    if (config.stopwords.count(w) && !modifier) continue;
    out.push_back(std::move(t));
  }
  return out;
}

namespace {

std::vector<Token> preprocess_pass(std::vector<Token> t,
                                   const PreprocessConfig& config) {
  t = strip_urls_keep_hashtags(std::move(t), config);
  t = normalize_emoticons(std::move(t), config);
  t = normalize_case_and_elongation(std::move(t), config);
  t = apply_punctuation_policy(std::move(t), config);
  t = mark_negation(std::move(t), config);
  t = apply_intensifiers(std::move(t), config);
  t = remove_stopwords(std::move(t), config);
  return match_mwes(std::move(t), config);
}

}  // namespace

Document preprocess(Document doc, const PreprocessConfig& config) {
  const size_t before = doc.tokens.size();
  // Removing a token can expose a new neighbour to an earlier step (marks
  // that become adjacent, a negator that reaches a word). A pass that changes
  // anything also shortens the sequence, which bounds the passes.
  std::vector<Token> t = preprocess_pass(std::move(doc.tokens), config);
  for (size_t pass = 0; pass <= before; ++pass) {
    std::vector<Token> next = preprocess_pass(t, config);
    if (next == t) break;
    t = std::move(next);
  }
  doc.tokens = std::move(t);
  if (doc.tokens.size() != before) doc.tree.reset();
  return doc;
}

Corpus preprocess(const Corpus& corpus, const PreprocessConfig& config) {
  std::vector<Document> docs;
  docs.reserve(corpus.size());
  for (const Document& d : corpus.documents())
    docs.push_back(preprocess(d, config));
  return Corpus(std::move(docs));
}

}  // namespace sentikit
