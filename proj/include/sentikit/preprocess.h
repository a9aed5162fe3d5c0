#ifndef SENTIKIT_PREPROCESS_H_
#define SENTIKIT_PREPROCESS_H_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "sentikit/corpus.h"

namespace sentikit {

enum class IntensifierClass { kMore, kLess, kMost, kLeast };

// Fixed multipliers per class: more 1.2, less 0.8, most 1.5, least 0.5.
double intensifier_multiplier(IntensifierClass c);
IntensifierClass parse_intensifier_class(const std::string& name);
std::string intensifier_class_name(IntensifierClass c);

struct PreprocessConfig {
  std::string language = "en";
  // Negators that follow the word they negate (Turkish "değil", "yok").
  std::set<std::string> negator_words;
  // Negators that precede the word they negate (English "not", "never").
  std::set<std::string> prefix_negator_words;
  // Morpheme tags that negate their host (-mA, -sIz family).
  std::set<std::string> negator_morphemes;
  std::map<std::string, IntensifierClass> intensifiers;
  std::set<std::string> stopwords;
  std::vector<std::vector<std::string>> mwe_list;
  std::vector<std::string> emoticon_patterns;  // ECMAScript regexes
  bool keep_hashtags = true;
  bool strip_urls = true;
  bool lowercase = true;
  bool remove_stopwords = false;
  // Elongated words ("müthişşşş") collapse letter runs of 3+ to this length
  // and are boosted like a "more" intensifier.
  int elongation_collapse_to = 1;
  bool boost_elongation = true;
  bool uppercase_emphasis = true;
};

PreprocessConfig default_config(const std::string& language);
// JSON config file; unspecified keys keep the defaults of "language".
PreprocessConfig load_config(const std::string& path);
PreprocessConfig parse_config(const std::string& json_text);
// Complete JSON form of a config; parse_config reads it back unchanged.
std::string serialize_config(const PreprocessConfig& config);

bool is_emoticon(const std::string& token, const PreprocessConfig& config);

// Collapses a repeated trailing emoticon character to length 2; emoticons are
// never removed.
std::vector<Token> normalize_emoticons(std::vector<Token> tokens,
                                       const PreprocessConfig& config);
std::string normalize_emoticon(const std::string& emoticon);

// Negation from suffixes and negator words; negator words are consumed.
// Two negations on one word cancel.
std::vector<Token> mark_negation(std::vector<Token> tokens,
                                 const PreprocessConfig& config);

// Removes intensifier tokens and scales the next scoring-eligible token:
// 1.2^x / 0.8^x for runs of x more/less intensifiers, 1.5 / 0.5 for most /
// least. A trailing intensifier is dropped without effect.
std::vector<Token> apply_intensifiers(std::vector<Token> tokens,
                                      const PreprocessConfig& config);

// Greedy left-to-right longest-first multi-word expression matching; a match
// becomes one token whose key joins the words with "+".
std::vector<Token> match_mwes(std::vector<Token> tokens,
                              const PreprocessConfig& config);

std::vector<Token> strip_urls_keep_hashtags(std::vector<Token> tokens,
                                            const PreprocessConfig& config);

// Drops punctuation except "?", "!", "(!)"; runs of "!" / "?!" become one
// EXCL_EMPH token.
std::vector<Token> apply_punctuation_policy(std::vector<Token> tokens,
                                            const PreprocessConfig& config);

// Lower-casing with upper-case emphasis, and elongation collapsing.
std::vector<Token> normalize_case_and_elongation(
    std::vector<Token> tokens, const PreprocessConfig& config);

std::vector<Token> remove_stopwords(std::vector<Token> tokens,
                                    const PreprocessConfig& config);

inline constexpr const char* kExclamationEmphasis = "EXCL_EMPH";

// Full pipeline. Idempotent. The dependency tree is kept only when the token
// sequence keeps its length.
Document preprocess(Document doc, const PreprocessConfig& config);
Corpus preprocess(const Corpus& corpus, const PreprocessConfig& config);

}  // namespace sentikit

#endif  // SENTIKIT_PREPROCESS_H_
