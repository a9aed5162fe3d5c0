#ifndef SENTIKIT_TEXT_H_
#define SENTIKIT_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace sentikit::text {

std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_whitespace(std::string_view s);
std::string_view trim(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Decodes UTF-8 into code points; invalid bytes decode as U+FFFD.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);

// Lower-casing for ASCII, Latin-1 and Turkish letters. With `turkish` set,
// dotted/dotless I follow Turkish rules (I -> ı, İ -> i).
std::string to_lower(std::string_view s, bool turkish = false);
bool has_letter(std::string_view s);
// True if every letter is upper case and there is at least one letter.
bool is_all_upper(std::string_view s);
// True when every code point is punctuation/symbol (no letters or digits).
bool is_punctuation(std::string_view s);

// "%.17g"-style round-trip formatting.
std::string format_double(double v);

}  // namespace sentikit::text

#endif  // SENTIKIT_TEXT_H_
