#include "sentikit/text.h"

#include <cstdio>

namespace sentikit::text {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  for (;;) {
    size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' ||
                            s[i] == '\r')) {
      ++i;
    }
    size_t start = i;
    while (i < s.size() && !(s[i] == ' ' || s[i] == '\t' || s[i] == '\n' ||
                             s[i] == '\r')) {
      ++i;
    }
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

std::string_view trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n'))
    ++b;
  while (e > b &&
         (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' ||
          s[e - 1] == '\n'))
    --e;
  return s.substr(b, e - b);
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    char32_t cp;
    int extra;
    if (c < 0x80) {
      cp = c;
      extra = 0;
    } else if ((c >> 5) == 0x6) {
      cp = c & 0x1F;
      extra = 1;
    } else if ((c >> 4) == 0xE) {
      cp = c & 0x0F;
      extra = 2;
    } else if ((c >> 3) == 0x1E) {
      cp = c & 0x07;
      extra = 3;
    } else {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      if (i + k >= s.size()) {
        ok = false;
        break;
      }
      unsigned char cc = static_cast<unsigned char>(s[i + k]);
      if ((cc >> 6) != 0x2) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::string encode_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

namespace {

bool is_upper_cp(char32_t c) {
  if (c >= U'A' && c <= U'Z') return true;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return true;
  // Ğ Ş İ and the other Latin Extended-A capitals sit on even code points.
  if (c >= 0x100 && c <= 0x17F) return c == 0x130 || (c % 2 == 0 && c != 0x138);
  return false;
}

bool is_lower_cp(char32_t c) {
  if (c >= U'a' && c <= U'z') return true;
  if (c >= 0xDF && c <= 0xFF && c != 0xF7) return true;
  if (c >= 0x100 && c <= 0x17F) return c == 0x131 || (c % 2 == 1);
  return false;
}

bool is_letter_cp(char32_t c) {
  if (is_upper_cp(c) || is_lower_cp(c)) return true;
  // Anything beyond Latin Extended-A (Cyrillic, CJK, ...) counts as a
  // letter except the general punctuation and symbol blocks.
  if (c >= 0x180 && !(c >= 0x2000 && c <= 0x2BFF) && c != 0xFFFD &&
      !(c >= 0x1F000 && c <= 0x1FAFF))
    return true;
  return false;
}

}  // namespace

std::string to_lower(std::string_view s, bool turkish) {
  std::u32string cps = decode_utf8(s);
  for (char32_t& c : cps) {
    if (turkish && c == U'I') {
      c = 0x131;
    } else if (c == 0x130) {
      c = U'i';
    } else if (c >= U'A' && c <= U'Z') {
      c = c + 32;
    } else if (c >= 0xC0 && c <= 0xDE && c != 0xD7) {
      c = c + 32;
    } else if (c >= 0x100 && c <= 0x17F && c != 0x130 && c != 0x131 &&
               c % 2 == 0 && c != 0x138) {
      c = c + 1;
    }
  }
  return encode_utf8(cps);
}

bool has_letter(std::string_view s) {
  for (char32_t c : decode_utf8(s))
    if (is_letter_cp(c)) return true;
  return false;
}

bool is_all_upper(std::string_view s) {
  bool any = false;
  for (char32_t c : decode_utf8(s)) {
    if (is_lower_cp(c)) return false;
    if (is_upper_cp(c)) any = true;
  }
  return any;
}

bool is_punctuation(std::string_view s) {
  if (s.empty()) return false;
  for (char32_t c : decode_utf8(s)) {
    if (is_letter_cp(c)) return false;
    if (c >= U'0' && c <= U'9') return false;
  }
  return true;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace sentikit::text
