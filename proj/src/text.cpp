#include "editwire/text.hpp"

#include <cctype>
#include <cstdint>

#include "editwire/common.hpp"

namespace editwire {

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '\'' || c >= 0x80;
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

void append_utf8(std::string& out, std::uint32_t cp) {
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

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
  }
  return out;
}

std::string remove_refs_and_comments(std::string_view s) {
  std::string out;
  std::string lower = to_lower_ascii(s);
  std::size_t i = 0;
  while (i < s.size()) {
    if (lower.compare(i, 4, "<!--") == 0) {
      auto end = lower.find("-->", i + 4);
      i = end == std::string::npos ? s.size() : end + 3;
      continue;
    }
    if (lower.compare(i, 4, "<ref") == 0 &&
        (i + 4 == s.size() || s[i + 4] == '>' || s[i + 4] == '/' || is_space(s[i + 4]))) {
      auto tag_end = lower.find('>', i);
      if (tag_end == std::string::npos) {
        i = s.size();
        continue;
      }
      if (lower[tag_end - 1] == '/') {
        i = tag_end + 1;
        continue;
      }
      auto close = lower.find("</ref>", tag_end);
      i = close == std::string::npos ? s.size() : close + 6;
      continue;
    }
    out.push_back(s[i]);
    ++i;
  }
  return out;
}

std::string remove_templates(std::string_view s) {
  std::string out;
  int depth = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, 2, "{{") == 0) {
      ++depth;
      i += 2;
    } else if (s.compare(i, 2, "}}") == 0) {
      if (depth > 0) --depth;
      i += 2;
    } else {
      if (depth == 0) out.push_back(s[i]);
      ++i;
    }
  }
  return out;
}

std::string replace_links(std::string_view s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, 2, "[[") == 0) {
      auto close = s.find("]]", i + 2);
      if (close == std::string_view::npos) {
        i += 2;
        continue;
      }
      std::string inner(s.substr(i + 2, close - i - 2));
      std::string head = trim(inner);
      if (starts_with_ci(head, "category:") || starts_with_ci(head, "file:") ||
          starts_with_ci(head, "image:")) {
        // dropped entirely
      } else if (auto bar = inner.rfind('|'); bar != std::string::npos) {
        out += inner.substr(bar + 1);
      } else {
        out += inner;
      }
      i = close + 2;
      continue;
    }
    if (s[i] == '[' && (s.compare(i + 1, 7, "http://") == 0 || s.compare(i + 1, 8, "https://") == 0 ||
                        s.compare(i + 1, 2, "//") == 0)) {
      auto close = s.find(']', i);
      if (close == std::string_view::npos) {
        ++i;
        continue;
      }
      std::string_view inner = s.substr(i + 1, close - i - 1);
      auto space = inner.find(' ');
      if (space != std::string_view::npos) out += inner.substr(space + 1);
      i = close + 1;
      continue;
    }
    out.push_back(s[i]);
    ++i;
  }
  return out;
}

std::string remove_emphasis(std::string_view s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '\'') {
      std::size_t j = i;
      while (j < s.size() && s[j] == '\'') ++j;
      if (j - i >= 2) {
        i = j;
        continue;
      }
    }
    out.push_back(s[i]);
    ++i;
  }
  return out;
}

std::string strip_heading_markers(std::string_view s) {
  std::string out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto nl = s.find('\n', start);
    std::size_t end = nl == std::string_view::npos ? s.size() : nl;
    std::string line = trim(s.substr(start, end - start));
    if (line.size() >= 2 && line.front() == '=' && line.back() == '=') {
      std::size_t b = 0, e = line.size();
      while (b < e && line[b] == '=') ++b;
      while (e > b && line[e - 1] == '=') --e;
      line = trim(std::string_view(line).substr(b, e - b));
    }
    out += line;
    if (nl == std::string_view::npos) break;
    out.push_back('\n');
    start = nl + 1;
  }
  return out;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  for (unsigned char c : text) {
    if (!is_word_byte(c)) {
      flush();
      continue;
    }
    if (c == '\'') continue;  // the run continues, the apostrophe is dropped
    if (c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
    current.push_back(static_cast<char>(c));
  }
  flush();
  return out;
}

const std::set<std::string, std::less<>>& default_stopwords() {
  static const std::set<std::string, std::less<>> kStopwords = {
      "a",       "about",   "above",  "after",  "again",   "against", "all",     "also",
      "am",      "an",      "and",    "any",    "are",     "arent",   "as",      "at",
      "be",      "because", "been",   "before", "being",   "below",   "between", "both",
      "but",     "by",      "can",    "cant",   "could",   "couldnt", "did",     "didnt",
      "do",      "does",    "doesnt", "doing",  "dont",    "down",    "during",  "each",
      "few",     "for",     "from",   "further", "had",    "has",     "hasnt",   "have",
      "havent",  "having",  "he",     "her",    "here",    "hers",    "herself", "him",
      "himself", "his",     "how",    "i",      "if",      "in",      "into",    "is",
      "isnt",    "it",      "its",    "itself", "just",    "me",      "more",    "most",
      "my",      "myself",  "no",     "nor",    "not",     "now",     "of",      "off",
      "on",      "once",    "only",   "or",     "other",   "our",     "ours",    "out",
      "over",    "own",     "s",      "said",   "same",    "she",     "should",  "so",
      "some",    "such",    "t",      "than",   "that",    "the",     "their",   "theirs",
      "them",    "then",    "there",  "these",  "they",    "this",    "those",   "through",
      "to",      "too",     "under",  "until",  "up",      "very",    "was",     "wasnt",
      "we",      "were",    "werent", "what",   "when",    "where",   "which",   "while",
      "who",     "whom",    "why",    "will",   "with",    "wont",    "would",   "you",
      "your",    "yours",   "yourself",
  };
  return kStopwords;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if ((c == '.' || c == '!' || c == '?') && (i + 1 == text.size() || is_space(text[i + 1]))) {
      std::string s = trim(text.substr(start, i + 1 - start));
      if (!s.empty()) out.push_back(std::move(s));
      start = i + 1;
    }
  }
  if (start < text.size()) {
    std::string s = trim(text.substr(start));
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

std::string strip_html_tags(std::string_view html) {
  std::string out;
  std::size_t i = 0;
  while (i < html.size()) {
    if (html[i] == '<' && i + 1 < html.size() &&
        (std::isalpha(static_cast<unsigned char>(html[i + 1])) || html[i + 1] == '/' ||
         html[i + 1] == '!')) {
      auto end = html.find('>', i);
      if (end == std::string_view::npos) break;
      i = end + 1;
      continue;
    }
    out.push_back(html[i]);
    ++i;
  }
  return out;
}

std::string decode_html_entities(std::string_view text) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '&') {
      auto semi = text.find(';', i);
      if (semi != std::string_view::npos && semi - i <= 10) {
        std::string_view name = text.substr(i + 1, semi - i - 1);
        std::string rep;
        if (name == "amp") rep = "&";
        else if (name == "lt") rep = "<";
        else if (name == "gt") rep = ">";
        else if (name == "quot") rep = "\"";
        else if (name == "apos") rep = "'";
        else if (name == "nbsp") rep = " ";
        else if (name.size() > 1 && name[0] == '#') {
          std::uint32_t cp = 0;
          bool ok = true;
          bool hex = name[1] == 'x' || name[1] == 'X';
          for (std::size_t k = hex ? 2 : 1; k < name.size(); ++k) {
            char c = name[k];
            int d;
            if (c >= '0' && c <= '9') d = c - '0';
            else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
            else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
            else {
              ok = false;
              break;
            }
            cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
            if (cp > 0x10FFFF) ok = false;
          }
          if (ok && name.size() > (hex ? 2u : 1u)) append_utf8(rep, cp);
        }
        if (!rep.empty()) {
          out += rep;
          i = semi + 1;
          continue;
        }
      }
    }
    out.push_back(text[i]);
    ++i;
  }
  return out;
}

std::string clean_wikitext(std::string_view text) {
  std::string s = remove_refs_and_comments(text);
  s = remove_templates(s);
  s = replace_links(s);
  s = remove_emphasis(s);
  s = strip_html_tags(s);
  s = decode_html_entities(s);
  s = strip_heading_markers(s);
  return collapse_whitespace(s);
}

}  // namespace editwire
