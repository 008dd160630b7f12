#pragma once

// Independently written matcher used as an oracle: byte-level Latin-1 case
// folding, separator substitution and window matching are all reimplemented
// from scratch, sharing no code with the library.

#include <string>
#include <vector>

namespace naive {

inline std::string lower(const std::string& text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    unsigned char b = static_cast<unsigned char>(text[i]);
    if (b >= 'A' && b <= 'Z') {
      out.push_back(static_cast<char>(b + 32));
    } else if (b == 0xC3 && i + 1 < text.size()) {
      unsigned char next = static_cast<unsigned char>(text[i + 1]);
      // Latin-1 uppercase block in UTF-8; the second byte moves by 0x20.
      if (next >= 0x80 && next <= 0x9E && next != 0x97) next += 0x20;
      out.push_back(static_cast<char>(b));
      out.push_back(static_cast<char>(next));
      ++i;
    } else {
      out.push_back(static_cast<char>(b));
    }
  }
  return out;
}

inline std::vector<std::string> tokenize(const std::string& text) {
  std::string folded = lower(text);
  std::vector<std::string> tokens;
  std::string current;
  for (char c : folded) {
    if (c == ',' || c == '.' || c == ';' || c == ':' || c == ' ' ||
        c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      if (!current.empty()) {
        tokens.push_back(current);
        current.clear();
      }
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) tokens.push_back(current);
  return tokens;
}

inline bool word_matches(const std::string& word, const std::string& token) {
  if (!word.empty() && word.back() == '*') {
    const std::string prefix = word.substr(0, word.size() - 1);
    return token.size() >= prefix.size() &&
           token.compare(0, prefix.size(), prefix) == 0;
  }
  return word == token;
}

inline std::vector<std::string> split_words(const std::string& term) {
  std::vector<std::string> words;
  std::string current;
  for (char c : term) {
    if (c == ' ') {
      if (!current.empty()) {
        words.push_back(current);
        current.clear();
      }
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) words.push_back(current);
  return words;
}

inline bool term_occurs(const std::vector<std::string>& tokens,
                        const std::string& term) {
  const std::vector<std::string> words = split_words(lower(term));
  if (words.empty() || tokens.size() < words.size()) return false;
  for (std::size_t start = 0; start + words.size() <= tokens.size(); ++start) {
    bool ok = true;
    for (std::size_t k = 0; k < words.size(); ++k) {
      if (!word_matches(words[k], tokens[start + k])) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

// terms use the same source syntax as the lexicon files ("falsif*",
// "normal science"); exclusions are literal phrases.
inline bool match(const std::string& text,
                  const std::vector<std::string>& terms,
                  const std::vector<std::string>& exclusions) {
  const std::vector<std::string> tokens = tokenize(text);
  bool hit = false;
  for (const auto& term : terms) {
    if (term_occurs(tokens, term)) {
      hit = true;
      break;
    }
  }
  if (!hit) return false;
  for (const auto& phrase : exclusions) {
    // Exclusion phrases are exact token runs, no truncation.
    const std::vector<std::string> words = split_words(lower(phrase));
    if (tokens.size() < words.size()) continue;
    for (std::size_t start = 0; start + words.size() <= tokens.size();
         ++start) {
      bool all = true;
      for (std::size_t k = 0; k < words.size(); ++k) {
        if (words[k] != tokens[start + k]) {
          all = false;
          break;
        }
      }
      if (all) return false;
    }
  }
  return true;
}

inline bool hedge(const std::string& text,
                  const std::vector<std::string>& hedge_terms) {
  const std::vector<std::string> tokens = tokenize(text);
  for (const auto& term : hedge_terms) {
    for (const auto& token : tokens) {
      if (token == term) return true;
    }
  }
  return false;
}

}  // namespace naive
