#include "cca/textnorm.hpp"

#include <algorithm>

namespace cca {
namespace {

// Simple one-to-one case folding for the Latin, Greek and Cyrillic ranges.
char32_t fold_code_point(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
  if (cp < 0x80) return cp;
  // Latin-1 supplement: À..Þ map to à..þ, skipping the multiplication sign.
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 0x20;
  // Latin Extended-A: alternating upper/lower pairs.
  if ((cp >= 0x0100 && cp <= 0x0137) || (cp >= 0x014A && cp <= 0x0177)) {
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  if ((cp >= 0x0139 && cp <= 0x0148) || (cp >= 0x0179 && cp <= 0x017E)) {
    return (cp % 2 == 1) ? cp + 1 : cp;
  }
  if (cp == 0x0178) return 0x00FF;  // Ÿ -> ÿ
  if (cp == 0x1E9E) return 0x00DF;  // ẞ -> ß
  // Greek.
  if (cp == 0x0386) return 0x03AC;
  if (cp >= 0x0388 && cp <= 0x038A) return cp + 0x25;
  if (cp == 0x038C) return 0x03CC;
  if (cp == 0x038E || cp == 0x038F) return cp + 0x3F;
  if (cp >= 0x0391 && cp <= 0x03A9 && cp != 0x03A2) return cp + 0x20;
  // Cyrillic.
  if (cp >= 0x0410 && cp <= 0x042F) return cp + 0x20;
  if (cp >= 0x0400 && cp <= 0x040F) return cp + 0x50;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
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

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace

std::string fold_case(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char b0 = static_cast<unsigned char>(text[i]);
    if (b0 < 0x80) {
      out.push_back(static_cast<char>(fold_code_point(b0)));
      ++i;
      continue;
    }
    // Decode one multi-byte sequence; copy malformed bytes verbatim.
    int len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    }
    bool ok = len > 0 && i + len <= text.size();
    for (int k = 1; ok && k < len; ++k) {
      unsigned char bk = static_cast<unsigned char>(text[i + k]);
      if ((bk & 0xC0) != 0x80) {
        ok = false;
      } else {
        cp = (cp << 6) | (bk & 0x3F);
      }
    }
    if (!ok) {
      out.push_back(text[i]);
      ++i;
      continue;
    }
    append_utf8(out, fold_code_point(cp));
    i += len;
  }
  return out;
}

TokenizedCitance normalize(std::string_view text, std::string_view separators) {
  std::string folded = fold_case(text);
  for (char& c : folded) {
    if (separators.find(c) != std::string_view::npos) c = ' ';
  }
  TokenizedCitance result;
  std::size_t i = 0;
  while (i < folded.size()) {
    while (i < folded.size() && is_ascii_space(folded[i])) ++i;
    std::size_t start = i;
    while (i < folded.size() && !is_ascii_space(folded[i])) ++i;
    if (i > start) result.tokens.emplace_back(folded.substr(start, i - start));
  }
  return result;
}

void FrequencyTable::add(const TokenizedCitance& citance) {
  for (const auto& token : citance.tokens) {
    ++counts[token];
    ++total_tokens;
  }
}

void FrequencyTable::merge(const FrequencyTable& other) {
  for (const auto& [token, count] : other.counts) counts[token] += count;
  total_tokens += other.total_tokens;
}

std::vector<std::pair<std::string, std::uint64_t>> FrequencyTable::ranked()
    const {
  std::vector<std::pair<std::string, std::uint64_t>> out(counts.begin(),
                                                         counts.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

FrequencyTable word_frequency(std::span<const TokenizedCitance> citances) {
  FrequencyTable table;
  for (const auto& citance : citances) table.add(citance);
  return table;
}

}  // namespace cca
