#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cca {

// Separator characters substituted with spaces before tokenization.
// The default set is comma, period, semicolon and colon; everything else
// (quotes, parentheses, hyphens, apostrophes, digits) stays inside tokens.
inline constexpr std::string_view kDefaultSeparators = ",.;:";

// A citance reduced to an ordered list of lowercase tokens.
struct TokenizedCitance {
  std::vector<std::string> tokens;

  bool empty() const { return tokens.empty(); }
  std::size_t size() const { return tokens.size(); }
};

// Lowercases a UTF-8 string. Covers ASCII, Latin-1 supplement, Latin
// Extended-A, Greek and Cyrillic; other code points and malformed byte
// sequences pass through unchanged.
std::string fold_case(std::string_view text);

// Replaces every separator with a space, folds case, and splits on runs of
// whitespace. Empty input yields an empty token list.
TokenizedCitance normalize(std::string_view text,
                           std::string_view separators = kDefaultSeparators);

// Exact token counts over a set of citances.
struct FrequencyTable {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total_tokens = 0;

  void add(const TokenizedCitance& citance);
  void merge(const FrequencyTable& other);

  // Entries sorted by count descending, then token ascending.
  std::vector<std::pair<std::string, std::uint64_t>> ranked() const;
};

FrequencyTable word_frequency(std::span<const TokenizedCitance> citances);

}  // namespace cca
