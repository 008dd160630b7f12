#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cca/corpus.hpp"
#include "cca/textnorm.hpp"

namespace cca {

// How a single pattern element matches a token.
enum class TokenMatch { exact, prefix };

struct PatternElement {
  std::string token;
  TokenMatch mode = TokenMatch::exact;

  bool matches(std::string_view candidate) const;
};

// A compiled search term. One element is a plain token pattern; two or more
// form a phrase that must match a consecutive token run.
struct Pattern {
  std::vector<PatternElement> elements;

  bool is_phrase() const { return elements.size() >= 2; }
};

// Compiles a search term. A trailing asterisk on a word makes that element a
// prefix match ("falsif*" matches "falsified"); an asterisk anywhere else is
// a configuration error. Multi-word sources compile to phrases, each word
// handled the same way.
Pattern compile_pattern(std::string_view source,
                        std::string_view separators = kDefaultSeparators);

struct Concept {
  std::string name;
  std::vector<Pattern> patterns;
  // Normalized token sequences; a citance containing any of these as a
  // consecutive run is excluded from this concept's matches.
  std::vector<std::vector<std::string>> exclusion_phrases;
};

struct ConceptLexicon {
  std::string work_id;
  std::vector<Concept> concepts;

  const Concept* find(std::string_view name) const;

  // Loads a JSON lexicon:
  //   {"work": str, "concepts": [{"name", "patterns": [...], "exclude": [...]}]}
  static ConceptLexicon load(const std::string& path);
  static ConceptLexicon from_json_text(const std::string& text);
};

struct HedgeLexicon {
  std::vector<std::string> terms;  // exact tokens, sorted, unique

  bool contains(std::string_view token) const;

  // Plain text, one token per line; blank lines and '#' comments skipped.
  static HedgeLexicon load(const std::string& path);
  static HedgeLexicon from_terms(std::vector<std::string> terms);
};

// True iff some pattern matches the token list and no exclusion phrase
// occurs as a consecutive token run.
bool match_citance(const TokenizedCitance& citance, const Concept& concept_def);

// True iff any token equals a hedge term exactly. No prefix matching.
bool detect_hedges(const TokenizedCitance& citance, const HedgeLexicon& hedges);

// Per-case binary outcome of matching a lexicon against all citances.
// Concept flags are bit positions in lexicon order.
struct MatchMatrix {
  struct Row {
    std::string record_id;
    std::string fos;
    int year = 0;
    std::uint32_t mentions = 0;
    std::uint32_t hedged = 0;  // subset of mentions

    bool mentioned(std::size_t concept_index) const {
      return mentions >> concept_index & 1u;
    }
    bool hedged_mention(std::size_t concept_index) const {
      return hedged >> concept_index & 1u;
    }
  };

  std::string work_id;
  std::vector<std::string> concepts;  // lexicon order
  std::vector<Row> rows;
};

// mentioned(c) = OR over citances of match_citance; hedged(c) = OR over
// citances of (match AND hedge in the same citance). Throws ConfigError for
// lexicons with more than 32 concepts.
MatchMatrix build_match_matrix(std::span<const AnalysisCase> cases,
                               const ConceptLexicon& lexicon,
                               const HedgeLexicon& hedges,
                               std::string_view separators = kDefaultSeparators);

}  // namespace cca
