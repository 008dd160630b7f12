#include "cca/matcher.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <json.hpp>

#include "cca/errors.hpp"

namespace cca {

using nlohmann::json;

bool PatternElement::matches(std::string_view candidate) const {
  if (mode == TokenMatch::exact) return candidate == token;
  return candidate.size() >= token.size() &&
         candidate.substr(0, token.size()) == token;
}

Pattern compile_pattern(std::string_view source, std::string_view separators) {
  TokenizedCitance words = normalize(source, separators);
  if (words.empty()) {
    throw ConfigError("pattern is empty after normalization: \"" +
                      std::string(source) + "\"");
  }
  Pattern pattern;
  for (const std::string& word : words.tokens) {
    PatternElement element;
    auto star = word.find('*');
    if (star == std::string::npos) {
      element.token = word;
      element.mode = TokenMatch::exact;
    } else if (star == word.size() - 1 && word.size() > 1) {
      element.token = word.substr(0, word.size() - 1);
      element.mode = TokenMatch::prefix;
    } else {
      throw ConfigError(
          "truncation symbol only allowed at the end of a word: \"" +
          std::string(source) + "\"");
    }
    pattern.elements.push_back(std::move(element));
  }
  return pattern;
}

const Concept* ConceptLexicon::find(std::string_view name) const {
  for (const auto& concept_def : concepts) {
    if (concept_def.name == name) return &concept_def;
  }
  return nullptr;
}

ConceptLexicon ConceptLexicon::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("lexicon: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("work") || !doc["work"].is_string() ||
      !doc.contains("concepts") || !doc["concepts"].is_array()) {
    throw ConfigError("lexicon: expected {\"work\": str, \"concepts\": [...]}");
  }
  ConceptLexicon lexicon;
  lexicon.work_id = doc["work"].get<std::string>();
  std::set<std::string> names;
  for (const auto& entry : doc["concepts"]) {
    if (!entry.is_object() || !entry.contains("name") ||
        !entry["name"].is_string() || !entry.contains("patterns") ||
        !entry["patterns"].is_array()) {
      throw ConfigError("lexicon: concepts need \"name\" and \"patterns\"");
    }
    Concept concept_def;
    concept_def.name = entry["name"].get<std::string>();
    if (!names.insert(concept_def.name).second) {
      throw ConfigError("lexicon: duplicate concept name: " + concept_def.name);
    }
    for (const auto& p : entry["patterns"]) {
      concept_def.patterns.push_back(compile_pattern(p.get<std::string>()));
    }
    if (concept_def.patterns.empty()) {
      throw ConfigError("lexicon: concept " + concept_def.name + " has no patterns");
    }
    if (entry.contains("exclude")) {
      for (const auto& phrase : entry["exclude"]) {
        auto tokens = normalize(phrase.get<std::string>()).tokens;
        if (!tokens.empty()) concept_def.exclusion_phrases.push_back(tokens);
      }
    }
    lexicon.concepts.push_back(std::move(concept_def));
  }
  if (lexicon.concepts.empty()) throw ConfigError("lexicon has no concepts");
  return lexicon;
}

ConceptLexicon ConceptLexicon::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lexicon: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return from_json_text(text);
}

bool HedgeLexicon::contains(std::string_view token) const {
  return std::binary_search(terms.begin(), terms.end(), token);
}

HedgeLexicon HedgeLexicon::from_terms(std::vector<std::string> raw) {
  HedgeLexicon hedges;
  for (auto& term : raw) {
    auto tokens = normalize(term).tokens;
    if (tokens.size() != 1) {
      throw ConfigError("hedge terms must be single tokens: \"" + term + "\"");
    }
    hedges.terms.push_back(tokens.front());
  }
  std::sort(hedges.terms.begin(), hedges.terms.end());
  hedges.terms.erase(std::unique(hedges.terms.begin(), hedges.terms.end()),
                     hedges.terms.end());
  return hedges;
}

HedgeLexicon HedgeLexicon::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open hedge list: " + path);
  std::vector<std::string> raw;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    auto tokens = normalize(line).tokens;
    if (tokens.empty()) continue;
    if (tokens.size() > 1) {
      throw ConfigError("hedge list: one token per line, got \"" + line + "\"");
    }
    raw.push_back(tokens.front());
  }
  return from_terms(std::move(raw));
}

namespace {

bool phrase_occurs(std::span<const std::string> tokens,
                   std::span<const std::string> phrase) {
  if (phrase.empty() || tokens.size() < phrase.size()) return false;
  for (std::size_t start = 0; start + phrase.size() <= tokens.size(); ++start) {
    bool all = true;
    for (std::size_t k = 0; k < phrase.size(); ++k) {
      if (tokens[start + k] != phrase[k]) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

bool pattern_occurs(std::span<const std::string> tokens,
                    const Pattern& pattern) {
  const auto& elements = pattern.elements;
  if (elements.empty() || tokens.size() < elements.size()) return false;
  for (std::size_t start = 0; start + elements.size() <= tokens.size();
       ++start) {
    bool all = true;
    for (std::size_t k = 0; k < elements.size(); ++k) {
      if (!elements[k].matches(tokens[start + k])) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

}  // namespace

bool match_citance(const TokenizedCitance& citance, const Concept& concept_def) {
  bool any = std::any_of(
      concept_def.patterns.begin(), concept_def.patterns.end(),
      [&](const Pattern& p) { return pattern_occurs(citance.tokens, p); });
  if (!any) return false;
  for (const auto& phrase : concept_def.exclusion_phrases) {
    if (phrase_occurs(citance.tokens, phrase)) return false;
  }
  return true;
}

bool detect_hedges(const TokenizedCitance& citance, const HedgeLexicon& hedges) {
  return std::any_of(citance.tokens.begin(), citance.tokens.end(),
                     [&](const std::string& t) { return hedges.contains(t); });
}

MatchMatrix build_match_matrix(std::span<const AnalysisCase> cases,
                               const ConceptLexicon& lexicon,
                               const HedgeLexicon& hedges,
                               std::string_view separators) {
  if (lexicon.concepts.size() > 32) {
    throw ConfigError("lexicons are limited to 32 concepts");
  }
  MatchMatrix matrix;
  matrix.work_id = lexicon.work_id;
  matrix.concepts.reserve(lexicon.concepts.size());
  for (const auto& concept_def : lexicon.concepts) {
    matrix.concepts.push_back(concept_def.name);
  }
  matrix.rows.reserve(cases.size());
  for (const auto& analysis_case : cases) {
    MatchMatrix::Row row;
    row.record_id = analysis_case.record_id;
    row.fos = analysis_case.fos;
    row.year = analysis_case.year;
    for (const auto& text : analysis_case.citances) {
      TokenizedCitance tokens = normalize(text, separators);
      bool hedge_here = detect_hedges(tokens, hedges);
      for (std::size_t c = 0; c < lexicon.concepts.size(); ++c) {
        if (match_citance(tokens, lexicon.concepts[c])) {
          row.mentions |= 1u << c;
          if (hedge_here) row.hedged |= 1u << c;
        }
      }
    }
    matrix.rows.push_back(std::move(row));
  }
  return matrix;
}

}  // namespace cca
