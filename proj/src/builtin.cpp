#include "cca/builtin.hpp"

#include <algorithm>

namespace cca::builtin {

namespace {

constexpr const char* kKuhnTitle = "the structure of scientific revolutions";

Concept make_concept(std::string name, std::vector<std::string> sources,
                     std::vector<std::string> exclusions = {}) {
  Concept concept_def;
  concept_def.name = std::move(name);
  for (const auto& source : sources) {
    concept_def.patterns.push_back(compile_pattern(source));
  }
  for (const auto& phrase : exclusions) {
    concept_def.exclusion_phrases.push_back(normalize(phrase).tokens);
  }
  return concept_def;
}

}  // namespace

WorkRegistry registry() {
  WorkRegistry registry;
  registry.add(CitedWork{
      "kuhn",
      "The Structure of Scientific Revolutions",
      {kKuhnTitle}});
  registry.add(CitedWork{
      "popper",
      "The Logic of Scientific Discovery / Conjectures and Refutations",
      {"the logic of scientific discovery",
       "logik der forschung",
       "conjectures and refutations the growth of scientific knowledge"}});
  return registry;
}

ConceptLexicon kuhn() {
  ConceptLexicon lexicon;
  lexicon.work_id = "kuhn";
  lexicon.concepts = {
      make_concept("scientific revolution", {"scientific revolution*"},
                   {kKuhnTitle}),
      make_concept("paradigm", {"paradigm*"}),
      make_concept("normal science", {"normal science"}),
      make_concept("structure", {"structure"}, {kKuhnTitle}),
      make_concept("anomaly", {"anomalies", "anomaly", "anomaliety"}),
      make_concept("incommensurability",
                   {"incommensurability", "incommensurable"}),
      make_concept("crisis", {"crisis", "crises"}),
  };
  return lexicon;
}

ConceptLexicon popper() {
  ConceptLexicon lexicon;
  lexicon.work_id = "popper";
  lexicon.concepts = {
      make_concept("induction", {"induction", "induktion"}),
      make_concept("falsification", {"falsif*"}),
      make_concept("demarcation", {"demarcation", "abgrenzung"}),
      make_concept("corroboration",
                   {"corroborate", "bestätigen", "bestatigen", "bestaetigen",
                    "corroboration", "bestätigung", "bestatigung",
                    "bestaetigung"}),
      make_concept("probability", {"probability", "wahrscheinlichkeit"}),
  };
  return lexicon;
}

ConceptLexicon popper_report() {
  ConceptLexicon lexicon = popper();
  auto& concepts = lexicon.concepts;
  concepts.erase(std::remove_if(concepts.begin(), concepts.end(),
                                [](const Concept& c) {
                                  return c.name == "probability";
                                }),
                 concepts.end());
  return lexicon;
}

HedgeLexicon hedges() {
  return HedgeLexicon::from_terms({"like", "may", "could", "questions",
                                   "might", "potential", "seems", "perhaps",
                                   "likely", "sometimes"});
}

bool lexicon_by_name(std::string_view name, ConceptLexicon* out) {
  if (name == "kuhn") {
    *out = kuhn();
  } else if (name == "popper") {
    *out = popper();
  } else if (name == "popper-report") {
    *out = popper_report();
  } else {
    return false;
  }
  return true;
}

}  // namespace cca::builtin
