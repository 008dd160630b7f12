#pragma once

#include <string_view>

#include "cca/corpus.hpp"
#include "cca/matcher.hpp"

namespace cca::builtin {

// Work registry for the bundled Kuhn and Popper case studies.
WorkRegistry registry();

// Concept lexicon for "The Structure of Scientific Revolutions".
// The "scientific revolution" and "structure" concepts exclude citances
// containing the book title itself.
ConceptLexicon kuhn();

// Concept lexicon for Popper's "The Logic of Scientific Discovery" /
// "Logik der Forschung" / "Conjectures and Refutations" (one unit).
ConceptLexicon popper();

// Same as popper() minus the "probability" concept; the preset used by the
// bundled case-study reports.
ConceptLexicon popper_report();

// The default hedging lexicon used for uncertainty measurement.
HedgeLexicon hedges();

// Resolves a builtin lexicon name ("kuhn", "popper", "popper-report"), or
// returns false if the name is not builtin.
bool lexicon_by_name(std::string_view name, ConceptLexicon* out);

}  // namespace cca::builtin
