"""Citation concept analysis: concept-lexicon matching over citances and
multiple-response statistics."""

from cca._core import (
    ComparisonTable,
    ConceptLexicon,
    ConfigError,
    Corpus,
    DataError,
    HedgeLexicon,
    MatchMatrix,
    MultiResponseTable,
    TestResult,
    UncertaintyTable,
    __version__,
    bin_periods,
    build_matrix,
    builtin_hedges,
    builtin_lexicon,
    chi2_survival,
    compare,
    load_corpus,
    normalize,
    overall_test,
    parse_multi_response,
    per_item_tests,
    render,
    render_comparison,
    render_uncertainty,
    tabulate,
    uncertainty,
    word_frequency,
)

__all__ = [
    "ComparisonTable",
    "ConceptLexicon",
    "ConfigError",
    "Corpus",
    "DataError",
    "HedgeLexicon",
    "MatchMatrix",
    "MultiResponseTable",
    "TestResult",
    "UncertaintyTable",
    "__version__",
    "bin_periods",
    "build_matrix",
    "builtin_hedges",
    "builtin_lexicon",
    "chi2_survival",
    "compare",
    "load_corpus",
    "normalize",
    "overall_test",
    "parse_multi_response",
    "per_item_tests",
    "render",
    "render_comparison",
    "render_uncertainty",
    "tabulate",
    "uncertainty",
    "word_frequency",
]
