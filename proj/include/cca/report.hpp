#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "cca/corpus.hpp"
#include "cca/stats.hpp"
#include "cca/textnorm.hpp"

namespace cca {

enum class Format { csv, markdown, structured };

// Throws ConfigError on unknown names.
Format parse_format(std::string_view name);

// Percentage of num/den rounded half-up to two decimals, computed in exact
// integer arithmetic. Empty string when den is zero (undefined, not 0.00).
std::string format_pct(std::uint64_t num, std::uint64_t den);

// Deterministic, locale-independent renderings. Concept rows carry an "n"
// and a "pct" sub-row; totals and case counts follow; the notes block lists
// per-concept tests and then the overall test.
std::string render(const MultiResponseTable& table,
                   std::span<const TestResult> tests, Format format);
std::string render(const UncertaintyTable& table,
                   const std::optional<TestResult>& test, Format format);
std::string render(const ComparisonTable& table, const TestResult& test,
                   Format format);

// Rebuilds a table from its structured rendering; counts round-trip exactly.
MultiResponseTable parse_multi_response(const std::string& structured_text);

// CSV helpers for the remaining CLI surfaces.
std::string render_frequency_csv(const FrequencyTable& table);
std::string render_match_matrix_csv(const MatchMatrix& matrix);
std::string render_ingest_report(const IngestReport& report);

}  // namespace cca
