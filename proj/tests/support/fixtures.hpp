#pragma once

// Fixture corpora reconstructed from the reference marginals. Mentions are
// spread greedily so every case mentions at least one concept; hedged counts
// are recovered from printed rates by unique-integer rounding.

#include <cstdint>
#include <string>
#include <vector>

#include "cca/corpus.hpp"
#include "cca/matcher.hpp"

#include "reference_tables.hpp"

namespace fixtures {

// The unique h in [0, mentions] whose percentage 100*h/mentions rounds
// half-up to the printed two-decimal rate. Throws if zero or several
// candidates exist.
std::uint64_t recover_hedged(std::uint64_t mentions, double printed_rate);

struct FixtureCase {
  std::string record_id;
  std::string fos;
  int year = 0;
  std::uint32_t mention_mask = 0;  // bits follow the reference concept order
  std::uint32_t hedge_mask = 0;
};

struct FixtureCorpus {
  reference::MarginalTable source;
  std::vector<FixtureCase> cases;

  std::string jsonl() const;
  cca::IngestResult ingest() const;        // through the real ingestion path
  cca::MatchMatrix matrix() const;         // full pipeline with builtin lexicons
};

// Assigns concept mentions so that per-group counts and case counts equal
// the marginals. Group years cycle over several periods when the table has
// no period axis, so the same fixture can be regrouped by time.
FixtureCorpus build_fixture(const reference::MarginalTable& table);

// Distributes hedged mentions over cases; hedged[c][g] <= mentions[c][g].
void apply_hedges(FixtureCorpus* fixture,
                  const std::vector<std::vector<std::uint64_t>>& hedged);

// Hedged counts for tables whose rates are printed for a subset of groups
// plus all-group totals; the remainder is spread over the other groups.
std::vector<std::vector<std::uint64_t>> solve_hedges_subset(
    const reference::MarginalTable& table, const reference::HedgeRates& rates);

// Hedged counts from per-concept row totals and per-group column totals
// under per-cell caps.
std::vector<std::vector<std::uint64_t>> solve_hedges_margins(
    const reference::MarginalTable& table,
    const std::vector<std::uint64_t>& row_totals,
    const std::vector<std::uint64_t>& col_totals);

}  // namespace fixtures
