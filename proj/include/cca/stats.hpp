#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cca/matcher.hpp"

namespace cca {

// Ascending year boundaries splitting the time axis into half-open bins:
// years below the first edge, one bin per consecutive edge pair, and an
// open final bin whose label is capped at the corpus maximum year.
struct PeriodBinning {
  std::vector<int> edges;
  std::vector<std::string> labels;

  std::size_t bin_of(int year) const;
  std::size_t bin_count() const { return labels.size(); }

  // Throws ConfigError unless edges are strictly ascending. Empty edges
  // produce a single all-years bin.
  static PeriodBinning make(std::span<const int> edges, int max_year);
};

// Maps each year to its bin; returns the binning plus one bin index per year.
std::pair<PeriodBinning, std::vector<std::size_t>> bin_periods(
    std::span<const int> years, std::span<const int> edges);

struct Grouping {
  enum class Kind { fos, period, none };
  Kind kind = Kind::fos;
  std::vector<int> period_edges;

  static Grouping by_fos() { return {Kind::fos, {}}; }
  static Grouping by_period(std::vector<int> edges) {
    return {Kind::period, std::move(edges)};
  }
  static Grouping none() { return {Kind::none, {}}; }

  const char* label() const;
};

// Multiple-response contingency table: mention counts per concept and group
// over cases with at least one mentioned concept. Column percentages may sum
// above 100 because one case can mention several concepts.
struct MultiResponseTable {
  std::string work_id;
  std::string grouping_label;
  std::vector<std::string> concepts;  // sorted by total mentions, descending
  std::vector<std::string> groups;
  std::vector<std::vector<std::uint64_t>> mention_counts;  // [concept][group]
  std::vector<std::uint64_t> case_counts;                  // [group]

  std::uint64_t concept_total(std::size_t c) const;
  std::uint64_t group_mention_total(std::size_t g) const;
  std::uint64_t grand_total() const;
  std::uint64_t total_cases() const;

  // 100*n/cases; NaN when the group has no cases.
  double pct(std::size_t c, std::size_t g) const;
  double concept_total_pct(std::size_t c) const;
  double group_total_pct(std::size_t g) const;
  double grand_total_pct() const;

  bool empty() const { return concepts.empty() || total_cases() == 0; }
};

struct TestResult {
  std::string concept_name;  // empty for overall/comparison tests
  double statistic = 0.0;
  int df = 0;
  double p_raw = 1.0;
  std::optional<double> p_adjusted;
  std::string method;
  std::vector<std::string> warnings;
};

enum class Adjustment { bonferroni, none };

enum class OverallMode { pattern_df, monte_carlo };

struct McParams {
  int iterations = 10000;
  std::uint64_t seed = 0;
};

// Upper tail of the chi-square distribution.
double chi2_survival(double statistic, int df);

// Drops cases with no mentioned concept, counts mentions per concept and
// group, and sorts concepts by total mentions descending (ties keep lexicon
// order). Groups observed in the matrix stay in the table even when all of
// their cases were dropped.
MultiResponseTable tabulate(const MatchMatrix& matrix, const Grouping& grouping);

// One Pearson chi-square per concept on the 2xG table of [mentioned vs not]
// against groups, df = G-1 over groups with at least one case. Bonferroni
// multiplies each raw p by the number of concepts in the run, capped at 1.
std::vector<TestResult> per_item_chi2(const MultiResponseTable& table,
                                      Adjustment adjustment);
std::vector<TestResult> per_item_chi2(const MatchMatrix& matrix,
                                      const Grouping& grouping,
                                      Adjustment adjustment);

// Overall independence test of response pattern (the subset of concepts a
// case mentions) against group. pattern_df uses the classical chi-square
// with df = (#patterns-1)(#groups-1); monte_carlo permutes group labels
// with a seeded generator and reports the resampled p for the same
// statistic. Throws UndefinedTestError with fewer than two patterns or
// groups.
TestResult overall_chi2(const MatchMatrix& matrix, const Grouping& grouping,
                        OverallMode mode, const McParams& mc = {});

struct ComparisonRow {
  std::string group;
  std::uint64_t left_n = 0;
  std::uint64_t right_n = 0;
  double left_pct = 0.0;
  double right_pct = 0.0;
  double abs_diff = 0.0;
  std::string larger;  // tag of the side with the larger share; empty on ties
};

struct ComparisonTable {
  std::string left_label;
  std::string right_label;
  std::vector<ComparisonRow> rows;  // sorted by abs_diff descending
  std::uint64_t left_total = 0;
  std::uint64_t right_total = 0;
};

struct Comparison {
  ComparisonTable table;
  TestResult test;  // Pearson on the 2xG per-group mention totals, df = G-1
};

// Shares of each group in the two works' mention totals, over the union of
// the group axes (missing cells are zero). Throws UndefinedTestError when a
// grand total is zero.
Comparison compare_books(const MultiResponseTable& left,
                         const MultiResponseTable& right,
                         const std::string& left_tag,
                         const std::string& right_tag);

// Hedging-based uncertainty per concept and group. Groups whose total
// mention count is below min_total are hidden from the per-group columns
// but still contribute to the all-groups totals.
struct UncertaintyTable {
  std::string work_id;
  std::string grouping_label;
  std::vector<std::string> concepts;  // sorted by total mentions, descending
  std::vector<std::string> retained_groups;
  std::vector<std::vector<std::uint64_t>> mention_counts;  // [concept][group]
  std::vector<std::vector<std::uint64_t>> hedged_counts;   // [concept][group]
  std::vector<std::uint64_t> concept_total_mentions;       // all groups
  std::vector<std::uint64_t> concept_total_hedged;
  std::vector<std::uint64_t> group_total_mentions;  // per retained group
  std::vector<std::uint64_t> group_total_hedged;
  std::uint64_t grand_mentions = 0;  // all groups
  std::uint64_t grand_hedged = 0;
  std::uint64_t min_total = 0;

  // 100*h/n; NaN when n = 0 (undefined, distinct from a measured zero).
  static double rate(std::uint64_t hedged, std::uint64_t mentions);
};

struct UncertaintyResult {
  UncertaintyTable table;
  // Diagnostic Pearson chi-square on the hedged-count matrix over retained
  // groups; absent when fewer than two retained groups or degenerate.
  std::optional<TestResult> test;
};

UncertaintyResult uncertainty_rates(const MatchMatrix& matrix,
                                    const Grouping& grouping,
                                    std::uint64_t min_total);

}  // namespace cca
