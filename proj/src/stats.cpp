#include "cca/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include <boost/math/distributions/chi_squared.hpp>

#include "cca/errors.hpp"

namespace cca {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Bounded draw without modulo bias; deterministic across platforms.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

void fisher_yates(std::vector<std::uint32_t>& values, std::mt19937_64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::swap(values[i - 1], values[draw_below(rng, i)]);
  }
}

struct PearsonResult {
  double statistic = 0.0;
  int df = 0;
  int small_expected_cells = 0;
  int cells = 0;
  bool degenerate = false;  // fewer than 2 nonzero rows or columns
};

// Pearson chi-square on a count matrix; rows/columns with zero margin are
// dropped before computing df.
PearsonResult pearson_chi2(const std::vector<std::vector<double>>& counts) {
  PearsonResult result;
  if (counts.empty() || counts.front().empty()) {
    result.degenerate = true;
    return result;
  }
  const std::size_t rows = counts.size();
  const std::size_t cols = counts.front().size();
  std::vector<double> row_margin(rows, 0.0), col_margin(cols, 0.0);
  double total = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      row_margin[r] += counts[r][c];
      col_margin[c] += counts[r][c];
      total += counts[r][c];
    }
  }
  const auto nonzero = [](double v) { return v > 0.0; };
  const int live_rows = static_cast<int>(
      std::count_if(row_margin.begin(), row_margin.end(), nonzero));
  const int live_cols = static_cast<int>(
      std::count_if(col_margin.begin(), col_margin.end(), nonzero));
  if (live_rows < 2 || live_cols < 2 || total <= 0.0) {
    result.degenerate = true;
    return result;
  }
  for (std::size_t r = 0; r < rows; ++r) {
    if (row_margin[r] <= 0.0) continue;
    for (std::size_t c = 0; c < cols; ++c) {
      if (col_margin[c] <= 0.0) continue;
      const double expected = row_margin[r] * col_margin[c] / total;
      const double diff = counts[r][c] - expected;
      result.statistic += diff * diff / expected;
      ++result.cells;
      if (expected < 5.0) ++result.small_expected_cells;
    }
  }
  result.df = (live_rows - 1) * (live_cols - 1);
  return result;
}

void add_sparse_warning(TestResult& test, const PearsonResult& pearson) {
  if (pearson.small_expected_cells > 0) {
    test.warnings.push_back(std::to_string(pearson.small_expected_cells) +
                            " of " + std::to_string(pearson.cells) +
                            " expected cells below 5");
  }
}

// Group labels plus one group index per matrix row.
struct GroupAssignment {
  std::vector<std::string> labels;
  std::vector<std::size_t> row_group;
};

GroupAssignment assign_groups(const MatchMatrix& matrix,
                              const Grouping& grouping) {
  GroupAssignment assignment;
  switch (grouping.kind) {
    case Grouping::Kind::fos: {
      std::map<std::string, std::size_t> index;
      for (const auto& row : matrix.rows) index.emplace(row.fos, 0);
      std::size_t next = 0;
      for (auto& [label, idx] : index) {
        idx = next++;
        assignment.labels.push_back(label);
      }
      assignment.row_group.reserve(matrix.rows.size());
      for (const auto& row : matrix.rows) {
        assignment.row_group.push_back(index.at(row.fos));
      }
      break;
    }
    case Grouping::Kind::period: {
      int max_year = 0;
      for (const auto& row : matrix.rows) max_year = std::max(max_year, row.year);
      PeriodBinning binning = PeriodBinning::make(grouping.period_edges, max_year);
      assignment.labels = binning.labels;
      assignment.row_group.reserve(matrix.rows.size());
      for (const auto& row : matrix.rows) {
        assignment.row_group.push_back(binning.bin_of(row.year));
      }
      break;
    }
    case Grouping::Kind::none: {
      assignment.labels = {"all"};
      assignment.row_group.assign(matrix.rows.size(), 0);
      break;
    }
  }
  return assignment;
}

// Case-level view of the overall test: dense pattern index and group index
// per case with at least one mention, over groups with at least one case.
struct PatternData {
  std::size_t pattern_count = 0;
  std::size_t group_count = 0;
  std::vector<std::uint32_t> case_pattern;
  std::vector<std::uint32_t> case_group;
};

PatternData pattern_data(const MatchMatrix& matrix,
                         const GroupAssignment& assignment) {
  PatternData data;
  std::map<std::uint32_t, std::uint32_t> pattern_index;
  std::vector<std::uint64_t> group_cases(assignment.labels.size(), 0);
  for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
    if (matrix.rows[i].mentions == 0) continue;
    ++group_cases[assignment.row_group[i]];
  }
  std::vector<std::uint32_t> dense_group(assignment.labels.size(), 0);
  std::uint32_t next_group = 0;
  for (std::size_t g = 0; g < group_cases.size(); ++g) {
    if (group_cases[g] > 0) dense_group[g] = next_group++;
  }
  data.group_count = next_group;
  for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
    const auto& row = matrix.rows[i];
    if (row.mentions == 0) continue;
    auto [it, inserted] = pattern_index.emplace(
        row.mentions, static_cast<std::uint32_t>(pattern_index.size()));
    data.case_pattern.push_back(it->second);
    data.case_group.push_back(dense_group[assignment.row_group[i]]);
  }
  data.pattern_count = pattern_index.size();
  return data;
}

double pattern_statistic(const PatternData& data,
                         std::span<const std::uint32_t> case_group,
                         std::span<const double> expected) {
  std::vector<double> observed(data.pattern_count * data.group_count, 0.0);
  for (std::size_t i = 0; i < data.case_pattern.size(); ++i) {
    observed[data.case_pattern[i] * data.group_count + case_group[i]] += 1.0;
  }
  double statistic = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    const double diff = observed[k] - expected[k];
    statistic += diff * diff / expected[k];
  }
  return statistic;
}

}  // namespace

double chi2_survival(double statistic, int df) {
  if (df <= 0) return 1.0;
  if (statistic <= 0.0) return 1.0;
  boost::math::chi_squared_distribution<double> dist(df);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

std::size_t PeriodBinning::bin_of(int year) const {
  std::size_t bin = 0;
  for (int edge : edges) {
    if (year >= edge) ++bin;
  }
  return bin;
}

PeriodBinning PeriodBinning::make(std::span<const int> edges, int max_year) {
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i] <= edges[i - 1]) {
      throw ConfigError("period edges must be strictly ascending");
    }
  }
  PeriodBinning binning;
  binning.edges.assign(edges.begin(), edges.end());
  if (edges.empty()) {
    binning.labels = {"all"};
    return binning;
  }
  binning.labels.push_back("<" + std::to_string(edges.front()));
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    binning.labels.push_back(std::to_string(edges[i]) + "-" +
                             std::to_string(edges[i + 1] - 1));
  }
  if (max_year >= edges.back()) {
    binning.labels.push_back(std::to_string(edges.back()) + "-" +
                             std::to_string(max_year));
  } else {
    binning.labels.push_back(">=" + std::to_string(edges.back()));
  }
  return binning;
}

std::pair<PeriodBinning, std::vector<std::size_t>> bin_periods(
    std::span<const int> years, std::span<const int> edges) {
  int max_year = 0;
  for (int y : years) max_year = std::max(max_year, y);
  PeriodBinning binning = PeriodBinning::make(edges, max_year);
  std::vector<std::size_t> assignment;
  assignment.reserve(years.size());
  for (int y : years) assignment.push_back(binning.bin_of(y));
  return {std::move(binning), std::move(assignment)};
}

const char* Grouping::label() const {
  switch (kind) {
    case Kind::fos:
      return "fos";
    case Kind::period:
      return "period";
    case Kind::none:
      return "none";
  }
  return "none";
}

std::uint64_t MultiResponseTable::concept_total(std::size_t c) const {
  return std::accumulate(mention_counts[c].begin(), mention_counts[c].end(),
                         std::uint64_t{0});
}

std::uint64_t MultiResponseTable::group_mention_total(std::size_t g) const {
  std::uint64_t total = 0;
  for (const auto& row : mention_counts) total += row[g];
  return total;
}

std::uint64_t MultiResponseTable::grand_total() const {
  std::uint64_t total = 0;
  for (std::size_t c = 0; c < concepts.size(); ++c) total += concept_total(c);
  return total;
}

std::uint64_t MultiResponseTable::total_cases() const {
  return std::accumulate(case_counts.begin(), case_counts.end(),
                         std::uint64_t{0});
}

double MultiResponseTable::pct(std::size_t c, std::size_t g) const {
  if (case_counts[g] == 0) return kNaN;
  return 100.0 * static_cast<double>(mention_counts[c][g]) /
         static_cast<double>(case_counts[g]);
}

double MultiResponseTable::concept_total_pct(std::size_t c) const {
  const std::uint64_t cases = total_cases();
  if (cases == 0) return kNaN;
  return 100.0 * static_cast<double>(concept_total(c)) /
         static_cast<double>(cases);
}

double MultiResponseTable::group_total_pct(std::size_t g) const {
  if (case_counts[g] == 0) return kNaN;
  return 100.0 * static_cast<double>(group_mention_total(g)) /
         static_cast<double>(case_counts[g]);
}

double MultiResponseTable::grand_total_pct() const {
  const std::uint64_t cases = total_cases();
  if (cases == 0) return kNaN;
  return 100.0 * static_cast<double>(grand_total()) /
         static_cast<double>(cases);
}

MultiResponseTable tabulate(const MatchMatrix& matrix,
                            const Grouping& grouping) {
  GroupAssignment assignment = assign_groups(matrix, grouping);
  const std::size_t concept_count = matrix.concepts.size();
  const std::size_t group_count = assignment.labels.size();

  MultiResponseTable table;
  table.work_id = matrix.work_id;
  table.grouping_label = grouping.label();
  table.groups = assignment.labels;
  table.case_counts.assign(group_count, 0);
  std::vector<std::vector<std::uint64_t>> counts(
      concept_count, std::vector<std::uint64_t>(group_count, 0));

  for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
    const auto& row = matrix.rows[i];
    if (row.mentions == 0) continue;  // cases without any mention are dropped
    const std::size_t g = assignment.row_group[i];
    ++table.case_counts[g];
    for (std::size_t c = 0; c < concept_count; ++c) {
      if (row.mentioned(c)) ++counts[c][g];
    }
  }

  std::vector<std::size_t> order(concept_count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     const auto total = [&](std::size_t c) {
                       return std::accumulate(counts[c].begin(),
                                              counts[c].end(),
                                              std::uint64_t{0});
                     };
                     return total(a) > total(b);
                   });
  for (std::size_t c : order) {
    table.concepts.push_back(matrix.concepts[c]);
    table.mention_counts.push_back(counts[c]);
  }
  return table;
}

std::vector<TestResult> per_item_chi2(const MultiResponseTable& table,
                                      Adjustment adjustment) {
  std::vector<std::size_t> live_groups;
  for (std::size_t g = 0; g < table.groups.size(); ++g) {
    if (table.case_counts[g] > 0) live_groups.push_back(g);
  }
  if (live_groups.size() < 2) {
    throw UndefinedTestError(
        "per-concept tests need at least two groups with cases");
  }
  const double simultaneous = static_cast<double>(table.concepts.size());

  std::vector<TestResult> results;
  for (std::size_t c = 0; c < table.concepts.size(); ++c) {
    TestResult test;
    test.concept_name = table.concepts[c];
    test.method = "per-item-pearson";

    std::vector<std::vector<double>> counts(
        2, std::vector<double>(live_groups.size(), 0.0));
    for (std::size_t k = 0; k < live_groups.size(); ++k) {
      const std::size_t g = live_groups[k];
      counts[0][k] = static_cast<double>(table.mention_counts[c][g]);
      counts[1][k] = static_cast<double>(table.case_counts[g] -
                                         table.mention_counts[c][g]);
    }
    PearsonResult pearson = pearson_chi2(counts);
    if (pearson.degenerate) {
      // Concept mentioned by every case or by none: no variation to test.
      test.statistic = 0.0;
      test.df = static_cast<int>(live_groups.size()) - 1;
      test.p_raw = 1.0;
      test.warnings.push_back("degenerate: concept has no variation");
    } else {
      test.statistic = pearson.statistic;
      test.df = pearson.df;
      test.p_raw = chi2_survival(pearson.statistic, pearson.df);
      add_sparse_warning(test, pearson);
    }
    if (adjustment == Adjustment::bonferroni) {
      test.p_adjusted = std::min(1.0, simultaneous * test.p_raw);
    }
    results.push_back(std::move(test));
  }
  return results;
}

std::vector<TestResult> per_item_chi2(const MatchMatrix& matrix,
                                      const Grouping& grouping,
                                      Adjustment adjustment) {
  return per_item_chi2(tabulate(matrix, grouping), adjustment);
}

TestResult overall_chi2(const MatchMatrix& matrix, const Grouping& grouping,
                        OverallMode mode, const McParams& mc) {
  GroupAssignment assignment = assign_groups(matrix, grouping);
  PatternData data = pattern_data(matrix, assignment);
  if (data.pattern_count < 2) {
    throw UndefinedTestError("overall test needs at least two response patterns");
  }
  if (data.group_count < 2) {
    throw UndefinedTestError("overall test needs at least two groups with cases");
  }

  const std::size_t cells = data.pattern_count * data.group_count;
  std::vector<double> pattern_margin(data.pattern_count, 0.0);
  std::vector<double> group_margin(data.group_count, 0.0);
  for (std::size_t i = 0; i < data.case_pattern.size(); ++i) {
    pattern_margin[data.case_pattern[i]] += 1.0;
    group_margin[data.case_group[i]] += 1.0;
  }
  const double total = static_cast<double>(data.case_pattern.size());
  std::vector<double> expected(cells, 0.0);
  int small_cells = 0;
  for (std::size_t p = 0; p < data.pattern_count; ++p) {
    for (std::size_t g = 0; g < data.group_count; ++g) {
      const double e = pattern_margin[p] * group_margin[g] / total;
      expected[p * data.group_count + g] = e;
      if (e < 5.0) ++small_cells;
    }
  }

  TestResult test;
  test.df = static_cast<int>(data.pattern_count - 1) *
            static_cast<int>(data.group_count - 1);
  test.statistic = pattern_statistic(data, data.case_group, expected);
  if (small_cells > 0) {
    test.warnings.push_back(std::to_string(small_cells) + " of " +
                            std::to_string(cells) +
                            " expected cells below 5");
  }

  if (mode == OverallMode::pattern_df) {
    test.method = "pattern-overall";
    test.p_raw = chi2_survival(test.statistic, test.df);
    return test;
  }

  test.method = "monte-carlo";
  if (mc.iterations <= 0) throw ConfigError("mc iterations must be positive");
  // Each iteration derives its own stream from (seed, index), so evaluation
  // order cannot change the result.
  std::uint64_t exceed = 0;
  const double threshold = test.statistic - 1e-9;
  std::vector<std::uint32_t> permuted(data.case_group);
  for (int iter = 0; iter < mc.iterations; ++iter) {
    std::mt19937_64 rng(
        splitmix64(mc.seed ^ splitmix64(static_cast<std::uint64_t>(iter))));
    permuted = data.case_group;
    fisher_yates(permuted, rng);
    if (pattern_statistic(data, permuted, expected) >= threshold) ++exceed;
  }
  test.p_raw = static_cast<double>(1 + exceed) /
               static_cast<double>(1 + mc.iterations);
  test.warnings.push_back("monte-carlo: " + std::to_string(mc.iterations) +
                          " iterations, seed " + std::to_string(mc.seed));
  return test;
}

Comparison compare_books(const MultiResponseTable& left,
                         const MultiResponseTable& right,
                         const std::string& left_tag,
                         const std::string& right_tag) {
  const std::uint64_t left_grand = left.grand_total();
  const std::uint64_t right_grand = right.grand_total();
  if (left_grand == 0 || right_grand == 0) {
    throw UndefinedTestError("comparison needs nonzero mention totals");
  }

  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> by_group;
  for (std::size_t g = 0; g < left.groups.size(); ++g) {
    by_group[left.groups[g]].first = left.group_mention_total(g);
  }
  for (std::size_t g = 0; g < right.groups.size(); ++g) {
    by_group[right.groups[g]].second = right.group_mention_total(g);
  }

  Comparison comparison;
  comparison.table.left_label = left_tag;
  comparison.table.right_label = right_tag;
  comparison.table.left_total = left_grand;
  comparison.table.right_total = right_grand;

  std::vector<std::vector<double>> counts(2);
  for (const auto& [group, totals] : by_group) {
    ComparisonRow row;
    row.group = group;
    row.left_n = totals.first;
    row.right_n = totals.second;
    row.left_pct = 100.0 * static_cast<double>(totals.first) /
                   static_cast<double>(left_grand);
    row.right_pct = 100.0 * static_cast<double>(totals.second) /
                    static_cast<double>(right_grand);
    row.abs_diff = std::abs(row.left_pct - row.right_pct);
    if (row.left_pct > row.right_pct) {
      row.larger = left_tag;
    } else if (row.right_pct > row.left_pct) {
      row.larger = right_tag;
    }
    comparison.table.rows.push_back(std::move(row));
    counts[0].push_back(static_cast<double>(totals.first));
    counts[1].push_back(static_cast<double>(totals.second));
  }
  std::stable_sort(comparison.table.rows.begin(), comparison.table.rows.end(),
                   [](const ComparisonRow& a, const ComparisonRow& b) {
                     if (a.abs_diff != b.abs_diff) return a.abs_diff > b.abs_diff;
                     return a.group < b.group;
                   });

  PearsonResult pearson = pearson_chi2(counts);
  comparison.test.method = "pearson-2xG";
  if (pearson.degenerate) {
    comparison.test.statistic = 0.0;
    comparison.test.df = 0;
    comparison.test.p_raw = 1.0;
    comparison.test.warnings.push_back("degenerate: no variation to test");
  } else {
    comparison.test.statistic = pearson.statistic;
    comparison.test.df = pearson.df;
    comparison.test.p_raw = chi2_survival(pearson.statistic, pearson.df);
    add_sparse_warning(comparison.test, pearson);
  }
  return comparison;
}

double UncertaintyTable::rate(std::uint64_t hedged, std::uint64_t mentions) {
  if (mentions == 0) return kNaN;
  return 100.0 * static_cast<double>(hedged) / static_cast<double>(mentions);
}

UncertaintyResult uncertainty_rates(const MatchMatrix& matrix,
                                    const Grouping& grouping,
                                    std::uint64_t min_total) {
  GroupAssignment assignment = assign_groups(matrix, grouping);
  const std::size_t concept_count = matrix.concepts.size();
  const std::size_t group_count = assignment.labels.size();

  std::vector<std::vector<std::uint64_t>> mentions(
      concept_count, std::vector<std::uint64_t>(group_count, 0));
  std::vector<std::vector<std::uint64_t>> hedged(
      concept_count, std::vector<std::uint64_t>(group_count, 0));
  for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
    const auto& row = matrix.rows[i];
    const std::size_t g = assignment.row_group[i];
    for (std::size_t c = 0; c < concept_count; ++c) {
      if (row.mentioned(c)) {
        ++mentions[c][g];
        if (row.hedged_mention(c)) ++hedged[c][g];
      }
    }
  }

  std::vector<std::uint64_t> group_mentions(group_count, 0);
  std::vector<std::uint64_t> group_hedged(group_count, 0);
  for (std::size_t g = 0; g < group_count; ++g) {
    for (std::size_t c = 0; c < concept_count; ++c) {
      group_mentions[g] += mentions[c][g];
      group_hedged[g] += hedged[c][g];
    }
  }

  UncertaintyResult result;
  UncertaintyTable& table = result.table;
  table.work_id = matrix.work_id;
  table.grouping_label = grouping.label();
  table.min_total = min_total;

  std::vector<std::size_t> retained;
  for (std::size_t g = 0; g < group_count; ++g) {
    if (group_mentions[g] >= min_total) retained.push_back(g);
  }

  std::vector<std::size_t> order(concept_count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     const auto total = [&](std::size_t c) {
                       return std::accumulate(mentions[c].begin(),
                                              mentions[c].end(),
                                              std::uint64_t{0});
                     };
                     return total(a) > total(b);
                   });

  for (std::size_t c : order) {
    table.concepts.push_back(matrix.concepts[c]);
    std::vector<std::uint64_t> n_row, h_row;
    for (std::size_t g : retained) {
      n_row.push_back(mentions[c][g]);
      h_row.push_back(hedged[c][g]);
    }
    table.mention_counts.push_back(std::move(n_row));
    table.hedged_counts.push_back(std::move(h_row));
    table.concept_total_mentions.push_back(std::accumulate(
        mentions[c].begin(), mentions[c].end(), std::uint64_t{0}));
    table.concept_total_hedged.push_back(std::accumulate(
        hedged[c].begin(), hedged[c].end(), std::uint64_t{0}));
  }
  for (std::size_t g : retained) {
    table.retained_groups.push_back(assignment.labels[g]);
    table.group_total_mentions.push_back(group_mentions[g]);
    table.group_total_hedged.push_back(group_hedged[g]);
  }
  table.grand_mentions = std::accumulate(group_mentions.begin(),
                                         group_mentions.end(),
                                         std::uint64_t{0});
  table.grand_hedged = std::accumulate(group_hedged.begin(),
                                       group_hedged.end(), std::uint64_t{0});

  if (retained.size() >= 2) {
    std::vector<std::vector<double>> counts;
    for (std::size_t c = 0; c < table.concepts.size(); ++c) {
      std::vector<double> row;
      for (std::size_t k = 0; k < retained.size(); ++k) {
        row.push_back(static_cast<double>(table.hedged_counts[c][k]));
      }
      counts.push_back(std::move(row));
    }
    PearsonResult pearson = pearson_chi2(counts);
    if (!pearson.degenerate) {
      TestResult test;
      test.method = "hedged-pearson";
      test.statistic = pearson.statistic;
      test.df = pearson.df;
      test.p_raw = chi2_survival(pearson.statistic, pearson.df);
      add_sparse_warning(test, pearson);
      test.warnings.push_back(
          "diagnostic: chi-square over hedged counts of retained groups");
      result.test = std::move(test);
    }
  }
  return result;
}

}  // namespace cca
