#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cca/builtin.hpp"

namespace fixtures {

namespace {

[[noreturn]] void fail(const std::string& message) {
  throw std::logic_error("fixture: " + message);
}

void require(bool condition, const std::string& message) {
  if (!condition) fail(message);
}

}  // namespace

std::uint64_t recover_hedged(std::uint64_t mentions, double printed_rate) {
  require(mentions > 0, "rate recovery needs mentions > 0");
  const std::int64_t r = std::llround(printed_rate * 100.0);
  std::int64_t found = -1;
  for (std::uint64_t h = 0; h <= mentions; ++h) {
    const std::int64_t scaled = static_cast<std::int64_t>(20000 * h);
    const std::int64_t n = static_cast<std::int64_t>(mentions);
    if (scaled >= n * (2 * r - 1) && scaled < n * (2 * r + 1)) {
      require(found < 0, "ambiguous hedged count for rate " +
                             std::to_string(printed_rate));
      found = static_cast<std::int64_t>(h);
    }
  }
  require(found >= 0, "no hedged count rounds to rate " +
                          std::to_string(printed_rate));
  return static_cast<std::uint64_t>(found);
}

FixtureCorpus build_fixture(const reference::MarginalTable& table) {
  const std::size_t concepts = table.concepts.size();
  const std::size_t groups = table.groups.size();
  require(table.mentions.size() == concepts, "mention row count mismatch");
  require(table.cases.size() == groups, "case count mismatch");

  // Years cycle across the default period bins unless the table pins one
  // representative year per group.
  static const int kCycleYears[] = {1999, 2002, 2008, 2018};

  FixtureCorpus fixture;
  fixture.source = table;
  std::size_t next_id = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t case_count = table.cases[g];
    const std::size_t first = fixture.cases.size();
    for (std::size_t i = 0; i < case_count; ++i) {
      FixtureCase entry;
      char buf[16];
      std::snprintf(buf, sizeof(buf), "r%06zu", next_id++);
      entry.record_id = buf;
      if (table.group_years.empty()) {
        entry.fos = table.groups[g];
        entry.year = kCycleYears[i % 4];
      } else {
        entry.fos = "all";
        entry.year = table.group_years[g];
      }
      fixture.cases.push_back(std::move(entry));
    }

    // Greedy coverage: every mention prefers a case without any concept yet,
    // so all cases end up mentioning at least one concept.
    for (std::size_t c = 0; c < concepts; ++c) {
      std::uint64_t remaining = table.mentions[c][g];
      require(remaining <= case_count, "mention count exceeds cases");
      for (std::size_t i = first; remaining > 0 && i < first + case_count;
           ++i) {
        if (fixture.cases[i].mention_mask == 0) {
          fixture.cases[i].mention_mask |= 1u << c;
          --remaining;
        }
      }
      for (std::size_t i = first; remaining > 0 && i < first + case_count;
           ++i) {
        if (!(fixture.cases[i].mention_mask >> c & 1u)) {
          fixture.cases[i].mention_mask |= 1u << c;
          --remaining;
        }
      }
      require(remaining == 0, "could not place mentions for " +
                                  table.concepts[c]);
    }
    for (std::size_t i = first; i < first + case_count; ++i) {
      require(fixture.cases[i].mention_mask != 0, "uncovered case");
    }
  }
  return fixture;
}

void apply_hedges(FixtureCorpus* fixture,
                  const std::vector<std::vector<std::uint64_t>>& hedged) {
  const auto& table = fixture->source;
  std::size_t first = 0;
  for (std::size_t g = 0; g < table.groups.size(); ++g) {
    const std::size_t case_count = table.cases[g];
    for (std::size_t c = 0; c < table.concepts.size(); ++c) {
      std::uint64_t remaining = hedged[c][g];
      require(remaining <= table.mentions[c][g], "hedged exceeds mentions");
      for (std::size_t i = first; remaining > 0 && i < first + case_count;
           ++i) {
        if (fixture->cases[i].mention_mask >> c & 1u) {
          fixture->cases[i].hedge_mask |= 1u << c;
          --remaining;
        }
      }
      require(remaining == 0, "could not place hedges");
    }
    first += case_count;
  }
}

std::string FixtureCorpus::jsonl() const {
  std::ostringstream out;
  for (const auto& entry : cases) {
    nlohmann::ordered_json record;
    record["id"] = entry.record_id;
    record["year"] = entry.year;
    record["fos"] = {entry.fos};
    auto citations = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < source.concepts.size(); ++c) {
      if (!(entry.mention_mask >> c & 1u)) continue;
      std::string text = source.triggers[c];
      if (entry.hedge_mask >> c & 1u) text += " may";
      citations.push_back({{"work", source.work_id}, {"citance", text}});
    }
    record["citations"] = std::move(citations);
    out << record.dump() << '\n';
  }
  return out.str();
}

cca::IngestResult FixtureCorpus::ingest() const {
  std::istringstream stream(jsonl());
  return cca::ingest_corpus(stream, cca::builtin::registry());
}

cca::MatchMatrix FixtureCorpus::matrix() const {
  auto registry = cca::builtin::registry();
  auto result = ingest();
  auto derivation = cca::derive_cases(result.corpus, source.work_id, registry);
  const cca::ConceptLexicon lexicon = source.work_id == "kuhn"
                                          ? cca::builtin::kuhn()
                                          : cca::builtin::popper_report();
  return cca::build_match_matrix(derivation.cases, lexicon,
                                 cca::builtin::hedges());
}

std::vector<std::vector<std::uint64_t>> solve_hedges_subset(
    const reference::MarginalTable& table, const reference::HedgeRates& rates) {
  const std::size_t concepts = table.concepts.size();
  const std::size_t groups = table.groups.size();

  std::vector<std::size_t> rated_index;
  for (const auto& label : rates.rated_groups) {
    auto it = std::find(table.groups.begin(), table.groups.end(), label);
    require(it != table.groups.end(), "rated group missing: " + label);
    rated_index.push_back(
        static_cast<std::size_t>(it - table.groups.begin()));
  }

  std::vector<std::vector<std::uint64_t>> hedged(
      concepts, std::vector<std::uint64_t>(groups, 0));
  for (std::size_t c = 0; c < concepts; ++c) {
    const std::uint64_t row_total = std::accumulate(
        table.mentions[c].begin(), table.mentions[c].end(), std::uint64_t{0});
    std::uint64_t remaining =
        recover_hedged(row_total, rates.concept_total_rates[c]);
    for (std::size_t k = 0; k < rated_index.size(); ++k) {
      const std::size_t g = rated_index[k];
      const std::uint64_t cell =
          table.mentions[c][g] == 0
              ? 0
              : recover_hedged(table.mentions[c][g], rates.rates[c][k]);
      hedged[c][g] = cell;
      require(remaining >= cell, "rated cells exceed the concept total");
      remaining -= cell;
    }
    for (std::size_t g = 0; remaining > 0 && g < groups; ++g) {
      if (std::find(rated_index.begin(), rated_index.end(), g) !=
          rated_index.end()) {
        continue;
      }
      const std::uint64_t add =
          std::min<std::uint64_t>(remaining, table.mentions[c][g]);
      hedged[c][g] += add;
      remaining -= add;
    }
    require(remaining == 0, "could not distribute hedges for " +
                                table.concepts[c]);
  }

  // The printed per-group totals must match the recovered cells.
  for (std::size_t k = 0; k < rated_index.size(); ++k) {
    const std::size_t g = rated_index[k];
    std::uint64_t group_mentions = 0, group_hedged = 0;
    for (std::size_t c = 0; c < concepts; ++c) {
      group_mentions += table.mentions[c][g];
      group_hedged += hedged[c][g];
    }
    require(group_hedged ==
                recover_hedged(group_mentions, rates.group_total_rates[k]),
            "group hedge total mismatch: " + table.groups[g]);
  }
  std::uint64_t grand_mentions = 0, grand_hedged = 0;
  for (std::size_t c = 0; c < concepts; ++c) {
    for (std::size_t g = 0; g < groups; ++g) {
      grand_mentions += table.mentions[c][g];
      grand_hedged += hedged[c][g];
    }
  }
  require(grand_hedged == recover_hedged(grand_mentions, rates.grand_rate),
          "grand hedge total mismatch");
  return hedged;
}

std::vector<std::vector<std::uint64_t>> solve_hedges_margins(
    const reference::MarginalTable& table,
    const std::vector<std::uint64_t>& row_totals,
    const std::vector<std::uint64_t>& col_totals) {
  const std::size_t concepts = table.concepts.size();
  const std::size_t groups = table.groups.size();
  require(row_totals.size() == concepts && col_totals.size() == groups,
          "margin size mismatch");
  require(std::accumulate(row_totals.begin(), row_totals.end(),
                          std::uint64_t{0}) ==
              std::accumulate(col_totals.begin(), col_totals.end(),
                              std::uint64_t{0}),
          "margins disagree");

  // Tightest rows first; columns by descending remaining demand. The widest
  // row then absorbs whatever is left, which its caps must allow.
  std::vector<std::size_t> row_order(concepts);
  std::iota(row_order.begin(), row_order.end(), 0);
  std::stable_sort(row_order.begin(), row_order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return row_totals[a] < row_totals[b];
                   });

  std::vector<std::uint64_t> col_remaining = col_totals;
  std::vector<std::vector<std::uint64_t>> hedged(
      concepts, std::vector<std::uint64_t>(groups, 0));
  for (std::size_t r : row_order) {
    std::uint64_t remaining = row_totals[r];
    std::vector<std::size_t> col_order(groups);
    std::iota(col_order.begin(), col_order.end(), 0);
    std::stable_sort(col_order.begin(), col_order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return col_remaining[a] > col_remaining[b];
                     });
    for (std::size_t g : col_order) {
      const std::uint64_t add = std::min(
          {remaining, col_remaining[g], table.mentions[r][g]});
      hedged[r][g] = add;
      remaining -= add;
      col_remaining[g] -= add;
      if (remaining == 0) break;
    }
    require(remaining == 0, "could not satisfy hedge row " +
                                table.concepts[r]);
  }
  for (std::size_t g = 0; g < groups; ++g) {
    require(col_remaining[g] == 0, "could not satisfy hedge column " +
                                       table.groups[g]);
  }
  return hedged;
}

}  // namespace fixtures
