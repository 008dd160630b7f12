#include "cca/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "cca/errors.hpp"
#include "cca/version.hpp"

namespace cca {

using ordered_json = nlohmann::ordered_json;

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::csv;
  if (name == "markdown") return Format::markdown;
  if (name == "structured") return Format::structured;
  throw ConfigError("unknown format: " + std::string(name));
}

std::string format_pct(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return "";
  // Half-up rounding of 100*num/den to 2 decimals, in integers.
  const std::uint64_t hundredths = (20000 * num + den) / (2 * den);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%llu.%02llu",
                static_cast<unsigned long long>(hundredths / 100),
                static_cast<unsigned long long>(hundredths % 100));
  return buf;
}

namespace {

std::string format_double(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

std::string format_rate(std::uint64_t hedged, std::uint64_t mentions) {
  return format_pct(hedged, mentions);  // empty when undefined
}

// Text table shared by the csv and markdown writers.
struct TextTable {
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> notes;
};

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::string to_csv(const TextTable& table) {
  std::ostringstream out;
  for (std::size_t i = 0; i < table.headers.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(table.headers[i]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << csv_escape(row[i]);
    }
    out << '\n';
  }
  if (!table.notes.empty()) {
    out << '\n';
    out << "note\n";
    for (const auto& note : table.notes) out << csv_escape(note) << '\n';
  }
  return out.str();
}

std::string to_markdown(const TextTable& table) {
  std::ostringstream out;
  out << '|';
  for (const auto& h : table.headers) out << ' ' << h << " |";
  out << "\n|";
  for (std::size_t i = 0; i < table.headers.size(); ++i) out << " --- |";
  out << '\n';
  for (const auto& row : table.rows) {
    out << '|';
    for (const auto& cell : row) out << ' ' << cell << " |";
    out << '\n';
  }
  if (!table.notes.empty()) {
    out << '\n';
    for (const auto& note : table.notes) out << "- " << note << '\n';
  }
  return out.str();
}

std::string describe_test(const TestResult& test) {
  std::string line;
  if (!test.concept_name.empty()) line += test.concept_name + ": ";
  line += "chi2=" + format_double(test.statistic, 2);
  line += ", df=" + std::to_string(test.df);
  line += ", p=" + format_double(test.p_raw, 3);
  if (test.p_adjusted) {
    line += ", p_adjusted=" + format_double(*test.p_adjusted, 3);
  }
  line += " [" + test.method + "]";
  for (const auto& warning : test.warnings) line += "; " + warning;
  return line;
}

ordered_json test_to_json(const TestResult& test) {
  ordered_json doc;
  if (!test.concept_name.empty()) doc["concept"] = test.concept_name;
  doc["statistic"] = test.statistic;
  doc["df"] = test.df;
  doc["p_raw"] = test.p_raw;
  if (test.p_adjusted) doc["p_adjusted"] = *test.p_adjusted;
  doc["method"] = test.method;
  doc["warnings"] = test.warnings;
  return doc;
}

TextTable layout(const MultiResponseTable& table,
                 std::span<const TestResult> tests) {
  TextTable text;
  text.headers = {"concept", "measure"};
  for (const auto& g : table.groups) text.headers.push_back(g);
  text.headers.push_back("total");

  const std::uint64_t total_cases = table.total_cases();
  for (std::size_t c = 0; c < table.concepts.size(); ++c) {
    std::vector<std::string> n_row = {table.concepts[c], "n"};
    std::vector<std::string> pct_row = {table.concepts[c], "pct"};
    for (std::size_t g = 0; g < table.groups.size(); ++g) {
      n_row.push_back(std::to_string(table.mention_counts[c][g]));
      pct_row.push_back(format_pct(table.mention_counts[c][g],
                                   table.case_counts[g]));
    }
    n_row.push_back(std::to_string(table.concept_total(c)));
    pct_row.push_back(format_pct(table.concept_total(c), total_cases));
    text.rows.push_back(std::move(n_row));
    text.rows.push_back(std::move(pct_row));
  }

  std::vector<std::string> total_n = {"total", "n"};
  std::vector<std::string> total_pct = {"total", "pct"};
  std::vector<std::string> cases_row = {"cases", "n"};
  for (std::size_t g = 0; g < table.groups.size(); ++g) {
    total_n.push_back(std::to_string(table.group_mention_total(g)));
    total_pct.push_back(
        format_pct(table.group_mention_total(g), table.case_counts[g]));
    cases_row.push_back(std::to_string(table.case_counts[g]));
  }
  total_n.push_back(std::to_string(table.grand_total()));
  total_pct.push_back(format_pct(table.grand_total(), total_cases));
  cases_row.push_back(std::to_string(total_cases));
  text.rows.push_back(std::move(total_n));
  text.rows.push_back(std::move(total_pct));
  text.rows.push_back(std::move(cases_row));

  if (table.empty()) text.notes.push_back("zero rows: table is empty");
  for (const auto& test : tests) text.notes.push_back(describe_test(test));
  return text;
}

TextTable layout(const UncertaintyTable& table,
                 const std::optional<TestResult>& test) {
  TextTable text;
  text.headers = {"concept", "measure"};
  for (const auto& g : table.retained_groups) text.headers.push_back(g);
  text.headers.push_back("total");

  for (std::size_t c = 0; c < table.concepts.size(); ++c) {
    std::vector<std::string> n_row = {table.concepts[c], "n"};
    std::vector<std::string> pct_row = {table.concepts[c], "pct"};
    for (std::size_t g = 0; g < table.retained_groups.size(); ++g) {
      n_row.push_back(std::to_string(table.mention_counts[c][g]));
      pct_row.push_back(
          format_rate(table.hedged_counts[c][g], table.mention_counts[c][g]));
    }
    n_row.push_back(std::to_string(table.concept_total_mentions[c]));
    pct_row.push_back(format_rate(table.concept_total_hedged[c],
                                  table.concept_total_mentions[c]));
    text.rows.push_back(std::move(n_row));
    text.rows.push_back(std::move(pct_row));
  }

  std::vector<std::string> total_n = {"total", "n"};
  std::vector<std::string> total_pct = {"total", "pct"};
  for (std::size_t g = 0; g < table.retained_groups.size(); ++g) {
    total_n.push_back(std::to_string(table.group_total_mentions[g]));
    total_pct.push_back(
        format_rate(table.group_total_hedged[g], table.group_total_mentions[g]));
  }
  total_n.push_back(std::to_string(table.grand_mentions));
  total_pct.push_back(format_rate(table.grand_hedged, table.grand_mentions));
  text.rows.push_back(std::move(total_n));
  text.rows.push_back(std::move(total_pct));

  if (table.concepts.empty() || table.grand_mentions == 0) {
    text.notes.push_back("zero rows: table is empty");
  }
  text.notes.push_back("minimum group total: " +
                       std::to_string(table.min_total));
  if (test) text.notes.push_back(describe_test(*test));
  return text;
}

TextTable layout(const ComparisonTable& table, const TestResult& test) {
  TextTable text;
  const std::string left = table.left_label.empty() ? "left" : table.left_label;
  const std::string right =
      table.right_label.empty() ? "right" : table.right_label;
  text.headers = {"group",          left + "_n",  left + "_pct",
                  right + "_n",     right + "_pct", "abs_diff",
                  "larger"};
  for (const auto& row : table.rows) {
    text.rows.push_back({row.group, std::to_string(row.left_n),
                         format_pct(row.left_n, table.left_total),
                         std::to_string(row.right_n),
                         format_pct(row.right_n, table.right_total),
                         format_double(row.abs_diff, 2), row.larger});
  }
  text.rows.push_back({"total", std::to_string(table.left_total), "100.00",
                       std::to_string(table.right_total), "100.00", "", ""});
  if (table.rows.empty()) text.notes.push_back("zero rows: table is empty");
  text.notes.push_back(describe_test(test));
  return text;
}

std::string serialize(const TextTable& text, const ordered_json& structured,
                      Format format) {
  switch (format) {
    case Format::csv:
      return to_csv(text);
    case Format::markdown:
      return to_markdown(text);
    case Format::structured:
      return structured.dump(2) + "\n";
  }
  throw ConfigError("unknown format");
}

}  // namespace

std::string render(const MultiResponseTable& table,
                   std::span<const TestResult> tests, Format format) {
  ordered_json doc;
  doc["meta"] = {{"kind", "multi_response"},
                 {"work", table.work_id},
                 {"grouping", table.grouping_label},
                 {"version", kVersion}};
  doc["groups"] = table.groups;
  doc["cases"] = table.case_counts;
  doc["rows"] = ordered_json::array();
  for (std::size_t c = 0; c < table.concepts.size(); ++c) {
    ordered_json row;
    row["concept"] = table.concepts[c];
    row["n"] = table.mention_counts[c];
    row["total_n"] = table.concept_total(c);
    doc["rows"].push_back(std::move(row));
  }
  doc["totals"] = {{"mentions", table.grand_total()},
                   {"cases", table.total_cases()}};
  doc["tests"] = ordered_json::array();
  for (const auto& test : tests) doc["tests"].push_back(test_to_json(test));

  return serialize(layout(table, tests), doc, format);
}

std::string render(const UncertaintyTable& table,
                   const std::optional<TestResult>& test, Format format) {
  ordered_json doc;
  doc["meta"] = {{"kind", "uncertainty"},
                 {"work", table.work_id},
                 {"grouping", table.grouping_label},
                 {"min_total", table.min_total},
                 {"version", kVersion}};
  doc["groups"] = table.retained_groups;
  doc["rows"] = ordered_json::array();
  for (std::size_t c = 0; c < table.concepts.size(); ++c) {
    ordered_json row;
    row["concept"] = table.concepts[c];
    row["n"] = table.mention_counts[c];
    row["hedged"] = table.hedged_counts[c];
    row["total_n"] = table.concept_total_mentions[c];
    row["total_hedged"] = table.concept_total_hedged[c];
    doc["rows"].push_back(std::move(row));
  }
  doc["totals"] = {{"n", table.group_total_mentions},
                   {"hedged", table.group_total_hedged},
                   {"grand_n", table.grand_mentions},
                   {"grand_hedged", table.grand_hedged}};
  doc["tests"] = ordered_json::array();
  if (test) doc["tests"].push_back(test_to_json(*test));

  return serialize(layout(table, test), doc, format);
}

std::string render(const ComparisonTable& table, const TestResult& test,
                   Format format) {
  ordered_json doc;
  doc["meta"] = {{"kind", "comparison"},
                 {"left", table.left_label},
                 {"right", table.right_label},
                 {"version", kVersion}};
  doc["rows"] = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json entry;
    entry["group"] = row.group;
    entry["left_n"] = row.left_n;
    entry["right_n"] = row.right_n;
    entry["abs_diff"] = row.abs_diff;
    entry["larger"] = row.larger;
    doc["rows"].push_back(std::move(entry));
  }
  doc["totals"] = {{"left", table.left_total}, {"right", table.right_total}};
  doc["tests"] = ordered_json::array({test_to_json(test)});

  return serialize(layout(table, test), doc, format);
}

MultiResponseTable parse_multi_response(const std::string& structured_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(structured_text);
  } catch (const ordered_json::exception& e) {
    throw DataError(std::string("structured table: ") + e.what());
  }
  if (!doc.contains("meta") || doc["meta"].value("kind", "") != "multi_response") {
    throw DataError("structured table: expected kind \"multi_response\"");
  }
  MultiResponseTable table;
  table.work_id = doc["meta"].value("work", "");
  table.grouping_label = doc["meta"].value("grouping", "");
  table.groups = doc["groups"].get<std::vector<std::string>>();
  table.case_counts = doc["cases"].get<std::vector<std::uint64_t>>();
  for (const auto& row : doc["rows"]) {
    table.concepts.push_back(row["concept"].get<std::string>());
    auto counts = row["n"].get<std::vector<std::uint64_t>>();
    if (counts.size() != table.groups.size()) {
      throw DataError("structured table: row width mismatch");
    }
    table.mention_counts.push_back(std::move(counts));
  }
  return table;
}

std::string render_frequency_csv(const FrequencyTable& table) {
  std::ostringstream out;
  out << "token,count\n";
  for (const auto& [token, count] : table.ranked()) {
    out << csv_escape(token) << ',' << count << '\n';
  }
  return out.str();
}

namespace {

std::string column_slug(const std::string& name) {
  std::string slug = name;
  for (char& c : slug) {
    if (c == ' ') c = '_';
  }
  return slug;
}

}  // namespace

std::string render_match_matrix_csv(const MatchMatrix& matrix) {
  std::ostringstream out;
  out << "record_id,fos,year";
  for (const auto& concept_name : matrix.concepts) {
    const std::string slug = column_slug(concept_name);
    out << ',' << slug << "_mention," << slug << "_hedge";
  }
  out << '\n';
  for (const auto& row : matrix.rows) {
    out << csv_escape(row.record_id) << ',' << csv_escape(row.fos) << ','
        << row.year;
    for (std::size_t c = 0; c < matrix.concepts.size(); ++c) {
      out << ',' << (row.mentioned(c) ? 1 : 0) << ','
          << (row.hedged_mention(c) ? 1 : 0);
    }
    out << '\n';
  }
  return out.str();
}

std::string render_ingest_report(const IngestReport& report) {
  ordered_json doc;
  doc["total_records"] = report.total_records;
  doc["malformed_lines"] = report.malformed_lines;
  doc["unknown_work_citations"] = report.unknown_work_citations;
  doc["per_work"] = ordered_json::object();
  for (const auto& [work, counts] : report.per_work) {
    doc["per_work"][work] = {{"with_context", counts.with_context},
                             {"with_fos", counts.with_fos}};
  }
  doc["errors"] = report.errors;
  return doc.dump(2) + "\n";
}

}  // namespace cca
