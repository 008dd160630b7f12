#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cca/builtin.hpp"
#include "cca/corpus.hpp"
#include "cca/errors.hpp"
#include "cca/matcher.hpp"
#include "cca/report.hpp"
#include "cca/stats.hpp"
#include "cca/textnorm.hpp"
#include "cca/version.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;

const std::vector<int> kDefaultPeriodEdges = {2000, 2006, 2011};

cca::WorkRegistry load_registry(const std::string& path) {
  if (path.empty() || path == "builtin") return cca::builtin::registry();
  return cca::WorkRegistry::load(path);
}

cca::ConceptLexicon load_lexicon(const std::string& name_or_path) {
  cca::ConceptLexicon lexicon;
  if (cca::builtin::lexicon_by_name(name_or_path, &lexicon)) return lexicon;
  return cca::ConceptLexicon::load(name_or_path);
}

cca::HedgeLexicon load_hedges(const std::string& path) {
  if (path.empty() || path == "builtin") return cca::builtin::hedges();
  return cca::HedgeLexicon::load(path);
}

// Atomic write: temp file in the target directory, then rename.
void write_file(const std::string& path, const std::string& content) {
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw cca::DataError("cannot write: " + tmp.string());
    out << content;
  }
  fs::rename(tmp, target);
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    write_file(out_path, content);
  }
}

std::string format_extension(cca::Format format) {
  switch (format) {
    case cca::Format::csv:
      return ".csv";
    case cca::Format::markdown:
      return ".md";
    case cca::Format::structured:
      return ".json";
  }
  return ".txt";
}

struct PipelineOptions {
  std::string corpus_path;
  std::string works = "builtin";
  std::string lexicon = "kuhn";
  std::string hedges = "builtin";
  std::string group_by = "fos";
  std::vector<int> periods = kDefaultPeriodEdges;
  bool periods_given = false;
  std::uint64_t min_total = 300;
  std::string adjust = "bonferroni";
  std::string overall = "pattern";
  int mc_iterations = 10000;
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string out;
};

struct PipelineData {
  cca::WorkRegistry registry;
  cca::ConceptLexicon lexicon;
  cca::HedgeLexicon hedges;
  cca::IngestReport ingest_report;
  cca::CaseDerivation derivation;
  cca::MatchMatrix matrix;
};

cca::Grouping resolve_grouping(const PipelineOptions& options) {
  if (options.group_by == "fos") return cca::Grouping::by_fos();
  if (options.group_by == "none") return cca::Grouping::none();
  if (options.group_by == "period") {
    if (!options.periods_given) {
      std::cerr << "warning: period grouping without --periods, using defaults "
                   "2000,2006,2011\n";
    }
    return cca::Grouping::by_period(options.periods);
  }
  throw cca::ConfigError("unknown grouping: " + options.group_by);
}

PipelineData run_matching(const PipelineOptions& options) {
  PipelineData data;
  data.registry = load_registry(options.works);
  data.lexicon = load_lexicon(options.lexicon);
  data.hedges = load_hedges(options.hedges);

  auto ingest = cca::ingest_corpus_file(options.corpus_path, data.registry);
  data.ingest_report = std::move(ingest.report);
  for (const auto& error : data.ingest_report.errors) {
    std::cerr << "warning: " << error << '\n';
  }
  data.derivation = cca::derive_cases(ingest.corpus, data.lexicon.work_id,
                                      data.registry);
  data.matrix = cca::build_match_matrix(data.derivation.cases, data.lexicon,
                                        data.hedges);
  return data;
}

std::vector<cca::TestResult> run_tests(const PipelineData& data,
                                       const cca::MultiResponseTable& table,
                                       const PipelineOptions& options,
                                       const cca::Grouping& grouping) {
  std::vector<cca::TestResult> tests;
  const cca::Adjustment adjustment = options.adjust == "none"
                                         ? cca::Adjustment::none
                                         : cca::Adjustment::bonferroni;
  try {
    tests = cca::per_item_chi2(table, adjustment);
    const cca::OverallMode mode = options.overall == "mc"
                                      ? cca::OverallMode::monte_carlo
                                      : cca::OverallMode::pattern_df;
    tests.push_back(cca::overall_chi2(
        data.matrix, grouping, mode,
        cca::McParams{options.mc_iterations, options.seed}));
  } catch (const cca::UndefinedTestError& e) {
    std::cerr << "warning: tests skipped: " << e.what() << '\n';
  }
  return tests;
}

int cmd_ingest(const std::string& corpus_path, const std::string& works,
               const std::string& out) {
  auto registry = load_registry(works);
  auto result = cca::ingest_corpus_file(corpus_path, registry);
  emit(out, cca::render_ingest_report(result.report));
  return kExitOk;
}

int cmd_freq(const std::string& corpus_path, const std::string& works,
             const std::string& work, const std::string& out) {
  auto registry = load_registry(works);
  if (!work.empty() && !registry.has(work)) {
    throw cca::DataError("unknown work id: " + work);
  }
  auto result = cca::ingest_corpus_file(corpus_path, registry);
  std::vector<cca::TokenizedCitance> citances;
  for (const auto& record : result.corpus.records()) {
    for (const auto& citance : record.citances) {
      if (!work.empty() && citance.work_id != work) continue;
      citances.push_back(cca::normalize(citance.text));
    }
  }
  emit(out, cca::render_frequency_csv(cca::word_frequency(citances)));
  return kExitOk;
}

int cmd_match(const PipelineOptions& options) {
  PipelineData data = run_matching(options);
  emit(options.out, cca::render_match_matrix_csv(data.matrix));
  return kExitOk;
}

int cmd_analyze(const PipelineOptions& options) {
  PipelineData data = run_matching(options);
  const cca::Grouping grouping = resolve_grouping(options);
  cca::MultiResponseTable table = cca::tabulate(data.matrix, grouping);
  std::vector<cca::TestResult> tests =
      run_tests(data, table, options, grouping);
  emit(options.out,
       cca::render(table, tests, cca::parse_format(options.format)));
  return kExitOk;
}

int cmd_uncertainty(const PipelineOptions& options) {
  PipelineData data = run_matching(options);
  const cca::Grouping grouping = resolve_grouping(options);
  auto result = cca::uncertainty_rates(data.matrix, grouping,
                                       options.min_total);
  emit(options.out, cca::render(result.table, result.test,
                                cca::parse_format(options.format)));
  return kExitOk;
}

int cmd_compare(const std::string& left_path, const std::string& right_path,
                std::string left_tag, std::string right_tag,
                const std::string& format, const std::string& out) {
  const auto read_table = [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cca::DataError("cannot open table: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return cca::parse_multi_response(text);
  };
  cca::MultiResponseTable left = read_table(left_path);
  cca::MultiResponseTable right = read_table(right_path);
  const auto default_tag = [](const cca::MultiResponseTable& table,
                              const char* fallback) {
    if (table.work_id.empty()) return std::string(fallback);
    std::string tag(1, table.work_id.front());
    if (tag[0] >= 'a' && tag[0] <= 'z') tag[0] -= 0x20;
    return tag;
  };
  if (left_tag.empty()) left_tag = default_tag(left, "L");
  if (right_tag.empty()) right_tag = default_tag(right, "R");
  cca::Comparison comparison =
      cca::compare_books(left, right, left_tag, right_tag);
  emit(out, cca::render(comparison.table, comparison.test,
                        cca::parse_format(format)));
  return kExitOk;
}

ordered_json options_to_json(const PipelineOptions& options) {
  ordered_json doc;
  doc["corpus"] = options.corpus_path;
  doc["works"] = options.works;
  doc["lexicon"] = options.lexicon;
  doc["hedges"] = options.hedges;
  doc["group_by"] = options.group_by;
  doc["periods"] = options.periods;
  doc["min_total"] = options.min_total;
  doc["adjust"] = options.adjust;
  doc["overall"] = options.overall;
  doc["mc_iterations"] = options.mc_iterations;
  doc["seed"] = options.seed;
  doc["format"] = options.format;
  doc["out"] = options.out;
  return doc;
}

// Config file keys override flags; flags override defaults.
void apply_config(const std::string& path, PipelineOptions* options) {
  std::ifstream in(path);
  if (!in) throw cca::DataError("cannot open config: " + path);
  ordered_json doc;
  try {
    in >> doc;
  } catch (const ordered_json::exception& e) {
    throw cca::ConfigError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw cca::ConfigError("config: expected an object");
  const auto get_string = [&](const char* key, std::string* slot) {
    if (doc.contains(key)) *slot = doc[key].get<std::string>();
  };
  get_string("corpus", &options->corpus_path);
  get_string("works", &options->works);
  get_string("lexicon", &options->lexicon);
  get_string("hedges", &options->hedges);
  get_string("group_by", &options->group_by);
  get_string("adjust", &options->adjust);
  get_string("overall", &options->overall);
  get_string("format", &options->format);
  get_string("out", &options->out);
  if (doc.contains("periods")) {
    options->periods = doc["periods"].get<std::vector<int>>();
    options->periods_given = true;
  }
  if (doc.contains("min_total")) {
    options->min_total = doc["min_total"].get<std::uint64_t>();
  }
  if (doc.contains("mc_iterations")) {
    options->mc_iterations = doc["mc_iterations"].get<int>();
  }
  if (doc.contains("seed")) options->seed = doc["seed"].get<std::uint64_t>();
}

int cmd_run(const std::string& config_path, PipelineOptions options) {
  if (!config_path.empty()) apply_config(config_path, &options);
  if (options.corpus_path.empty()) {
    throw cca::ConfigError("run: no corpus configured");
  }
  const fs::path out_dir = options.out.empty() ? fs::path(".")
                                               : fs::path(options.out);
  fs::create_directories(out_dir);

  PipelineData data = run_matching(options);
  const cca::Grouping grouping = resolve_grouping(options);
  const cca::Format format = cca::parse_format(options.format);
  const std::string ext = format_extension(format);

  cca::MultiResponseTable table = cca::tabulate(data.matrix, grouping);
  std::vector<cca::TestResult> tests =
      run_tests(data, table, options, grouping);
  const std::string analysis_name = "analysis" + ext;
  write_file((out_dir / analysis_name).string(),
             cca::render(table, tests, format));

  auto uncertainty = cca::uncertainty_rates(data.matrix, grouping,
                                            options.min_total);
  const std::string uncertainty_name = "uncertainty" + ext;
  write_file((out_dir / uncertainty_name).string(),
             cca::render(uncertainty.table, uncertainty.test, format));

  // Accounting funnel: total records, with context toward the analyzed
  // work, with a field of study, with at least one mentioned concept.
  std::set<std::string> records_with_mention;
  std::uint64_t cases_with_mention = 0;
  for (const auto& row : data.matrix.rows) {
    if (row.mentions != 0) {
      records_with_mention.insert(row.record_id);
      ++cases_with_mention;
    }
  }
  const auto& work_counts =
      data.ingest_report.per_work.at(data.lexicon.work_id);

  ordered_json manifest;
  manifest["version"] = cca::kVersion;
  manifest["config"] = options_to_json(options);
  manifest["accounting"] = {
      {"total_records", data.ingest_report.total_records},
      {"malformed_lines", data.ingest_report.malformed_lines},
      {"unknown_work_citations", data.ingest_report.unknown_work_citations},
      {"work", data.lexicon.work_id},
      {"with_context", work_counts.with_context},
      {"with_fos", work_counts.with_fos},
      {"records_with_mention", records_with_mention.size()},
      {"cases", data.derivation.cases.size()},
      {"cases_with_mention", cases_with_mention},
      {"dropped_records_without_fos",
       data.derivation.dropped_records_without_fos}};
  manifest["artifacts"] = {analysis_name, uncertainty_name};
  write_file((out_dir / "manifest.json").string(), manifest.dump(2) + "\n");
  return kExitOk;
}

void add_pipeline_flags(CLI::App* cmd, PipelineOptions* options,
                        bool with_stats_flags) {
  cmd->add_option("--corpus", options->corpus_path, "line-delimited record file")
      ->required();
  cmd->add_option("--works", options->works,
                  "work registry path, or 'builtin'");
  cmd->add_option("--lexicon", options->lexicon,
                  "lexicon path or builtin name (kuhn, popper, popper-report)");
  cmd->add_option("--hedges", options->hedges,
                  "hedge list path, or 'builtin'");
  if (with_stats_flags) {
    cmd->add_option("--group-by", options->group_by, "fos, period, or none")
        ->check(CLI::IsMember({"fos", "period", "none"}));
    cmd->add_option("--periods", options->periods,
                    "period edges, e.g. 2000,2006,2011")
        ->delimiter(',')
        ->each([options](const std::string&) { options->periods_given = true; });
    cmd->add_option("--format", options->format, "csv, markdown, or structured")
        ->check(CLI::IsMember({"csv", "markdown", "structured"}));
  }
  cmd->add_option("--out", options->out, "output path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"citation concept analysis"};
  app.set_version_flag("--version", cca::kVersion);
  app.require_subcommand(1);

  // ingest
  std::string ingest_corpus_path, ingest_works = "builtin", ingest_out;
  CLI::App* ingest = app.add_subcommand("ingest", "validate a corpus and report counts");
  ingest->add_option("--corpus", ingest_corpus_path)->required();
  ingest->add_option("--works", ingest_works);
  ingest->add_option("--out", ingest_out);

  // freq
  std::string freq_corpus_path, freq_works = "builtin", freq_work, freq_out;
  CLI::App* freq = app.add_subcommand("freq", "word frequency over citances");
  freq->add_option("--corpus", freq_corpus_path)->required();
  freq->add_option("--works", freq_works);
  freq->add_option("--work", freq_work, "restrict to citances toward one work");
  freq->add_option("--out", freq_out);

  // match
  PipelineOptions match_options;
  CLI::App* match = app.add_subcommand("match", "emit the match matrix as CSV");
  add_pipeline_flags(match, &match_options, false);

  // analyze
  PipelineOptions analyze_options;
  CLI::App* analyze = app.add_subcommand("analyze", "tabulate mentions and run tests");
  add_pipeline_flags(analyze, &analyze_options, true);
  analyze->add_option("--adjust", analyze_options.adjust)
      ->check(CLI::IsMember({"bonferroni", "none"}));
  analyze->add_option("--overall", analyze_options.overall)
      ->check(CLI::IsMember({"pattern", "mc"}));
  analyze->add_option("--mc-iterations", analyze_options.mc_iterations);
  analyze->add_option("--seed", analyze_options.seed);

  // uncertainty
  PipelineOptions uncertainty_options;
  CLI::App* uncertainty = app.add_subcommand("uncertainty", "hedging-based uncertainty rates");
  add_pipeline_flags(uncertainty, &uncertainty_options, true);
  uncertainty->add_option("--min-total", uncertainty_options.min_total,
                          "minimum group mention total");

  // compare
  std::string left_path, right_path, left_tag, right_tag;
  std::string compare_format = "csv", compare_out;
  CLI::App* compare = app.add_subcommand("compare", "compare two analysis tables");
  compare->add_option("--left", left_path)->required();
  compare->add_option("--right", right_path)->required();
  compare->add_option("--left-tag", left_tag);
  compare->add_option("--right-tag", right_tag);
  compare->add_option("--format", compare_format)
      ->check(CLI::IsMember({"csv", "markdown", "structured"}));
  compare->add_option("--out", compare_out);

  // run
  PipelineOptions run_options;
  run_options.corpus_path.clear();
  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "full pipeline from a config file");
  run->add_option("--config", config_path, "JSON config; overrides flags");
  run->add_option("--corpus", run_options.corpus_path);
  run->add_option("--works", run_options.works);
  run->add_option("--lexicon", run_options.lexicon);
  run->add_option("--hedges", run_options.hedges);
  run->add_option("--group-by", run_options.group_by)
      ->check(CLI::IsMember({"fos", "period", "none"}));
  run->add_option("--periods", run_options.periods)
      ->delimiter(',')
      ->each([&run_options](const std::string&) {
        run_options.periods_given = true;
      });
  run->add_option("--min-total", run_options.min_total);
  run->add_option("--adjust", run_options.adjust)
      ->check(CLI::IsMember({"bonferroni", "none"}));
  run->add_option("--overall", run_options.overall)
      ->check(CLI::IsMember({"pattern", "mc"}));
  run->add_option("--mc-iterations", run_options.mc_iterations);
  run->add_option("--seed", run_options.seed);
  run->add_option("--format", run_options.format)
      ->check(CLI::IsMember({"csv", "markdown", "structured"}));
  run->add_option("--out", run_options.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*ingest) return cmd_ingest(ingest_corpus_path, ingest_works, ingest_out);
    if (*freq) return cmd_freq(freq_corpus_path, freq_works, freq_work, freq_out);
    if (*match) return cmd_match(match_options);
    if (*analyze) return cmd_analyze(analyze_options);
    if (*uncertainty) return cmd_uncertainty(uncertainty_options);
    if (*compare) {
      return cmd_compare(left_path, right_path, left_tag, right_tag,
                         compare_format, compare_out);
    }
    if (*run) return cmd_run(config_path, run_options);
  } catch (const cca::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const cca::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitConfig;
}
