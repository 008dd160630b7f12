#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "cca/builtin.hpp"
#include "cca/corpus.hpp"
#include "cca/errors.hpp"
#include "cca/matcher.hpp"
#include "cca/report.hpp"
#include "cca/stats.hpp"
#include "cca/textnorm.hpp"
#include "cca/version.hpp"

namespace py = pybind11;

namespace {

cca::Grouping make_grouping(const std::string& group_by,
                            const std::optional<std::vector<int>>& periods) {
  if (group_by == "fos") return cca::Grouping::by_fos();
  if (group_by == "none") return cca::Grouping::none();
  if (group_by == "period") {
    return cca::Grouping::by_period(periods.value_or(
        std::vector<int>{2000, 2006, 2011}));
  }
  throw cca::ConfigError("unknown grouping: " + group_by);
}

cca::WorkRegistry make_registry(const std::optional<std::string>& works_path) {
  if (!works_path || works_path->empty()) return cca::builtin::registry();
  return cca::WorkRegistry::load(*works_path);
}

cca::Format make_format(const std::string& name) {
  return cca::parse_format(name);
}

py::dict report_to_dict(const cca::IngestReport& report) {
  py::dict out;
  out["total_records"] = report.total_records;
  out["malformed_lines"] = report.malformed_lines;
  out["unknown_work_citations"] = report.unknown_work_citations;
  py::dict per_work;
  for (const auto& [work, counts] : report.per_work) {
    py::dict entry;
    entry["with_context"] = counts.with_context;
    entry["with_fos"] = counts.with_fos;
    per_work[py::str(work)] = entry;
  }
  out["per_work"] = per_work;
  out["errors"] = report.errors;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Citation concept analysis: lexicon matching over citances and "
            "multiple-response statistics.";
  m.attr("__version__") = cca::kVersion;

  py::register_exception<cca::ConfigError>(m, "ConfigError",
                                           PyExc_ValueError);
  py::register_exception<cca::DataError>(m, "DataError", PyExc_RuntimeError);

  m.def(
      "normalize",
      [](const std::string& text, const std::string& separators) {
        return cca::normalize(text, separators).tokens;
      },
      py::arg("text"), py::arg("separators") = std::string(",.;:"));

  m.def(
      "word_frequency",
      [](const std::vector<std::string>& texts, const std::string& separators) {
        std::vector<cca::TokenizedCitance> citances;
        citances.reserve(texts.size());
        for (const auto& text : texts) {
          citances.push_back(cca::normalize(text, separators));
        }
        return cca::word_frequency(citances).ranked();
      },
      py::arg("texts"), py::arg("separators") = std::string(",.;:"));

  m.def(
      "bin_periods",
      [](const std::vector<int>& years, const std::vector<int>& edges) {
        auto [binning, assignment] = cca::bin_periods(years, edges);
        return py::make_tuple(binning.labels, assignment);
      },
      py::arg("years"), py::arg("edges"));

  py::class_<cca::ConceptLexicon>(m, "ConceptLexicon")
      .def_readonly("work_id", &cca::ConceptLexicon::work_id)
      .def_property_readonly("concepts",
                             [](const cca::ConceptLexicon& lexicon) {
                               std::vector<std::string> names;
                               for (const auto& c : lexicon.concepts) {
                                 names.push_back(c.name);
                               }
                               return names;
                             })
      .def_static("load", &cca::ConceptLexicon::load, py::arg("path"));

  py::class_<cca::HedgeLexicon>(m, "HedgeLexicon")
      .def_readonly("terms", &cca::HedgeLexicon::terms)
      .def_static("load", &cca::HedgeLexicon::load, py::arg("path"));

  m.def("builtin_lexicon", [](const std::string& name) {
    cca::ConceptLexicon lexicon;
    if (!cca::builtin::lexicon_by_name(name, &lexicon)) {
      throw cca::ConfigError("unknown builtin lexicon: " + name);
    }
    return lexicon;
  });
  m.def("builtin_hedges", [] { return cca::builtin::hedges(); });

  py::class_<cca::Corpus>(m, "Corpus")
      .def("__len__", &cca::Corpus::size)
      .def_property_readonly("max_year", &cca::Corpus::max_year);

  m.def(
      "load_corpus",
      [](const std::string& path, const std::optional<std::string>& works) {
        auto registry = make_registry(works);
        auto result = cca::ingest_corpus_file(path, registry);
        return py::make_tuple(std::move(result.corpus),
                              report_to_dict(result.report));
      },
      py::arg("path"), py::arg("works") = py::none(),
      "Ingest a JSONL corpus; returns (corpus, report).");

  py::class_<cca::MatchMatrix>(m, "MatchMatrix")
      .def_readonly("work_id", &cca::MatchMatrix::work_id)
      .def_readonly("concepts", &cca::MatchMatrix::concepts)
      .def("__len__",
           [](const cca::MatchMatrix& matrix) { return matrix.rows.size(); })
      .def("row",
           [](const cca::MatchMatrix& matrix, std::size_t i) {
             const auto& row = matrix.rows.at(i);
             return py::make_tuple(row.record_id, row.fos, row.year,
                                   row.mentions, row.hedged);
           })
      .def("to_csv", &cca::render_match_matrix_csv);

  m.def(
      "build_matrix",
      [](const cca::Corpus& corpus, const cca::ConceptLexicon& lexicon,
         const std::optional<cca::HedgeLexicon>& hedges,
         const std::optional<std::string>& works) {
        auto registry = make_registry(works);
        auto derivation = cca::derive_cases(corpus, lexicon.work_id, registry);
        return cca::build_match_matrix(
            derivation.cases, lexicon,
            hedges.value_or(cca::builtin::hedges()));
      },
      py::arg("corpus"), py::arg("lexicon"), py::arg("hedges") = py::none(),
      py::arg("works") = py::none(),
      "Derive cases for the lexicon's work and match every citance.");

  py::class_<cca::MultiResponseTable>(m, "MultiResponseTable")
      .def_readonly("work_id", &cca::MultiResponseTable::work_id)
      .def_readonly("concepts", &cca::MultiResponseTable::concepts)
      .def_readonly("groups", &cca::MultiResponseTable::groups)
      .def_readonly("mention_counts", &cca::MultiResponseTable::mention_counts)
      .def_readonly("case_counts", &cca::MultiResponseTable::case_counts)
      .def("concept_total", &cca::MultiResponseTable::concept_total)
      .def("grand_total", &cca::MultiResponseTable::grand_total)
      .def("total_cases", &cca::MultiResponseTable::total_cases)
      .def("pct", &cca::MultiResponseTable::pct)
      .def("concept_total_pct", &cca::MultiResponseTable::concept_total_pct);

  py::class_<cca::TestResult>(m, "TestResult")
      .def_readonly("concept", &cca::TestResult::concept_name)
      .def_readonly("statistic", &cca::TestResult::statistic)
      .def_readonly("df", &cca::TestResult::df)
      .def_readonly("p_raw", &cca::TestResult::p_raw)
      .def_property_readonly("p_adjusted",
                             [](const cca::TestResult& test) -> py::object {
                               if (test.p_adjusted) {
                                 return py::float_(*test.p_adjusted);
                               }
                               return py::none();
                             })
      .def_readonly("method", &cca::TestResult::method)
      .def_readonly("warnings", &cca::TestResult::warnings)
      .def("__repr__", [](const cca::TestResult& test) {
        std::ostringstream out;
        out << "TestResult(";
        if (!test.concept_name.empty()) out << test.concept_name << ", ";
        out << "chi2=" << test.statistic << ", df=" << test.df
            << ", p=" << test.p_raw << ", method=" << test.method << ")";
        return out.str();
      });

  m.def(
      "tabulate",
      [](const cca::MatchMatrix& matrix, const std::string& group_by,
         const std::optional<std::vector<int>>& periods) {
        return cca::tabulate(matrix, make_grouping(group_by, periods));
      },
      py::arg("matrix"), py::arg("group_by") = "fos",
      py::arg("periods") = py::none());

  m.def(
      "per_item_tests",
      [](const cca::MultiResponseTable& table, const std::string& adjust) {
        return cca::per_item_chi2(table, adjust == "none"
                                             ? cca::Adjustment::none
                                             : cca::Adjustment::bonferroni);
      },
      py::arg("table"), py::arg("adjust") = "bonferroni");

  m.def(
      "overall_test",
      [](const cca::MatchMatrix& matrix, const std::string& group_by,
         const std::optional<std::vector<int>>& periods,
         const std::string& mode, int iterations, std::uint64_t seed) {
        return cca::overall_chi2(matrix, make_grouping(group_by, periods),
                                 mode == "mc" ? cca::OverallMode::monte_carlo
                                              : cca::OverallMode::pattern_df,
                                 cca::McParams{iterations, seed});
      },
      py::arg("matrix"), py::arg("group_by") = "fos",
      py::arg("periods") = py::none(), py::arg("mode") = "pattern",
      py::arg("iterations") = 10000, py::arg("seed") = 0);

  py::class_<cca::UncertaintyTable>(m, "UncertaintyTable")
      .def_readonly("work_id", &cca::UncertaintyTable::work_id)
      .def_readonly("concepts", &cca::UncertaintyTable::concepts)
      .def_readonly("retained_groups", &cca::UncertaintyTable::retained_groups)
      .def_readonly("mention_counts", &cca::UncertaintyTable::mention_counts)
      .def_readonly("hedged_counts", &cca::UncertaintyTable::hedged_counts)
      .def_readonly("concept_total_mentions",
                    &cca::UncertaintyTable::concept_total_mentions)
      .def_readonly("concept_total_hedged",
                    &cca::UncertaintyTable::concept_total_hedged)
      .def_readonly("grand_mentions", &cca::UncertaintyTable::grand_mentions)
      .def_readonly("grand_hedged", &cca::UncertaintyTable::grand_hedged)
      .def_static("rate", &cca::UncertaintyTable::rate);

  m.def(
      "uncertainty",
      [](const cca::MatchMatrix& matrix, const std::string& group_by,
         const std::optional<std::vector<int>>& periods,
         std::uint64_t min_total) {
        auto result = cca::uncertainty_rates(
            matrix, make_grouping(group_by, periods), min_total);
        return py::make_tuple(std::move(result.table), result.test);
      },
      py::arg("matrix"), py::arg("group_by") = "fos",
      py::arg("periods") = py::none(), py::arg("min_total") = 300);

  py::class_<cca::ComparisonTable>(m, "ComparisonTable")
      .def_readonly("left_label", &cca::ComparisonTable::left_label)
      .def_readonly("right_label", &cca::ComparisonTable::right_label)
      .def_readonly("left_total", &cca::ComparisonTable::left_total)
      .def_readonly("right_total", &cca::ComparisonTable::right_total)
      .def("rows", [](const cca::ComparisonTable& table) {
        py::list rows;
        for (const auto& row : table.rows) {
          py::dict entry;
          entry["group"] = row.group;
          entry["left_n"] = row.left_n;
          entry["right_n"] = row.right_n;
          entry["left_pct"] = row.left_pct;
          entry["right_pct"] = row.right_pct;
          entry["abs_diff"] = row.abs_diff;
          entry["larger"] = row.larger;
          rows.append(entry);
        }
        return rows;
      });

  m.def(
      "compare",
      [](const cca::MultiResponseTable& left,
         const cca::MultiResponseTable& right, const std::string& left_tag,
         const std::string& right_tag) {
        auto comparison = cca::compare_books(left, right, left_tag, right_tag);
        return py::make_tuple(std::move(comparison.table),
                              std::move(comparison.test));
      },
      py::arg("left"), py::arg("right"), py::arg("left_tag") = "L",
      py::arg("right_tag") = "R");

  m.def(
      "render",
      [](const cca::MultiResponseTable& table,
         const std::vector<cca::TestResult>& tests, const std::string& format) {
        return cca::render(table, tests, make_format(format));
      },
      py::arg("table"), py::arg("tests") = std::vector<cca::TestResult>{},
      py::arg("format") = "csv");
  m.def(
      "render_uncertainty",
      [](const cca::UncertaintyTable& table,
         const std::optional<cca::TestResult>& test,
         const std::string& format) {
        return cca::render(table, test, make_format(format));
      },
      py::arg("table"), py::arg("test") = py::none(),
      py::arg("format") = "csv");
  m.def(
      "render_comparison",
      [](const cca::ComparisonTable& table, const cca::TestResult& test,
         const std::string& format) {
        return cca::render(table, test, make_format(format));
      },
      py::arg("table"), py::arg("test"), py::arg("format") = "csv");

  m.def("parse_multi_response", &cca::parse_multi_response, py::arg("text"));
  m.def("chi2_survival", &cca::chi2_survival, py::arg("statistic"),
        py::arg("df"));
}
