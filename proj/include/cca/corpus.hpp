#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace cca {

// A cited work; different editions and translations collapse to one entry.
struct CitedWork {
  std::string work_id;
  std::string label;
  std::vector<std::string> title_variants;  // normalized phrases
};

class WorkRegistry {
 public:
  // Throws ConfigError on duplicate ids or empty normalized title variants.
  void add(CitedWork work);

  bool has(const std::string& work_id) const;
  const CitedWork& get(const std::string& work_id) const;
  std::vector<std::string> ids() const;
  bool empty() const { return works_.empty(); }

  // Loads a JSON registry: {"works": [{"id", "label", "titles": [...]}]}.
  static WorkRegistry load(const std::string& path);
  static WorkRegistry from_json_text(const std::string& text);

 private:
  std::map<std::string, CitedWork> works_;
};

// One citation context toward a registered work. The text may span more or
// less than a sentence, as delivered by the source database.
struct Citance {
  std::string work_id;
  std::string text;
};

struct CitingRecord {
  std::string record_id;
  int year = 0;
  std::vector<std::string> fos;  // normalized lowercase, deduplicated, sorted
  std::vector<Citance> citances;

  bool cites(const std::string& work_id) const;
};

// The statistical unit: one (record, field-of-study) pair carrying the
// record's citances toward the analyzed work.
struct AnalysisCase {
  std::string record_id;
  std::string fos;
  int year = 0;
  std::vector<std::string> citances;  // texts toward the analyzed work
};

struct IngestReport {
  struct WorkCounts {
    std::uint64_t with_context = 0;  // records with >=1 citance toward the work
    std::uint64_t with_fos = 0;      // of those, records with >=1 field label
  };

  std::uint64_t total_records = 0;  // well-formed input lines
  std::uint64_t malformed_lines = 0;
  std::uint64_t unknown_work_citations = 0;  // citations dropped
  std::map<std::string, WorkCounts> per_work;
  std::vector<std::string> errors;  // one message per rejected line
};

class Corpus;
struct IngestResult;
IngestResult ingest_corpus(std::istream& stream, const WorkRegistry& registry);

// Immutable once built; safe to share across readers.
class Corpus {
 public:
  const std::vector<CitingRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  int max_year() const;

 private:
  friend IngestResult ingest_corpus(std::istream&, const WorkRegistry&);
  std::vector<CitingRecord> records_;
};

struct IngestResult {
  Corpus corpus;
  IngestReport report;
};

// ingest_corpus reads line-delimited JSON records:
//   {"id": str, "year": int, "fos": [str], "citations": [{"work", "citance"}]}
// Malformed lines are collected in the report and skipped; duplicate record
// ids are a hard error (DataError). Citations toward unregistered works are
// dropped and counted. Records keep their input order.
IngestResult ingest_corpus_file(const std::string& path,
                                const WorkRegistry& registry);

struct CaseDerivation {
  std::vector<AnalysisCase> cases;  // sorted by record_id, then field label
  std::uint64_t dropped_records_without_fos = 0;
};

// For each record with >=1 citance toward work_id and >=1 field label, emits
// one case per field label. Throws DataError on an unknown work id.
CaseDerivation derive_cases(const Corpus& corpus, const std::string& work_id,
                            const WorkRegistry& registry);

}  // namespace cca
