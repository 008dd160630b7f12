#include "cca/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "cca/errors.hpp"
#include "cca/textnorm.hpp"

namespace cca {

using nlohmann::json;

void WorkRegistry::add(CitedWork work) {
  if (work.work_id.empty()) throw ConfigError("work id must be non-empty");
  if (works_.count(work.work_id)) {
    throw ConfigError("duplicate work id: " + work.work_id);
  }
  for (auto& title : work.title_variants) {
    title = fold_case(title);
    if (normalize(title).empty()) {
      throw ConfigError("work " + work.work_id +
                        ": title variant empty after normalization");
    }
  }
  works_.emplace(work.work_id, std::move(work));
}

bool WorkRegistry::has(const std::string& work_id) const {
  return works_.count(work_id) != 0;
}

const CitedWork& WorkRegistry::get(const std::string& work_id) const {
  auto it = works_.find(work_id);
  if (it == works_.end()) throw DataError("unknown work id: " + work_id);
  return it->second;
}

std::vector<std::string> WorkRegistry::ids() const {
  std::vector<std::string> out;
  out.reserve(works_.size());
  for (const auto& [id, _] : works_) out.push_back(id);
  return out;
}

WorkRegistry WorkRegistry::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("work registry: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("works") || !doc["works"].is_array()) {
    throw ConfigError("work registry: expected {\"works\": [...]}");
  }
  WorkRegistry registry;
  for (const auto& entry : doc["works"]) {
    CitedWork work;
    if (!entry.is_object() || !entry.contains("id") ||
        !entry["id"].is_string()) {
      throw ConfigError("work registry: every work needs a string \"id\"");
    }
    work.work_id = entry["id"].get<std::string>();
    work.label = entry.value("label", work.work_id);
    if (entry.contains("titles")) {
      for (const auto& t : entry["titles"]) {
        work.title_variants.push_back(t.get<std::string>());
      }
    }
    registry.add(std::move(work));
  }
  return registry;
}

WorkRegistry WorkRegistry::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open work registry: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return from_json_text(text);
}

bool CitingRecord::cites(const std::string& work_id) const {
  return std::any_of(citances.begin(), citances.end(),
                     [&](const Citance& c) { return c.work_id == work_id; });
}

int Corpus::max_year() const {
  int max_year = 0;
  for (const auto& r : records_) max_year = std::max(max_year, r.year);
  return max_year;
}

namespace {

// Parses one JSONL record. Throws DataError with a short reason on any
// schema violation; the caller turns that into a record-level report entry.
CitingRecord parse_record(const std::string& line, const WorkRegistry& registry,
                          std::uint64_t* unknown_work_citations) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::exception& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DataError("record is not an object");

  CitingRecord record;
  if (!doc.contains("id") || !doc["id"].is_string()) {
    throw DataError("missing string field \"id\"");
  }
  record.record_id = doc["id"].get<std::string>();
  if (record.record_id.empty()) throw DataError("empty record id");

  if (!doc.contains("year") || !doc["year"].is_number_integer()) {
    throw DataError("missing integer field \"year\"");
  }
  record.year = doc["year"].get<int>();
  if (record.year <= 0) throw DataError("year must be positive");

  if (doc.contains("fos")) {
    if (!doc["fos"].is_array()) throw DataError("\"fos\" must be an array");
    std::set<std::string> labels;
    for (const auto& f : doc["fos"]) {
      if (!f.is_string()) throw DataError("\"fos\" entries must be strings");
      std::string label = fold_case(f.get<std::string>());
      if (!label.empty()) labels.insert(std::move(label));
    }
    record.fos.assign(labels.begin(), labels.end());
  }

  if (doc.contains("citations")) {
    if (!doc["citations"].is_array()) {
      throw DataError("\"citations\" must be an array");
    }
    for (const auto& c : doc["citations"]) {
      if (!c.is_object() || !c.contains("work") || !c["work"].is_string() ||
          !c.contains("citance") || !c["citance"].is_string()) {
        throw DataError("citations need string \"work\" and \"citance\"");
      }
      Citance citance{c["work"].get<std::string>(),
                      c["citance"].get<std::string>()};
      if (citance.text.empty()) throw DataError("empty citance text");
      if (!registry.has(citance.work_id)) {
        ++*unknown_work_citations;
        continue;
      }
      record.citances.push_back(std::move(citance));
    }
  }
  return record;
}

}  // namespace

IngestResult ingest_corpus(std::istream& stream, const WorkRegistry& registry) {
  if (registry.empty()) throw ConfigError("work registry is empty");

  IngestResult result;
  for (const std::string& id : registry.ids()) {
    result.report.per_work[id];  // ensure per-work counts exist
  }

  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.empty()) continue;

    CitingRecord record;
    try {
      record = parse_record(line, registry,
                            &result.report.unknown_work_citations);
    } catch (const DataError& e) {
      ++result.report.malformed_lines;
      result.report.errors.push_back("line " + std::to_string(line_no) + ": " +
                                     e.what());
      continue;
    }

    if (!seen_ids.insert(record.record_id).second) {
      throw DataError("duplicate record id at line " + std::to_string(line_no) +
                      ": " + record.record_id);
    }

    ++result.report.total_records;
    for (const std::string& work_id : registry.ids()) {
      if (record.cites(work_id)) {
        auto& counts = result.report.per_work[work_id];
        ++counts.with_context;
        if (!record.fos.empty()) ++counts.with_fos;
      }
    }
    // Records with no citance toward any registered work are accounted
    // above but not materialized.
    if (!record.citances.empty()) {
      result.corpus.records_.push_back(std::move(record));
    }
  }
  return result;
}

IngestResult ingest_corpus_file(const std::string& path,
                                const WorkRegistry& registry) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus: " + path);
  return ingest_corpus(in, registry);
}

CaseDerivation derive_cases(const Corpus& corpus, const std::string& work_id,
                            const WorkRegistry& registry) {
  if (!registry.has(work_id)) throw DataError("unknown work id: " + work_id);

  CaseDerivation result;
  for (const auto& record : corpus.records()) {
    std::vector<std::string> citances;
    for (const auto& citance : record.citances) {
      if (citance.work_id == work_id) citances.push_back(citance.text);
    }
    if (citances.empty()) continue;
    if (record.fos.empty()) {
      ++result.dropped_records_without_fos;
      continue;
    }
    for (const auto& label : record.fos) {
      result.cases.push_back(
          AnalysisCase{record.record_id, label, record.year, citances});
    }
  }
  std::stable_sort(result.cases.begin(), result.cases.end(),
                   [](const AnalysisCase& a, const AnalysisCase& b) {
                     if (a.record_id != b.record_id)
                       return a.record_id < b.record_id;
                     return a.fos < b.fos;
                   });
  return result;
}

}  // namespace cca
