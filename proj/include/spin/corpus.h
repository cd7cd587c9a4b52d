// Copyright 2026 The SPIN Summarization Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPIN_CORPUS_H_
#define SPIN_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "spin/joiner.h"
#include "spin/splitter.h"
#include "spin/text.h"

namespace spin {

// A record that fails schema validation. `line` is 1-based.
class RecordError : public std::runtime_error {
 public:
  RecordError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class CorpusIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One generated summary for one document part; the intermediate record
// between the summarize and join stages.
struct PartSummaryRecord {
  std::string source_id;
  std::size_t part_index = 0;
  std::size_t n_parts = 1;
  TokenSeq document_part;
  TokenSeq summary;
  std::string summarizer;

  friend bool operator==(const PartSummaryRecord&,
                         const PartSummaryRecord&) = default;
};

// A JoinResult plus the labels the eval stage reports.
struct JoinedRecord {
  JoinResult result;
  std::string variant;
  std::string summarizer;
};

// Schema mapping. Parsers throw RecordError naming `line`.
//   input:      {"id"?, "document", "summary"}; id defaults to the line
//               number; an empty summary is rejected.
//   augmented:  {"source_id", "part_index", "n_parts", "document",
//                "summary", "variant"}
//   parts:      {"source_id", "part_index", "n_parts", "document",
//                "summary", "summarizer"}
//   joined:     {"source_id", "variant", "summarizer", "summary",
//                "part_summaries", "selected_part", "per_part_scores"}
DocSummaryPair ParseInputRecord(const nlohmann::json& j, std::size_t line);
AugmentedPair ParseAugmentedRecord(const nlohmann::json& j, std::size_t line);
PartSummaryRecord ParsePartSummaryRecord(const nlohmann::json& j,
                                         std::size_t line);
JoinedRecord ParseJoinedRecord(const nlohmann::json& j, std::size_t line);

nlohmann::ordered_json ToJson(const DocSummaryPair& pair);
nlohmann::ordered_json ToJson(const AugmentedPair& pair);
nlohmann::ordered_json ToJson(const PartSummaryRecord& record);
nlohmann::ordered_json ToJson(const JoinedRecord& record);

// Streams records out of a JSONL file in file order, holding one line at a
// time. Blank lines are ignored. In lenient mode an invalid line is counted,
// reported through `issues()` and skipped; in strict mode it throws.
template <typename Record>
class JsonlReader {
 public:
  using Parser = std::function<Record(const nlohmann::json&, std::size_t)>;

  JsonlReader(const std::filesystem::path& path, Parser parser, bool strict)
      : path_(path), in_(path), parser_(std::move(parser)), strict_(strict) {
    if (!in_) {
      throw CorpusIoError("cannot open '" + path.string() + "' for reading");
    }
  }

  std::optional<Record> Next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      ++records_read_;
      try {
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
          throw RecordError(line_no_, std::string("malformed JSON: ") +
                                          e.what());
        }
        if (!j.is_object()) {
          throw RecordError(line_no_, "expected a JSON object");
        }
        return parser_(j, line_no_);
      } catch (const RecordError& e) {
        if (strict_) throw;
        ++records_skipped_;
        issues_.emplace_back(e.line(), e.what());
      }
    }
    if (in_.bad()) {
      throw CorpusIoError("read error on '" + path_.string() + "'");
    }
    return std::nullopt;
  }

  // Non-blank lines seen so far, valid or not.
  std::size_t records_read() const { return records_read_; }
  std::size_t records_skipped() const { return records_skipped_; }
  const std::vector<std::pair<std::size_t, std::string>>& issues() const {
    return issues_;
  }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  Parser parser_;
  bool strict_;
  std::size_t line_no_ = 0;
  std::size_t records_read_ = 0;
  std::size_t records_skipped_ = 0;
  std::vector<std::pair<std::size_t, std::string>> issues_;
};

using CorpusReader = JsonlReader<DocSummaryPair>;

CorpusReader OpenCorpus(const std::filesystem::path& path, bool strict);
JsonlReader<AugmentedPair> OpenAugmented(const std::filesystem::path& path,
                                         bool strict);

// Writes one compact JSON object per line. Throws CorpusIoError on failure.
class JsonlWriter {
 public:
  explicit JsonlWriter(const std::filesystem::path& path);

  void Write(const nlohmann::ordered_json& record);
  // Flushes and reports any deferred write error.
  void Close();

  std::size_t records_written() const { return records_written_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t records_written_ = 0;
};

// Whole-file helpers for small corpora and tests.
std::vector<DocSummaryPair> ReadCorpus(const std::filesystem::path& path,
                                       bool strict = false);
std::vector<AugmentedPair> ReadAugmented(const std::filesystem::path& path,
                                         bool strict = false);
std::size_t WriteAugmented(const std::vector<AugmentedPair>& pairs,
                           const std::filesystem::path& path);

// Strictly "more than": a document of exactly min_doc_tokens is dropped.
bool PassesLengthFilter(const DocSummaryPair& pair,
                        std::size_t min_doc_tokens);
std::vector<DocSummaryPair> FilterByLength(std::vector<DocSummaryPair> pairs,
                                           std::size_t min_doc_tokens);

// Descriptive statistics of token lengths. Percentiles use the nearest-rank
// method: the ceil(p * n)-th smallest value.
struct CorpusStats {
  std::uint64_t count = 0;
  double mean = 0.0;
  std::uint64_t p50 = 0;
  std::uint64_t p75 = 0;
  std::uint64_t max = 0;
  // Set for an empty input; the other fields are then zero.
  bool empty = true;

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

// Mergeable length histogram. Memory grows with the number of distinct
// lengths, not with the number of records.
class LengthAccumulator {
 public:
  void Add(std::uint64_t length);
  void Merge(const LengthAccumulator& other);
  CorpusStats Stats() const;

 private:
  std::map<std::uint64_t, std::uint64_t> histogram_;
  std::uint64_t count_ = 0;
  std::uint64_t sum_ = 0;
};

struct CorpusStatsReport {
  CorpusStats document;
  CorpusStats summary;
};

class StatsAccumulator {
 public:
  void Add(const DocSummaryPair& pair);
  void Add(const AugmentedPair& pair);
  void Add(std::uint64_t document_length, std::uint64_t summary_length);
  void Merge(const StatsAccumulator& other);
  CorpusStatsReport Report() const;

 private:
  LengthAccumulator document_;
  LengthAccumulator summary_;
};

CorpusStatsReport ComputeStats(const std::vector<DocSummaryPair>& pairs);
CorpusStatsReport ComputeStats(const std::vector<AugmentedPair>& pairs);

nlohmann::ordered_json ToJson(const CorpusStatsReport& report);
// Rows count / mean / 50% / 75% / max; columns |D| and |S|.
std::string FormatStatsTable(const CorpusStatsReport& report);

nlohmann::ordered_json ToJson(const EvalReport& report);

}  // namespace spin

#endif  // SPIN_CORPUS_H_
