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

#include "spin/corpus.h"

#include <algorithm>

#include <fmt/format.h>

namespace spin {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

const json& Require(const json& j, const char* key, std::size_t line) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw RecordError(line, std::string("missing required field '") + key +
                                "'");
  }
  return *it;
}

std::string RequireString(const json& j, const char* key, std::size_t line) {
  const json& v = Require(j, key, line);
  if (!v.is_string()) {
    throw RecordError(line, std::string("field '") + key +
                                "' must be a string");
  }
  return v.get<std::string>();
}

std::size_t RequireIndex(const json& j, const char* key, std::size_t line) {
  const json& v = Require(j, key, line);
  if (!v.is_number_unsigned() &&
      !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw RecordError(line, std::string("field '") + key +
                                "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

void CheckPartIndex(std::size_t part_index, std::size_t n_parts,
                    std::size_t line) {
  if (n_parts == 0 || part_index >= n_parts) {
    throw RecordError(line, "part_index must lie in [0, n_parts)");
  }
}

TokenSeq RequireTokens(const json& j, const char* key, std::size_t line) {
  return Tokenize(RequireString(j, key, line));
}

}  // namespace

DocSummaryPair ParseInputRecord(const json& j, std::size_t line) {
  DocSummaryPair pair;
  const auto id = j.find("id");
  if (id == j.end() || id->is_null()) {
    pair.id = std::to_string(line);
  } else if (id->is_string()) {
    pair.id = id->get<std::string>();
  } else if (id->is_number_integer()) {
    pair.id = id->dump();
  } else {
    throw RecordError(line, "field 'id' must be a string");
  }
  if (pair.id.empty()) throw RecordError(line, "empty 'id'");
  pair.document = RequireTokens(j, "document", line);
  pair.summary = RequireTokens(j, "summary", line);
  if (pair.summary.empty()) throw RecordError(line, "empty 'summary'");
  return pair;
}

AugmentedPair ParseAugmentedRecord(const json& j, std::size_t line) {
  AugmentedPair pair;
  pair.source_id = RequireString(j, "source_id", line);
  pair.part_index = RequireIndex(j, "part_index", line);
  pair.n_parts = RequireIndex(j, "n_parts", line);
  CheckPartIndex(pair.part_index, pair.n_parts, line);
  pair.document_part = RequireTokens(j, "document", line);
  pair.paired_summary = RequireTokens(j, "summary", line);
  const std::string variant = RequireString(j, "variant", line);
  const auto parsed = ParseVariant(variant);
  if (!parsed) throw RecordError(line, "unknown variant '" + variant + "'");
  pair.variant = *parsed;
  return pair;
}

PartSummaryRecord ParsePartSummaryRecord(const json& j, std::size_t line) {
  PartSummaryRecord record;
  record.source_id = RequireString(j, "source_id", line);
  record.part_index = RequireIndex(j, "part_index", line);
  record.n_parts = RequireIndex(j, "n_parts", line);
  CheckPartIndex(record.part_index, record.n_parts, line);
  record.document_part = RequireTokens(j, "document", line);
  record.summary = RequireTokens(j, "summary", line);
  record.summarizer = RequireString(j, "summarizer", line);
  return record;
}

JoinedRecord ParseJoinedRecord(const json& j, std::size_t line) {
  JoinedRecord record;
  record.result.source_id = RequireString(j, "source_id", line);
  record.variant = RequireString(j, "variant", line);
  record.summarizer = RequireString(j, "summarizer", line);
  record.result.final_summary = RequireTokens(j, "summary", line);
  const json& parts = Require(j, "part_summaries", line);
  if (!parts.is_array()) {
    throw RecordError(line, "field 'part_summaries' must be an array");
  }
  for (const json& part : parts) {
    if (!part.is_string()) {
      throw RecordError(line, "part summaries must be strings");
    }
    record.result.part_summaries.push_back(Tokenize(part.get<std::string>()));
  }
  if (const auto it = j.find("selected_part");
      it != j.end() && !it->is_null()) {
    record.result.selected_part = RequireIndex(j, "selected_part", line);
  }
  if (const auto it = j.find("per_part_scores");
      it != j.end() && !it->is_null()) {
    if (!it->is_array()) {
      throw RecordError(line, "field 'per_part_scores' must be an array");
    }
    std::vector<double> scores;
    for (const json& s : *it) {
      if (!s.is_number()) throw RecordError(line, "scores must be numbers");
      scores.push_back(s.get<double>());
    }
    record.result.per_part_scores = std::move(scores);
  }
  return record;
}

ordered_json ToJson(const DocSummaryPair& pair) {
  ordered_json j;
  j["id"] = pair.id;
  j["document"] = Detokenize(pair.document);
  j["summary"] = Detokenize(pair.summary);
  return j;
}

ordered_json ToJson(const AugmentedPair& pair) {
  ordered_json j;
  j["source_id"] = pair.source_id;
  j["part_index"] = pair.part_index;
  j["n_parts"] = pair.n_parts;
  j["document"] = Detokenize(pair.document_part);
  j["summary"] = Detokenize(pair.paired_summary);
  j["variant"] = VariantName(pair.variant);
  return j;
}

ordered_json ToJson(const PartSummaryRecord& record) {
  ordered_json j;
  j["source_id"] = record.source_id;
  j["part_index"] = record.part_index;
  j["n_parts"] = record.n_parts;
  j["document"] = Detokenize(record.document_part);
  j["summary"] = Detokenize(record.summary);
  j["summarizer"] = record.summarizer;
  return j;
}

ordered_json ToJson(const JoinedRecord& record) {
  const JoinResult& r = record.result;
  ordered_json j;
  j["source_id"] = r.source_id;
  j["variant"] = record.variant;
  j["summarizer"] = record.summarizer;
  j["summary"] = Detokenize(r.final_summary);
  ordered_json parts = ordered_json::array();
  for (const TokenSeq& part : r.part_summaries) {
    parts.push_back(Detokenize(part));
  }
  j["part_summaries"] = std::move(parts);
  j["selected_part"] = r.selected_part ? ordered_json(*r.selected_part)
                                       : ordered_json(nullptr);
  j["per_part_scores"] = r.per_part_scores
                             ? ordered_json(*r.per_part_scores)
                             : ordered_json(nullptr);
  return j;
}

CorpusReader OpenCorpus(const std::filesystem::path& path, bool strict) {
  return CorpusReader(path, ParseInputRecord, strict);
}

JsonlReader<AugmentedPair> OpenAugmented(const std::filesystem::path& path,
                                         bool strict) {
  return JsonlReader<AugmentedPair>(path, ParseAugmentedRecord, strict);
}

JsonlWriter::JsonlWriter(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) {
    throw CorpusIoError("cannot open '" + path.string() + "' for writing");
  }
}

void JsonlWriter::Write(const ordered_json& record) {
  out_ << record.dump() << '\n';
  if (!out_) throw CorpusIoError("write failed on '" + path_.string() + "'");
  ++records_written_;
}

void JsonlWriter::Close() {
  out_.flush();
  if (!out_) throw CorpusIoError("write failed on '" + path_.string() + "'");
  out_.close();
}

std::vector<DocSummaryPair> ReadCorpus(const std::filesystem::path& path,
                                       bool strict) {
  auto reader = OpenCorpus(path, strict);
  std::vector<DocSummaryPair> out;
  while (auto pair = reader.Next()) out.push_back(std::move(*pair));
  return out;
}

std::vector<AugmentedPair> ReadAugmented(const std::filesystem::path& path,
                                         bool strict) {
  auto reader = OpenAugmented(path, strict);
  std::vector<AugmentedPair> out;
  while (auto pair = reader.Next()) out.push_back(std::move(*pair));
  return out;
}

std::size_t WriteAugmented(const std::vector<AugmentedPair>& pairs,
                           const std::filesystem::path& path) {
  JsonlWriter writer(path);
  for (const AugmentedPair& pair : pairs) writer.Write(ToJson(pair));
  writer.Close();
  return writer.records_written();
}

bool PassesLengthFilter(const DocSummaryPair& pair,
                        std::size_t min_doc_tokens) {
  return pair.document.size() > min_doc_tokens;
}

std::vector<DocSummaryPair> FilterByLength(std::vector<DocSummaryPair> pairs,
                                           std::size_t min_doc_tokens) {
  std::erase_if(pairs, [&](const DocSummaryPair& p) {
    return !PassesLengthFilter(p, min_doc_tokens);
  });
  return pairs;
}

void LengthAccumulator::Add(std::uint64_t length) {
  ++histogram_[length];
  ++count_;
  sum_ += length;
}

void LengthAccumulator::Merge(const LengthAccumulator& other) {
  for (const auto& [length, n] : other.histogram_) histogram_[length] += n;
  count_ += other.count_;
  sum_ += other.sum_;
}

CorpusStats LengthAccumulator::Stats() const {
  CorpusStats stats;
  if (count_ == 0) return stats;
  stats.empty = false;
  stats.count = count_;
  stats.mean = static_cast<double>(sum_) / static_cast<double>(count_);
  stats.max = histogram_.rbegin()->first;

  // Nearest rank ceil(num/den * n), at least 1.
  const auto rank = [&](std::uint64_t num, std::uint64_t den) {
    return std::max<std::uint64_t>(1, (num * count_ + den - 1) / den);
  };
  const auto order_statistic = [&](std::uint64_t r) {
    std::uint64_t seen = 0;
    for (const auto& [length, n] : histogram_) {
      seen += n;
      if (seen >= r) return length;
    }
    return stats.max;
  };
  stats.p50 = order_statistic(rank(1, 2));
  stats.p75 = order_statistic(rank(3, 4));
  return stats;
}

void StatsAccumulator::Add(const DocSummaryPair& pair) {
  Add(pair.document.size(), pair.summary.size());
}

void StatsAccumulator::Add(const AugmentedPair& pair) {
  Add(pair.document_part.size(), pair.paired_summary.size());
}

void StatsAccumulator::Add(std::uint64_t document_length,
                           std::uint64_t summary_length) {
  document_.Add(document_length);
  summary_.Add(summary_length);
}

void StatsAccumulator::Merge(const StatsAccumulator& other) {
  document_.Merge(other.document_);
  summary_.Merge(other.summary_);
}

CorpusStatsReport StatsAccumulator::Report() const {
  return {document_.Stats(), summary_.Stats()};
}

CorpusStatsReport ComputeStats(const std::vector<DocSummaryPair>& pairs) {
  StatsAccumulator acc;
  for (const auto& pair : pairs) acc.Add(pair);
  return acc.Report();
}

CorpusStatsReport ComputeStats(const std::vector<AugmentedPair>& pairs) {
  StatsAccumulator acc;
  for (const auto& pair : pairs) acc.Add(pair);
  return acc.Report();
}

namespace {

ordered_json StatsJson(const CorpusStats& s) {
  ordered_json j;
  j["count"] = s.count;
  j["mean"] = s.mean;
  j["50%"] = s.p50;
  j["75%"] = s.p75;
  j["max"] = s.max;
  j["empty"] = s.empty;
  return j;
}

ordered_json ScoreJson(const RougeScore& s) {
  ordered_json j;
  j["recall"] = s.recall;
  j["precision"] = s.precision;
  j["f1"] = s.f1;
  return j;
}

ordered_json MetricJson(const MetricSummary& m) {
  ordered_json j = ScoreJson(m.mean);
  j["n_scored"] = m.n_scored;
  return j;
}

}  // namespace

ordered_json ToJson(const CorpusStatsReport& report) {
  ordered_json j;
  j["document"] = StatsJson(report.document);
  j["summary"] = StatsJson(report.summary);
  return j;
}

std::string FormatStatsTable(const CorpusStatsReport& report) {
  const CorpusStats& d = report.document;
  const CorpusStats& s = report.summary;
  std::string out = fmt::format("{:<9} {:>12} {:>12}\n", "Parameter", "|D|",
                                "|S|");
  out += fmt::format("{:<9} {:>12} {:>12}\n", "count", d.count, s.count);
  out += fmt::format("{:<9} {:>12.2f} {:>12.2f}\n", "mean", d.mean, s.mean);
  out += fmt::format("{:<9} {:>12} {:>12}\n", "50%", d.p50, s.p50);
  out += fmt::format("{:<9} {:>12} {:>12}\n", "75%", d.p75, s.p75);
  out += fmt::format("{:<9} {:>12} {:>12}\n", "max", d.max, s.max);
  return out;
}

ordered_json ToJson(const EvalReport& report) {
  ordered_json j;
  j["variant"] = report.variant;
  j["summarizer"] = report.summarizer;
  j["n_documents"] = report.n_documents;
  j["score"] = "f1";
  j["rouge1"] = MetricJson(report.rouge1);
  j["rouge2"] = MetricJson(report.rouge2);
  j["rougeL"] = MetricJson(report.rougeL);
  ordered_json docs = ordered_json::array();
  for (const DocumentScores& d : report.per_document) {
    ordered_json doc;
    doc["source_id"] = d.source_id;
    doc["rouge1"] = d.rouge1_defined ? ScoreJson(d.rouge1)
                                     : ordered_json(nullptr);
    doc["rouge2"] = d.rouge2_defined ? ScoreJson(d.rouge2)
                                     : ordered_json(nullptr);
    doc["rougeL"] = d.rougeL_defined ? ScoreJson(d.rougeL)
                                     : ordered_json(nullptr);
    docs.push_back(std::move(doc));
  }
  j["per_document"] = std::move(docs);
  j["warnings"] = report.warnings;
  return j;
}

}  // namespace spin
