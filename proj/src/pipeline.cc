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

#include "spin/pipeline.h"

#include <algorithm>
#include <fstream>
#include <optional>
#include <utility>

#include <spdlog/spdlog.h>

#include "spin/batch.h"

namespace spin {
namespace {

constexpr std::size_t kProgressEvery = 1000;

template <typename Reader>
void ReportIssues(const Reader& reader, const std::filesystem::path& path) {
  for (const auto& [line, message] : reader.issues()) {
    spdlog::warn("{}: skipped invalid record ({})", path.string(), message);
  }
}

void Progress(std::size_t n, std::string_view stage) {
  if (n % kProgressEvery == 0) spdlog::info("{}: {} records", stage, n);
}

}  // namespace

StageCounts RunFilter(const FilterOptions& options) {
  auto reader = OpenCorpus(options.input, options.strict);
  JsonlWriter writer(options.output);
  StageCounts counts;
  std::size_t below = 0;
  while (auto pair = reader.Next()) {
    if (PassesLengthFilter(*pair, options.min_doc_tokens)) {
      writer.Write(ToJson(*pair));
    } else {
      ++below;
    }
    Progress(reader.records_read(), "filter");
  }
  writer.Close();
  ReportIssues(reader, options.input);
  counts.read = reader.records_read();
  counts.written = writer.records_written();
  counts.skipped = counts.read - counts.written;
  counts.extra["below_threshold"] = below;
  counts.extra["invalid"] = reader.records_skipped();
  return counts;
}

StageCounts RunSplit(const SplitOptions& options) {
  if (options.config.chunk_size == 0) {
    throw std::invalid_argument("chunk size must be >= 1");
  }
  auto reader = OpenCorpus(options.input, options.strict);
  JsonlWriter writer(options.output);

  struct Outcome {
    std::vector<AugmentedPair> pairs;
    std::optional<std::string> error;
  };
  std::size_t records_written = 0;
  std::size_t short_docs = 0;
  std::size_t failures = 0;
  const bool strict = options.strict;
  ProcessInOrder<DocSummaryPair>(
      [&] { return reader.Next(); }, options.jobs,
      [&](const DocSummaryPair& pair) {
        Outcome outcome;
        try {
          outcome.pairs = AugmentPair(pair, options.config);
        } catch (const SplitError& e) {
          if (strict) throw StageError(e.what());
          outcome.error = e.what();
        }
        return outcome;
      },
      [&](const DocSummaryPair&, Outcome&& outcome) {
        if (outcome.error) {
          spdlog::warn("split: skipped record: {}", *outcome.error);
          ++failures;
        } else if (outcome.pairs.empty()) {
          ++short_docs;
        } else {
          for (const AugmentedPair& a : outcome.pairs) writer.Write(ToJson(a));
          ++records_written;
        }
        Progress(reader.records_read(), "split");
      });
  writer.Close();
  ReportIssues(reader, options.input);

  StageCounts counts;
  counts.read = reader.records_read();
  counts.written = records_written;
  counts.skipped = counts.read - counts.written;
  counts.extra["augmented_records"] = writer.records_written();
  counts.extra["short_documents"] = short_docs;
  counts.extra["split_errors"] = failures;
  counts.extra["invalid"] = reader.records_skipped();
  return counts;
}

StageCounts RunSummarize(const SummarizeOptions& options) {
  if (options.chunk_size == 0) {
    throw std::invalid_argument("chunk size must be >= 1");
  }
  if (options.chunk_size > options.spec.max_input_tokens) {
    throw std::invalid_argument(
        "chunk size exceeds the summarizer window (max_input_tokens)");
  }
  SummarizerPool pool(options.spec, options.procs);
  const std::string summarizer_name = pool.Name();
  auto reader = OpenCorpus(options.input, options.strict);
  JsonlWriter writer(options.output);

  struct Outcome {
    std::vector<PartSummaryRecord> parts;
    std::optional<std::string> error;
  };
  std::size_t docs_written = 0;
  std::size_t failures = 0;
  ProcessInOrder<DocSummaryPair>(
      [&] { return reader.Next(); }, options.jobs,
      [&](const DocSummaryPair& pair) {
        Outcome outcome;
        if (pair.document.empty()) {
          outcome.error = pair.id + ": empty document";
          return outcome;
        }
        const auto doc_parts = SplitDocument(pair.document,
                                             options.chunk_size);
        try {
          auto summaries = pool.SummarizeParts(pair.id, doc_parts);
          for (std::size_t i = 0; i < doc_parts.size(); ++i) {
            outcome.parts.push_back({pair.id, i, doc_parts.size(),
                                     doc_parts[i], std::move(summaries[i]),
                                     summarizer_name});
          }
        } catch (const PartSummaryError& e) {
          outcome.error = e.what();
        }
        return outcome;
      },
      [&](const DocSummaryPair&, Outcome&& outcome) {
        if (outcome.error) {
          spdlog::warn("summarize: skipped document: {}", *outcome.error);
          ++failures;
        } else {
          for (const auto& part : outcome.parts) writer.Write(ToJson(part));
          ++docs_written;
        }
        Progress(reader.records_read(), "summarize");
      });
  writer.Close();
  ReportIssues(reader, options.input);

  StageCounts counts;
  counts.read = reader.records_read();
  counts.written = docs_written;
  counts.skipped = counts.read - counts.written;
  counts.extra["part_records"] = writer.records_written();
  counts.extra["summarize_errors"] = failures;
  counts.extra["invalid"] = reader.records_skipped();
  return counts;
}

namespace {

// Validates one source document's part records and joins them.
std::optional<JoinedRecord> JoinGroup(std::vector<PartSummaryRecord>& group,
                                      const JoinConfig& config,
                                      std::string& error) {
  const std::string& id = group.front().source_id;
  const std::size_t n_parts = group.front().n_parts;
  std::sort(group.begin(), group.end(),
            [](const auto& a, const auto& b) {
              return a.part_index < b.part_index;
            });
  bool complete = group.size() == n_parts;
  for (std::size_t i = 0; complete && i < group.size(); ++i) {
    complete = group[i].part_index == i && group[i].n_parts == n_parts;
  }
  if (!complete) {
    error = id + ": incomplete or inconsistent part records (" +
            std::to_string(group.size()) + " of " + std::to_string(n_parts) +
            ")";
    return std::nullopt;
  }
  std::vector<TokenSeq> doc_parts;
  std::vector<TokenSeq> summaries;
  for (auto& record : group) {
    doc_parts.push_back(std::move(record.document_part));
    summaries.push_back(std::move(record.summary));
  }
  JoinedRecord joined;
  joined.result = JoinParts(id, doc_parts, std::move(summaries), config);
  joined.variant = std::string(VariantName(config.variant));
  joined.summarizer = group.front().summarizer;
  return joined;
}

}  // namespace

StageCounts RunJoin(const JoinOptions& options) {
  JsonlReader<PartSummaryRecord> reader(options.input, ParsePartSummaryRecord,
                                        options.strict);
  JsonlWriter writer(options.output);
  StageCounts counts;
  std::size_t incomplete = 0;

  std::vector<PartSummaryRecord> group;
  const auto flush = [&] {
    if (group.empty()) return;
    ++counts.read;
    std::string error;
    if (auto joined = JoinGroup(group, options.config, error)) {
      writer.Write(ToJson(*joined));
      ++counts.written;
    } else {
      if (options.strict) throw StageError(error);
      spdlog::warn("join: skipped document: {}", error);
      ++incomplete;
    }
    group.clear();
  };
  while (auto record = reader.Next()) {
    if (!group.empty() && group.front().source_id != record->source_id) {
      flush();
    }
    group.push_back(std::move(*record));
  }
  flush();
  writer.Close();
  ReportIssues(reader, options.input);

  // Invalid lines cannot be attributed to a document; each counts as one
  // skipped input unit.
  counts.read += reader.records_skipped();
  counts.skipped = counts.read - counts.written;
  counts.extra["part_records_read"] = reader.records_read();
  counts.extra["incomplete_documents"] = incomplete;
  counts.extra["invalid"] = reader.records_skipped();
  return counts;
}

EvalOutcome RunEval(const EvalOptions& options) {
  if (options.inputs.empty()) throw std::invalid_argument("no eval inputs");
  std::map<std::string, TokenSeq> gold;
  {
    auto reader = OpenCorpus(options.gold, options.strict);
    while (auto pair = reader.Next()) {
      if (!gold.emplace(pair->id, std::move(pair->summary)).second) {
        throw StageError(options.gold.string() + ": duplicate id '" +
                         pair->id + "'");
      }
    }
    ReportIssues(reader, options.gold);
  }

  EvalOutcome outcome;
  for (const auto& input : options.inputs) {
    JsonlReader<JoinedRecord> reader(input, ParseJoinedRecord,
                                     options.strict);
    std::vector<JoinResult> results;
    std::string variant;
    std::string summarizer;
    while (auto record = reader.Next()) {
      if (results.empty()) {
        variant = record->variant;
        summarizer = record->summarizer;
      } else if (record->variant != variant) {
        throw StageError(input.string() + ": mixed variants ('" + variant +
                         "' and '" + record->variant + "')");
      }
      results.push_back(std::move(record->result));
    }
    ReportIssues(reader, input);
    EvalReport report = EvaluateJoined(results, gold, variant, summarizer,
                                       options.rouge, options.jobs);
    for (const auto& warning : report.warnings) {
      spdlog::warn("eval: {}", warning);
    }
    outcome.counts.read += reader.records_read();
    outcome.counts.written += results.size();
    outcome.counts.skipped += reader.records_skipped();
    outcome.reports.push_back(std::move(report));
  }
  outcome.counts.extra["gold_records"] = gold.size();
  return outcome;
}

namespace {

StatsFormat DetectFormat(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorpusIoError("cannot open '" + path.string() + "'");
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      if (j.is_object() && j.contains("source_id")) {
        return StatsFormat::kAugmented;
      }
    } catch (const nlohmann::json::parse_error&) {
      // The reader reports the malformed line.
    }
    break;
  }
  return StatsFormat::kInput;
}

template <typename Record>
void Accumulate(JsonlReader<Record>& reader, StatsAccumulator& acc) {
  while (auto record = reader.Next()) {
    acc.Add(*record);
    Progress(reader.records_read(), "stats");
  }
}

}  // namespace

StatsOutcome RunStats(const StatsOptions& options) {
  StatsFormat format = options.format;
  if (format == StatsFormat::kAuto) format = DetectFormat(options.input);

  StatsAccumulator acc;
  StatsOutcome outcome;
  std::size_t read = 0;
  std::size_t skipped = 0;
  if (format == StatsFormat::kAugmented) {
    auto reader = OpenAugmented(options.input, options.strict);
    Accumulate(reader, acc);
    ReportIssues(reader, options.input);
    read = reader.records_read();
    skipped = reader.records_skipped();
    outcome.format = "augmented";
  } else {
    auto reader = OpenCorpus(options.input, options.strict);
    Accumulate(reader, acc);
    ReportIssues(reader, options.input);
    read = reader.records_read();
    skipped = reader.records_skipped();
    outcome.format = "input";
  }
  outcome.report = acc.Report();
  outcome.counts.read = read;
  outcome.counts.skipped = skipped;
  outcome.counts.written = read - skipped;
  return outcome;
}

}  // namespace spin
