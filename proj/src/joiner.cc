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

#include "spin/joiner.h"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>

#include <fmt/format.h>

namespace spin {

std::string_view Spin3ScoreName(Spin3Score score) {
  return score == Spin3Score::kRecall ? "recall" : "f1";
}

std::optional<Spin3Score> ParseSpin3Score(std::string_view name) {
  if (name == "recall") return Spin3Score::kRecall;
  if (name == "f1") return Spin3Score::kF1;
  return std::nullopt;
}

JoinResult JoinParts(std::string source_id,
                     const std::vector<TokenSeq>& doc_parts,
                     std::vector<TokenSeq> part_summaries,
                     const JoinConfig& config) {
  if (doc_parts.size() != part_summaries.size()) {
    throw std::invalid_argument(source_id +
                                ": part and summary counts differ");
  }
  if (doc_parts.empty()) {
    throw std::invalid_argument(source_id + ": nothing to join");
  }
  JoinResult result;
  result.source_id = std::move(source_id);

  if (config.variant != Variant::kSpin3) {
    for (const TokenSeq& summary : part_summaries) {
      result.final_summary.insert(result.final_summary.end(), summary.begin(),
                                  summary.end());
    }
    result.part_summaries = std::move(part_summaries);
    return result;
  }

  std::vector<double> scores(doc_parts.size(), 0.0);
  for (std::size_t i = 0; i < doc_parts.size(); ++i) {
    if (part_summaries[i].empty() || doc_parts[i].empty()) continue;
    scores[i] = config.spin3_score == Spin3Score::kRecall
                    ? RougeLRecall(doc_parts[i], part_summaries[i],
                                   config.rouge)
                    : RougeL(doc_parts[i], part_summaries[i], config.rouge).f1;
  }
  // max_element returns the first maximum, i.e. the lowest index on ties.
  const auto best = static_cast<std::size_t>(
      std::max_element(scores.begin(), scores.end()) - scores.begin());
  result.final_summary = part_summaries[best];
  result.part_summaries = std::move(part_summaries);
  result.selected_part = best;
  result.per_part_scores = std::move(scores);
  return result;
}

JoinResult GenerateJoined(const std::string& source_id,
                          const TokenSeq& document, const JoinConfig& config,
                          SummarizerPool& pool) {
  if (document.empty()) {
    throw std::invalid_argument(source_id + ": empty document");
  }
  const std::vector<TokenSeq> parts = SplitDocument(document,
                                                    config.chunk_size);
  std::vector<TokenSeq> summaries = pool.SummarizeParts(source_id, parts);
  return JoinParts(source_id, parts, std::move(summaries), config);
}

JoinResult GenerateJoined(const std::string& source_id,
                          const TokenSeq& document, const JoinConfig& config,
                          const SummarizerSpec& spec) {
  SummarizerPool pool(spec, 1);
  return GenerateJoined(source_id, document, config, pool);
}

namespace {

struct Accumulator {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  std::size_t n = 0;

  void Add(const RougeScore& s) {
    recall += s.recall;
    precision += s.precision;
    f1 += s.f1;
    ++n;
  }

  MetricSummary Mean() const {
    MetricSummary out;
    out.n_scored = n;
    if (n > 0) {
      const auto d = static_cast<double>(n);
      out.mean = {recall / d, precision / d, f1 / d};
    }
    return out;
  }
};

}  // namespace

namespace {

DocumentScores ScoreDocument(const JoinResult& result,
                             const TokenSeq& reference,
                             const RougeOptions& options) {
  DocumentScores doc;
  doc.source_id = result.source_id;
  // Each metric is undefined only when the gold side is too short.
  doc.rouge1_defined = !reference.empty();
  doc.rouge2_defined = reference.size() >= 2;
  doc.rougeL_defined = !reference.empty();
  if (doc.rouge1_defined) {
    doc.rouge1 = RougeN(result.final_summary, reference, 1, options);
  }
  if (doc.rouge2_defined) {
    doc.rouge2 = RougeN(result.final_summary, reference, 2, options);
  }
  if (doc.rougeL_defined && !result.final_summary.empty()) {
    doc.rougeL = RougeL(result.final_summary, reference, options);
  }
  return doc;
}

}  // namespace

EvalReport EvaluateJoined(const std::vector<JoinResult>& results,
                          const std::map<std::string, TokenSeq>& gold,
                          std::string variant, std::string summarizer,
                          const RougeOptions& options, std::size_t jobs) {
  EvalReport report;
  report.variant = std::move(variant);
  report.summarizer = std::move(summarizer);
  report.n_documents = results.size();

  std::vector<const TokenSeq*> references;
  references.reserve(results.size());
  for (const JoinResult& result : results) {
    const auto it = gold.find(result.source_id);
    if (it == gold.end()) {
      throw EvalError("unknown source_id '" + result.source_id +
                      "': no gold summary");
    }
    references.push_back(&it->second);
  }

  std::vector<DocumentScores> scores(results.size());
  const auto score = [&](std::size_t i) {
    scores[i] = ScoreDocument(results[i], *references[i], options);
  };
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(
                                              results.size(), 1));
  if (jobs == 1) {
    for (std::size_t i = 0; i < results.size(); ++i) score(i);
  } else {
    std::atomic<std::size_t> cursor{0};
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < jobs; ++w) {
      threads.emplace_back([&] {
        for (std::size_t i = cursor++; i < results.size(); i = cursor++) {
          score(i);
        }
      });
    }
  }

  // Accumulate serially in input order so sums are reproducible.
  Accumulator r1;
  Accumulator r2;
  Accumulator rl;
  for (std::size_t i = 0; i < results.size(); ++i) {
    DocumentScores& doc = scores[i];
    if (results[i].final_summary.empty()) {
      report.warnings.push_back(doc.source_id +
                                ": empty final summary scored 0");
    }
    if (!doc.rouge2_defined) {
      report.warnings.push_back(doc.source_id +
                                ": gold summary has no bigrams; ROUGE-2 "
                                "excluded from the mean");
    }
    if (!doc.rougeL_defined) {
      report.warnings.push_back(doc.source_id +
                                ": empty gold summary; excluded");
    }
    if (doc.rouge1_defined) r1.Add(doc.rouge1);
    if (doc.rouge2_defined) r2.Add(doc.rouge2);
    if (doc.rougeL_defined) rl.Add(doc.rougeL);
    report.per_document.push_back(std::move(doc));
  }
  report.rouge1 = r1.Mean();
  report.rouge2 = r2.Mean();
  report.rougeL = rl.Mean();
  return report;
}

std::string FormatResultTable(const std::vector<EvalReport>& reports) {
  std::size_t method_width = 6;
  for (const EvalReport& r : reports) {
    method_width = std::max(method_width, r.variant.size());
  }
  std::string out = fmt::format("{:<{}} | {:>6} {:>6} {:>6}\n", "Method",
                                method_width, "R1", "R2", "RL");
  out += std::string(method_width, '-') + "-+-" + std::string(20, '-') + "\n";
  for (const EvalReport& r : reports) {
    out += fmt::format("{:<{}} | {:>6.2f} {:>6.2f} {:>6.2f}\n", r.variant,
                       method_width, 100.0 * r.rouge1.mean.f1,
                       100.0 * r.rouge2.mean.f1, 100.0 * r.rougeL.mean.f1);
  }
  return out;
}

}  // namespace spin
