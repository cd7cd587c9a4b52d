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

#ifndef SPIN_JOINER_H_
#define SPIN_JOINER_H_

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spin/rouge.h"
#include "spin/splitter.h"
#include "spin/summarizer.h"
#include "spin/text.h"

namespace spin {

// How SPIN3 ranks per-part generations. Both use the document part as the
// candidate and the generated summary as the reference.
enum class Spin3Score { kRecall, kF1 };

std::string_view Spin3ScoreName(Spin3Score score);
std::optional<Spin3Score> ParseSpin3Score(std::string_view name);

struct JoinConfig {
  Variant variant = Variant::kSpin3;
  std::size_t chunk_size = kDefaultChunkSize;
  Spin3Score spin3_score = Spin3Score::kRecall;
  RougeOptions rouge;
};

struct JoinResult {
  std::string source_id;
  TokenSeq final_summary;
  // In ascending part order.
  std::vector<TokenSeq> part_summaries;
  // SPIN3 only.
  std::optional<std::size_t> selected_part;
  std::optional<std::vector<double>> per_part_scores;

  friend bool operator==(const JoinResult&, const JoinResult&) = default;
};

// Joins already-generated part summaries. SPIN1/SPIN2 concatenate in part
// order; SPIN3 keeps the summary whose score against its own part is
// greatest, ties going to the lowest part index. A part whose generated
// summary is empty scores 0.
JoinResult JoinParts(std::string source_id,
                     const std::vector<TokenSeq>& doc_parts,
                     std::vector<TokenSeq> part_summaries,
                     const JoinConfig& config);

// Splits `document`, summarizes every part through `pool` and joins the
// results. A document no longer than chunk_size is a single part. Throws
// PartSummaryError naming the first failing part.
JoinResult GenerateJoined(const std::string& source_id,
                          const TokenSeq& document, const JoinConfig& config,
                          SummarizerPool& pool);

// Convenience overload that builds a single-member pool from `spec`.
JoinResult GenerateJoined(const std::string& source_id,
                          const TokenSeq& document, const JoinConfig& config,
                          const SummarizerSpec& spec);

struct DocumentScores {
  std::string source_id;
  RougeScore rouge1;
  RougeScore rouge2;
  RougeScore rougeL;
  // False when the gold summary is too short for the metric; such documents
  // are left out of that metric's corpus mean.
  bool rouge1_defined = true;
  bool rouge2_defined = true;
  bool rougeL_defined = true;
};

struct MetricSummary {
  RougeScore mean;
  std::size_t n_scored = 0;
};

struct EvalReport {
  std::string variant;
  std::string summarizer;
  std::size_t n_documents = 0;
  MetricSummary rouge1;
  MetricSummary rouge2;
  MetricSummary rougeL;
  std::vector<DocumentScores> per_document;
  std::vector<std::string> warnings;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scores each final summary against its gold summary with ROUGE-1/2/L and
// averages per-document scores without weighting. Throws EvalError for a
// source_id missing from `gold`. An empty final summary scores 0 and adds a
// warning. Documents are scored on up to `jobs` threads.
EvalReport EvaluateJoined(const std::vector<JoinResult>& results,
                          const std::map<std::string, TokenSeq>& gold,
                          std::string variant, std::string summarizer,
                          const RougeOptions& options = {},
                          std::size_t jobs = 1);

// Method x {R1, R2, RL} table of F1 x 100, one row per report.
std::string FormatResultTable(const std::vector<EvalReport>& reports);

}  // namespace spin

#endif  // SPIN_JOINER_H_
