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

#ifndef SPIN_PIPELINE_H_
#define SPIN_PIPELINE_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "spin/corpus.h"
#include "spin/joiner.h"
#include "spin/splitter.h"
#include "spin/summarizer.h"

// File-to-file stages. Each reads one JSONL artifact, writes the next and
// reports record accounting where read == written + skipped, counted in
// units of the stage's input records.
namespace spin {

struct StageCounts {
  std::size_t read = 0;
  std::size_t written = 0;
  std::size_t skipped = 0;
  // Stage-specific tallies (augmented records emitted, parts written, ...).
  std::map<std::string, std::size_t> extra;
};

struct FilterOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  std::size_t min_doc_tokens = kDefaultMinDocTokens;
  bool strict = false;
};
StageCounts RunFilter(const FilterOptions& options);

struct SplitOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  SplitConfig config;
  std::size_t jobs = 1;
  bool strict = false;
};
StageCounts RunSplit(const SplitOptions& options);

struct SummarizeOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  SummarizerSpec spec;
  // Number of summarizer instances (child processes for external).
  std::size_t procs = 1;
  std::size_t chunk_size = kDefaultChunkSize;
  std::size_t jobs = 1;
  bool strict = false;
};
StageCounts RunSummarize(const SummarizeOptions& options);

struct JoinOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  JoinConfig config;
  bool strict = false;
};
StageCounts RunJoin(const JoinOptions& options);

struct EvalOptions {
  // One report (one table row) per input file.
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path gold;
  RougeOptions rouge;
  std::size_t jobs = 1;
  bool strict = false;
};
struct EvalOutcome {
  std::vector<EvalReport> reports;
  StageCounts counts;
};
EvalOutcome RunEval(const EvalOptions& options);

enum class StatsFormat { kAuto, kInput, kAugmented };
struct StatsOptions {
  std::filesystem::path input;
  StatsFormat format = StatsFormat::kAuto;
  bool strict = false;
};
struct StatsOutcome {
  CorpusStatsReport report;
  StageCounts counts;
  // "input" or "augmented" after auto-detection.
  std::string format;
};
StatsOutcome RunStats(const StatsOptions& options);

// Raised by a stage for a data problem that aborts the run (strict-mode
// schema violations, duplicate gold ids, inconsistent inputs).
class StageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spin

#endif  // SPIN_PIPELINE_H_
