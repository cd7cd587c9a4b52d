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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spin/corpus.h"
#include "spin/joiner.h"
#include "spin/rouge.h"
#include "spin/splitter.h"
#include "spin/subprocess.h"
#include "spin/summarizer.h"
#include "spin/text.h"
#include "test_support.h"

namespace spin {
namespace {

using nlohmann::json;
using testing::BruteForceLcs;
using testing::NaiveStats;
using testing::PlantedAlignmentPair;
using testing::RandomPair;
using testing::RandomTokens;
using testing::ReadFile;
using testing::StubSummarizerPath;
using testing::TempDir;
using testing::WriteCorpus;

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  template <typename T>
  void Expect(bool ok, const T& message) {
    if (ok || !outcome_.pass) {
      if (!ok) ++extra_failures_;
      return;
    }
    outcome_.pass = false;
    std::ostringstream s;
    s << message;
    outcome_.detail = s.str();
  }

  Outcome Finish(std::string summary) {
    if (outcome_.pass) {
      outcome_.detail = std::move(summary);
    } else if (extra_failures_ > 0) {
      outcome_.detail +=
          " (+" + std::to_string(extra_failures_) + " more failures)";
    }
    return outcome_;
  }

 private:
  Outcome outcome_;
  std::size_t extra_failures_ = 0;
};

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

int RunBinary(const std::vector<std::string>& args) {
  std::string cmd = SPIN_CLI_BINARY;
  for (const auto& a : args) cmd += " '" + a + "'";
  cmd += " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

Outcome LcsOracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<std::size_t> len(0, 12);
  constexpr int kPairs = 12000;
  Check check;
  for (int i = 0; i < kPairs; ++i) {
    const TokenSeq x = RandomTokens(rng, len(rng), 4);
    const TokenSeq y = RandomTokens(rng, len(rng), 4);
    const std::size_t lcs = LcsLength(x, y);
    const std::size_t oracle = BruteForceLcs(x, y);
    check.Expect(lcs == oracle, "pair " + std::to_string(i) + ": lcs " +
                                    std::to_string(lcs) + " != oracle " +
                                    std::to_string(oracle));
    if (!y.empty()) {
      const double recall = RougeLRecall(x, y);
      const double expected =
          static_cast<double>(oracle) / static_cast<double>(y.size());
      check.Expect(std::abs(recall - expected) <= 1e-12,
                   "pair " + std::to_string(i) + ": recall off");
    }
  }
  const double elapsed = Seconds(start);
  check.Expect(elapsed < 60.0, "took " + Fixed(elapsed) + "s");
  return check.Finish(std::to_string(kPairs) + " pairs, " + Fixed(elapsed) +
                      "s");
}

Outcome WorkedValues() {
  const RougeScore s = RougeL(Tokenize("a b c d"), Tokenize("b d e"));
  Check check;
  check.Expect(std::abs(s.recall - 2.0 / 3.0) <= 1e-9,
               "recall " + Fixed(s.recall, 12));
  check.Expect(std::abs(s.precision - 0.5) <= 1e-9,
               "precision " + Fixed(s.precision, 12));
  check.Expect(std::abs(s.f1 - 4.0 / 7.0) <= 1e-9, "f1 " + Fixed(s.f1, 12));
  return check.Finish("R=" + Fixed(s.recall, 6) + " P=" +
                      Fixed(s.precision, 6) + " F1=" + Fixed(s.f1, 6));
}

Outcome SplitterLaws() {
  const auto start = Clock::now();
  std::mt19937_64 rng(102);
  std::uniform_int_distribution<std::size_t> doc_len(1, 30000);
  constexpr std::size_t kChunk = 4096;
  constexpr int kPairs = 1000;
  SplitConfig config;
  config.chunk_size = kChunk;
  config.variant = Variant::kSpin1;
  config.short_doc_policy = ShortDocPolicy::kPassthrough;
  Check check;
  for (int i = 0; i < kPairs; ++i) {
    const std::size_t k = doc_len(rng);
    const std::size_t n = (k + kChunk - 1) / kChunk;
    std::uniform_int_distribution<std::size_t> sum_len(n, 300);
    const DocSummaryPair pair =
        RandomPair(rng, "d" + std::to_string(i), k, sum_len(rng));
    const std::string tag = "pair " + std::to_string(i) + ": ";

    const auto parts = SplitDocument(pair.document, kChunk);
    TokenSeq joined;
    for (const auto& p : parts) joined.insert(joined.end(), p.begin(), p.end());
    check.Expect(joined == pair.document, tag + "concatenation differs");
    check.Expect(parts.size() == n, tag + "part count");
    check.Expect(PartCount(k, kChunk) == n, tag + "PartCount");

    const auto augmented = AugmentPair(pair, config);
    check.Expect(augmented.size() == n, tag + "augmented count");
    if (n == 1) {
      check.Expect(augmented.size() == 1 &&
                       augmented[0].paired_summary == pair.summary,
                   tag + "single part must carry the whole summary");
      continue;
    }
    const auto slices = SplitSummaryFixed(pair.summary, n);
    const std::size_t step = pair.summary.size() / n;
    std::vector<int> used(n, 0);
    for (std::size_t p = 0; p < augmented.size(); ++p) {
      const AugmentedPair& a = augmented[p];
      check.Expect(a.part_index == p && a.document_part == parts[p],
                   tag + "part order");
      check.Expect(a.paired_summary.size() == step, tag + "slice length");
      const auto it =
          std::find(slices.begin(), slices.end(), a.paired_summary);
      check.Expect(it != slices.end(), tag + "summary is not a slice");
      if (it != slices.end()) {
        // Equal slices are interchangeable; count the first unused one.
        std::size_t s = it - slices.begin();
        while (s < n && (used[s] || slices[s] != a.paired_summary)) ++s;
        check.Expect(s < n, tag + "slice used twice");
        if (s < n) used[s] = 1;
      }
    }
    check.Expect(std::count(used.begin(), used.end(), 1) ==
                     static_cast<long>(n),
                 tag + "not a bijection");
  }
  const double elapsed = Seconds(start);
  check.Expect(elapsed < 60.0, "took " + Fixed(elapsed) + "s");
  return check.Finish(std::to_string(kPairs) + " pairs, " + Fixed(elapsed) +
                      "s");
}

Outcome PlantedAlignment() {
  std::mt19937_64 rng(103);
  SplitConfig config;
  config.variant = Variant::kSpin1;
  constexpr int kTrials = 10;
  Check check;
  int recovered = 0;
  int total = 0;
  for (std::size_t l = 2; l <= 8; ++l) {
    for (int t = 0; t < kTrials; ++t) {
      const DocSummaryPair pair = PlantedAlignmentPair(
          rng, "L" + std::to_string(l) + "_" + std::to_string(t), l,
          kDefaultChunkSize, 25);
      const auto slices = SplitSummaryFixed(pair.summary, l);
      const auto augmented = AugmentPair(pair, config);
      bool identity = augmented.size() == l;
      for (std::size_t p = 0; identity && p < l; ++p) {
        identity = augmented[p].paired_summary == slices[p];
      }
      ++total;
      if (identity) ++recovered;
      check.Expect(identity, "L=" + std::to_string(l) + " trial " +
                                 std::to_string(t) + " not recovered");
    }
  }
  return check.Finish(std::to_string(recovered) + "/" +
                      std::to_string(total) + " identity matchings");
}

std::vector<DocSummaryPair> SyntheticCorpus() {
  std::mt19937_64 rng(104);
  std::uniform_int_distribution<std::size_t> doc_len(1000, 30000);
  std::uniform_int_distribution<std::size_t> sum_len(50, 400);
  std::vector<DocSummaryPair> pairs;
  for (int i = 0; i < 200; ++i) {
    pairs.push_back(RandomPair(rng, "doc" + std::to_string(i), doc_len(rng),
                               sum_len(rng)));
  }
  return pairs;
}

void ExpectStats(Check& check, const json& got, const CorpusStats& expected,
                 const std::string& column) {
  check.Expect(got.at("count").get<std::uint64_t>() == expected.count,
               column + " count");
  check.Expect(got.at("mean").get<double>() == expected.mean,
               column + " mean");
  check.Expect(got.at("50%").get<std::uint64_t>() == expected.p50,
               column + " p50");
  check.Expect(got.at("75%").get<std::uint64_t>() == expected.p75,
               column + " p75");
  check.Expect(got.at("max").get<std::uint64_t>() == expected.max,
               column + " max");
}

Outcome StatsEcho(const TempDir& dir) {
  const auto pairs = SyntheticCorpus();
  std::vector<std::uint64_t> doc_lengths;
  std::vector<std::uint64_t> sum_lengths;
  for (const auto& p : pairs) {
    doc_lengths.push_back(p.document.size());
    sum_lengths.push_back(p.summary.size());
  }
  Check check;
  check.Expect(RunBinary({"stats", "--input",
                          (dir / "corpus.jsonl").string(), "--output",
                          (dir / "stats.json").string()}) == 0,
               "stats exited nonzero");
  const json stats = json::parse(ReadFile(dir / "stats.json"));
  ExpectStats(check, stats.at("document"), NaiveStats(doc_lengths), "|D|");
  ExpectStats(check, stats.at("summary"), NaiveStats(sum_lengths), "|S|");

  check.Expect(RunBinary({"pipeline", "--mode", "split", "--input",
                          (dir / "corpus.jsonl").string(), "--output",
                          (dir / "augmented.jsonl").string()}) == 0,
               "pipeline split exited nonzero");
  check.Expect(RunBinary({"stats", "--input",
                          (dir / "augmented.jsonl").string(), "--output",
                          (dir / "split_stats.json").string()}) == 0,
               "stats on augmented exited nonzero");
  const json split_stats = json::parse(ReadFile(dir / "split_stats.json"));
  const auto max_part = split_stats.at("document").at("max").get<int>();
  check.Expect(split_stats.at("format") == "augmented", "format detection");
  check.Expect(max_part == 4096, "max part length " + std::to_string(max_part));
  return check.Finish(
      "200 docs; " + std::to_string(stats["document"]["count"].get<int>()) +
      " records match the oracle; " +
      std::to_string(split_stats["document"]["count"].get<int>()) +
      " parts, max part " + std::to_string(max_part));
}

Outcome JoinDeterminism(const TempDir& dir) {
  const auto start = Clock::now();
  const std::vector<std::string> files{"report.json", "report.json.work/parts.jsonl",
                                       "report.json.work/joined.jsonl"};
  const auto run = [&](const std::string& name, const std::string& jobs) {
    const auto out = dir / name;
    std::filesystem::create_directories(out);
    return RunBinary({"pipeline", "--mode", "generate", "--input",
                      (dir / "corpus.jsonl").string(), "--output",
                      (out / "report.json").string(), "--summarizer", "lead_k",
                      "--k", "64", "--variant", "spin3", "--jobs", jobs,
                      "--table", (out / "table.txt").string()});
  };
  Check check;
  check.Expect(run("run_a", "1") == 0, "run_a exited nonzero");
  check.Expect(run("run_b", "1") == 0, "run_b exited nonzero");
  check.Expect(run("run_c", "8") == 0, "run_c exited nonzero");
  std::size_t bytes = 0;
  for (const auto& f : files) {
    const std::string a = ReadFile(dir / "run_a" / f);
    bytes += a.size();
    check.Expect(!a.empty(), f + " is empty");
    check.Expect(a == ReadFile(dir / "run_b" / f), f + " differs across runs");
    check.Expect(a == ReadFile(dir / "run_c" / f),
                 f + " differs between --jobs 1 and --jobs 8");
  }
  return check.Finish("3 runs, " + std::to_string(files.size()) +
                      " artifacts (" + std::to_string(bytes) +
                      " bytes) identical, " + Fixed(Seconds(start)) + "s");
}

SummarizerPool StubPool(std::vector<std::string> extra) {
  SummarizerSpec spec;
  spec.kind = SummarizerSpec::Kind::kExternal;
  spec.command = {StubSummarizerPath()};
  spec.command.insert(spec.command.end(), extra.begin(), extra.end());
  return SummarizerPool(spec, 2);
}

Outcome Spin3Selection() {
  std::mt19937_64 rng(105);
  JoinConfig config;
  config.variant = Variant::kSpin3;
  Check check;
  int docs = 0;
  auto identity = StubPool({"--echo"});
  for (std::size_t n = 1; n <= 6; ++n) {
    const TokenSeq doc = RandomTokens(rng, 4096 * (n - 1) + 1000, 3000);
    const JoinResult r = GenerateJoined("id" + std::to_string(n), doc, config,
                                        identity);
    ++docs;
    for (double s : *r.per_part_scores) {
      check.Expect(s == 1.0, "identity score " + Fixed(s, 6));
    }
    check.Expect(r.selected_part == 0u, "identity did not select part 0");
  }
  for (std::size_t n = 2; n <= 6; ++n) {
    const TokenSeq doc = RandomTokens(rng, 4096 * (n - 1) + 1000, 3000);
    for (std::size_t bad = 0; bad < n; ++bad) {
      auto pool = StubPool({"--echo", "--disjoint-part", std::to_string(bad)});
      const JoinResult r =
          GenerateJoined("dj" + std::to_string(n), doc, config, pool);
      ++docs;
      check.Expect(r.selected_part != bad,
                   "disjoint part " + std::to_string(bad) + " selected");
      check.Expect((*r.per_part_scores)[bad] == 0.0,
                   "disjoint part scored nonzero");
    }
  }
  return check.Finish(std::to_string(docs) + " documents via the stub");
}

Outcome EvalShape(const TempDir& dir) {
  const auto pairs = SyntheticCorpus();
  std::vector<std::string> args{"eval"};
  for (Variant v : {Variant::kSpin1, Variant::kSpin2, Variant::kSpin3}) {
    const std::string path =
        (dir / (std::string(VariantName(v)) + "_gold.jsonl")).string();
    JsonlWriter writer(path);
    for (const auto& p : pairs) {
      JoinedRecord record;
      record.result.source_id = p.id;
      record.result.final_summary = p.summary;
      record.result.part_summaries = {p.summary};
      if (v == Variant::kSpin3) {
        record.result.selected_part = 0;
        record.result.per_part_scores = std::vector<double>{1.0};
      }
      record.variant = std::string(VariantName(v));
      record.summarizer = "gold";
      writer.Write(ToJson(record));
    }
    writer.Close();
    args.push_back("--input");
    args.push_back(path);
  }
  args.insert(args.end(),
              {"--gold", (dir / "corpus.jsonl").string(), "--output",
               (dir / "eval.json").string(), "--table",
               (dir / "eval.txt").string()});
  Check check;
  check.Expect(RunBinary(args) == 0, "eval exited nonzero");
  const json report = json::parse(ReadFile(dir / "eval.json"));
  check.Expect(report.is_array() && report.size() == 3, "expected 3 rows");
  const char* names[] = {"SPIN1", "SPIN2", "SPIN3"};
  for (std::size_t i = 0; i < report.size() && i < 3; ++i) {
    check.Expect(report[i]["variant"] == names[i], "row order");
    for (const char* metric : {"rouge1", "rouge2", "rougeL"}) {
      for (const char* field : {"recall", "precision", "f1"}) {
        check.Expect(report[i][metric][field].get<double>() == 1.0,
                     std::string(names[i]) + " " + metric + " " + field);
      }
    }
  }
  const std::string table = ReadFile(dir / "eval.txt");
  std::size_t hits = 0;
  for (auto pos = table.find("100.00"); pos != std::string::npos;
       pos = table.find("100.00", pos + 1)) {
    ++hits;
  }
  check.Expect(hits == 9, "table cells at 100.00: " + std::to_string(hits));
  return check.Finish("3 variants x {R1,R2,RL}, all 1.0");
}

Outcome ProtocolRoundTrip() {
  std::mt19937_64 rng(106);
  std::uniform_int_distribution<std::size_t> len(1, 300);
  ChildProcess child({StubSummarizerPath(), "--echo"});
  constexpr int kRequests = 100;
  const int empty_at = 37;
  Check check;
  for (int i = 0; i < kRequests; ++i) {
    const std::string id = "src" + std::to_string(i % 7) + "#" +
                           std::to_string(i);
    const std::string text =
        i == empty_at ? "" : Detokenize(RandomTokens(rng, len(rng), 40));
    json request{{"id", id}, {"text", text}, {"max_tokens", 4096}};
    child.WriteLine(request.dump());
    const auto line = child.ReadLine(std::chrono::seconds(10));
    check.Expect(line.has_value(), "no response for " + id);
    if (!line) break;
    const json response = json::parse(*line);
    check.Expect(response.at("id") == id, "id mismatch at " + id);
    if (i == empty_at) {
      check.Expect(response.contains("error") && !response.contains("summary"),
                   "empty text did not yield an error");
    } else {
      check.Expect(response.value("summary", std::string("<none>")) == text,
                   "echo mismatch at " + id);
    }
  }
  return check.Finish(std::to_string(kRequests) +
                      " requests in order, 1 error response");
}

}  // namespace
}  // namespace spin

int main() {
  using spin::Outcome;
  spin::testing::TempDir dir;
  // Shared by the stats, determinism and eval criteria.
  spin::testing::WriteCorpus(spin::SyntheticCorpus(), dir / "corpus.jsonl");
  const std::vector<std::pair<std::string, std::function<Outcome()>>>
      criteria{
          {"lcs-rouge-oracle-equivalence", spin::LcsOracle},
          {"rouge-l-worked-values", spin::WorkedValues},
          {"splitter-structural-laws", spin::SplitterLaws},
          {"planted-alignment-recovery", spin::PlantedAlignment},
          {"stats-structural-echo", [&] { return spin::StatsEcho(dir); }},
          {"join-determinism", [&] { return spin::JoinDeterminism(dir); }},
          {"spin3-selection-law", spin::Spin3Selection},
          {"eval-report-shape", [&] { return spin::EvalShape(dir); }},
          {"secondary: protocol-round-trip", spin::ProtocolRoundTrip},
      };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::cout << (outcome.pass ? "PASS " : "FAIL ") << name << ": "
              << outcome.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed"
                              : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
