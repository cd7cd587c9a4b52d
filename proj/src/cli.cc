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

#include "spin/cli.h"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "spin/corpus.h"
#include "spin/joiner.h"
#include "spin/pipeline.h"
#include "spin/rouge.h"
#include "spin/splitter.h"
#include "spin/subprocess.h"
#include "spin/summarizer.h"

namespace spin {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void ConfigureLogging() {
  auto logger = spdlog::get("spin");
  if (!logger) {
    logger = spdlog::stderr_logger_mt("spin");
    logger->set_pattern("[%l] %v");
  }
  spdlog::set_default_logger(logger);
  const char* env = std::getenv("SPIN_LOG");
  spdlog::set_level(env != nullptr ? spdlog::level::from_str(env)
                                   : spdlog::level::info);
}

std::string Timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

// Reproducibility record for one invocation.
struct Manifest {
  std::string subcommand;
  ordered_json config = ordered_json::object();
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string started_at;
  std::string finished_at;
  StageCounts counts;
  ordered_json stages = ordered_json::object();
  std::string status = "ok";
  std::string error;
  std::string path;  // empty: write to stderr

  ordered_json ToJson() const {
    ordered_json j;
    j["tool"] = "spin";
    j["version"] = kVersion;
    j["subcommand"] = subcommand;
    j["config"] = config;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    ordered_json c;
    c["read"] = counts.read;
    c["written"] = counts.written;
    c["skipped"] = counts.skipped;
    for (const auto& [key, value] : counts.extra) c[key] = value;
    j["counts"] = c;
    if (!stages.empty()) j["stages"] = stages;
    j["status"] = status;
    if (!error.empty()) j["error"] = error;
    return j;
  }
};

ordered_json CountsJson(const StageCounts& counts) {
  ordered_json c;
  c["read"] = counts.read;
  c["written"] = counts.written;
  c["skipped"] = counts.skipped;
  for (const auto& [key, value] : counts.extra) c[key] = value;
  return c;
}

void WriteManifest(Manifest& manifest, std::ostream& err) {
  manifest.finished_at = Timestamp();
  const std::string text = manifest.ToJson().dump(2);
  if (manifest.path.empty()) {
    err << "manifest: " << manifest.ToJson().dump() << "\n";
    return;
  }
  std::ofstream out(manifest.path, std::ios::trunc);
  out << text << "\n";
  if (!out) {
    spdlog::error("cannot write manifest '{}'", manifest.path);
  }
}

void WriteTextFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) throw CorpusIoError("cannot write '" + path.string() + "'");
}

std::string ReadTextFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusIoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Variant RequireVariant(const std::string& name) {
  const auto v = ParseVariant(name);
  if (!v) throw UsageError("unknown variant '" + name + "'");
  return *v;
}

// Options shared by several subcommands.
struct Flags {
  std::string input;
  std::vector<std::string> inputs;
  std::string output;
  std::string manifest;
  std::string config;
  std::string gold;
  std::string table;
  std::string work_dir;
  std::string mode = "split";
  std::string format = "auto";
  bool strict = false;
  std::size_t jobs = 1;
  std::size_t min_tokens = kDefaultMinDocTokens;

  // split / join
  std::string variant = "spin1";
  std::size_t chunk_size = kDefaultChunkSize;
  std::string short_doc_policy = "skip";
  bool keep_summary_remainder = false;
  bool no_lowercase = false;
  std::string spin3_score = "recall";

  // summarize
  std::string summarizer = "lead_k";
  std::size_t k = 128;
  std::string command;
  std::size_t max_input_tokens = kDefaultChunkSize;
  std::size_t timeout = 300;
  std::size_t procs = 1;

  // rouge
  std::string candidate;
  std::string reference;
  std::string candidate_file;
  std::string reference_file;
  bool json = false;

  // stats
  std::optional<std::size_t> expect_doc_count;
  double tolerance = 0.02;
};

void AddManifest(CLI::App* sub, Flags& f) {
  sub->add_option("--manifest", f.manifest,
                  "Manifest path (default: <output>.manifest.json)");
  sub->add_option("--config", f.config,
                  "JSON file of flag defaults; explicit flags win");
}

void AddSplitFlags(CLI::App* sub, Flags& f) {
  sub->add_option("--variant", f.variant, "spin1 | spin2 | spin3");
  sub->add_option("--chunk-size", f.chunk_size, "Tokens per document part")
      ->check(CLI::PositiveNumber);
  sub->add_option("--short-doc-policy", f.short_doc_policy,
                  "skip | passthrough")
      ->check(CLI::IsMember({"skip", "passthrough"}));
  sub->add_flag("--keep-summary-remainder", f.keep_summary_remainder,
                "Append leftover summary tokens to the last slice");
  sub->add_flag("--no-lowercase", f.no_lowercase,
                "Match tokens case-sensitively in ROUGE");
}

void AddSummarizerFlags(CLI::App* sub, Flags& f) {
  sub->add_option("--summarizer", f.summarizer, "lead_k | external")
      ->check(CLI::IsMember({"lead_k", "external"}));
  sub->add_option("--k", f.k, "Lead-k prefix length")
      ->check(CLI::PositiveNumber);
  sub->add_option("--command", f.command,
                  "External summarizer command line (whitespace-split)");
  sub->add_option("--max-input-tokens", f.max_input_tokens,
                  "Summarizer window in tokens")
      ->check(CLI::PositiveNumber);
  sub->add_option("--timeout", f.timeout, "Seconds per external request")
      ->check(CLI::PositiveNumber);
  sub->add_option("--procs", f.procs, "Summarizer processes in the pool")
      ->check(CLI::PositiveNumber);
  sub->add_option("--chunk-size", f.chunk_size, "Tokens per document part")
      ->check(CLI::PositiveNumber);
}

void AddJoinFlags(CLI::App* sub, Flags& f) {
  sub->add_option("--spin3-score", f.spin3_score,
                  "SPIN3 ranking score: recall | f1")
      ->check(CLI::IsMember({"recall", "f1"}));
}

SplitConfig MakeSplitConfig(const Flags& f) {
  SplitConfig config;
  config.chunk_size = f.chunk_size;
  config.variant = RequireVariant(f.variant);
  config.min_doc_tokens = f.min_tokens;
  config.short_doc_policy = *ParseShortDocPolicy(f.short_doc_policy);
  config.keep_summary_remainder = f.keep_summary_remainder;
  config.rouge.lowercase = !f.no_lowercase;
  return config;
}

ordered_json SplitConfigJson(const SplitConfig& c) {
  ordered_json j;
  j["variant"] = VariantName(c.variant);
  j["chunk_size"] = c.chunk_size;
  j["short_doc_policy"] = ShortDocPolicyName(c.short_doc_policy);
  j["keep_summary_remainder"] = c.keep_summary_remainder;
  j["lowercase"] = c.rouge.lowercase;
  return j;
}

SummarizerSpec MakeSummarizerSpec(const Flags& f) {
  SummarizerSpec spec;
  spec.kind = *ParseSummarizerKind(f.summarizer);
  spec.k = f.k;
  spec.command = Tokenize(f.command);
  spec.max_input_tokens = f.max_input_tokens;
  spec.timeout = std::chrono::seconds(f.timeout);
  try {
    spec.Validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return spec;
}

ordered_json SummarizerJson(const SummarizerSpec& spec, std::size_t procs,
                            std::size_t chunk_size) {
  ordered_json j;
  j["summarizer"] = spec.Name();
  j["k"] = spec.k;
  j["command"] = spec.command;
  j["max_input_tokens"] = spec.max_input_tokens;
  j["timeout"] = spec.timeout.count();
  j["procs"] = procs;
  j["chunk_size"] = chunk_size;
  return j;
}

JoinConfig MakeJoinConfig(const Flags& f) {
  JoinConfig config;
  config.variant = RequireVariant(f.variant);
  config.chunk_size = f.chunk_size;
  config.spin3_score = *ParseSpin3Score(f.spin3_score);
  config.rouge.lowercase = !f.no_lowercase;
  return config;
}

ordered_json EvalJson(const std::vector<EvalReport>& reports) {
  if (reports.size() == 1) return ToJson(reports.front());
  ordered_json all = ordered_json::array();
  for (const auto& r : reports) all.push_back(ToJson(r));
  return all;
}

std::string FormatRouge(const TokenSeq& candidate, const TokenSeq& reference,
                        const RougeOptions& options, bool as_json) {
  ordered_json j;
  std::string text = fmt::format("{:<7} {:>9} {:>9} {:>9}\n", "metric",
                                 "recall", "precision", "f1");
  const auto row = [&](const char* name,
                       const std::function<RougeScore()>& compute) {
    try {
      const RougeScore s = compute();
      j[name] = {{"recall", s.recall},
                 {"precision", s.precision},
                 {"f1", s.f1}};
      text += fmt::format("{:<7} {:>9.4f} {:>9.4f} {:>9.4f}\n", name,
                          s.recall, s.precision, s.f1);
    } catch (const UndefinedMetricError& e) {
      j[name] = nullptr;
      text += fmt::format("{:<7} {}\n", name, e.what());
    }
  };
  row("rouge1", [&] { return RougeN(candidate, reference, 1, options); });
  row("rouge2", [&] { return RougeN(candidate, reference, 2, options); });
  row("rougeL", [&] { return RougeL(candidate, reference, options); });
  return as_json ? j.dump(2) + "\n" : text;
}

void EnsureParentDir(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

}  // namespace

std::vector<std::string> ApplyConfigOverlay(std::vector<std::string> args) {
  std::optional<std::string> config_path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) {
        throw UsageError("--config requires a path");
      }
      config_path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    }
  }
  if (!config_path) return args;

  nlohmann::json config;
  {
    std::ifstream in(*config_path);
    if (!in) throw UsageError("cannot open config '" + *config_path + "'");
    try {
      config = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError("malformed config '" + *config_path +
                       "': " + e.what());
    }
  }
  if (!config.is_object()) {
    throw UsageError("config '" + *config_path + "' must be a JSON object");
  }

  const auto present = [&](const std::string& flag) {
    for (std::size_t i = 1; i < args.size(); ++i) {
      if (args[i] == flag || args[i].rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  const auto scalar = [&](const std::string& key, const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return v.dump();
    throw UsageError("config key '" + key + "' has an unsupported value");
  };

  std::vector<std::string> extra;
  for (const auto& [key, value] : config.items()) {
    if (key == "config") continue;
    const std::string flag = "--" + key;
    if (present(flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) extra.push_back(flag);
    } else if (value.is_array()) {
      for (const auto& item : value) {
        extra.push_back(flag);
        extra.push_back(scalar(key, item));
      }
    } else {
      extra.push_back(flag);
      extra.push_back(scalar(key, value));
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

int RunCli(const std::vector<std::string>& raw_args, std::ostream& out,
           std::ostream& err) {
  ConfigureLogging();

  std::vector<std::string> args;
  try {
    args = ApplyConfigOverlay(raw_args);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsageError;
  }

  CLI::App app{"Split-then-join long-document summarization toolkit"};
  app.name(args.empty() ? "spin" : fs::path(args.front()).filename().string());
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Flags f;
  Manifest manifest;
  manifest.started_at = Timestamp();
  std::function<void()> action;

  // filter
  auto* filter = app.add_subcommand(
      "filter", "Keep records whose document is longer than --min-tokens");
  filter->add_option("--input", f.input, "Input corpus JSONL")
      ->required()->check(CLI::ExistingFile);
  filter->add_option("--output", f.output, "Filtered corpus JSONL")
      ->required();
  filter->add_option("--min-tokens", f.min_tokens,
                     "Keep documents with more than this many tokens");
  filter->add_flag("--strict", f.strict, "Abort on the first invalid record");
  AddManifest(filter, f);
  filter->callback([&] {
    action = [&] {
      FilterOptions o{f.input, f.output, f.min_tokens, f.strict};
      manifest.config["min_tokens"] = f.min_tokens;
      manifest.config["strict"] = f.strict;
      manifest.inputs = {f.input};
      manifest.outputs = {f.output};
      manifest.counts = RunFilter(o);
    };
  });

  // stats
  auto* stats = app.add_subcommand(
      "stats", "Token-length statistics (count/mean/50%/75%/max)");
  stats->add_option("--input", f.input, "Input or augmented JSONL")
      ->required()->check(CLI::ExistingFile);
  stats->add_option("--output", f.output, "Write the JSON report here");
  stats->add_option("--format", f.format, "auto | input | augmented")
      ->check(CLI::IsMember({"auto", "input", "augmented"}));
  stats->add_option("--expect-doc-count", f.expect_doc_count,
                    "Fail unless the record count is within --tolerance");
  stats->add_option("--tolerance", f.tolerance,
                    "Relative tolerance for --expect-doc-count")
      ->check(CLI::NonNegativeNumber);
  stats->add_flag("--strict", f.strict, "Abort on the first invalid record");
  AddManifest(stats, f);
  int stats_status = kExitOk;
  stats->callback([&] {
    action = [&] {
      StatsOptions o;
      o.input = f.input;
      o.strict = f.strict;
      o.format = f.format == "input"       ? StatsFormat::kInput
                 : f.format == "augmented" ? StatsFormat::kAugmented
                                           : StatsFormat::kAuto;
      StatsOutcome outcome = RunStats(o);
      manifest.config["format"] = outcome.format;
      manifest.inputs = {f.input};
      manifest.counts = outcome.counts;
      out << FormatStatsTable(outcome.report);
      if (!f.output.empty()) {
        ordered_json j = ToJson(outcome.report);
        j["format"] = outcome.format;
        WriteTextFile(f.output, j.dump(2) + "\n");
        manifest.outputs = {f.output};
      }
      if (f.expect_doc_count) {
        const double expected = static_cast<double>(*f.expect_doc_count);
        const double actual =
            static_cast<double>(outcome.report.document.count);
        const double drift =
            expected == 0 ? actual : std::abs(actual - expected) / expected;
        manifest.config["expect_doc_count"] = *f.expect_doc_count;
        manifest.config["tolerance"] = f.tolerance;
        if (drift > f.tolerance) {
          err << fmt::format(
              "error: count {} differs from expected {} by {:.2f}% "
              "(tolerance {:.2f}%)\n",
              outcome.report.document.count, *f.expect_doc_count,
              100 * drift, 100 * f.tolerance);
          stats_status = kExitDataError;
          manifest.status = "error";
          manifest.error = "record count outside tolerance";
        }
      }
    };
  });

  // split
  auto* split = app.add_subcommand(
      "split", "Augment a corpus into window-sized document/summary pairs");
  split->add_option("--input", f.input, "Input corpus JSONL")
      ->required()->check(CLI::ExistingFile);
  split->add_option("--output", f.output, "Augmented JSONL")->required();
  split->add_option("--jobs", f.jobs, "Worker threads")
      ->check(CLI::PositiveNumber);
  split->add_flag("--strict", f.strict, "Abort on the first invalid record");
  AddSplitFlags(split, f);
  AddManifest(split, f);
  split->callback([&] {
    action = [&] {
      SplitOptions o{f.input, f.output, MakeSplitConfig(f), f.jobs, f.strict};
      manifest.config = SplitConfigJson(o.config);
      manifest.config["jobs"] = f.jobs;
      manifest.inputs = {f.input};
      manifest.outputs = {f.output};
      manifest.counts = RunSplit(o);
    };
  });

  // summarize
  auto* summarize = app.add_subcommand(
      "summarize", "Summarize every document part into part-summary JSONL");
  summarize->add_option("--input", f.input, "Input corpus JSONL")
      ->required()->check(CLI::ExistingFile);
  summarize->add_option("--output", f.output, "Part-summary JSONL")
      ->required();
  summarize->add_option("--jobs", f.jobs, "Documents in flight")
      ->check(CLI::PositiveNumber);
  summarize->add_flag("--strict", f.strict,
                      "Abort on the first invalid record");
  AddSummarizerFlags(summarize, f);
  AddManifest(summarize, f);
  summarize->callback([&] {
    action = [&] {
      SummarizeOptions o{f.input,  f.output,     MakeSummarizerSpec(f),
                         f.procs,  f.chunk_size, f.jobs,
                         f.strict};
      manifest.config = SummarizerJson(o.spec, o.procs, o.chunk_size);
      manifest.config["jobs"] = f.jobs;
      manifest.inputs = {f.input};
      manifest.outputs = {f.output};
      manifest.counts = RunSummarize(o);
    };
  });

  // join
  auto* join = app.add_subcommand(
      "join", "Join part summaries into one summary per document");
  join->add_option("--input", f.input, "Part-summary JSONL")
      ->required()->check(CLI::ExistingFile);
  join->add_option("--output", f.output, "Joined JSONL")->required();
  join->add_option("--variant", f.variant, "spin1 | spin2 | spin3");
  join->add_flag("--no-lowercase", f.no_lowercase,
                 "Match tokens case-sensitively in ROUGE");
  join->add_flag("--strict", f.strict, "Abort on the first invalid record");
  AddJoinFlags(join, f);
  AddManifest(join, f);
  join->callback([&] {
    action = [&] {
      JoinOptions o{f.input, f.output, MakeJoinConfig(f), f.strict};
      manifest.config["variant"] = VariantName(o.config.variant);
      manifest.config["spin3_score"] = Spin3ScoreName(o.config.spin3_score);
      manifest.config["lowercase"] = o.config.rouge.lowercase;
      manifest.inputs = {f.input};
      manifest.outputs = {f.output};
      manifest.counts = RunJoin(o);
    };
  });

  // eval
  auto* eval = app.add_subcommand(
      "eval", "ROUGE-1/2/L report of joined summaries against gold");
  eval->add_option("--input", f.inputs,
                   "Joined JSONL; repeat for one table row per file")
      ->required()->check(CLI::ExistingFile);
  eval->add_option("--gold", f.gold, "Gold corpus JSONL")
      ->required()->check(CLI::ExistingFile);
  eval->add_option("--output", f.output, "Write the JSON report here");
  eval->add_option("--table", f.table,
                   "Write the text table here instead of stdout");
  eval->add_option("--jobs", f.jobs, "Scoring threads")
      ->check(CLI::PositiveNumber);
  eval->add_flag("--no-lowercase", f.no_lowercase,
                 "Match tokens case-sensitively");
  eval->add_flag("--strict", f.strict, "Abort on the first invalid record");
  AddManifest(eval, f);
  eval->callback([&] {
    action = [&] {
      EvalOptions o;
      for (const auto& in : f.inputs) o.inputs.emplace_back(in);
      o.gold = f.gold;
      o.rouge.lowercase = !f.no_lowercase;
      o.jobs = f.jobs;
      o.strict = f.strict;
      manifest.config["lowercase"] = o.rouge.lowercase;
      manifest.config["score"] = "f1";
      manifest.inputs = f.inputs;
      manifest.inputs.push_back(f.gold);
      EvalOutcome outcome = RunEval(o);
      manifest.counts = outcome.counts;
      const std::string table = FormatResultTable(outcome.reports);
      if (!f.output.empty()) {
        WriteTextFile(f.output, EvalJson(outcome.reports).dump(2) + "\n");
        manifest.outputs.push_back(f.output);
      }
      if (!f.table.empty()) {
        WriteTextFile(f.table, table);
        manifest.outputs.push_back(f.table);
      } else {
        out << table;
      }
    };
  });

  // rouge
  auto* rouge = app.add_subcommand("rouge", "Score a candidate text directly");
  auto* cand_text = rouge->add_option("--candidate", f.candidate,
                                      "Candidate text");
  auto* cand_file = rouge->add_option("--candidate-file", f.candidate_file,
                                      "Candidate text file")
                        ->check(CLI::ExistingFile);
  auto* ref_text = rouge->add_option("--reference", f.reference,
                                     "Reference text");
  auto* ref_file = rouge->add_option("--reference-file", f.reference_file,
                                     "Reference text file")
                       ->check(CLI::ExistingFile);
  cand_text->excludes(cand_file);
  ref_text->excludes(ref_file);
  rouge->add_flag("--no-lowercase", f.no_lowercase,
                  "Match tokens case-sensitively");
  rouge->add_flag("--json", f.json, "Print JSON instead of a table");
  AddManifest(rouge, f);
  rouge->callback([&] {
    if (cand_text->count() + cand_file->count() == 0) {
      throw CLI::RequiredError("--candidate or --candidate-file");
    }
    if (ref_text->count() + ref_file->count() == 0) {
      throw CLI::RequiredError("--reference or --reference-file");
    }
    action = [&] {
      const TokenSeq candidate = Tokenize(
          f.candidate_file.empty() ? f.candidate
                                   : ReadTextFile(f.candidate_file));
      const TokenSeq reference = Tokenize(
          f.reference_file.empty() ? f.reference
                                   : ReadTextFile(f.reference_file));
      if (reference.empty()) {
        throw UndefinedMetricError("undefined: zero-length reference");
      }
      RougeOptions options;
      options.lowercase = !f.no_lowercase;
      manifest.config["lowercase"] = options.lowercase;
      if (!f.candidate_file.empty()) manifest.inputs.push_back(f.candidate_file);
      if (!f.reference_file.empty()) manifest.inputs.push_back(f.reference_file);
      out << FormatRouge(candidate, reference, options, f.json);
      manifest.counts.read = 1;
      manifest.counts.written = 1;
    };
  });

  // pipeline
  auto* pipeline = app.add_subcommand(
      "pipeline",
      "filter -> split, or filter -> summarize -> join -> eval, in one run");
  pipeline->add_option("--mode", f.mode, "split | generate")
      ->check(CLI::IsMember({"split", "generate"}));
  pipeline->add_option("--input", f.input, "Input corpus JSONL")
      ->required()->check(CLI::ExistingFile);
  pipeline->add_option("--output", f.output,
                       "Augmented JSONL (split) or JSON report (generate)")
      ->required();
  pipeline->add_option("--work-dir", f.work_dir,
                       "Directory for intermediate files "
                       "(default: <output>.work)");
  pipeline->add_option("--min-tokens", f.min_tokens,
                       "Keep documents with more than this many tokens");
  pipeline->add_option("--jobs", f.jobs, "Worker threads")
      ->check(CLI::PositiveNumber);
  pipeline->add_option("--table", f.table,
                       "Write the text table here instead of stdout");
  pipeline->add_flag("--strict", f.strict,
                     "Abort on the first invalid record");
  AddSplitFlags(pipeline, f);
  pipeline->add_option("--summarizer", f.summarizer, "lead_k | external")
      ->check(CLI::IsMember({"lead_k", "external"}));
  pipeline->add_option("--k", f.k, "Lead-k prefix length")
      ->check(CLI::PositiveNumber);
  pipeline->add_option("--command", f.command,
                       "External summarizer command line");
  pipeline->add_option("--max-input-tokens", f.max_input_tokens,
                       "Summarizer window in tokens")
      ->check(CLI::PositiveNumber);
  pipeline->add_option("--timeout", f.timeout, "Seconds per external request")
      ->check(CLI::PositiveNumber);
  pipeline->add_option("--procs", f.procs, "Summarizer processes in the pool")
      ->check(CLI::PositiveNumber);
  AddJoinFlags(pipeline, f);
  AddManifest(pipeline, f);
  pipeline->callback([&] {
    action = [&] {
      const fs::path work =
          f.work_dir.empty() ? fs::path(f.output + ".work") : fs::path(f.work_dir);
      fs::create_directories(work);
      const fs::path filtered = work / "filtered.jsonl";
      manifest.config["mode"] = f.mode;
      manifest.config["min_tokens"] = f.min_tokens;
      manifest.config["jobs"] = f.jobs;
      manifest.config["work_dir"] = work.string();
      manifest.inputs = {f.input};

      const StageCounts filter_counts =
          RunFilter({f.input, filtered, f.min_tokens, f.strict});
      manifest.stages["filter"] = CountsJson(filter_counts);
      manifest.counts.read = filter_counts.read;

      if (f.mode == "split") {
        SplitOptions o{filtered, f.output, MakeSplitConfig(f), f.jobs,
                       f.strict};
        manifest.config["split"] = SplitConfigJson(o.config);
        const StageCounts split_counts = RunSplit(o);
        manifest.stages["split"] = CountsJson(split_counts);
        manifest.outputs = {filtered.string(), f.output};
        manifest.counts.written = split_counts.written;
        manifest.counts.extra["augmented_records"] =
            split_counts.extra.at("augmented_records");
      } else {
        const fs::path parts = work / "parts.jsonl";
        const fs::path joined = work / "joined.jsonl";
        SummarizeOptions so{filtered, parts,        MakeSummarizerSpec(f),
                            f.procs,  f.chunk_size, f.jobs,
                            f.strict};
        JoinOptions jo{parts, joined, MakeJoinConfig(f), f.strict};
        manifest.config["summarize"] =
            SummarizerJson(so.spec, so.procs, so.chunk_size);
        manifest.config["variant"] = VariantName(jo.config.variant);
        manifest.config["spin3_score"] =
            Spin3ScoreName(jo.config.spin3_score);
        manifest.stages["summarize"] = CountsJson(RunSummarize(so));
        const StageCounts join_counts = RunJoin(jo);
        manifest.stages["join"] = CountsJson(join_counts);

        EvalOptions eo;
        eo.inputs = {joined};
        eo.gold = filtered;
        eo.rouge = jo.config.rouge;
        eo.jobs = f.jobs;
        eo.strict = f.strict;
        EvalOutcome outcome = RunEval(eo);
        manifest.stages["eval"] = CountsJson(outcome.counts);
        EnsureParentDir(f.output);
        WriteTextFile(f.output, EvalJson(outcome.reports).dump(2) + "\n");
        const std::string table = FormatResultTable(outcome.reports);
        if (!f.table.empty()) {
          WriteTextFile(f.table, table);
        } else {
          out << table;
        }
        manifest.outputs = {filtered.string(), parts.string(),
                            joined.string(), f.output};
        manifest.counts.written = outcome.counts.written;
      }
      manifest.counts.skipped = manifest.counts.read - manifest.counts.written;
    };
  });

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsageError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  manifest.subcommand = chosen->get_name();
  if (!f.manifest.empty()) {
    manifest.path = f.manifest;
  } else if (!f.output.empty()) {
    manifest.path = f.output + ".manifest.json";
  }

  int status = kExitOk;
  try {
    action();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    manifest.status = "error";
    manifest.error = e.what();
    status = kExitUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    manifest.status = "error";
    manifest.error = e.what();
    status = kExitUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    manifest.status = "error";
    manifest.error = e.what();
    status = kExitDataError;
  }
  if (status == kExitOk && stats_status != kExitOk) status = stats_status;
  try {
    WriteManifest(manifest, err);
  } catch (const std::exception& e) {
    spdlog::error("manifest: {}", e.what());
  }
  return status;
}

}  // namespace spin
