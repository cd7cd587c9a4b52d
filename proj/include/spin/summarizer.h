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

#ifndef SPIN_SUMMARIZER_H_
#define SPIN_SUMMARIZER_H_

#include <atomic>
#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spin/splitter.h"
#include "spin/subprocess.h"
#include "spin/text.h"

namespace spin {

class SummarizerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SummarizerSpec {
  enum class Kind { kLeadK, kExternal };

  Kind kind = Kind::kLeadK;
  // Prefix length for the lead-k baseline.
  std::size_t k = 128;
  // Executable and arguments for the external kind.
  std::vector<std::string> command;
  std::size_t max_input_tokens = kDefaultChunkSize;
  std::chrono::seconds timeout{300};

  // Throws std::invalid_argument if the spec violates its invariants.
  void Validate() const;
  // Short label recorded in reports, e.g. "lead_k(k=128)".
  std::string Name() const;
};

std::optional<SummarizerSpec::Kind> ParseSummarizerKind(std::string_view name);

// Produces a summary for one document part. Implementations validate the
// part (non-empty, within the window) before doing any work.
class Summarizer {
 public:
  explicit Summarizer(std::size_t max_input_tokens)
      : max_input_tokens_(max_input_tokens) {}
  virtual ~Summarizer() = default;

  // `request_id` identifies the part on the wire ("<source_id>#<index>").
  TokenSeq Summarize(const TokenSeq& part, const std::string& request_id);

  virtual std::string Name() const = 0;

 protected:
  virtual TokenSeq DoSummarize(const TokenSeq& part,
                               const std::string& request_id) = 0;

 private:
  std::size_t max_input_tokens_;
};

// Returns the first min(k, |part|) tokens.
class LeadKSummarizer : public Summarizer {
 public:
  LeadKSummarizer(std::size_t k, std::size_t max_input_tokens);
  std::string Name() const override;

 protected:
  TokenSeq DoSummarize(const TokenSeq& part,
                       const std::string& request_id) override;

 private:
  std::size_t k_;
};

// Speaks the line protocol to a child process:
//   request:  {"id": ..., "text": ..., "max_tokens": ...}
//   response: {"id": ..., "summary": ...} or {"id": ..., "error": ...}
// One request is in flight at a time. A child that dies or times out is
// discarded and restarted on the next request.
class ExternalSummarizer : public Summarizer {
 public:
  explicit ExternalSummarizer(SummarizerSpec spec);
  std::string Name() const override;

 protected:
  TokenSeq DoSummarize(const TokenSeq& part,
                       const std::string& request_id) override;

 private:
  SummarizerSpec spec_;
  std::unique_ptr<ChildProcess> child_;
};

// Wraps a callable; used for in-process model bindings and tests.
class CallbackSummarizer : public Summarizer {
 public:
  using Fn = std::function<TokenSeq(const TokenSeq&, const std::string&)>;

  CallbackSummarizer(Fn fn, std::string name,
                     std::size_t max_input_tokens = kDefaultChunkSize)
      : Summarizer(max_input_tokens), fn_(std::move(fn)),
        name_(std::move(name)) {}
  std::string Name() const override { return name_; }

 protected:
  TokenSeq DoSummarize(const TokenSeq& part,
                       const std::string& request_id) override {
    return fn_(part, request_id);
  }

 private:
  Fn fn_;
  std::string name_;
};

std::unique_ptr<Summarizer> MakeSummarizer(const SummarizerSpec& spec);

// One-shot convenience; spawns and tears down a child for the external kind.
TokenSeq Summarize(const TokenSeq& part, const SummarizerSpec& spec);

// Raised when one part of a document fails; names the failing part.
class PartSummaryError : public std::runtime_error {
 public:
  PartSummaryError(std::string source_id, std::size_t part_index,
                   const std::string& cause);

  const std::string& source_id() const { return source_id_; }
  std::size_t part_index() const { return part_index_; }

 private:
  std::string source_id_;
  std::size_t part_index_;
};

// A fixed set of summarizer instances. Parts are dispatched round-robin and
// summarized concurrently, at most one in-flight request per instance.
// Results always come back in part order. Thread-safe.
class SummarizerPool {
 public:
  // `size` instances are created from `spec`. The lead-k kind is stateless,
  // so a single shared instance serves every slot.
  SummarizerPool(const SummarizerSpec& spec, std::size_t size);
  explicit SummarizerPool(std::vector<std::unique_ptr<Summarizer>> members);

  std::vector<TokenSeq> SummarizeParts(const std::string& source_id,
                                       const std::vector<TokenSeq>& parts);

  std::size_t size() const { return slots_.size(); }
  std::string Name() const;

 private:
  struct Slot {
    std::unique_ptr<Summarizer> summarizer;
    std::mutex mutex;
  };

  TokenSeq SummarizeOne(const std::string& source_id, std::size_t index,
                        const TokenSeq& part);

  std::vector<std::unique_ptr<Slot>> slots_;
  bool shared_ = false;
  std::atomic<std::size_t> next_{0};
};

// "<source_id>#<part_index>"
std::string RequestId(std::string_view source_id, std::size_t part_index);

}  // namespace spin

#endif  // SPIN_SUMMARIZER_H_
