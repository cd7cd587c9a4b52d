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

#include "spin/summarizer.h"

#include <algorithm>
#include <exception>
#include <thread>

#include <nlohmann/json.hpp>

namespace spin {

using nlohmann::json;

void SummarizerSpec::Validate() const {
  if (max_input_tokens == 0) {
    throw std::invalid_argument("max_input_tokens must be >= 1");
  }
  switch (kind) {
    case Kind::kLeadK:
      if (k == 0) throw std::invalid_argument("lead_k requires k >= 1");
      break;
    case Kind::kExternal:
      if (command.empty() || command.front().empty()) {
        throw std::invalid_argument("external summarizer requires a command");
      }
      if (timeout.count() <= 0) {
        throw std::invalid_argument("timeout must be positive");
      }
      break;
  }
}

std::string SummarizerSpec::Name() const {
  if (kind == Kind::kLeadK) return "lead_k(k=" + std::to_string(k) + ")";
  std::string name = "external(";
  for (std::size_t i = 0; i < command.size(); ++i) {
    if (i > 0) name += ' ';
    name += command[i];
  }
  return name + ")";
}

std::optional<SummarizerSpec::Kind> ParseSummarizerKind(std::string_view name) {
  if (name == "lead_k" || name == "lead-k") return SummarizerSpec::Kind::kLeadK;
  if (name == "external") return SummarizerSpec::Kind::kExternal;
  return std::nullopt;
}

std::string RequestId(std::string_view source_id, std::size_t part_index) {
  return std::string(source_id) + "#" + std::to_string(part_index);
}

TokenSeq Summarizer::Summarize(const TokenSeq& part,
                               const std::string& request_id) {
  if (part.empty()) throw SummarizerError("empty part");
  if (part.size() > max_input_tokens_) {
    throw SummarizerError("part exceeds summarizer window (" +
                          std::to_string(part.size()) + " > " +
                          std::to_string(max_input_tokens_) + " tokens)");
  }
  return DoSummarize(part, request_id);
}

LeadKSummarizer::LeadKSummarizer(std::size_t k, std::size_t max_input_tokens)
    : Summarizer(max_input_tokens), k_(k) {
  if (k_ == 0) throw std::invalid_argument("lead_k requires k >= 1");
}

std::string LeadKSummarizer::Name() const {
  return "lead_k(k=" + std::to_string(k_) + ")";
}

TokenSeq LeadKSummarizer::DoSummarize(const TokenSeq& part,
                                      const std::string& /*request_id*/) {
  const std::size_t n = std::min(k_, part.size());
  return TokenSeq(part.begin(), part.begin() + static_cast<std::ptrdiff_t>(n));
}

ExternalSummarizer::ExternalSummarizer(SummarizerSpec spec)
    : Summarizer(spec.max_input_tokens), spec_(std::move(spec)) {
  spec_.Validate();
  child_ = std::make_unique<ChildProcess>(spec_.command);
}

std::string ExternalSummarizer::Name() const { return spec_.Name(); }

TokenSeq ExternalSummarizer::DoSummarize(const TokenSeq& part,
                                         const std::string& request_id) {
  if (!child_) child_ = std::make_unique<ChildProcess>(spec_.command);

  const json request = {{"id", request_id},
                        {"text", Detokenize(part)},
                        {"max_tokens", spec_.max_input_tokens}};
  // Any transport failure leaves the stream out of sync; drop the child.
  const auto fail = [&](const std::string& what) -> SummarizerError {
    std::string message = request_id + ": " + what + " [" +
                          child_->Diagnostics() + "]";
    child_->Kill();
    child_.reset();
    return SummarizerError(message);
  };

  std::optional<std::string> line;
  try {
    child_->WriteLine(request.dump());
    line = child_->ReadLine(spec_.timeout);
  } catch (const SubprocessError& e) {
    throw fail(e.what());
  }
  if (!line) throw fail("summarizer process exited before responding");

  json response;
  try {
    response = json::parse(*line);
  } catch (const json::parse_error&) {
    throw fail("malformed response line: " + line->substr(0, 200));
  }
  if (!response.is_object() || !response.contains("id") ||
      !response["id"].is_string()) {
    throw fail("response without string id: " + line->substr(0, 200));
  }
  if (response["id"].get<std::string>() != request_id) {
    throw fail("response id '" + response["id"].get<std::string>() +
               "' does not match request");
  }
  if (response.contains("error")) {
    // Protocol-level error; the child stays usable.
    const auto& err = response["error"];
    throw SummarizerError(request_id + ": summarizer error: " +
                          (err.is_string() ? err.get<std::string>()
                                           : err.dump()));
  }
  if (!response.contains("summary") || !response["summary"].is_string()) {
    throw fail("response has neither summary nor error: " +
               line->substr(0, 200));
  }
  return Tokenize(response["summary"].get<std::string>());
}

std::unique_ptr<Summarizer> MakeSummarizer(const SummarizerSpec& spec) {
  spec.Validate();
  if (spec.kind == SummarizerSpec::Kind::kLeadK) {
    return std::make_unique<LeadKSummarizer>(spec.k, spec.max_input_tokens);
  }
  return std::make_unique<ExternalSummarizer>(spec);
}

TokenSeq Summarize(const TokenSeq& part, const SummarizerSpec& spec) {
  return MakeSummarizer(spec)->Summarize(part, "part#0");
}

PartSummaryError::PartSummaryError(std::string source_id,
                                   std::size_t part_index,
                                   const std::string& cause)
    : std::runtime_error(source_id + ": part " + std::to_string(part_index) +
                         " failed: " + cause),
      source_id_(std::move(source_id)),
      part_index_(part_index) {}

SummarizerPool::SummarizerPool(const SummarizerSpec& spec, std::size_t size) {
  if (size == 0) throw std::invalid_argument("pool size must be >= 1");
  spec.Validate();
  if (spec.kind == SummarizerSpec::Kind::kLeadK) {
    shared_ = true;
    size = 1;
  }
  for (std::size_t i = 0; i < size; ++i) {
    auto slot = std::make_unique<Slot>();
    slot->summarizer = MakeSummarizer(spec);
    slots_.push_back(std::move(slot));
  }
}

SummarizerPool::SummarizerPool(
    std::vector<std::unique_ptr<Summarizer>> members) {
  if (members.empty()) throw std::invalid_argument("empty summarizer pool");
  for (auto& member : members) {
    auto slot = std::make_unique<Slot>();
    slot->summarizer = std::move(member);
    slots_.push_back(std::move(slot));
  }
}

std::string SummarizerPool::Name() const {
  return slots_.front()->summarizer->Name();
}

TokenSeq SummarizerPool::SummarizeOne(const std::string& source_id,
                                      std::size_t index,
                                      const TokenSeq& part) {
  const std::string id = RequestId(source_id, index);
  try {
    if (shared_) return slots_.front()->summarizer->Summarize(part, id);
    Slot& slot = *slots_[next_.fetch_add(1) % slots_.size()];
    std::lock_guard<std::mutex> lock(slot.mutex);
    return slot.summarizer->Summarize(part, id);
  } catch (const std::exception& e) {
    throw PartSummaryError(source_id, index, e.what());
  }
}

std::vector<TokenSeq> SummarizerPool::SummarizeParts(
    const std::string& source_id, const std::vector<TokenSeq>& parts) {
  std::vector<TokenSeq> out(parts.size());
  const std::size_t workers = std::min(slots_.size(), parts.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      out[i] = SummarizeOne(source_id, i, parts[i]);
    }
    return out;
  }

  std::vector<std::exception_ptr> errors(parts.size());
  std::atomic<std::size_t> next_part{0};
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&] {
        for (std::size_t i = next_part++; i < parts.size(); i = next_part++) {
          try {
            out[i] = SummarizeOne(source_id, i, parts[i]);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  // Report the lowest failing part so serial and parallel runs agree.
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
  return out;
}

}  // namespace spin
