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

#include "spin/splitter.h"

#include <algorithm>
#include <cstdint>

namespace spin {

std::string_view VariantName(Variant variant) {
  switch (variant) {
    case Variant::kSpin1:
      return "SPIN1";
    case Variant::kSpin2:
      return "SPIN2";
    case Variant::kSpin3:
      return "SPIN3";
  }
  return "SPIN1";
}

std::optional<Variant> ParseVariant(std::string_view name) {
  if (name == "SPIN1" || name == "spin1") return Variant::kSpin1;
  if (name == "SPIN2" || name == "spin2") return Variant::kSpin2;
  if (name == "SPIN3" || name == "spin3") return Variant::kSpin3;
  return std::nullopt;
}

std::string_view ShortDocPolicyName(ShortDocPolicy policy) {
  return policy == ShortDocPolicy::kSkip ? "skip" : "passthrough";
}

std::optional<ShortDocPolicy> ParseShortDocPolicy(std::string_view name) {
  if (name == "skip") return ShortDocPolicy::kSkip;
  if (name == "passthrough") return ShortDocPolicy::kPassthrough;
  return std::nullopt;
}

std::size_t PartCount(std::size_t length, std::size_t chunk_size) {
  if (chunk_size == 0) throw std::invalid_argument("chunk_size must be >= 1");
  return length / chunk_size + (length % chunk_size != 0 ? 1 : 0);
}

std::vector<TokenSeq> SplitDocument(const TokenSeq& document,
                                    std::size_t chunk_size) {
  const std::size_t n_parts = PartCount(document.size(), chunk_size);
  std::vector<TokenSeq> parts;
  parts.reserve(n_parts);
  for (std::size_t start = 0; start < document.size(); start += chunk_size) {
    const std::size_t end = std::min(start + chunk_size, document.size());
    parts.emplace_back(document.begin() + start, document.begin() + end);
  }
  return parts;
}

std::vector<TokenSeq> SplitSummaryFixed(const TokenSeq& summary,
                                        std::size_t n_parts,
                                        bool keep_remainder) {
  if (n_parts == 0) throw std::invalid_argument("n_parts must be >= 1");
  if (summary.size() < n_parts) {
    throw std::invalid_argument("summary too short to split into n_parts");
  }
  const std::size_t step = summary.size() / n_parts;
  std::vector<TokenSeq> slices;
  slices.reserve(n_parts);
  for (std::size_t i = 0; i < n_parts; ++i) {
    const auto first = summary.begin() + i * step;
    const bool last = i + 1 == n_parts;
    slices.emplace_back(first, last && keep_remainder ? summary.end()
                                                      : first + step);
  }
  return slices;
}

std::vector<std::pair<std::size_t, std::size_t>> PairPartsGreedy(
    const std::vector<TokenSeq>& doc_parts,
    const std::vector<TokenSeq>& summary_parts, const RougeOptions& options) {
  if (doc_parts.size() != summary_parts.size()) {
    throw std::invalid_argument(
        "document and summary part counts differ (" +
        std::to_string(doc_parts.size()) + " vs " +
        std::to_string(summary_parts.size()) + ")");
  }
  if (doc_parts.empty()) {
    throw std::invalid_argument("cannot pair zero parts");
  }
  Vocabulary vocab(options);
  std::vector<std::vector<std::uint32_t>> summary_ids;
  summary_ids.reserve(summary_parts.size());
  for (const TokenSeq& part : summary_parts) {
    if (part.empty()) {
      throw UndefinedMetricError("undefined: empty summary part in pool");
    }
    summary_ids.push_back(vocab.Encode(part));
  }

  // Pool kept in ascending index order so the first maximum is the lowest
  // remaining index.
  std::vector<std::size_t> pool(summary_parts.size());
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(doc_parts.size());
  for (std::size_t d = 0; d < doc_parts.size(); ++d) {
    const auto doc_ids = vocab.Encode(doc_parts[d]);
    std::size_t best = 0;
    double best_score = -1.0;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      const double score = RougeLRecall(doc_ids, summary_ids[pool[k]]);
      if (score > best_score) {
        best_score = score;
        best = k;
      }
    }
    pairs.emplace_back(d, pool[best]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return pairs;
}

std::vector<AugmentedPair> AugmentPair(const DocSummaryPair& pair,
                                       const SplitConfig& config) {
  std::vector<AugmentedPair> out;
  if (pair.document.size() <= config.chunk_size) {
    if (config.chunk_size == 0) {
      throw std::invalid_argument("chunk_size must be >= 1");
    }
    if (config.short_doc_policy == ShortDocPolicy::kPassthrough) {
      out.push_back({pair.id, 0, 1, pair.document, pair.summary,
                     config.variant});
    }
    return out;
  }

  std::vector<TokenSeq> doc_parts = SplitDocument(pair.document,
                                                  config.chunk_size);
  const std::size_t n_parts = doc_parts.size();
  out.reserve(n_parts);

  if (config.variant != Variant::kSpin1) {
    for (std::size_t i = 0; i < n_parts; ++i) {
      out.push_back({pair.id, i, n_parts, std::move(doc_parts[i]),
                     pair.summary, config.variant});
    }
    return out;
  }

  if (pair.summary.size() < n_parts) {
    throw SplitError(pair.id, "summary too short to split into n_parts (" +
                                  std::to_string(pair.summary.size()) +
                                  " tokens, " + std::to_string(n_parts) +
                                  " parts)");
  }
  std::vector<TokenSeq> summary_parts = SplitSummaryFixed(
      pair.summary, n_parts, config.keep_summary_remainder);
  const auto matching = PairPartsGreedy(doc_parts, summary_parts,
                                        config.rouge);
  for (const auto& [doc_index, summary_index] : matching) {
    out.push_back({pair.id, doc_index, n_parts,
                   std::move(doc_parts[doc_index]),
                   std::move(summary_parts[summary_index]), config.variant});
  }
  return out;
}

}  // namespace spin
