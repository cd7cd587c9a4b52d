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

#ifndef SPIN_SPLITTER_H_
#define SPIN_SPLITTER_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spin/rouge.h"
#include "spin/text.h"

namespace spin {

inline constexpr std::size_t kDefaultChunkSize = 4096;
inline constexpr std::size_t kDefaultMinDocTokens = 20000;

// SPIN1 pairs each document part with a slice of the summary; SPIN2 and SPIN3
// pair every part with the full summary and differ only in how per-part
// generations are joined.
enum class Variant { kSpin1, kSpin2, kSpin3 };

// "SPIN1" / "SPIN2" / "SPIN3".
std::string_view VariantName(Variant variant);
// Accepts the canonical names and their lowercase forms ("spin1").
std::optional<Variant> ParseVariant(std::string_view name);

enum class ShortDocPolicy { kSkip, kPassthrough };

std::string_view ShortDocPolicyName(ShortDocPolicy policy);
std::optional<ShortDocPolicy> ParseShortDocPolicy(std::string_view name);

struct DocSummaryPair {
  std::string id;
  TokenSeq document;
  TokenSeq summary;

  friend bool operator==(const DocSummaryPair&,
                         const DocSummaryPair&) = default;
};

struct AugmentedPair {
  std::string source_id;
  std::size_t part_index = 0;
  std::size_t n_parts = 1;
  TokenSeq document_part;
  TokenSeq paired_summary;
  Variant variant = Variant::kSpin1;

  friend bool operator==(const AugmentedPair&, const AugmentedPair&) = default;
};

struct SplitConfig {
  std::size_t chunk_size = kDefaultChunkSize;
  Variant variant = Variant::kSpin1;
  std::size_t min_doc_tokens = kDefaultMinDocTokens;
  ShortDocPolicy short_doc_policy = ShortDocPolicy::kSkip;
  // Append the tokens left over by fixed-step summary slicing to the last
  // slice instead of dropping them.
  bool keep_summary_remainder = false;
  RougeOptions rouge;
};

// Raised for a record that cannot be augmented; carries the record id.
class SplitError : public std::runtime_error {
 public:
  SplitError(std::string source_id, const std::string& message)
      : std::runtime_error(source_id + ": " + message),
        source_id_(std::move(source_id)) {}

  const std::string& source_id() const { return source_id_; }

 private:
  std::string source_id_;
};

// ceil(length / chunk_size); 0 for an empty document.
std::size_t PartCount(std::size_t length, std::size_t chunk_size);

// Consecutive non-overlapping slices of `chunk_size` tokens; the last slice
// may be shorter. Throws std::invalid_argument when chunk_size == 0.
std::vector<TokenSeq> SplitDocument(const TokenSeq& document,
                                    std::size_t chunk_size);

// Exactly `n_parts` slices of floor(|summary| / n_parts) tokens each, taken
// at offsets 0, step, 2*step, ... The trailing |summary| - step*n_parts
// tokens are dropped unless `keep_remainder` is set, in which case they are
// appended to the last slice. Throws std::invalid_argument when the summary
// has fewer than n_parts tokens.
std::vector<TokenSeq> SplitSummaryFixed(const TokenSeq& summary,
                                        std::size_t n_parts,
                                        bool keep_remainder = false);

// Greedy one-to-one assignment. Document parts are visited in order; each
// takes the remaining summary part with the highest ROUGE-L recall
// R(doc_part, summary_part), ties going to the lowest summary index.
// Returns (doc_index, summary_index) pairs in document order.
std::vector<std::pair<std::size_t, std::size_t>> PairPartsGreedy(
    const std::vector<TokenSeq>& doc_parts,
    const std::vector<TokenSeq>& summary_parts,
    const RougeOptions& options = {});

// Turns one record into its augmented training pairs, in ascending
// part_index. Documents no longer than chunk_size are skipped or passed
// through whole according to config.short_doc_policy.
std::vector<AugmentedPair> AugmentPair(const DocSummaryPair& pair,
                                       const SplitConfig& config);

}  // namespace spin

#endif  // SPIN_SPLITTER_H_
