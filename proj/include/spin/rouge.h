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

#ifndef SPIN_ROUGE_H_
#define SPIN_ROUGE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "spin/text.h"

namespace spin {

// Raised when a metric is undefined for its inputs (zero-length reference,
// reference without n-grams, ...).
class UndefinedMetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct RougeOptions {
  // Lowercase both sides before matching. No stemming, no stopwords.
  bool lowercase = true;
};

// Recall/precision/F1 for one metric family. All fields lie in [0, 1].
struct RougeScore {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;

  // Fills f1 with the harmonic mean (0 when recall + precision == 0).
  static RougeScore FromRecallPrecision(double recall, double precision);

  friend bool operator==(const RougeScore&, const RougeScore&) = default;
};

// Interns tokens to dense integer ids so sequences can be compared by id.
class Vocabulary {
 public:
  explicit Vocabulary(RougeOptions options = {}) : options_(options) {}

  std::vector<std::uint32_t> Encode(const TokenSeq& tokens);

 private:
  RougeOptions options_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

// Length of the longest common subsequence. O(P*Q) time, O(min(P,Q)) space.
std::size_t LcsLength(std::span<const std::uint32_t> x,
                      std::span<const std::uint32_t> y);
std::size_t LcsLength(const TokenSeq& x, const TokenSeq& y,
                      const RougeOptions& options = {});

// LCS(candidate, reference) / |reference|. Throws UndefinedMetricError when
// the reference is empty.
double RougeLRecall(const TokenSeq& candidate, const TokenSeq& reference,
                    const RougeOptions& options = {});
double RougeLRecall(std::span<const std::uint32_t> candidate,
                    std::span<const std::uint32_t> reference);

// Clipped n-gram overlap. Throws UndefinedMetricError when n == 0 or the
// reference has fewer than n tokens. Precision is 0 when the candidate has no
// n-grams.
RougeScore RougeN(const TokenSeq& candidate, const TokenSeq& reference,
                  std::size_t n, const RougeOptions& options = {});

// LCS-based recall (vs |reference|), precision (vs |candidate|) and F1.
// Throws UndefinedMetricError when either side is empty.
RougeScore RougeL(const TokenSeq& candidate, const TokenSeq& reference,
                  const RougeOptions& options = {});

}  // namespace spin

#endif  // SPIN_ROUGE_H_
