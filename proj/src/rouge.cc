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

#include "spin/rouge.h"

#include <algorithm>
#include <map>
#include <utility>

namespace spin {

RougeScore RougeScore::FromRecallPrecision(double recall, double precision) {
  RougeScore score;
  score.recall = recall;
  score.precision = precision;
  const double denom = recall + precision;
  score.f1 = denom > 0.0 ? 2.0 * recall * precision / denom : 0.0;
  return score;
}

std::vector<std::uint32_t> Vocabulary::Encode(const TokenSeq& tokens) {
  std::vector<std::uint32_t> ids;
  ids.reserve(tokens.size());
  for (const std::string& token : tokens) {
    auto key = options_.lowercase ? FoldCase(token) : token;
    const auto next = static_cast<std::uint32_t>(ids_.size());
    ids.push_back(ids_.try_emplace(std::move(key), next).first->second);
  }
  return ids;
}

std::size_t LcsLength(std::span<const std::uint32_t> x,
                      std::span<const std::uint32_t> y) {
  if (x.size() < y.size()) std::swap(x, y);
  // Rows run over the longer sequence, columns over the shorter one.
  if (y.empty()) return 0;
  std::vector<std::uint32_t> prev(y.size() + 1, 0);
  std::vector<std::uint32_t> curr(y.size() + 1, 0);
  for (const std::uint32_t xi : x) {
    for (std::size_t j = 1; j <= y.size(); ++j) {
      curr[j] = xi == y[j - 1] ? prev[j - 1] + 1
                               : std::max(prev[j], curr[j - 1]);
    }
    std::swap(prev, curr);
  }
  return prev[y.size()];
}

std::size_t LcsLength(const TokenSeq& x, const TokenSeq& y,
                      const RougeOptions& options) {
  Vocabulary vocab(options);
  const auto xs = vocab.Encode(x);
  const auto ys = vocab.Encode(y);
  return LcsLength(xs, ys);
}

double RougeLRecall(std::span<const std::uint32_t> candidate,
                    std::span<const std::uint32_t> reference) {
  if (reference.empty()) {
    throw UndefinedMetricError("undefined: zero-length reference");
  }
  return static_cast<double>(LcsLength(candidate, reference)) /
         static_cast<double>(reference.size());
}

double RougeLRecall(const TokenSeq& candidate, const TokenSeq& reference,
                    const RougeOptions& options) {
  Vocabulary vocab(options);
  const auto cs = vocab.Encode(candidate);
  const auto rs = vocab.Encode(reference);
  return RougeLRecall(cs, rs);
}

namespace {

using NGramCounts = std::map<std::vector<std::uint32_t>, std::size_t>;

NGramCounts CountNGrams(const std::vector<std::uint32_t>& ids, std::size_t n) {
  NGramCounts counts;
  if (ids.size() < n) return counts;
  for (std::size_t i = 0; i + n <= ids.size(); ++i) {
    ++counts[std::vector<std::uint32_t>(ids.begin() + i, ids.begin() + i + n)];
  }
  return counts;
}

}  // namespace

RougeScore RougeN(const TokenSeq& candidate, const TokenSeq& reference,
                  std::size_t n, const RougeOptions& options) {
  if (n == 0) throw UndefinedMetricError("undefined: n must be positive");
  if (reference.size() < n) {
    throw UndefinedMetricError("undefined: reference has no n-grams");
  }
  Vocabulary vocab(options);
  const auto cand_counts = CountNGrams(vocab.Encode(candidate), n);
  const auto ref_counts = CountNGrams(vocab.Encode(reference), n);

  std::size_t overlap = 0;
  for (const auto& [gram, ref_count] : ref_counts) {
    const auto it = cand_counts.find(gram);
    if (it != cand_counts.end()) overlap += std::min(ref_count, it->second);
  }
  const std::size_t ref_total = reference.size() - n + 1;
  const std::size_t cand_total =
      candidate.size() >= n ? candidate.size() - n + 1 : 0;
  const double recall =
      static_cast<double>(overlap) / static_cast<double>(ref_total);
  const double precision =
      cand_total == 0
          ? 0.0
          : static_cast<double>(overlap) / static_cast<double>(cand_total);
  return RougeScore::FromRecallPrecision(recall, precision);
}

RougeScore RougeL(const TokenSeq& candidate, const TokenSeq& reference,
                  const RougeOptions& options) {
  if (candidate.empty() || reference.empty()) {
    throw UndefinedMetricError("undefined: empty sequence");
  }
  const double lcs =
      static_cast<double>(LcsLength(candidate, reference, options));
  return RougeScore::FromRecallPrecision(
      lcs / static_cast<double>(reference.size()),
      lcs / static_cast<double>(candidate.size()));
}

}  // namespace spin
