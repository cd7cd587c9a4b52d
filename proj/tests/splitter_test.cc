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

#include <random>
#include <set>

#include <gtest/gtest.h>

#include "test_support.h"

namespace spin {
namespace {

using testing::BruteForceLcs;
using testing::PlantedAlignmentPair;
using testing::RandomPair;
using testing::RandomTokens;

TokenSeq Numbered(std::size_t n) {
  TokenSeq out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("t" + std::to_string(i));
  return out;
}

std::vector<std::size_t> Lengths(const std::vector<TokenSeq>& parts) {
  std::vector<std::size_t> out;
  for (const auto& p : parts) out.push_back(p.size());
  return out;
}

TEST(SplitDocumentTest, PartLengths) {
  EXPECT_EQ(Lengths(SplitDocument(Numbered(10000), 4096)),
            (std::vector<std::size_t>{4096, 4096, 1808}));
  EXPECT_EQ(Lengths(SplitDocument(Numbered(8193), 4096)),
            (std::vector<std::size_t>{4096, 4096, 1}));
}

TEST(SplitDocumentTest, ExactlyOneWindow) {
  const TokenSeq doc = Numbered(4096);
  const auto parts = SplitDocument(doc, 4096);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0], doc);
}

TEST(SplitDocumentTest, EmptyAndInvalid) {
  EXPECT_TRUE(SplitDocument(TokenSeq{}, 4096).empty());
  EXPECT_THROW(SplitDocument(Numbered(3), 0), std::invalid_argument);
}

TEST(PartCountTest, Ceiling) {
  EXPECT_EQ(PartCount(0, 4096), 0u);
  EXPECT_EQ(PartCount(1, 4096), 1u);
  EXPECT_EQ(PartCount(4096, 4096), 1u);
  EXPECT_EQ(PartCount(4097, 4096), 2u);
  EXPECT_EQ(PartCount(10000, 4096), 3u);
}

// Slices taken at range(0, step * n_parts, step), evaluated literally.
std::vector<TokenSeq> ReferenceSlices(const TokenSeq& summary,
                                      std::size_t n_parts) {
  const std::size_t step = summary.size() / n_parts;
  std::vector<TokenSeq> out;
  for (std::size_t j = 0; j < step * n_parts; j += step) {
    out.emplace_back(summary.begin() + j, summary.begin() + j + step);
  }
  return out;
}

TEST(SplitSummaryFixedTest, DropsRemainder) {
  const TokenSeq summary = Numbered(10);
  const auto slices = SplitSummaryFixed(summary, 3);
  ASSERT_EQ(slices, ReferenceSlices(summary, 3));
  EXPECT_EQ(slices[0], (TokenSeq{"t0", "t1", "t2"}));
  EXPECT_EQ(slices[1], (TokenSeq{"t3", "t4", "t5"}));
  EXPECT_EQ(slices[2], (TokenSeq{"t6", "t7", "t8"}));
}

TEST(SplitSummaryFixedTest, ExactDivisionAndUnitStep) {
  EXPECT_EQ(Lengths(SplitSummaryFixed(Numbered(12), 3)),
            (std::vector<std::size_t>{4, 4, 4}));
  const auto singles = SplitSummaryFixed(Numbered(5), 5);
  ASSERT_EQ(singles.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(singles[i], (TokenSeq{"t" + std::to_string(i)}));
  }
}

TEST(SplitSummaryFixedTest, KeepRemainderAppendsToLastSlice) {
  const auto slices = SplitSummaryFixed(Numbered(10), 3, true);
  EXPECT_EQ(Lengths(slices), (std::vector<std::size_t>{3, 3, 4}));
  EXPECT_EQ(slices[2].back(), "t9");
}

TEST(SplitSummaryFixedTest, TooShort) {
  try {
    SplitSummaryFixed(Numbered(2), 3);
    FAIL() << "expected std::invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "summary too short to split into n_parts");
  }
}

TEST(SplitSummaryFixedTest, MatchesRangeArithmetic) {
  for (std::size_t len = 1; len <= 40; ++len) {
    for (std::size_t n = 1; n <= len; ++n) {
      ASSERT_EQ(SplitSummaryFixed(Numbered(len), n),
                ReferenceSlices(Numbered(len), n));
    }
  }
}

TEST(PairPartsGreedyTest, SinglePart) {
  const auto pairs = PairPartsGreedy({TokenSeq{"a"}}, {TokenSeq{"b"}});
  EXPECT_EQ(pairs, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}}));
}

TEST(PairPartsGreedyTest, SwappedParts) {
  const std::vector<TokenSeq> docs{{"w", "x"}, {"y", "z"}};
  const std::vector<TokenSeq> sums{{"y", "z"}, {"w", "x"}};
  // All four recalls by the oracle.
  ASSERT_EQ(BruteForceLcs(docs[0], sums[0]), 0u);
  ASSERT_EQ(BruteForceLcs(docs[0], sums[1]), 2u);
  ASSERT_EQ(BruteForceLcs(docs[1], sums[0]), 2u);
  ASSERT_EQ(BruteForceLcs(docs[1], sums[1]), 0u);
  EXPECT_EQ(PairPartsGreedy(docs, sums),
            (std::vector<std::pair<std::size_t, std::size_t>>{{0, 1},
                                                              {1, 0}}));
}

TEST(PairPartsGreedyTest, TiesResolveToIdentity) {
  const std::vector<TokenSeq> docs{{"a"}, {"b"}, {"c"}, {"d"}};
  const std::vector<TokenSeq> sums{{"w"}, {"x"}, {"y"}, {"z"}};
  const auto pairs = PairPartsGreedy(docs, sums);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    EXPECT_EQ(pairs[i], std::make_pair(i, i));
  }
}

TEST(PairPartsGreedyTest, Errors) {
  EXPECT_THROW(PairPartsGreedy({TokenSeq{"a"}}, {}), std::invalid_argument);
  EXPECT_THROW(PairPartsGreedy({TokenSeq{"a"}, TokenSeq{"b"}},
                               {TokenSeq{"a"}, TokenSeq{}}),
               UndefinedMetricError);
}

// Greedy pairing recomputed with brute-force LCS.
std::vector<std::pair<std::size_t, std::size_t>> OraclePairing(
    const std::vector<TokenSeq>& docs, const std::vector<TokenSeq>& sums) {
  std::vector<bool> taken(sums.size(), false);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    double best = -1;
    std::size_t arg = 0;
    for (std::size_t s = 0; s < sums.size(); ++s) {
      if (taken[s]) continue;
      const double r = static_cast<double>(BruteForceLcs(docs[d], sums[s])) /
                       static_cast<double>(sums[s].size());
      if (r > best) {
        best = r;
        arg = s;
      }
    }
    taken[arg] = true;
    out.emplace_back(d, arg);
  }
  return out;
}

TEST(PairPartsGreedyPropertyTest, MatchesOracleAndIsBijection) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> parts(1, 6);
  std::uniform_int_distribution<std::size_t> len(1, 10);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = parts(rng);
    std::vector<TokenSeq> docs;
    std::vector<TokenSeq> sums;
    for (std::size_t i = 0; i < n; ++i) {
      docs.push_back(RandomTokens(rng, len(rng), 4));
      sums.push_back(RandomTokens(rng, len(rng), 4));
    }
    const auto pairs = PairPartsGreedy(docs, sums);
    ASSERT_EQ(pairs, OraclePairing(docs, sums));
    std::set<std::size_t> used;
    for (const auto& [d, s] : pairs) used.insert(s);
    ASSERT_EQ(used.size(), n);
  }
}

TEST(AugmentPairTest, Spin1ThreeParts) {
  std::mt19937_64 rng(5);
  const DocSummaryPair pair = RandomPair(rng, "doc", 9000, 9, 50);
  SplitConfig config;
  config.variant = Variant::kSpin1;
  const auto out = AugmentPair(pair, config);
  ASSERT_EQ(out.size(), 3u);
  std::set<TokenSeq> slices;
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out[i].source_id, "doc");
    EXPECT_EQ(out[i].part_index, i);
    EXPECT_EQ(out[i].n_parts, 3u);
    EXPECT_EQ(out[i].paired_summary.size(), 3u);
    EXPECT_EQ(out[i].variant, Variant::kSpin1);
    slices.insert(out[i].paired_summary);
  }
  const auto expected = SplitSummaryFixed(pair.summary, 3);
  EXPECT_EQ(slices, std::set<TokenSeq>(expected.begin(), expected.end()));
  // The matching equals the oracle's.
  const auto oracle = OraclePairing(SplitDocument(pair.document, 4096),
                                    expected);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(out[i].paired_summary, expected[oracle[i].second]);
  }
}

TEST(AugmentPairTest, Spin2AndSpin3CarryFullSummary) {
  std::mt19937_64 rng(5);
  const DocSummaryPair pair = RandomPair(rng, "doc", 9000, 9, 50);
  for (Variant v : {Variant::kSpin2, Variant::kSpin3}) {
    SplitConfig config;
    config.variant = v;
    const auto out = AugmentPair(pair, config);
    ASSERT_EQ(out.size(), 3u);
    for (const auto& a : out) {
      EXPECT_EQ(a.paired_summary, pair.summary);
      EXPECT_EQ(a.variant, v);
    }
  }
  SplitConfig two;
  two.variant = Variant::kSpin2;
  SplitConfig three;
  three.variant = Variant::kSpin3;
  auto a = AugmentPair(pair, two);
  auto b = AugmentPair(pair, three);
  for (auto& x : b) x.variant = Variant::kSpin2;
  EXPECT_EQ(a, b);
}

TEST(AugmentPairTest, ShortDocumentPolicy) {
  const DocSummaryPair pair{"short", Tokenize("a b c"), Tokenize("a")};
  SplitConfig config;
  EXPECT_TRUE(AugmentPair(pair, config).empty());
  config.short_doc_policy = ShortDocPolicy::kPassthrough;
  const auto out = AugmentPair(pair, config);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].document_part, pair.document);
  EXPECT_EQ(out[0].paired_summary, pair.summary);
  EXPECT_EQ(out[0].n_parts, 1u);
  // Exactly chunk_size tokens is still "short".
  config.short_doc_policy = ShortDocPolicy::kSkip;
  config.chunk_size = 3;
  EXPECT_TRUE(AugmentPair(pair, config).empty());
}

TEST(AugmentPairTest, Spin1SummaryTooShortNamesRecord) {
  const DocSummaryPair pair{"tiny-summary", Numbered(10), Tokenize("one")};
  SplitConfig config;
  config.chunk_size = 4;
  try {
    AugmentPair(pair, config);
    FAIL() << "expected SplitError";
  } catch (const SplitError& e) {
    EXPECT_EQ(e.source_id(), "tiny-summary");
    EXPECT_NE(std::string(e.what()).find("summary too short"),
              std::string::npos);
  }
  config.variant = Variant::kSpin2;
  EXPECT_EQ(AugmentPair(pair, config).size(), 3u);
}

TEST(AugmentPairPropertyTest, StructuralLaws) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> doc_len(1, 300);
  std::uniform_int_distribution<std::size_t> sum_len(1, 40);
  std::uniform_int_distribution<std::size_t> chunk(1, 64);
  for (int trial = 0; trial < 400; ++trial) {
    DocSummaryPair pair = RandomPair(rng, "r" + std::to_string(trial),
                                     doc_len(rng), sum_len(rng), 30);
    SplitConfig config;
    config.chunk_size = chunk(rng);
    const std::size_t k = pair.document.size();
    const std::size_t n_parts = PartCount(k, config.chunk_size);
    for (Variant v : {Variant::kSpin1, Variant::kSpin2, Variant::kSpin3}) {
      config.variant = v;
      if (v == Variant::kSpin1 && pair.summary.size() < n_parts &&
          k > config.chunk_size) {
        EXPECT_THROW(AugmentPair(pair, config), SplitError);
        continue;
      }
      const auto out = AugmentPair(pair, config);
      ASSERT_EQ(out, AugmentPair(pair, config));  // deterministic
      if (k <= config.chunk_size) {
        ASSERT_TRUE(out.empty());
        continue;
      }
      ASSERT_EQ(out.size(), n_parts);
      TokenSeq rebuilt;
      std::set<TokenSeq> used;
      for (std::size_t i = 0; i < out.size(); ++i) {
        ASSERT_EQ(out[i].part_index, i);
        ASSERT_EQ(out[i].n_parts, n_parts);
        ASSERT_LE(out[i].document_part.size(), config.chunk_size);
        rebuilt.insert(rebuilt.end(), out[i].document_part.begin(),
                       out[i].document_part.end());
        if (v == Variant::kSpin1) {
          ASSERT_EQ(out[i].paired_summary.size(),
                    pair.summary.size() / n_parts);
        } else {
          ASSERT_EQ(out[i].paired_summary, pair.summary);
        }
      }
      ASSERT_EQ(rebuilt, pair.document);
    }
  }
}

TEST(AugmentPairPropertyTest, PlantedAlignmentRecovered) {
  std::mt19937_64 rng(23);
  SplitConfig config;
  config.chunk_size = 256;
  for (std::size_t parts = 2; parts <= 8; ++parts) {
    for (int rep = 0; rep < 5; ++rep) {
      const DocSummaryPair pair =
          PlantedAlignmentPair(rng, "planted", parts, config.chunk_size, 12);
      const auto doc_parts = SplitDocument(pair.document, config.chunk_size);
      const auto sum_parts = SplitSummaryFixed(pair.summary, parts);
      const auto pairs = PairPartsGreedy(doc_parts, sum_parts);
      for (std::size_t i = 0; i < parts; ++i) {
        ASSERT_EQ(pairs[i], std::make_pair(i, i)) << "L=" << parts;
      }
    }
  }
}

TEST(AugmentPairPropertyTest, AugmentationGrowsCorpus) {
  std::mt19937_64 rng(29);
  SplitConfig config;
  config.chunk_size = 100;
  std::size_t in = 0;
  std::size_t out = 0;
  for (int i = 0; i < 50; ++i) {
    const auto pair = RandomPair(rng, std::to_string(i), 101 + i * 13, 60);
    ++in;
    out += AugmentPair(pair, config).size();
  }
  EXPECT_GT(out, in);
}

TEST(VariantTest, NamesRoundTrip) {
  for (Variant v : {Variant::kSpin1, Variant::kSpin2, Variant::kSpin3}) {
    EXPECT_EQ(ParseVariant(VariantName(v)), v);
  }
  EXPECT_EQ(ParseVariant("spin2"), Variant::kSpin2);
  EXPECT_FALSE(ParseVariant("spin4"));
  EXPECT_FALSE(ParseVariant(""));
}

}  // namespace
}  // namespace spin
