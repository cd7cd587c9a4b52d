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

#ifndef SPIN_TEXT_H_
#define SPIN_TEXT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace spin {

// An ordered sequence of whitespace-delimited word tokens. Tokens are never
// empty and never contain whitespace. Every length in this library (document
// length, part length, summary length) is measured in these tokens.
using TokenSeq = std::vector<std::string>;

// Splits `text` on runs of Unicode whitespace. No normalization is applied;
// case and punctuation are preserved. Bytes that are not valid UTF-8 are
// treated as ordinary (non-space) characters.
TokenSeq Tokenize(std::string_view text);

// Joins tokens with single ASCII spaces.
std::string Detokenize(const TokenSeq& tokens);

// Joins the half-open token range [first, last).
std::string Detokenize(TokenSeq::const_iterator first,
                       TokenSeq::const_iterator last);

// True if `code_point` has the Unicode White_Space property.
bool IsUnicodeSpace(char32_t code_point);

// Simple (one-to-one) lowercase mapping of a UTF-8 token. Covers ASCII,
// Latin-1, Latin Extended-A, Greek and Cyrillic; other code points and
// invalid bytes pass through unchanged.
std::string FoldCase(std::string_view token);

}  // namespace spin

#endif  // SPIN_TEXT_H_
