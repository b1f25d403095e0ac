/*
 * Copyright 2026 The rcqa-rationale Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RCQA_DATAIO_TOKENIZER_H_
#define RCQA_DATAIO_TOKENIZER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace rcqa::dataio {

struct Token {
  std::string text;  // lowercased
  std::size_t begin = 0;  // byte offset into the raw text
  std::size_t end = 0;    // one past the last byte
  std::size_t position = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

struct TokenizedText {
  std::string raw;
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  const std::string& word(std::size_t position) const {
    return tokens.at(position).text;
  }
  // Raw substring covered by tokens [first, last].
  std::string Slice(std::size_t first, std::size_t last) const;

  friend bool operator==(const TokenizedText&, const TokenizedText&) = default;
};

// Lowercases ASCII letters and splits on whitespace. Every ASCII punctuation
// character becomes its own token; runs of letters, digits and non-ASCII
// bytes form word tokens.
TokenizedText Tokenize(std::string_view text);

// Lowercase and collapse whitespace runs to single spaces, trimming both ends.
std::string NormalizeWhitespaceAndCase(std::string_view text);

}  // namespace rcqa::dataio

#endif  // RCQA_DATAIO_TOKENIZER_H_
