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

#include "rcqa/dataio/tokenizer.h"

#include <cctype>

#include "rcqa/errors.h"

namespace rcqa::dataio {
namespace {

bool IsSpace(unsigned char c) { return std::isspace(c) != 0; }
bool IsPunct(unsigned char c) { return c < 0x80 && std::ispunct(c) != 0; }

char Lower(unsigned char c) {
  return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
}

}  // namespace

std::string TokenizedText::Slice(std::size_t first, std::size_t last) const {
  if (first > last || last >= tokens.size()) {
    throw ContractError("Slice(" + std::to_string(first) + ", " +
                        std::to_string(last) + ") outside " +
                        std::to_string(tokens.size()) + " tokens");
  }
  return raw.substr(tokens[first].begin,
                    tokens[last].end - tokens[first].begin);
}

TokenizedText Tokenize(std::string_view text) {
  TokenizedText out;
  out.raw = std::string(text);
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (IsSpace(c)) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    if (!IsPunct(c)) {
      while (j < text.size()) {
        const auto n = static_cast<unsigned char>(text[j]);
        if (IsSpace(n) || IsPunct(n)) break;
        ++j;
      }
    }
    Token token;
    token.begin = i;
    token.end = j;
    token.position = out.tokens.size();
    token.text.reserve(j - i);
    for (std::size_t k = i; k < j; ++k) {
      token.text.push_back(Lower(static_cast<unsigned char>(text[k])));
    }
    out.tokens.push_back(std::move(token));
    i = j;
  }
  return out;
}

std::string NormalizeWhitespaceAndCase(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (IsSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(Lower(c));
  }
  return out;
}

}  // namespace rcqa::dataio
