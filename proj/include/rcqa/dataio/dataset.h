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

#ifndef RCQA_DATAIO_DATASET_H_
#define RCQA_DATAIO_DATASET_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rcqa/dataio/tokenizer.h"

namespace rcqa::dataio {

struct TokenSpan {
  std::size_t start = 0;
  std::size_t end = 0;  // inclusive

  std::size_t length() const { return end - start + 1; }
  bool Contains(std::size_t position) const {
    return position >= start && position <= end;
  }
  friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
};

struct QAExample {
  std::string id;
  TokenizedText passage;
  TokenizedText question;
  TokenSpan answer;
  // Raw passage text covered by the answer tokens.
  std::string answer_text;
  // Character (code point) offset of the answer in the raw passage, as given
  // in the file.
  std::size_t answer_char_start = 0;

  friend bool operator==(const QAExample&, const QAExample&) = default;
};

struct DroppedExample {
  std::string id;
  std::string reason;
};

struct LoadedDataset {
  std::vector<QAExample> examples;
  std::vector<DroppedExample> dropped;
};

// Byte offset of the `code_point`-th code point of UTF-8 `text`; text.size()
// for the one-past-the-end position, nullopt beyond it.
std::optional<std::size_t> CodePointToByteOffset(std::string_view text,
                                                 std::size_t code_point);

// Maps the byte range [char_start, char_start + length) of `passage` to
// the smallest covering token range. Returns nullopt when no token overlaps
// the range or the range lies outside the text.
std::optional<TokenSpan> AlignCharacterSpan(const TokenizedText& passage,
                                            std::size_t char_start,
                                            std::size_t length);

// Builds an example from raw strings, aligning the answer; the offset counts
// code points, as in SQuAD files. Throws
// ContractError with the reason if the answer cannot be aligned.
QAExample MakeExample(std::string id, std::string_view passage,
                      std::string_view question, std::string_view answer_text,
                      std::size_t answer_char_start);

// Reads either the SQuAD v1.1 JSON shape (data -> paragraphs -> qas) or the
// flat fixture shape ({"format": "rcqa-flat", "examples": [...]}). Examples
// whose answers cannot be aligned are dropped and reported. Throws ParseError
// for unreadable or malformed files and ContractError when nothing usable
// remains.
LoadedDataset LoadDataset(const std::filesystem::path& path);

// Writes the flat shape. LoadDataset(SaveFlatDataset(x)) == x.
void SaveFlatDataset(const std::filesystem::path& path,
                     const std::vector<QAExample>& examples);

}  // namespace rcqa::dataio

#endif  // RCQA_DATAIO_DATASET_H_
