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

#ifndef RCQA_QAMODEL_EMBEDDING_H_
#define RCQA_QAMODEL_EMBEDDING_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "rcqa/dataio/dataset.h"
#include "rcqa/dataio/tokenizer.h"
#include "rcqa/diffcore/tensor.h"

namespace rcqa::qamodel {

inline constexpr char kUnknownWord[] = "<unk>";

// Word -> R^L lookup. Row `unknown_index` serves out-of-vocabulary tokens.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  // `vocabulary` must be duplicate-free and contain kUnknownWord.
  EmbeddingTable(std::vector<std::string> vocabulary, diffcore::Tensor rows);

  std::size_t dim() const { return rows_.cols(); }
  std::size_t size() const { return vocabulary_.size(); }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  std::size_t unknown_index() const { return unknown_index_; }

  std::size_t IndexOf(const std::string& word) const;
  std::vector<std::size_t> Indices(const dataio::TokenizedText& text) const;

  const diffcore::Tensor& rows() const { return rows_; }
  diffcore::Tensor& mutable_rows() { return rows_; }

  // SHA-256 over the newline-joined vocabulary.
  std::string VocabularyHash() const;

  friend bool operator==(const EmbeddingTable& a, const EmbeddingTable& b) {
    return a.vocabulary_ == b.vocabulary_ && a.rows_ == b.rows_;
  }

 private:
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, std::size_t> index_;
  diffcore::Tensor rows_;
  std::size_t unknown_index_ = 0;
};

// Sorted distinct passage and question tokens, with kUnknownWord first.
std::vector<std::string> BuildVocabulary(
    const std::vector<dataio::QAExample>& examples);

// Rows drawn uniformly from [-0.5/L, 0.5/L].
EmbeddingTable InitEmbeddingTable(std::vector<std::string> vocabulary,
                                  std::size_t dim, std::uint64_t seed);

// Overwrites rows of words found in a plain-text "word v1 ... vL" file.
// Returns the number of rows replaced. Throws ParseError on lines whose
// dimension differs from the table's.
std::size_t LoadPretrainedVectors(const std::filesystem::path& path,
                                  EmbeddingTable& table);

// Passage or question embeddings as a (tokens x L) array; out-of-vocabulary
// tokens get the unknown row. Throws ContractError on an empty sequence.
diffcore::Tensor Embed(const dataio::TokenizedText& tokens,
                       const EmbeddingTable& table);

}  // namespace rcqa::qamodel

#endif  // RCQA_QAMODEL_EMBEDDING_H_
