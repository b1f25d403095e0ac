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

#include "rcqa/qamodel/embedding.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "rcqa/errors.h"
#include "rcqa/hashing.h"
#include "rcqa/random.h"

namespace rcqa::qamodel {

using diffcore::Tensor;

EmbeddingTable::EmbeddingTable(std::vector<std::string> vocabulary,
                               Tensor rows)
    : vocabulary_(std::move(vocabulary)), rows_(std::move(rows)) {
  if (rows_.rank() != 2 || rows_.rows() != vocabulary_.size()) {
    throw ShapeError("embedding rows " + diffcore::ShapeToString(rows_.shape()) +
                     " do not match vocabulary of " +
                     std::to_string(vocabulary_.size()));
  }
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    if (!index_.emplace(vocabulary_[i], i).second) {
      throw ContractError("duplicate vocabulary word '" + vocabulary_[i] + "'");
    }
  }
  const auto it = index_.find(kUnknownWord);
  if (it == index_.end()) {
    throw ContractError("vocabulary lacks the unknown-word entry");
  }
  unknown_index_ = it->second;
}

std::size_t EmbeddingTable::IndexOf(const std::string& word) const {
  const auto it = index_.find(word);
  return it == index_.end() ? unknown_index_ : it->second;
}

std::vector<std::size_t> EmbeddingTable::Indices(
    const dataio::TokenizedText& text) const {
  std::vector<std::size_t> out;
  out.reserve(text.size());
  for (const auto& token : text.tokens) out.push_back(IndexOf(token.text));
  return out;
}

std::string EmbeddingTable::VocabularyHash() const {
  std::string joined;
  for (const std::string& w : vocabulary_) {
    joined += w;
    joined += '\n';
  }
  return Sha256Hex(joined);
}

std::vector<std::string> BuildVocabulary(
    const std::vector<dataio::QAExample>& examples) {
  std::set<std::string> words;
  for (const auto& ex : examples) {
    for (const auto& t : ex.passage.tokens) words.insert(t.text);
    for (const auto& t : ex.question.tokens) words.insert(t.text);
  }
  words.erase(kUnknownWord);
  std::vector<std::string> vocabulary{kUnknownWord};
  vocabulary.insert(vocabulary.end(), words.begin(), words.end());
  return vocabulary;
}

EmbeddingTable InitEmbeddingTable(std::vector<std::string> vocabulary,
                                  std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw ConfigError("embedding dimension must be positive");
  Rng rng(seed);
  Tensor rows = Tensor::Matrix(vocabulary.size(), dim);
  const double bound = 0.5 / static_cast<double>(dim);
  for (double& v : rows.data()) v = rng.Uniform(-bound, bound);
  return EmbeddingTable(std::move(vocabulary), std::move(rows));
}

std::size_t LoadPretrainedVectors(const std::filesystem::path& path,
                                  EmbeddingTable& table) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::size_t replaced = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    std::vector<double> values;
    double v;
    while (fields >> v) values.push_back(v);
    if (!fields.eof()) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": non-numeric vector entry");
    }
    if (values.size() != table.dim()) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": expected " + std::to_string(table.dim()) +
                       " values, found " + std::to_string(values.size()));
    }
    const std::size_t row = table.IndexOf(word);
    if (row == table.unknown_index() && word != kUnknownWord) continue;
    std::copy(values.begin(), values.end(),
              table.mutable_rows().row(row).begin());
    ++replaced;
  }
  return replaced;
}

Tensor Embed(const dataio::TokenizedText& tokens, const EmbeddingTable& table) {
  if (tokens.empty()) throw ContractError("cannot embed an empty sequence");
  Tensor out = Tensor::Matrix(tokens.size(), table.dim());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto src = table.rows().row(table.IndexOf(tokens.tokens[i].text));
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace rcqa::qamodel
