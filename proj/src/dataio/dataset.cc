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

#include "rcqa/dataio/dataset.h"

#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "rcqa/errors.h"

namespace rcqa::dataio {
namespace {

using nlohmann::json;

constexpr char kFlatFormat[] = "rcqa-flat";

json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": byte " + std::to_string(e.byte) +
                     ": " + e.what());
  }
}

template <typename T>
T Field(const json& object, const char* key, const std::string& where) {
  if (!object.is_object() || !object.contains(key)) {
    throw ParseError(where + ": missing field '" + key + "'");
  }
  try {
    return object.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(where + ": field '" + key + "': " + e.what());
  }
}

void AddOrDrop(LoadedDataset& out, std::string id, const std::string& passage,
               const std::string& question, const std::string& answer,
               std::size_t answer_start) {
  try {
    out.examples.push_back(
        MakeExample(id, passage, question, answer, answer_start));
  } catch (const ContractError& e) {
    out.dropped.push_back({std::move(id), e.what()});
  }
}

void ReadSquad(const json& root, const std::string& file,
               LoadedDataset& out) {
  const json& data = root.at("data");
  if (!data.is_array()) throw ParseError(file + ": 'data' is not an array");
  for (std::size_t a = 0; a < data.size(); ++a) {
    const std::string article_loc = file + ": data[" + std::to_string(a) + "]";
    const auto paragraphs = Field<json>(data[a], "paragraphs", article_loc);
    for (std::size_t p = 0; p < paragraphs.size(); ++p) {
      const std::string para_loc =
          article_loc + ".paragraphs[" + std::to_string(p) + "]";
      const auto context = Field<std::string>(paragraphs[p], "context", para_loc);
      const auto qas = Field<json>(paragraphs[p], "qas", para_loc);
      for (std::size_t q = 0; q < qas.size(); ++q) {
        const std::string qa_loc = para_loc + ".qas[" + std::to_string(q) + "]";
        auto id = Field<std::string>(qas[q], "id", qa_loc);
        const auto question = Field<std::string>(qas[q], "question", qa_loc);
        const auto answers = Field<json>(qas[q], "answers", qa_loc);
        if (!answers.is_array() || answers.empty()) {
          out.dropped.push_back({std::move(id), "no answers"});
          continue;
        }
        // The first listed answer is the gold span.
        const auto text = Field<std::string>(answers[0], "text", qa_loc);
        const auto start =
            Field<std::size_t>(answers[0], "answer_start", qa_loc);
        AddOrDrop(out, std::move(id), context, question, text, start);
      }
    }
  }
}

void ReadFlat(const json& root, const std::string& file, LoadedDataset& out) {
  const json& examples = root.at("examples");
  if (!examples.is_array()) {
    throw ParseError(file + ": 'examples' is not an array");
  }
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const std::string loc = file + ": examples[" + std::to_string(i) + "]";
    AddOrDrop(out, Field<std::string>(examples[i], "id", loc),
              Field<std::string>(examples[i], "passage", loc),
              Field<std::string>(examples[i], "question", loc),
              Field<std::string>(examples[i], "answer_text", loc),
              Field<std::size_t>(examples[i], "answer_start", loc));
  }
}

}  // namespace

std::optional<std::size_t> CodePointToByteOffset(std::string_view text,
                                                 std::size_t code_point) {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    // UTF-8 continuation bytes look like 10xxxxxx.
    if ((static_cast<unsigned char>(text[i]) & 0xC0) == 0x80) continue;
    if (seen++ == code_point) return i;
  }
  if (seen == code_point) return text.size();
  return std::nullopt;
}

std::optional<TokenSpan> AlignCharacterSpan(const TokenizedText& passage,
                                            std::size_t char_start,
                                            std::size_t length) {
  if (length == 0 || char_start + length > passage.raw.size()) {
    return std::nullopt;
  }
  const std::size_t char_end = char_start + length;
  std::optional<TokenSpan> span;
  for (const Token& t : passage.tokens) {
    if (t.end <= char_start || t.begin >= char_end) continue;
    if (!span) {
      span = TokenSpan{t.position, t.position};
    } else {
      span->end = t.position;
    }
  }
  return span;
}

QAExample MakeExample(std::string id, std::string_view passage,
                      std::string_view question, std::string_view answer_text,
                      std::size_t answer_char_start) {
  QAExample ex;
  ex.id = std::move(id);
  ex.passage = Tokenize(passage);
  ex.question = Tokenize(question);
  ex.answer_char_start = answer_char_start;
  if (ex.passage.empty()) throw ContractError("empty passage");
  if (ex.question.empty()) throw ContractError("empty question");
  const auto byte_start = CodePointToByteOffset(passage, answer_char_start);
  if (!byte_start || *byte_start + answer_text.size() > passage.size()) {
    throw ContractError("answer offset " + std::to_string(answer_char_start) +
                        " runs past the passage end");
  }
  if (passage.substr(*byte_start, answer_text.size()) != answer_text) {
    throw ContractError("answer text does not occur at offset " +
                        std::to_string(answer_char_start));
  }
  const auto span =
      AlignCharacterSpan(ex.passage, *byte_start, answer_text.size());
  if (!span) throw ContractError("answer covers no passage token");
  ex.answer = *span;
  ex.answer_text = ex.passage.Slice(span->start, span->end);
  return ex;
}

LoadedDataset LoadDataset(const std::filesystem::path& path) {
  const json root = ReadJsonFile(path);
  LoadedDataset out;
  const std::string file = path.string();
  try {
    if (root.is_object() && root.contains("data")) {
      ReadSquad(root, file, out);
    } else if (root.is_object() && root.contains("examples")) {
      ReadFlat(root, file, out);
    } else {
      throw ParseError(file +
                       ": neither a SQuAD file ('data') nor a flat file "
                       "('examples')");
    }
  } catch (const json::exception& e) {
    throw ParseError(file + ": " + e.what());
  }
  if (out.examples.empty()) {
    throw ContractError(file + ": no usable examples (" +
                        std::to_string(out.dropped.size()) + " dropped)");
  }
  return out;
}

void SaveFlatDataset(const std::filesystem::path& path,
                     const std::vector<QAExample>& examples) {
  json list = json::array();
  for (const QAExample& ex : examples) {
    // Re-aligning [answer start, end of last answer token) yields the same
    // token span.
    const std::size_t byte_start =
        CodePointToByteOffset(ex.passage.raw, ex.answer_char_start).value();
    const std::size_t length = ex.passage.tokens[ex.answer.end].end - byte_start;
    list.push_back({{"id", ex.id},
                    {"passage", ex.passage.raw},
                    {"question", ex.question.raw},
                    {"answer_text", ex.passage.raw.substr(
                                        byte_start, length)},
                    {"answer_start", ex.answer_char_start}});
  }
  const json root = {{"format", kFlatFormat}, {"version", 1},
                     {"examples", std::move(list)}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path.string() + ": cannot open for writing");
  out << root.dump(1) << "\n";
}

}  // namespace rcqa::dataio
