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

#include "rcqa/pipeline/records_io.h"

#include <fstream>

#include "rcqa/errors.h"
#include "rcqa/hashing.h"

namespace rcqa::pipeline {
namespace {

using nlohmann::json;

json SpanToJson(dataio::TokenSpan span) {
  return json::array({span.start, span.end});
}

dataio::TokenSpan SpanFromJson(const json& value) {
  if (!value.is_array() || value.size() != 2) {
    throw ParseError("span must be a [start, end] pair");
  }
  return {value[0].get<std::size_t>(), value[1].get<std::size_t>()};
}

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path.string() + ": cannot open for writing");
  return out;
}

}  // namespace

void WriteJson(const std::filesystem::path& path, const json& value) {
  std::ofstream out = OpenForWrite(path);
  out << value.dump(2) << '\n';
}

void WriteJsonLines(const std::filesystem::path& path,
                    const std::vector<json>& lines) {
  std::ofstream out = OpenForWrite(path);
  for (const json& line : lines) out << line.dump() << '\n';
}

std::vector<json> ReadJsonLines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open");
  std::vector<json> out;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw ParseError(path.string() + ":" + std::to_string(number) + ": " +
                       e.what());
    }
  }
  return out;
}

std::vector<json> AttributionLines(
    const dataio::QAExample& example,
    const attribution::AttributionResult& result) {
  std::vector<json> lines;
  lines.reserve(example.passage.size());
  for (std::size_t i = 0; i < example.passage.size(); ++i) {
    lines.push_back({{"id", example.id},
                     {"position", i},
                     {"token", example.passage.word(i)},
                     {"importance", result.importance.at(i)},
                     {"distribution", result.distribution.at(i)}});
  }
  return lines;
}

json RationaleToJson(const StoredRationale& stored,
                     const dataio::QAExample& example) {
  const rationale::RationaleRecord& r = stored.record;
  json tokens = json::array();
  for (std::size_t p : r.indicators) tokens.push_back(example.passage.word(p));
  json out = {{"id", r.example_id},
              {"model", stored.model},
              {"flip", stored.flip},
              {"ranking_source", r.ranking_source},
              {"passage_length", r.passage_length},
              {"ranking", r.ranking},
              {"indicators", r.indicators},
              {"indicator_tokens", tokens},
              {"flipped", r.flipped},
              {"flip_fraction", r.flip_fraction},
              {"original_span", SpanToJson(r.original_span)},
              {"post_flip_span", SpanToJson(r.post_flip_span)},
              {"gold_span", SpanToJson(example.answer)}};
  if (stored.control >= 0) out["control"] = stored.control;
  return out;
}

StoredRationale RationaleFromJson(const json& line) {
  StoredRationale s;
  try {
    rationale::RationaleRecord& r = s.record;
    r.example_id = line.at("id").get<std::string>();
    r.ranking_source = line.at("ranking_source").get<std::string>();
    r.passage_length = line.at("passage_length").get<std::size_t>();
    r.ranking = line.at("ranking").get<std::vector<std::size_t>>();
    r.indicators = line.at("indicators").get<std::vector<std::size_t>>();
    r.flipped = line.at("flipped").get<bool>();
    r.flip_fraction = line.at("flip_fraction").get<double>();
    r.original_span = SpanFromJson(line.at("original_span"));
    r.post_flip_span = SpanFromJson(line.at("post_flip_span"));
    s.model = line.at("model").get<std::string>();
    s.flip = line.at("flip").get<std::string>();
    s.control = line.value("control", -1);
  } catch (const json::exception& e) {
    throw ParseError(std::string("rationale record: ") + e.what());
  }
  return s;
}

std::vector<StoredRationale> ReadRationales(const std::filesystem::path& path) {
  std::vector<StoredRationale> out;
  std::size_t number = 0;
  for (const json& line : ReadJsonLines(path)) {
    ++number;
    try {
      out.push_back(RationaleFromJson(line));
    } catch (const ParseError& e) {
      throw ParseError(path.string() + ": record " + std::to_string(number) +
                       ": " + e.what());
    }
  }
  return out;
}

json MakeManifest(const RunConfig& config,
                  const std::map<std::string, std::filesystem::path>& inputs,
                  const std::vector<std::string>& outputs,
                  const std::filesystem::path& out_dir) {
  const auto base = std::filesystem::weakly_canonical(out_dir);
  // Paths inside the output directory are recorded relative to it so that
  // runs in different directories produce the same manifest.
  const auto shown = [&](const std::filesystem::path& path) {
    const auto rel = std::filesystem::weakly_canonical(path).lexically_relative(base);
    if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
    return path.generic_string();
  };
  json in = json::object();
  for (const auto& [role, path] : inputs) {
    in[role] = {{"path", shown(path)}, {"sha256", Sha256File(path)}};
  }
  json resolved = ToJson(config);
  for (const char* key : {"dataset", "annotations", "checkpoint", "rationales",
                          "stopwords", "pretrained"}) {
    const std::string value = resolved.at(key).get<std::string>();
    if (!value.empty()) resolved[key] = shown(value);
  }
  return {{"command", config.command},
          {"config", resolved},
          {"inputs", in},
          {"outputs", outputs}};
}

}  // namespace rcqa::pipeline
