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

#include "rcqa/dataio/annotations.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <string>

#include "json.hpp"
#include "rcqa/errors.h"

namespace rcqa::dataio {

using nlohmann::json;

std::vector<TokenSpan> PositionsToSpans(
    const std::vector<std::size_t>& positions) {
  std::vector<TokenSpan> spans;
  for (std::size_t p : positions) {
    if (!spans.empty() && spans.back().end + 1 == p) {
      spans.back().end = p;
    } else {
      spans.push_back({p, p});
    }
  }
  return spans;
}

LoadedAnnotations LoadAnnotations(const std::filesystem::path& path,
                                  const std::vector<QAExample>& examples) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::map<std::string, std::size_t> passage_length;
  for (const QAExample& ex : examples) {
    passage_length[ex.id] = ex.passage.size();
  }

  LoadedAnnotations out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    HumanRationale record;
    try {
      const json j = json::parse(line);
      record.example_id = j.at("id").get<std::string>();
      record.consensus = j.at("consensus").get<bool>();
      record.annotator_count = j.value("annotators", 0);
      const auto it = passage_length.find(record.example_id);
      if (it == passage_length.end()) {
        out.warnings.push_back(where + ": unknown example id '" +
                               record.example_id + "', skipped");
        continue;
      }
      for (const json& span : j.at("spans")) {
        const auto first = span.at(0).get<std::size_t>();
        const auto last = span.at(1).get<std::size_t>();
        if (first > last || last >= it->second) {
          throw ParseError(where + ": span [" + std::to_string(first) + ", " +
                           std::to_string(last) + "] outside passage of " +
                           std::to_string(it->second) + " tokens");
        }
        for (std::size_t p = first; p <= last; ++p) {
          record.positions.push_back(p);
        }
      }
    } catch (const json::exception& e) {
      throw ParseError(where + ": " + e.what());
    }
    std::sort(record.positions.begin(), record.positions.end());
    record.positions.erase(
        std::unique(record.positions.begin(), record.positions.end()),
        record.positions.end());
    out.records.push_back(std::move(record));
  }
  return out;
}

void SaveAnnotations(const std::filesystem::path& path,
                     const std::vector<HumanRationale>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path.string() + ": cannot open for writing");
  for (const HumanRationale& r : records) {
    json spans = json::array();
    for (const TokenSpan& s : PositionsToSpans(r.positions)) {
      spans.push_back({s.start, s.end});
    }
    const json j = {{"id", r.example_id},
                    {"spans", std::move(spans)},
                    {"consensus", r.consensus},
                    {"annotators", r.annotator_count}};
    out << j.dump() << "\n";
  }
}

}  // namespace rcqa::dataio
