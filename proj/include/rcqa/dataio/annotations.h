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

#ifndef RCQA_DATAIO_ANNOTATIONS_H_
#define RCQA_DATAIO_ANNOTATIONS_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "rcqa/dataio/dataset.h"

namespace rcqa::dataio {

// Passage positions a human marked as necessary to reach the answer.
struct HumanRationale {
  std::string example_id;
  std::vector<std::size_t> positions;  // sorted, unique
  int annotator_count = 0;
  bool consensus = false;

  friend bool operator==(const HumanRationale&, const HumanRationale&) =
      default;
};

struct LoadedAnnotations {
  std::vector<HumanRationale> records;
  std::vector<std::string> warnings;
};

// Line-delimited JSON, one record per line:
//   {"id": "q17", "spans": [[3, 4], [9, 9]], "consensus": true,
//    "annotators": 2}
// Spans are inclusive token-index intervals. Records whose id is not in
// `examples` are skipped with a warning; malformed lines and positions outside
// the passage throw ParseError naming the line.
LoadedAnnotations LoadAnnotations(const std::filesystem::path& path,
                                  const std::vector<QAExample>& examples);

void SaveAnnotations(const std::filesystem::path& path,
                     const std::vector<HumanRationale>& records);

// Collapses sorted positions into maximal inclusive intervals.
std::vector<TokenSpan> PositionsToSpans(
    const std::vector<std::size_t>& positions);

}  // namespace rcqa::dataio

#endif  // RCQA_DATAIO_ANNOTATIONS_H_
