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

#ifndef RCQA_EVALUATION_REPORT_H_
#define RCQA_EVALUATION_REPORT_H_

#include <optional>
#include <string>
#include <vector>

#include "rcqa/dataio/tokenizer.h"
#include "rcqa/evaluation/flip_stats.h"
#include "rcqa/evaluation/overlap.h"

namespace rcqa::evaluation {

struct FlipTableRow {
  std::string model;
  FlipFractionStats stats;
};

// Model | Mean | Variance, fractions on a 0-1 scale.
std::string FormatFlipTable(const std::vector<FlipTableRow>& rows);

struct OverlapTableRow {
  std::string model;
  std::optional<OverlapMetrics> include_answer;
  std::optional<OverlapMetrics> exclude_answer;
};

// Model | incl. answer %P %R %F1 | excl. answer %P %R %F1 (micro averages).
std::string FormatOverlapTable(const std::vector<OverlapTableRow>& rows);

// The raw passage with each maximal run of marked tokens wrapped in [ ].
std::string RenderHighlighted(const dataio::TokenizedText& passage,
                              const std::vector<std::size_t>& positions);

}  // namespace rcqa::evaluation

#endif  // RCQA_EVALUATION_REPORT_H_
