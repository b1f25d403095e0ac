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

// Precision / recall / F1 of extracted rationales against human rationales.
//
// Matching is by passage token position. Stop words and punctuation are
// removed from both sets first; in exclude mode the answer-span positions are
// removed as well. With M and H the filtered model and human sets:
//   P = |M n H| / |M|,  R = |M n H| / |H|,  F1 = 2PR / (P + R).
// An example with an empty filtered set is skipped, not scored.

#ifndef RCQA_EVALUATION_OVERLAP_H_
#define RCQA_EVALUATION_OVERLAP_H_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "rcqa/dataio/dataset.h"
#include "rcqa/dataio/tokenizer.h"
#include "rcqa/evaluation/stopwords.h"

namespace rcqa::evaluation {

enum class AnswerSpanMode { kInclude, kExclude };

std::string AnswerSpanModeName(AnswerSpanMode mode);

// 2PR/(P+R), or 0 when P + R == 0.
double HarmonicF1(double precision, double recall);

struct OverlapCounts {
  std::string example_id;
  std::size_t intersection = 0;
  std::size_t model = 0;
  std::size_t human = 0;
  bool skipped = false;
  std::string skip_reason;

  double precision() const;
  double recall() const;
  double f1() const { return HarmonicF1(precision(), recall()); }
};

// True for tokens made only of ASCII punctuation.
bool IsPunctuationToken(const std::string& token);

// `excluded_spans` lists the answer spans stripped in exclude mode (the gold
// span by default; the caller may add the predicted span). Positions outside
// the passage throw ContractError.
OverlapCounts ComputeOverlap(const std::vector<std::size_t>& model_positions,
                             const std::vector<std::size_t>& human_positions,
                             const dataio::TokenizedText& passage,
                             const StopwordSet& stopwords, AnswerSpanMode mode,
                             const std::vector<dataio::TokenSpan>& excluded_spans);

struct OverlapMetrics {
  AnswerSpanMode mode = AnswerSpanMode::kInclude;
  // Micro average over pooled counts (headline numbers).
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Mean of per-example values.
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  std::map<std::string, std::size_t> skip_reasons;
  std::size_t pooled_intersection = 0;
  std::size_t pooled_model = 0;
  std::size_t pooled_human = 0;
};

// Throws ContractError, listing the skip reasons, when no example could be
// scored.
OverlapMetrics AggregateOverlap(const std::vector<OverlapCounts>& per_example,
                                AnswerSpanMode mode);

}  // namespace rcqa::evaluation

#endif  // RCQA_EVALUATION_OVERLAP_H_
