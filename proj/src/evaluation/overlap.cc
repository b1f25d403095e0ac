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

#include "rcqa/evaluation/overlap.h"

#include <algorithm>
#include <cctype>
#include <set>

#include "rcqa/errors.h"

namespace rcqa::evaluation {
namespace {

std::set<std::size_t> Filter(const std::vector<std::size_t>& positions,
                             const dataio::TokenizedText& passage,
                             const StopwordSet& stopwords, AnswerSpanMode mode,
                             const std::vector<dataio::TokenSpan>& excluded) {
  std::set<std::size_t> kept;
  for (std::size_t p : positions) {
    if (p >= passage.size()) {
      throw ContractError("rationale position " + std::to_string(p) +
                          " outside passage of " +
                          std::to_string(passage.size()) + " tokens");
    }
    const std::string& word = passage.word(p);
    if (stopwords.contains(word) || IsPunctuationToken(word)) continue;
    if (mode == AnswerSpanMode::kExclude &&
        std::any_of(excluded.begin(), excluded.end(),
                    [p](const dataio::TokenSpan& s) { return s.Contains(p); })) {
      continue;
    }
    kept.insert(p);
  }
  return kept;
}

}  // namespace

std::string AnswerSpanModeName(AnswerSpanMode mode) {
  return mode == AnswerSpanMode::kInclude ? "include" : "exclude";
}

double HarmonicF1(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

double OverlapCounts::precision() const {
  return model == 0 ? 0.0
                    : static_cast<double>(intersection) /
                          static_cast<double>(model);
}

double OverlapCounts::recall() const {
  return human == 0 ? 0.0
                    : static_cast<double>(intersection) /
                          static_cast<double>(human);
}

bool IsPunctuationToken(const std::string& token) {
  return !token.empty() &&
         std::all_of(token.begin(), token.end(), [](unsigned char c) {
           return c < 0x80 && std::ispunct(c) != 0;
         });
}

OverlapCounts ComputeOverlap(const std::vector<std::size_t>& model_positions,
                             const std::vector<std::size_t>& human_positions,
                             const dataio::TokenizedText& passage,
                             const StopwordSet& stopwords, AnswerSpanMode mode,
                             const std::vector<dataio::TokenSpan>& excluded_spans) {
  const auto model =
      Filter(model_positions, passage, stopwords, mode, excluded_spans);
  const auto human =
      Filter(human_positions, passage, stopwords, mode, excluded_spans);
  OverlapCounts counts;
  counts.model = model.size();
  counts.human = human.size();
  for (std::size_t p : model) {
    if (human.contains(p)) ++counts.intersection;
  }
  if (model.empty() || human.empty()) {
    counts.skipped = true;
    counts.skip_reason = model.empty() && human.empty()
                             ? "both sets empty after filtering"
                         : model.empty() ? "model rationale empty after filtering"
                                         : "human rationale empty after filtering";
  }
  return counts;
}

OverlapMetrics AggregateOverlap(const std::vector<OverlapCounts>& per_example,
                                AnswerSpanMode mode) {
  OverlapMetrics out;
  out.mode = mode;
  double sum_p = 0.0, sum_r = 0.0, sum_f = 0.0;
  for (const OverlapCounts& c : per_example) {
    if (c.skipped) {
      ++out.skipped;
      ++out.skip_reasons[c.skip_reason];
      continue;
    }
    ++out.evaluated;
    out.pooled_intersection += c.intersection;
    out.pooled_model += c.model;
    out.pooled_human += c.human;
    sum_p += c.precision();
    sum_r += c.recall();
    sum_f += c.f1();
  }
  if (out.evaluated == 0) {
    std::string reasons;
    for (const auto& [reason, n] : out.skip_reasons) {
      reasons += (reasons.empty() ? "" : "; ") + reason + " x" + std::to_string(n);
    }
    throw ContractError("no example could be scored in " +
                        AnswerSpanModeName(mode) + " mode (" +
                        (reasons.empty() ? "no examples" : reasons) + ")");
  }
  out.precision = static_cast<double>(out.pooled_intersection) /
                  static_cast<double>(out.pooled_model);
  out.recall = static_cast<double>(out.pooled_intersection) /
               static_cast<double>(out.pooled_human);
  out.f1 = HarmonicF1(out.precision, out.recall);
  const double n = static_cast<double>(out.evaluated);
  out.macro_precision = sum_p / n;
  out.macro_recall = sum_r / n;
  out.macro_f1 = sum_f / n;
  return out;
}

}  // namespace rcqa::evaluation
