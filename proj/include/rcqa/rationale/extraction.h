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

// Greedy decision-flip rationale extraction.
//
// Passage words are ranked once by their attribution distribution. The
// next-ranked word's embedding is replaced with the zero vector and the model
// re-run, until the decoded span flips. The removed words are the rationale
// ("indicator words") and their share of the passage is the flip fraction.

#ifndef RCQA_RATIONALE_EXTRACTION_H_
#define RCQA_RATIONALE_EXTRACTION_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rcqa/dataio/dataset.h"
#include "rcqa/diffcore/tensor.h"
#include "rcqa/qamodel/model.h"

namespace rcqa::rationale {

// What counts as a decision flip.
enum class FlipCriterion {
  kPredictionChange,  // decoded span differs from the original prediction
  kGoldMismatch,      // decoded span differs from the gold span
};

FlipCriterion ParseFlipCriterion(const std::string& name);
std::string FlipCriterionName(FlipCriterion criterion);

struct RationaleRecord {
  std::string example_id;
  std::string ranking_source;  // "ig", "random" or "ig-refresh"
  std::size_t passage_length = 0;
  std::vector<std::size_t> ranking;     // full removal order considered
  std::vector<std::size_t> indicators;  // removed words, insertion order
  bool flipped = false;
  double flip_fraction = 0.0;  // indicators.size() / passage_length
  dataio::TokenSpan original_span;
  dataio::TokenSpan post_flip_span;  // prediction after the last removal

  friend bool operator==(const RationaleRecord&, const RationaleRecord&) =
      default;
};

// Decodes a span from passage embeddings (question and parameters bound).
using SpanPredictor =
    std::function<dataio::TokenSpan(const diffcore::Tensor& passage)>;

// `params` must outlive the predictor.
SpanPredictor MakeSpanPredictor(const qamodel::ModelParameters& params,
                                diffcore::Tensor question_embeds,
                                qamodel::PredictOptions options = {});

// Positions sorted by descending distribution value; equal values keep
// ascending position order.
std::vector<std::size_t> RankByDistribution(
    const std::vector<double>& distribution);

// Zeroes the given rows and decodes.
dataio::TokenSpan ReplayRemovals(const SpanPredictor& predictor,
                                 const diffcore::Tensor& passage,
                                 const std::vector<std::size_t>& positions);

struct FlipTarget {
  dataio::TokenSpan original;  // the model's prediction on the full passage
  dataio::TokenSpan gold;
  FlipCriterion criterion = FlipCriterion::kPredictionChange;

  bool Flipped(dataio::TokenSpan prediction) const {
    return criterion == FlipCriterion::kPredictionChange ? prediction != original
                                                         : prediction != gold;
  }
};

// Removes words in `ranking` order until the decision flips. When every word
// has been removed without a flip, flipped is false and the fraction is 1.
// Throws ContractError on an empty passage or a ranking that is not a
// permutation of the passage positions.
RationaleRecord ExtractWithRanking(const SpanPredictor& predictor,
                                   const diffcore::Tensor& passage,
                                   const FlipTarget& target,
                                   std::vector<std::size_t> ranking,
                                   std::string ranking_source);

// Ranking from an attribution distribution over the d passage words.
RationaleRecord ExtractRationale(const SpanPredictor& predictor,
                                 const diffcore::Tensor& passage,
                                 const FlipTarget& target,
                                 const std::vector<double>& distribution);

// Control condition: a uniformly random ranking drawn from `seed`.
RationaleRecord RandomRationaleBaseline(const SpanPredictor& predictor,
                                        const diffcore::Tensor& passage,
                                        const FlipTarget& target,
                                        std::uint64_t seed);

// Extension, not the default procedure: recomputes the distribution on the
// partially erased passage after every removal and removes the top remaining
// word. `rescore` maps the current passage to a length-d distribution.
using Rescorer =
    std::function<std::vector<double>(const diffcore::Tensor& passage)>;
RationaleRecord ExtractRationaleRefreshing(const SpanPredictor& predictor,
                                           const diffcore::Tensor& passage,
                                           const FlipTarget& target,
                                           const Rescorer& rescore);

}  // namespace rcqa::rationale

#endif  // RCQA_RATIONALE_EXTRACTION_H_
