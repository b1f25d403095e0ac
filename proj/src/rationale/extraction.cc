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

#include "rcqa/rationale/extraction.h"

#include <algorithm>
#include <numeric>
#include <utility>

#include "rcqa/errors.h"
#include "rcqa/random.h"

namespace rcqa::rationale {

using dataio::TokenSpan;
using diffcore::Tensor;

namespace {

void ZeroRow(Tensor& passage, std::size_t position) {
  for (double& v : passage.row(position)) v = 0.0;
}

void RequireNonEmpty(const Tensor& passage) {
  if (passage.rank() != 2 || passage.rows() == 0) {
    throw ContractError("rationale extraction needs a nonempty passage");
  }
}

}  // namespace

FlipCriterion ParseFlipCriterion(const std::string& name) {
  if (name == "prediction-change") return FlipCriterion::kPredictionChange;
  if (name == "gold-mismatch") return FlipCriterion::kGoldMismatch;
  throw ConfigError("unknown flip criterion '" + name +
                    "' (expected prediction-change or gold-mismatch)");
}

std::string FlipCriterionName(FlipCriterion criterion) {
  return criterion == FlipCriterion::kPredictionChange ? "prediction-change"
                                                       : "gold-mismatch";
}

SpanPredictor MakeSpanPredictor(const qamodel::ModelParameters& params,
                                Tensor question_embeds,
                                qamodel::PredictOptions options) {
  return [&params, question = std::move(question_embeds),
          options](const Tensor& passage) {
    return qamodel::PredictSpan(passage, question, params, options).span;
  };
}

std::vector<std::size_t> RankByDistribution(
    const std::vector<double>& distribution) {
  std::vector<std::size_t> order(distribution.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&distribution](std::size_t a, std::size_t b) {
                     return distribution[a] > distribution[b];
                   });
  return order;
}

TokenSpan ReplayRemovals(const SpanPredictor& predictor, const Tensor& passage,
                         const std::vector<std::size_t>& positions) {
  Tensor erased = passage;
  for (std::size_t p : positions) {
    if (p >= erased.rows()) throw ContractError("removal position out of range");
    ZeroRow(erased, p);
  }
  return predictor(erased);
}

RationaleRecord ExtractWithRanking(const SpanPredictor& predictor,
                                   const Tensor& passage,
                                   const FlipTarget& target,
                                   std::vector<std::size_t> ranking,
                                   std::string ranking_source) {
  RequireNonEmpty(passage);
  const std::size_t d = passage.rows();
  std::vector<bool> seen(d, false);
  if (ranking.size() != d) {
    throw ContractError("ranking has " + std::to_string(ranking.size()) +
                        " entries for a passage of " + std::to_string(d));
  }
  for (std::size_t p : ranking) {
    if (p >= d || seen[p]) {
      throw ContractError("ranking is not a permutation of passage positions");
    }
    seen[p] = true;
  }

  RationaleRecord record;
  record.ranking_source = std::move(ranking_source);
  record.passage_length = d;
  record.original_span = target.original;
  record.post_flip_span = target.original;
  Tensor erased = passage;
  for (std::size_t p : ranking) {
    ZeroRow(erased, p);
    record.indicators.push_back(p);
    record.post_flip_span = predictor(erased);
    if (target.Flipped(record.post_flip_span)) {
      record.flipped = true;
      break;
    }
  }
  record.ranking = std::move(ranking);
  record.flip_fraction = record.flipped
                             ? static_cast<double>(record.indicators.size()) /
                                   static_cast<double>(d)
                             : 1.0;
  return record;
}

RationaleRecord ExtractRationale(const SpanPredictor& predictor,
                                 const Tensor& passage,
                                 const FlipTarget& target,
                                 const std::vector<double>& distribution) {
  RequireNonEmpty(passage);
  if (distribution.size() != passage.rows()) {
    throw ContractError("distribution length " +
                        std::to_string(distribution.size()) +
                        " differs from passage length " +
                        std::to_string(passage.rows()));
  }
  return ExtractWithRanking(predictor, passage, target,
                            RankByDistribution(distribution), "ig");
}

RationaleRecord RandomRationaleBaseline(const SpanPredictor& predictor,
                                        const Tensor& passage,
                                        const FlipTarget& target,
                                        std::uint64_t seed) {
  RequireNonEmpty(passage);
  std::vector<std::size_t> order(passage.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.Shuffle(order);
  return ExtractWithRanking(predictor, passage, target, std::move(order),
                            "random");
}

RationaleRecord ExtractRationaleRefreshing(const SpanPredictor& predictor,
                                           const Tensor& passage,
                                           const FlipTarget& target,
                                           const Rescorer& rescore) {
  RequireNonEmpty(passage);
  const std::size_t d = passage.rows();
  RationaleRecord record;
  record.ranking_source = "ig-refresh";
  record.passage_length = d;
  record.original_span = target.original;
  record.post_flip_span = target.original;
  std::vector<bool> removed(d, false);
  Tensor erased = passage;
  for (std::size_t step = 0; step < d; ++step) {
    const std::vector<double> distribution = rescore(erased);
    if (distribution.size() != d) {
      throw ContractError("rescorer returned a distribution of wrong length");
    }
    std::size_t best = d;
    for (std::size_t p : RankByDistribution(distribution)) {
      if (!removed[p]) {
        best = p;
        break;
      }
    }
    removed[best] = true;
    ZeroRow(erased, best);
    record.indicators.push_back(best);
    record.post_flip_span = predictor(erased);
    if (target.Flipped(record.post_flip_span)) {
      record.flipped = true;
      break;
    }
  }
  // The removal order doubles as the ranking; unremoved words follow in
  // position order.
  record.ranking = record.indicators;
  for (std::size_t p = 0; p < d; ++p) {
    if (!removed[p]) record.ranking.push_back(p);
  }
  record.flip_fraction = record.flipped
                             ? static_cast<double>(record.indicators.size()) /
                                   static_cast<double>(d)
                             : 1.0;
  return record;
}

}  // namespace rcqa::rationale
