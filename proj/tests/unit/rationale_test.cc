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

#include <algorithm>
#include <vector>

#include "gtest/gtest.h"
#include "rcqa/attribution/integrated_gradients.h"
#include "rcqa/errors.h"
#include "rcqa/qamodel/embedding.h"
#include "rcqa/rationale/extraction.h"
#include "support/op_catalog.h"
#include "support/trained_model.h"

namespace rcqa::rationale {
namespace {

using dataio::TokenSpan;
using diffcore::Tensor;

bool RowIsZero(const Tensor& t, std::size_t r) {
  for (double v : t.row(r)) {
    if (v != 0.0) return false;
  }
  return true;
}

// Predicts (0, 0) while any of `anchors` is present, (5, 5) otherwise.
SpanPredictor AnchorPredictor(std::vector<std::size_t> anchors) {
  return [anchors](const Tensor& passage) {
    for (std::size_t a : anchors) {
      if (!RowIsZero(passage, a)) return TokenSpan{0, 0};
    }
    return TokenSpan{5, 5};
  };
}

TEST(RankTest, DescendingWithPositionTieBreak) {
  EXPECT_EQ(RankByDistribution({0.1, 0.3, 0.1, 0.3, 0.2}),
            (std::vector<std::size_t>{1, 3, 4, 0, 2}));
  EXPECT_EQ(RankByDistribution({0.25, 0.25, 0.25, 0.25}),
            (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(ExtractTest, FlipAfterTwoOfTenWords) {
  const Tensor passage(diffcore::Shape{10, 3}, 1.0);
  std::vector<double> dist(10, 0.05);
  dist[3] = 0.3;
  dist[7] = 0.3;
  const FlipTarget target{{0, 0}, {0, 0}, FlipCriterion::kPredictionChange};
  const RationaleRecord r =
      ExtractRationale(AnchorPredictor({3, 7}), passage, target, dist);
  EXPECT_TRUE(r.flipped);
  EXPECT_EQ(r.indicators, (std::vector<std::size_t>{3, 7}));
  EXPECT_DOUBLE_EQ(r.flip_fraction, 0.2);
  EXPECT_EQ(r.post_flip_span, (TokenSpan{5, 5}));
  EXPECT_EQ(r.original_span, (TokenSpan{0, 0}));
  EXPECT_EQ(r.ranking_source, "ig");
}

TEST(ExtractTest, PassageIndependentModelNeverFlips) {
  const SpanPredictor constant = [](const Tensor&) { return TokenSpan{1, 2}; };
  const Tensor passage(diffcore::Shape{6, 2}, 0.5);
  const FlipTarget target{{1, 2}, {1, 2}, FlipCriterion::kPredictionChange};
  const RationaleRecord r = ExtractRationale(constant, passage, target,
                                             std::vector<double>(6, 1.0 / 6));
  EXPECT_FALSE(r.flipped);
  EXPECT_EQ(r.flip_fraction, 1.0);
  EXPECT_EQ(r.indicators.size(), 6u);
}

TEST(ExtractTest, GoldMismatchCriterion) {
  const Tensor passage(diffcore::Shape{10, 1}, 1.0);
  std::vector<double> dist(10, 0.0);
  dist[3] = 0.6;
  dist[7] = 0.4;
  // Original prediction is correct: flips exactly when it stops matching.
  const FlipTarget correct{{0, 0}, {0, 0}, FlipCriterion::kGoldMismatch};
  EXPECT_EQ(ExtractRationale(AnchorPredictor({3, 7}), passage, correct, dist)
                .indicators.size(),
            2u);
  // Already wrong: the first removal already counts as a flip.
  const FlipTarget wrong{{0, 0}, {9, 9}, FlipCriterion::kGoldMismatch};
  const auto r = ExtractRationale(AnchorPredictor({3, 7}), passage, wrong, dist);
  EXPECT_TRUE(r.flipped);
  EXPECT_EQ(r.indicators, std::vector<std::size_t>{3});
  EXPECT_EQ(ParseFlipCriterion(FlipCriterionName(FlipCriterion::kGoldMismatch)),
            FlipCriterion::kGoldMismatch);
  EXPECT_THROW(ParseFlipCriterion("wrong"), ConfigError);
}

TEST(ExtractTest, ContractErrors) {
  const SpanPredictor p = AnchorPredictor({0});
  const FlipTarget target{{0, 0}, {0, 0}};
  EXPECT_THROW(ExtractRationale(p, Tensor::Matrix(0, 3), target, {}),
               ContractError);
  const Tensor passage(diffcore::Shape{3, 1}, 1.0);
  EXPECT_THROW(ExtractWithRanking(p, passage, target, {0, 0, 1}, "x"),
               ContractError);
  EXPECT_THROW(ExtractWithRanking(p, passage, target, {0, 1}, "x"),
               ContractError);
  EXPECT_THROW(ExtractRationale(p, passage, target, {0.5, 0.5}), ContractError);
}

TEST(RandomBaselineTest, SingleWordAndDeterminism) {
  const FlipTarget target{{0, 0}, {0, 0}};
  const auto one = RandomRationaleBaseline(AnchorPredictor({0}),
                                           Tensor::Matrix(1, 2, 1.0), target, 4);
  EXPECT_EQ(one.indicators, std::vector<std::size_t>{0});
  EXPECT_EQ(one.flip_fraction, 1.0);

  const Tensor passage(diffcore::Shape{20, 2}, 1.0);
  const auto a = RandomRationaleBaseline(AnchorPredictor({4, 11}), passage,
                                         target, 99);
  const auto b = RandomRationaleBaseline(AnchorPredictor({4, 11}), passage,
                                         target, 99);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.ranking_source, "random");
  auto sorted = a.ranking;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) EXPECT_EQ(sorted[i], i);
}

TEST(RefreshTest, ConstantRescorerMatchesSingleRanking) {
  const Tensor passage(diffcore::Shape{10, 2}, 1.0);
  std::vector<double> dist(10, 0.05);
  dist[7] = 0.3;
  dist[3] = 0.25;
  const FlipTarget target{{0, 0}, {0, 0}};
  const auto once = ExtractRationale(AnchorPredictor({3, 7}), passage, target, dist);
  const auto refreshed = ExtractRationaleRefreshing(
      AnchorPredictor({3, 7}), passage, target,
      [&](const Tensor&) { return dist; });
  EXPECT_EQ(refreshed.indicators, once.indicators);
  EXPECT_EQ(refreshed.flip_fraction, once.flip_fraction);
  EXPECT_EQ(refreshed.ranking_source, "ig-refresh");
}

// Record invariants on a trained model with IG rankings.
TEST(InvariantTest, TrainedModelRecordsAreFaithfulAndNearMinimal) {
  const auto& setup = testing::SmallCosineSetup();
  const auto& params = setup.params;
  for (std::size_t i = 0; i < 30; ++i) {
    const auto& ex = setup.test[i];
    const Tensor p = qamodel::Embed(ex.passage, params.embeddings);
    const Tensor q = qamodel::Embed(ex.question, params.embeddings);
    const auto pred = qamodel::PredictSpan(p, q, params);
    const auto ig = attribution::AttributeSpan(
        params, p, q, pred.span, qamodel::TargetKind::kLogProbability);
    const SpanPredictor predictor = MakeSpanPredictor(params, q);
    const FlipTarget target{pred.span, ex.answer};
    const RationaleRecord r = ExtractRationale(predictor, p, target, ig.distribution);

    ASSERT_FALSE(r.indicators.empty());
    EXPECT_GT(r.flip_fraction, 0.0);
    EXPECT_LE(r.flip_fraction, 1.0);
    EXPECT_TRUE(std::equal(r.indicators.begin(), r.indicators.end(),
                           r.ranking.begin()));
    EXPECT_EQ(r, ExtractRationale(predictor, p, target, ig.distribution));
    if (!r.flipped) continue;
    EXPECT_DOUBLE_EQ(r.flip_fraction,
                     static_cast<double>(r.indicators.size()) / ex.passage.size());
    EXPECT_EQ(ReplayRemovals(predictor, p, r.indicators), r.post_flip_span);
    EXPECT_NE(r.post_flip_span, r.original_span);
    const std::vector<std::size_t> all_but_last(r.indicators.begin(),
                                                r.indicators.end() - 1);
    EXPECT_EQ(ReplayRemovals(predictor, p, all_but_last), r.original_span);
  }
}

}  // namespace
}  // namespace rcqa::rationale
