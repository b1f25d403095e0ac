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

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "rcqa/dataio/tokenizer.h"
#include "rcqa/errors.h"
#include "rcqa/evaluation/flip_stats.h"
#include "rcqa/evaluation/overlap.h"
#include "rcqa/evaluation/report.h"
#include "rcqa/evaluation/stopwords.h"
#include "support/overlap_oracle.h"

namespace rcqa::evaluation {
namespace {

using dataio::Tokenize;
using dataio::TokenSpan;

TEST(FlipStatsTest, Examples) {
  const auto same = ComputeFlipFractionStats(std::vector<double>{0.2, 0.2});
  EXPECT_DOUBLE_EQ(same.mean, 0.2);
  EXPECT_DOUBLE_EQ(same.variance, 0.0);
  const auto two = ComputeFlipFractionStats(std::vector<double>{1.0, 0.5});
  EXPECT_DOUBLE_EQ(two.mean, 0.75);
  EXPECT_DOUBLE_EQ(two.variance, 0.0625);
  EXPECT_THROW(ComputeFlipFractionStats(std::vector<double>{}), ContractError);
}

TEST(FlipStatsTest, HistogramBins) {
  const auto s =
      ComputeFlipFractionStats(std::vector<double>{0.01, 0.05, 0.07, 0.5, 1.0});
  ASSERT_EQ(s.histogram.size(), kHistogramBins);
  EXPECT_EQ(s.histogram[0], 1u);
  EXPECT_EQ(s.histogram[1], 2u);
  EXPECT_EQ(s.histogram[10], 1u);
  EXPECT_EQ(s.histogram[19], 1u);
}

TEST(FlipStatsTest, RecordsCountFlips) {
  rationale::RationaleRecord a, b;
  a.flip_fraction = 0.1;
  a.flipped = true;
  b.flip_fraction = 1.0;
  const auto s = ComputeFlipFractionStats(std::vector{a, b});
  EXPECT_EQ(s.count, 2u);
  EXPECT_EQ(s.flipped, 1u);
  EXPECT_DOUBLE_EQ(s.mean, 0.55);
}

TEST(HarmonicF1Test, ReproducesReferenceRows) {
  // (P, R, F1) triples in percent from a reference results table.
  struct Row { double p, r, f1; };
  const std::vector<Row> rows = {
      {22.8, 5.1, 8.3},   {85.8, 19.8, 32.2}, {29.4, 8.7, 13.4},
      {65.1, 26.9, 38.1}, {22.7, 14.4, 17.6}, {83.1, 19.6, 31.7},
      {28.3, 8.2, 12.7}};
  for (const Row& row : rows) {
    EXPECT_NEAR(HarmonicF1(row.p, row.r), row.f1, 0.1) << row.p << "/" << row.r;
  }
  // The remaining row of that table (94.9 / 17.45 / 29.1) is internally
  // inconsistent: its harmonic mean is 29.48.
  EXPECT_NEAR(HarmonicF1(94.9, 17.45), 29.479, 1e-3);
  EXPECT_EQ(HarmonicF1(0.0, 0.0), 0.0);
}

TEST(OverlapTest, HalfOverlap) {
  const auto passage = Tokenize("alpha beta gamma delta");
  const auto c = ComputeOverlap({0, 1}, {1, 2}, passage, {},
                                AnswerSpanMode::kInclude, {});
  EXPECT_DOUBLE_EQ(c.precision(), 0.5);
  EXPECT_DOUBLE_EQ(c.recall(), 0.5);
  EXPECT_DOUBLE_EQ(c.f1(), 0.5);
}

TEST(OverlapTest, IdenticalSets) {
  const auto passage = Tokenize("alpha beta gamma");
  const auto c = ComputeOverlap({2, 0}, {0, 2}, passage, {},
                                AnswerSpanMode::kInclude, {});
  EXPECT_EQ(c.precision(), 1.0);
  EXPECT_EQ(c.recall(), 1.0);
  EXPECT_EQ(c.f1(), 1.0);
}

TEST(OverlapTest, StopwordsPunctuationAndAnswerFiltering) {
  const auto passage = Tokenize("maria curie , the first female");
  const StopwordSet stop = DefaultStopwords();
  // Adding a stop word or punctuation position never changes the counts.
  const auto base = ComputeOverlap({0, 1}, {1, 4}, passage, stop,
                                   AnswerSpanMode::kInclude, {});
  const auto padded = ComputeOverlap({0, 1, 2, 3}, {1, 3, 4}, passage, stop,
                                     AnswerSpanMode::kInclude, {});
  EXPECT_EQ(base.intersection, padded.intersection);
  EXPECT_EQ(base.model, padded.model);
  EXPECT_EQ(base.human, padded.human);

  // Exclude mode ignores whether answer positions were present at all.
  const TokenSpan answer{0, 1};
  const auto with = ComputeOverlap({0, 1, 4}, {0, 4, 5}, passage, stop,
                                   AnswerSpanMode::kExclude, {answer});
  const auto without = ComputeOverlap({4}, {4, 5}, passage, stop,
                                      AnswerSpanMode::kExclude, {answer});
  EXPECT_EQ(with.intersection, without.intersection);
  EXPECT_EQ(with.model, without.model);
  EXPECT_EQ(with.human, without.human);
}

TEST(OverlapTest, EmptyAfterFilteringIsSkipped) {
  const auto passage = Tokenize("the cat , of");
  const auto c = ComputeOverlap({0, 2}, {1}, passage, DefaultStopwords(),
                                AnswerSpanMode::kInclude, {});
  EXPECT_TRUE(c.skipped);
  EXPECT_EQ(c.skip_reason, "model rationale empty after filtering");
  EXPECT_THROW(ComputeOverlap({9}, {1}, passage, {}, AnswerSpanMode::kInclude, {}),
               ContractError);
  try {
    AggregateOverlap({c}, AnswerSpanMode::kInclude);
    FAIL();
  } catch (const ContractError& e) {
    EXPECT_NE(std::string(e.what()).find("model rationale empty"),
              std::string::npos);
  }
}

TEST(OverlapTest, SwappingSetsSwapsPrecisionAndRecall) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = testing::RandomOverlapCase(rng);
    const auto a = ComputeOverlap(c.model, c.human, c.passage, DefaultStopwords(),
                                  AnswerSpanMode::kInclude, {});
    const auto b = ComputeOverlap(c.human, c.model, c.passage, DefaultStopwords(),
                                  AnswerSpanMode::kInclude, {});
    EXPECT_EQ(a.precision(), b.recall());
    EXPECT_EQ(a.recall(), b.precision());
    EXPECT_EQ(a.f1(), b.f1());
    if (!a.skipped && a.precision() > 0 && a.recall() > 0) {
      EXPECT_LE(a.f1(), std::max(a.precision(), a.recall()) + 1e-15);
      EXPECT_GE(a.f1(), std::min(a.precision(), a.recall()) - 1e-15);
    }
  }
}

TEST(AggregateTest, SingleAndIdenticalExamples) {
  const auto passage = Tokenize("alpha beta gamma delta");
  const auto c = ComputeOverlap({0, 1, 2}, {1, 2, 3}, passage, {},
                                AnswerSpanMode::kInclude, {});
  const auto one = AggregateOverlap({c}, AnswerSpanMode::kInclude);
  EXPECT_EQ(one.precision, c.precision());
  EXPECT_EQ(one.recall, c.recall());
  EXPECT_EQ(one.f1, c.f1());
  const auto two = AggregateOverlap({c, c}, AnswerSpanMode::kInclude);
  EXPECT_EQ(two.precision, c.precision());
  EXPECT_EQ(two.macro_f1, c.f1());
  EXPECT_EQ(two.evaluated, 2u);
}

TEST(AggregateTest, MicroDiffersFromMacro) {
  const auto passage = Tokenize("a1 a2 a3 a4 a5 a6");
  const auto big = ComputeOverlap({0, 1, 2, 3}, {0, 1, 2, 3}, passage, {},
                                  AnswerSpanMode::kInclude, {});
  const auto small = ComputeOverlap({4}, {5}, passage, {},
                                    AnswerSpanMode::kInclude, {});
  const auto m = AggregateOverlap({big, small}, AnswerSpanMode::kInclude);
  EXPECT_DOUBLE_EQ(m.precision, 4.0 / 5.0);
  EXPECT_DOUBLE_EQ(m.macro_precision, 0.5);
}

// Micro-averaged metrics must equal an independent pooled-count recount
// exactly, for both answer-span modes.
TEST(AggregateTest, MatchesBruteForceOracle) {
  Rng rng(1234);
  const StopwordSet stop = DefaultStopwords();
  const std::vector<std::string> stop_list = DefaultStopwordList();
  for (int batch = 0; batch < 100; ++batch) {
    std::vector<testing::OverlapCase> cases;
    for (int k = 0; k < 10; ++k) cases.push_back(testing::RandomOverlapCase(rng));
    for (auto mode : {AnswerSpanMode::kInclude, AnswerSpanMode::kExclude}) {
      std::vector<OverlapCounts> counts;
      for (const auto& c : cases) {
        counts.push_back(
            ComputeOverlap(c.model, c.human, c.passage, stop, mode, {c.answer}));
      }
      const auto oracle = testing::BruteForcePooled(
          cases, stop_list, mode == AnswerSpanMode::kExclude);
      if (oracle.evaluated == 0) {
        EXPECT_THROW(AggregateOverlap(counts, mode), ContractError);
        continue;
      }
      const auto m = AggregateOverlap(counts, mode);
      EXPECT_EQ(m.evaluated, oracle.evaluated);
      EXPECT_EQ(m.pooled_intersection, oracle.intersection);
      const double p = static_cast<double>(oracle.intersection) / oracle.model;
      const double r = static_cast<double>(oracle.intersection) / oracle.human;
      EXPECT_EQ(m.precision, p);
      EXPECT_EQ(m.recall, r);
      EXPECT_EQ(m.f1, p + r > 0 ? 2 * p * r / (p + r) : 0.0);
    }
  }
}

TEST(StopwordsTest, ShippedFileMatchesBuiltInList) {
  const StopwordSet file = LoadStopwords(std::string(RCQA_DATA_DIR) + "/stopwords_en.txt");
  const StopwordSet builtin = DefaultStopwords();
  EXPECT_EQ(file, builtin);
  EXPECT_EQ(builtin.size(), DefaultStopwordList().size());
  EXPECT_TRUE(builtin.contains("the"));
  EXPECT_FALSE(builtin.contains("curie"));
}

TEST(StopwordsTest, CustomFileIgnoresCommentsAndCase) {
  const std::string path = ::testing::TempDir() + "stop.txt";
  std::ofstream(path) << "# comment\nThe\n\n  of \n";
  EXPECT_EQ(LoadStopwords(path), (StopwordSet{"the", "of"}));
}

TEST(ReportTest, HighlightsRunsOfMarkedTokens) {
  const auto passage = Tokenize("Maria Curie was the first female recipient.");
  EXPECT_EQ(RenderHighlighted(passage, {0, 1, 5}),
            "[Maria Curie] was the first [female] recipient.");
  EXPECT_EQ(RenderHighlighted(passage, {6, 7}),
            "Maria Curie was the first female [recipient.]");
  EXPECT_EQ(RenderHighlighted(passage, {}), passage.raw);
}

TEST(ReportTest, TablesShowRowsAndPercentages) {
  FlipTableRow row{"cosine-lite", ComputeFlipFractionStats(std::vector<double>{0.1, 0.3})};
  const std::string flips = FormatFlipTable({row});
  EXPECT_NE(flips.find("cosine-lite"), std::string::npos);
  EXPECT_NE(flips.find("0.200"), std::string::npos);
  EXPECT_NE(flips.find("0.010"), std::string::npos);

  OverlapMetrics m;
  m.precision = 0.228;
  m.recall = 0.051;
  m.f1 = HarmonicF1(m.precision, m.recall);
  const std::string overlap = FormatOverlapTable({{"model", std::nullopt, m}});
  EXPECT_NE(overlap.find("22.8"), std::string::npos);
  EXPECT_NE(overlap.find("5.1"), std::string::npos);
  EXPECT_NE(overlap.find("8.3"), std::string::npos);
}

}  // namespace
}  // namespace rcqa::evaluation
