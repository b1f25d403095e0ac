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

#ifndef RCQA_EVALUATION_FLIP_STATS_H_
#define RCQA_EVALUATION_FLIP_STATS_H_

#include <cstddef>
#include <vector>

#include "rcqa/rationale/extraction.h"

namespace rcqa::evaluation {

inline constexpr double kHistogramBinWidth = 0.05;
inline constexpr std::size_t kHistogramBins = 20;

struct FlipFractionStats {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // population variance (divides by n)
  std::size_t flipped = 0;
  // Bin b counts fractions in [0.05 b, 0.05 (b + 1)); 1.0 lands in the last.
  std::vector<std::size_t> histogram;
};

// Throws ContractError on an empty input.
FlipFractionStats ComputeFlipFractionStats(const std::vector<double>& fractions);
FlipFractionStats ComputeFlipFractionStats(
    const std::vector<rationale::RationaleRecord>& records);

}  // namespace rcqa::evaluation

#endif  // RCQA_EVALUATION_FLIP_STATS_H_
