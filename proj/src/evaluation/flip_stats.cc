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

#include "rcqa/evaluation/flip_stats.h"

#include <algorithm>
#include <cmath>

#include "rcqa/errors.h"

namespace rcqa::evaluation {

FlipFractionStats ComputeFlipFractionStats(
    const std::vector<double>& fractions) {
  if (fractions.empty()) {
    throw ContractError("flip-fraction statistics need at least one record");
  }
  FlipFractionStats stats;
  stats.count = fractions.size();
  stats.histogram.assign(kHistogramBins, 0);
  double sum = 0.0;
  for (double f : fractions) {
    sum += f;
    // The small offset keeps exact bin edges such as 0.15 out of the bin
    // below after the floating-point division.
    const auto bin = static_cast<std::size_t>(
        std::max(0.0, std::floor(f / kHistogramBinWidth + 1e-9)));
    ++stats.histogram[std::min(bin, kHistogramBins - 1)];
  }
  const double n = static_cast<double>(fractions.size());
  stats.mean = sum / n;
  double sq = 0.0;
  for (double f : fractions) sq += (f - stats.mean) * (f - stats.mean);
  stats.variance = sq / n;
  return stats;
}

FlipFractionStats ComputeFlipFractionStats(
    const std::vector<rationale::RationaleRecord>& records) {
  std::vector<double> fractions;
  fractions.reserve(records.size());
  std::size_t flipped = 0;
  for (const auto& r : records) {
    fractions.push_back(r.flip_fraction);
    if (r.flipped) ++flipped;
  }
  FlipFractionStats stats = ComputeFlipFractionStats(fractions);
  stats.flipped = flipped;
  return stats;
}

}  // namespace rcqa::evaluation
