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

// Integrated Gradients over passage-word embeddings.
//
// For input x, baseline x~ and scalar model f, word i receives
//   IG_i = (x_i - x~_i) * (1/m) sum_k grad_{x_i} f(x~ + a_k (x - x~)),
// with midpoint nodes a_k = (k - 0.5) / m by default. Word importance is the
// euclidean norm of IG_i, and the normalized importances form the ranking
// distribution used for rationale extraction.

#ifndef RCQA_ATTRIBUTION_INTEGRATED_GRADIENTS_H_
#define RCQA_ATTRIBUTION_INTEGRATED_GRADIENTS_H_

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "rcqa/diffcore/tensor.h"
#include "rcqa/qamodel/model.h"

namespace rcqa::attribution {

// Returns f(x) and, when the pointer is non-null, writes df/dx.
using GradientFunction =
    std::function<double(const diffcore::Tensor& x, diffcore::Tensor* grad)>;

enum class PathRule { kMidpoint, kLeftEndpoint, kRightEndpoint };

// kStandard multiplies the averaged gradient by (x - x~). kUnscaled returns
// the bare averaged gradient; it has no completeness guarantee and exists
// only for comparison.
enum class Scaling { kStandard, kUnscaled };

struct IgOptions {
  std::size_t steps = 50;
  PathRule rule = PathRule::kMidpoint;
  Scaling scaling = Scaling::kStandard;
};

PathRule ParsePathRule(const std::string& name);
std::string PathRuleName(PathRule rule);

// Interpolation coefficient of node k (0-based) out of `steps`.
double PathNode(PathRule rule, std::size_t k, std::size_t steps);

// Per-word IG vectors with the same shape as `input` (d x L). Throws
// ShapeError when baseline and input shapes differ, ContractError when
// steps == 0 and NumericalError naming alpha when a gradient is not finite.
diffcore::Tensor IntegratedGradients(const GradientFunction& f,
                                     const diffcore::Tensor& input,
                                     const diffcore::Tensor& baseline,
                                     const IgOptions& options = {});

struct ImportanceScores {
  std::vector<double> importance;    // ||IG_i||_2
  std::vector<double> distribution;  // importance / sum(importance)
  // All importances were zero; the distribution fell back to uniform.
  bool degenerate = false;
};

ImportanceScores ComputeImportance(const diffcore::Tensor& ig_vectors);

// sum(IG) - (f(x) - f(x~)).
double CompletenessGap(const diffcore::Tensor& ig_vectors, double f_input,
                       double f_baseline);

struct AttributionResult {
  diffcore::Tensor ig_vectors;
  std::vector<double> importance;
  std::vector<double> distribution;
  bool degenerate = false;
  std::size_t steps = 0;
  double f_input = 0.0;
  double f_baseline = 0.0;
  double completeness_gap = 0.0;

  // |gap| / |f(x) - f(x~)|, or |gap| when the denominator is zero.
  double RelativeCompletenessGap() const;
};

AttributionResult Attribute(const GradientFunction& f,
                            const diffcore::Tensor& input,
                            const diffcore::Tensor& baseline,
                            const IgOptions& options = {});

// Attribution of the model's target scalar at `span` to the passage words,
// against the all-zero baseline, with the question fixed.
AttributionResult AttributeSpan(const qamodel::ModelParameters& params,
                                const diffcore::Tensor& passage_embeds,
                                const diffcore::Tensor& question_embeds,
                                dataio::TokenSpan span,
                                qamodel::TargetKind target,
                                const IgOptions& options = {});

}  // namespace rcqa::attribution

#endif  // RCQA_ATTRIBUTION_INTEGRATED_GRADIENTS_H_
