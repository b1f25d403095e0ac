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

#include "rcqa/attribution/integrated_gradients.h"

#include <cmath>
#include <sstream>

#include "rcqa/errors.h"

namespace rcqa::attribution {

using diffcore::Tensor;

PathRule ParsePathRule(const std::string& name) {
  if (name == "midpoint") return PathRule::kMidpoint;
  if (name == "left") return PathRule::kLeftEndpoint;
  if (name == "right") return PathRule::kRightEndpoint;
  throw ConfigError("unknown IG path rule '" + name +
                    "' (expected midpoint, left or right)");
}

std::string PathRuleName(PathRule rule) {
  switch (rule) {
    case PathRule::kMidpoint:
      return "midpoint";
    case PathRule::kLeftEndpoint:
      return "left";
    case PathRule::kRightEndpoint:
      return "right";
  }
  return "midpoint";
}

double PathNode(PathRule rule, std::size_t k, std::size_t steps) {
  const double m = static_cast<double>(steps);
  switch (rule) {
    case PathRule::kMidpoint:
      return (static_cast<double>(k) + 0.5) / m;
    case PathRule::kLeftEndpoint:
      return static_cast<double>(k) / m;
    case PathRule::kRightEndpoint:
      return static_cast<double>(k + 1) / m;
  }
  return 0.0;
}

Tensor IntegratedGradients(const GradientFunction& f, const Tensor& input,
                           const Tensor& baseline, const IgOptions& options) {
  if (input.shape() != baseline.shape()) {
    throw ShapeError("IG baseline " + diffcore::ShapeToString(baseline.shape()) +
                     " does not match input " +
                     diffcore::ShapeToString(input.shape()));
  }
  if (options.steps == 0) throw ContractError("IG needs at least one step");

  Tensor delta = input;
  delta.AddScaled(baseline, -1.0);
  Tensor gradient_sum(input.shape());
  Tensor point(input.shape());
  Tensor grad;
  for (std::size_t k = 0; k < options.steps; ++k) {
    const double alpha = PathNode(options.rule, k, options.steps);
    for (std::size_t i = 0; i < point.size(); ++i) {
      point[i] = baseline[i] + alpha * delta[i];
    }
    try {
      f(point, &grad);
    } catch (const NumericalError& e) {
      std::ostringstream msg;
      msg << "IG path evaluation failed at alpha = " << alpha << ": "
          << e.what();
      throw NumericalError(msg.str());
    }
    if (grad.shape() != input.shape() || !grad.AllFinite()) {
      std::ostringstream msg;
      msg << "IG gradient at alpha = " << alpha
          << (grad.shape() != input.shape() ? " has the wrong shape"
                                            : " is not finite");
      throw NumericalError(msg.str());
    }
    gradient_sum.AddScaled(grad);
  }

  const double inv_steps = 1.0 / static_cast<double>(options.steps);
  Tensor ig(input.shape());
  for (std::size_t i = 0; i < ig.size(); ++i) {
    const double mean_grad = gradient_sum[i] * inv_steps;
    ig[i] = options.scaling == Scaling::kStandard ? delta[i] * mean_grad
                                                  : mean_grad;
  }
  return ig;
}

ImportanceScores ComputeImportance(const Tensor& ig_vectors) {
  const std::size_t words = ig_vectors.rows();
  if (words == 0 || ig_vectors.size() == 0) {
    throw ContractError("importance scores need at least one word");
  }
  ImportanceScores out;
  out.importance.resize(words);
  double total = 0.0;
  for (std::size_t i = 0; i < words; ++i) {
    double sq = 0.0;
    for (double v : ig_vectors.row(i)) sq += v * v;
    out.importance[i] = std::sqrt(sq);
    total += out.importance[i];
  }
  out.distribution.resize(words);
  if (total > 0.0) {
    for (std::size_t i = 0; i < words; ++i) {
      out.distribution[i] = out.importance[i] / total;
    }
  } else {
    out.degenerate = true;
    for (double& p : out.distribution) p = 1.0 / static_cast<double>(words);
  }
  return out;
}

double CompletenessGap(const Tensor& ig_vectors, double f_input,
                       double f_baseline) {
  double total = 0.0;
  for (double v : ig_vectors.data()) total += v;
  return total - (f_input - f_baseline);
}

double AttributionResult::RelativeCompletenessGap() const {
  const double change = std::abs(f_input - f_baseline);
  const double gap = std::abs(completeness_gap);
  return change > 0.0 ? gap / change : gap;
}

AttributionResult Attribute(const GradientFunction& f, const Tensor& input,
                            const Tensor& baseline, const IgOptions& options) {
  AttributionResult out;
  out.ig_vectors = IntegratedGradients(f, input, baseline, options);
  ImportanceScores scores = ComputeImportance(out.ig_vectors);
  out.importance = std::move(scores.importance);
  out.distribution = std::move(scores.distribution);
  out.degenerate = scores.degenerate;
  out.steps = options.steps;
  out.f_input = f(input, nullptr);
  out.f_baseline = f(baseline, nullptr);
  out.completeness_gap =
      CompletenessGap(out.ig_vectors, out.f_input, out.f_baseline);
  return out;
}

AttributionResult AttributeSpan(const qamodel::ModelParameters& params,
                                const Tensor& passage_embeds,
                                const Tensor& question_embeds,
                                dataio::TokenSpan span,
                                qamodel::TargetKind target,
                                const IgOptions& options) {
  const qamodel::TargetFunction f =
      qamodel::MakeTargetFunction(params, question_embeds, span, target);
  return Attribute(f, passage_embeds, Tensor(passage_embeds.shape(), 0.0),
                   options);
}

}  // namespace rcqa::attribution
