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

// Desk-scale span-prediction QA models.
//
// Both kinds score every passage position from per-word features
//   [x_i, s_i x_i, s_{i-1} x_{i-1}, s_{i-2} x_{i-2}]
// where x_i is the passage word embedding and s_i its similarity to the
// mean-pooled question. Two linear heads map features to start and end
// logits, normalized with a softmax over positions.
//
//   cosine-lite: s_i = cos(x_i, q); heads read the features directly.
//   dense-lite:  s_i = x_i B q^T / (|x_i| |q|) (normalized bilinear, B
//                initialized near the identity); heads read tanh(F W).

#ifndef RCQA_QAMODEL_MODEL_H_
#define RCQA_QAMODEL_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rcqa/dataio/dataset.h"
#include "rcqa/diffcore/graph.h"
#include "rcqa/diffcore/tensor.h"
#include "rcqa/qamodel/embedding.h"

namespace rcqa::qamodel {

enum class ModelKind { kCosineLite, kDenseLite };

std::string ModelKindName(ModelKind kind);
// Accepts "cosine-lite" / "dense-lite"; throws ConfigError otherwise.
ModelKind ParseModelKind(const std::string& name);

// The scalar that attribution differentiates.
enum class TargetKind {
  kLogProbability,  // log p_start(w_s) + log p_end(w_e)
  kLogitSum,        // start_logit(w_s) + end_logit(w_e)
};

std::string TargetKindName(TargetKind kind);
TargetKind ParseTargetKind(const std::string& name);

struct ModelParameters {
  ModelKind kind = ModelKind::kCosineLite;
  std::size_t dim = 0;
  std::size_t hidden = 0;  // dense-lite only
  std::uint64_t seed = 0;
  EmbeddingTable embeddings;
  std::map<std::string, diffcore::Tensor> arrays;

  friend bool operator==(const ModelParameters&,
                         const ModelParameters&) = default;
};

// Embeddings uniform in [-0.5/L, 0.5/L]; head and interaction weights uniform
// in [-1/sqrt(fan_in), 1/sqrt(fan_in)], plus the identity for the bilinear
// interaction. Deterministic in `seed`.
ModelParameters InitParameters(ModelKind kind, std::vector<std::string> vocabulary,
                               std::size_t dim, std::uint64_t seed,
                               std::size_t hidden = 32);

// Array names and shapes required for (kind, dim, hidden).
std::map<std::string, diffcore::Shape> ParameterShapes(ModelKind kind,
                                                       std::size_t dim,
                                                       std::size_t hidden);

// Parameter arrays placed on a graph.
struct ParameterVars {
  std::map<std::string, diffcore::Var> arrays;
  const diffcore::Var& at(const std::string& name) const {
    return arrays.at(name);
  }
};

// Leaves when `differentiable`, constants otherwise.
ParameterVars BindParameters(diffcore::Graph& graph,
                             const ModelParameters& params,
                             bool differentiable);

struct ForwardPass {
  diffcore::Var start_logits;     // d x 1
  diffcore::Var end_logits;       // d x 1
  diffcore::Var start_log_probs;  // d x 1
  diffcore::Var end_log_probs;    // d x 1
};

// `passage` is d x L, `question` is q x L.
ForwardPass Forward(const ModelParameters& params, const ParameterVars& vars,
                    diffcore::Var passage, diffcore::Var question);

// log p(w_s) + log p(w_e) or the logit sum at a fixed span, as a graph node.
diffcore::Var TargetScalar(const ForwardPass& pass, dataio::TokenSpan span,
                           TargetKind kind);

struct PredictOptions {
  std::size_t max_span_length = 8;
  TargetKind target = TargetKind::kLogProbability;
};

struct SpanPrediction {
  std::vector<double> start_probs;
  std::vector<double> end_probs;
  std::vector<double> start_logits;
  std::vector<double> end_logits;
  dataio::TokenSpan span;
  double target = 0.0;
};

// argmax over s <= e < s + max_length of p_start[s] * p_end[e]; ties go to
// the smaller s, then the smaller e.
dataio::TokenSpan DecodeSpan(const std::vector<double>& start_probs,
                             const std::vector<double>& end_probs,
                             std::size_t max_length);

SpanPrediction PredictSpan(const diffcore::Tensor& passage_embeds,
                           const diffcore::Tensor& question_embeds,
                           const ModelParameters& params,
                           const PredictOptions& options = {});

// f(passage) and df/dpassage of the target scalar at a fixed span, with the
// question held at `question_embeds`. Writes the gradient when `grad` is
// non-null. `params` must outlive the returned function.
using TargetFunction =
    std::function<double(const diffcore::Tensor& passage, diffcore::Tensor* grad)>;

TargetFunction MakeTargetFunction(const ModelParameters& params,
                                  diffcore::Tensor question_embeds,
                                  dataio::TokenSpan span, TargetKind kind);

// Negative log-likelihood of the gold span, -(log p_s(i) + log p_e(j)).
diffcore::Var SpanLoss(const ForwardPass& pass, dataio::TokenSpan gold);

}  // namespace rcqa::qamodel

#endif  // RCQA_QAMODEL_MODEL_H_
