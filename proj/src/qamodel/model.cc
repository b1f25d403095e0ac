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

#include "rcqa/qamodel/model.h"

#include <cmath>
#include <utility>

#include "rcqa/diffcore/ops.h"
#include "rcqa/errors.h"
#include "rcqa/random.h"

namespace rcqa::qamodel {

using diffcore::Graph;
using diffcore::Shape;
using diffcore::Tensor;
using diffcore::Var;
namespace ops = diffcore;

namespace {

constexpr std::size_t kContextWidth = 2;  // preceding words in the features
constexpr double kNormEps = 1e-12;

std::vector<double> ToVector(const Tensor& t) {
  return std::vector<double>(t.data().begin(), t.data().end());
}

}  // namespace

std::string ModelKindName(ModelKind kind) {
  return kind == ModelKind::kCosineLite ? "cosine-lite" : "dense-lite";
}

ModelKind ParseModelKind(const std::string& name) {
  if (name == "cosine-lite") return ModelKind::kCosineLite;
  if (name == "dense-lite") return ModelKind::kDenseLite;
  throw ConfigError("unknown model kind '" + name +
                    "' (expected cosine-lite or dense-lite)");
}

std::string TargetKindName(TargetKind kind) {
  return kind == TargetKind::kLogProbability ? "log-prob" : "logit-sum";
}

TargetKind ParseTargetKind(const std::string& name) {
  if (name == "log-prob") return TargetKind::kLogProbability;
  if (name == "logit-sum") return TargetKind::kLogitSum;
  throw ConfigError("unknown target '" + name +
                    "' (expected log-prob or logit-sum)");
}

std::map<std::string, Shape> ParameterShapes(ModelKind kind, std::size_t dim,
                                             std::size_t hidden) {
  const std::size_t features = (2 + kContextWidth) * dim;
  if (kind == ModelKind::kCosineLite) {
    return {{"start_head", {features, 1}}, {"end_head", {features, 1}}};
  }
  return {{"bilinear", {dim, dim}},
          {"hidden", {features, hidden}},
          {"start_head", {hidden, 1}},
          {"end_head", {hidden, 1}}};
}

ModelParameters InitParameters(ModelKind kind,
                               std::vector<std::string> vocabulary,
                               std::size_t dim, std::uint64_t seed,
                               std::size_t hidden) {
  if (dim == 0) throw ConfigError("model dimension must be positive");
  if (kind == ModelKind::kDenseLite && hidden == 0) {
    throw ConfigError("dense-lite hidden size must be positive");
  }
  ModelParameters params;
  params.kind = kind;
  params.dim = dim;
  params.hidden = kind == ModelKind::kDenseLite ? hidden : 0;
  params.seed = seed;
  params.embeddings = InitEmbeddingTable(std::move(vocabulary), dim, seed);
  // Separate stream so the embedding draw does not depend on the model kind.
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (const auto& [name, shape] : ParameterShapes(kind, dim, params.hidden)) {
    Tensor t(shape);
    const double bound = 1.0 / std::sqrt(static_cast<double>(shape[0]));
    for (double& v : t.data()) v = rng.Uniform(-bound, bound);
    // The interaction starts near the identity, i.e. near plain cosine.
    if (name == "bilinear") {
      for (std::size_t i = 0; i < dim; ++i) t(i, i) += 1.0;
    }
    params.arrays.emplace(name, std::move(t));
  }
  return params;
}

ParameterVars BindParameters(Graph& graph, const ModelParameters& params,
                             bool differentiable) {
  ParameterVars vars;
  for (const auto& [name, value] : params.arrays) {
    vars.arrays.emplace(name, differentiable ? graph.Leaf(value)
                                             : graph.Constant(value));
  }
  return vars;
}

ForwardPass Forward(const ModelParameters& params, const ParameterVars& vars,
                    Var passage, Var question) {
  if (passage.shape().size() != 2 || passage.shape()[1] != params.dim ||
      question.shape().size() != 2 || question.shape()[1] != params.dim) {
    throw ShapeError("model expects d x " + std::to_string(params.dim) +
                     " passage and q x " + std::to_string(params.dim) +
                     " question, got " +
                     diffcore::ShapeToString(passage.shape()) + " and " +
                     diffcore::ShapeToString(question.shape()));
  }
  if (passage.shape()[0] == 0) throw ContractError("empty passage");

  const Var question_mean = ops::MeanPool(question);
  Var similarity;
  if (params.kind == ModelKind::kCosineLite) {
    similarity = ops::CosineSimilarity(passage, question_mean);
  } else {
    // x_i B q^T / (|x_i| |q|), with eps inside both norms as in the cosine.
    const Var projected =
        ops::MatMul(vars.at("bilinear"), ops::Transpose(question_mean));
    const Var eps = passage.graph->Constant(Tensor::Scalar(kNormEps));
    const Var passage_norm =
        ops::Sqrt(ops::Add(ops::RowSum(ops::Mul(passage, passage)), eps));
    const Var question_norm =
        ops::Sqrt(ops::Add(ops::Sum(ops::Mul(question_mean, question_mean)), eps));
    similarity = ops::Div(ops::MatMul(passage, projected),
                          ops::Mul(passage_norm, question_norm));
  }
  const Var weighted = ops::Mul(passage, similarity);
  std::vector<Var> parts{passage, weighted};
  for (std::size_t k = 1; k <= kContextWidth; ++k) {
    parts.push_back(ops::ShiftRows(weighted, static_cast<int>(k)));
  }
  Var features = ops::Concatenate(parts, /*axis=*/1);
  if (params.kind == ModelKind::kDenseLite) {
    features = ops::Tanh(ops::MatMul(features, vars.at("hidden")));
  }

  ForwardPass pass;
  pass.start_logits = ops::MatMul(features, vars.at("start_head"));
  pass.end_logits = ops::MatMul(features, vars.at("end_head"));
  pass.start_log_probs = ops::LogSoftmax(pass.start_logits);
  pass.end_log_probs = ops::LogSoftmax(pass.end_logits);
  return pass;
}

Var TargetScalar(const ForwardPass& pass, dataio::TokenSpan span,
                 TargetKind kind) {
  if (kind == TargetKind::kLogitSum) {
    return ops::Add(ops::ScalarPick(pass.start_logits, span.start),
                    ops::ScalarPick(pass.end_logits, span.end));
  }
  return ops::Add(ops::ScalarPick(pass.start_log_probs, span.start),
                  ops::ScalarPick(pass.end_log_probs, span.end));
}

Var SpanLoss(const ForwardPass& pass, dataio::TokenSpan gold) {
  return ops::Scale(TargetScalar(pass, gold, TargetKind::kLogProbability),
                    -1.0);
}

dataio::TokenSpan DecodeSpan(const std::vector<double>& start_probs,
                             const std::vector<double>& end_probs,
                             std::size_t max_length) {
  const std::size_t d = start_probs.size();
  if (d == 0 || end_probs.size() != d) {
    throw ContractError("DecodeSpan needs two equal-length nonempty vectors");
  }
  if (max_length == 0) throw ConfigError("max span length must be positive");
  dataio::TokenSpan best{0, 0};
  double best_score = -1.0;
  for (std::size_t s = 0; s < d; ++s) {
    const std::size_t last = std::min(d, s + max_length);
    for (std::size_t e = s; e < last; ++e) {
      const double score = start_probs[s] * end_probs[e];
      if (score > best_score) {
        best_score = score;
        best = {s, e};
      }
    }
  }
  return best;
}

SpanPrediction PredictSpan(const Tensor& passage_embeds,
                           const Tensor& question_embeds,
                           const ModelParameters& params,
                           const PredictOptions& options) {
  Graph graph;
  const ParameterVars vars = BindParameters(graph, params, false);
  const ForwardPass pass =
      Forward(params, vars, graph.Constant(passage_embeds),
              graph.Constant(question_embeds));
  SpanPrediction out;
  out.start_logits = ToVector(pass.start_logits.value());
  out.end_logits = ToVector(pass.end_logits.value());
  out.start_probs = ToVector(pass.start_log_probs.value());
  out.end_probs = ToVector(pass.end_log_probs.value());
  for (double& v : out.start_probs) v = std::exp(v);
  for (double& v : out.end_probs) v = std::exp(v);
  out.span = DecodeSpan(out.start_probs, out.end_probs, options.max_span_length);
  out.target = TargetScalar(pass, out.span, options.target).value().item();
  return out;
}

TargetFunction MakeTargetFunction(const ModelParameters& params,
                                  Tensor question_embeds,
                                  dataio::TokenSpan span, TargetKind kind) {
  return [&params, question = std::move(question_embeds), span, kind](
             const Tensor& passage, Tensor* grad) {
    Graph graph;
    const ParameterVars vars = BindParameters(graph, params, false);
    const Var input = graph.Leaf(passage);
    const ForwardPass pass =
        Forward(params, vars, input, graph.Constant(question));
    const Var target = TargetScalar(pass, span, kind);
    if (grad != nullptr) *grad = graph.Backward(target)[input];
    return target.value().item();
  };
}

}  // namespace rcqa::qamodel
