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

#include "rcqa/qamodel/trainer.h"

#include <cmath>
#include <numeric>
#include <utility>

#include "rcqa/diffcore/graph.h"
#include "rcqa/errors.h"
#include "rcqa/random.h"

namespace rcqa::qamodel {

using diffcore::Graph;
using diffcore::Tensor;
using diffcore::Var;

namespace {

void ScatterRows(const Tensor& grad, const std::vector<std::size_t>& rows,
                 Tensor& table_grad) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto dst = table_grad.row(rows[i]);
    const auto src = grad.row(i);
    for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += src[c];
  }
}

double MeanLoss(const ModelParameters& params,
                const std::vector<dataio::QAExample>& examples) {
  double total = 0.0;
  for (const auto& ex : examples) total += ExampleLoss(params, ex);
  return total / static_cast<double>(examples.size());
}

}  // namespace

double AccumulateExampleGradient(const ModelParameters& params,
                                 const dataio::QAExample& example,
                                 std::map<std::string, Tensor>& array_grads,
                                 Tensor& embedding_grad) {
  Graph graph;
  const ParameterVars vars = BindParameters(graph, params, true);
  const Var passage = graph.Leaf(Embed(example.passage, params.embeddings));
  const Var question = graph.Leaf(Embed(example.question, params.embeddings));
  Var loss;
  try {
    loss = SpanLoss(Forward(params, vars, passage, question), example.answer);
  } catch (const NumericalError& e) {
    throw NumericalError("example '" + example.id + "': " + e.what());
  }
  const double value = loss.value().item();
  if (!std::isfinite(value)) {
    throw NumericalError("non-finite loss on example '" + example.id + "'");
  }
  const diffcore::Gradients grads = graph.Backward(loss);
  for (const auto& [name, var] : vars.arrays) {
    array_grads.at(name).AddScaled(grads[var]);
  }
  ScatterRows(grads[passage], params.embeddings.Indices(example.passage),
              embedding_grad);
  ScatterRows(grads[question], params.embeddings.Indices(example.question),
              embedding_grad);
  return value;
}

double ExampleLoss(const ModelParameters& params,
                   const dataio::QAExample& example) {
  Graph graph;
  const ParameterVars vars = BindParameters(graph, params, false);
  try {
    const Var loss = SpanLoss(
        Forward(params, vars,
                graph.Constant(Embed(example.passage, params.embeddings)),
                graph.Constant(Embed(example.question, params.embeddings))),
        example.answer);
    return loss.value().item();
  } catch (const NumericalError& e) {
    throw NumericalError("example '" + example.id + "': " + e.what());
  }
}

TrainResult Train(const std::vector<dataio::QAExample>& examples,
                  ModelParameters initial, const TrainConfig& config) {
  if (examples.empty()) throw ContractError("training set is empty");
  if (config.batch_size == 0) throw ConfigError("batch size must be positive");
  if (!(config.learning_rate > 0.0)) {
    throw ConfigError("learning rate must be positive");
  }
  for (const auto& ex : examples) {
    if (ex.answer.start > ex.answer.end || ex.answer.end >= ex.passage.size()) {
      throw ContractError("example '" + ex.id + "' has an invalid gold span");
    }
  }

  TrainResult result{std::move(initial), {}};
  ModelParameters& params = result.params;
  result.loss_trace.push_back(MeanLoss(params, examples));

  std::map<std::string, Tensor> array_grads;
  for (const auto& [name, value] : params.arrays) {
    array_grads.emplace(name, Tensor(value.shape()));
  }
  Tensor embedding_grad(params.embeddings.rows().shape());

  Rng rng(config.seed);
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.Shuffle(order);
    for (std::size_t begin = 0; begin < order.size();
         begin += config.batch_size) {
      const std::size_t end = std::min(order.size(), begin + config.batch_size);
      for (auto& [name, g] : array_grads) g.Fill(0.0);
      embedding_grad.Fill(0.0);
      for (std::size_t k = begin; k < end; ++k) {
        AccumulateExampleGradient(params, examples[order[k]], array_grads,
                                  embedding_grad);
      }
      const double step =
          config.learning_rate / static_cast<double>(end - begin);
      for (auto& [name, value] : params.arrays) {
        value.AddScaled(array_grads.at(name), -step);
      }
      params.embeddings.mutable_rows().AddScaled(embedding_grad, -step);
    }
    const double loss = MeanLoss(params, examples);
    if (!std::isfinite(loss)) {
      throw NumericalError("non-finite mean loss after epoch " +
                           std::to_string(epoch + 1));
    }
    result.loss_trace.push_back(loss);
  }
  return result;
}

double ExactSpanAccuracy(const ModelParameters& params,
                         const std::vector<dataio::QAExample>& examples,
                         const PredictOptions& options) {
  if (examples.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& ex : examples) {
    const SpanPrediction p =
        PredictSpan(Embed(ex.passage, params.embeddings),
                    Embed(ex.question, params.embeddings), params, options);
    if (p.span == ex.answer) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

}  // namespace rcqa::qamodel
