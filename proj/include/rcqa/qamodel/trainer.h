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

#ifndef RCQA_QAMODEL_TRAINER_H_
#define RCQA_QAMODEL_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rcqa/dataio/dataset.h"
#include "rcqa/qamodel/model.h"

namespace rcqa::qamodel {

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t epochs = 30;
  std::size_t batch_size = 4;
  std::uint64_t seed = 1;
};

struct TrainResult {
  ModelParameters params;
  // Mean gold-span NLL over the training set: entry 0 before any update,
  // entry k after epoch k.
  std::vector<double> loss_trace;
};

// Gold-span NLL of one example and its gradients, accumulated into
// `array_grads` (same keys as params.arrays) and `embedding_grad` (same
// shape as the embedding rows). Returns the loss.
double AccumulateExampleGradient(const ModelParameters& params,
                                 const dataio::QAExample& example,
                                 std::map<std::string, diffcore::Tensor>& array_grads,
                                 diffcore::Tensor& embedding_grad);

// Loss without gradients.
double ExampleLoss(const ModelParameters& params,
                   const dataio::QAExample& example);

// Mini-batch gradient descent on the mean gold-span NLL, starting from
// `initial`. Example order is reshuffled every epoch from `config.seed`.
// Throws NumericalError naming the example when a loss is not finite.
TrainResult Train(const std::vector<dataio::QAExample>& examples,
                  ModelParameters initial, const TrainConfig& config);

// Fraction of examples whose decoded span equals the gold span exactly.
double ExactSpanAccuracy(const ModelParameters& params,
                         const std::vector<dataio::QAExample>& examples,
                         const PredictOptions& options = {});

}  // namespace rcqa::qamodel

#endif  // RCQA_QAMODEL_TRAINER_H_
