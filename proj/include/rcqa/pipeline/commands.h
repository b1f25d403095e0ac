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

// The rcqa subcommands. Each reads its inputs from a resolved RunConfig,
// writes its artifacts plus a manifest_<command>.json into config.out and
// returns normally; failures surface as exceptions (see ExitCodeFor).

#ifndef RCQA_PIPELINE_COMMANDS_H_
#define RCQA_PIPELINE_COMMANDS_H_

#include <cstddef>
#include <cstdint>
#include <exception>
#include <string>
#include <vector>

#include "rcqa/attribution/integrated_gradients.h"
#include "rcqa/dataio/dataset.h"
#include "rcqa/pipeline/run_config.h"
#include "rcqa/qamodel/model.h"
#include "rcqa/rationale/extraction.h"

namespace rcqa::pipeline {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitInput = 3,
  kExitNumerical = 4,
};

// Usage errors (bad flags or config) -> 2, unreadable or inconsistent inputs
// -> 3, NaN/Inf or domain failures -> 4, anything else -> 1.
int ExitCodeFor(std::exception_ptr error);

struct ExtractionOptions {
  attribution::IgOptions ig;
  qamodel::PredictOptions predict;
  rationale::FlipCriterion flip = rationale::FlipCriterion::kPredictionChange;
  std::string ranking = "ig";  // ig | random | ig-refresh
  std::size_t controls = 0;    // random-ranking replicates per example
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
};

struct ExampleExtraction {
  attribution::AttributionResult attribution;
  rationale::RationaleRecord rationale;
  std::vector<rationale::RationaleRecord> controls;
};

ExtractionOptions ExtractionOptionsFrom(const RunConfig& config);

// Seed of random ranking `replicate` for the example at `index`; replicate 0
// is the main run under --ranking random, controls use 1..n.
std::uint64_t ExampleSeed(std::uint64_t seed, std::size_t index,
                          std::size_t replicate);

// Attribution and rationale for every example, in input order. Examples are
// spread over options.jobs threads; results do not depend on the job count.
std::vector<ExampleExtraction> ExtractExamples(
    const qamodel::ModelParameters& params,
    const std::vector<dataio::QAExample>& examples,
    const ExtractionOptions& options);

void RunGenerate(const RunConfig& config);
void RunTrain(const RunConfig& config);
void RunExtract(const RunConfig& config);
void RunEvaluate(const RunConfig& config);
void RunReport(const RunConfig& config);
// generate -> train -> extract (test split) -> evaluate -> report, all in
// config.out.
void RunPipeline(const RunConfig& config);

// Runs config.command. Throws ConfigError for an unknown command.
void Dispatch(const RunConfig& config);

}  // namespace rcqa::pipeline

#endif  // RCQA_PIPELINE_COMMANDS_H_
