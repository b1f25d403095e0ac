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

// Resolved settings for one CLI run.
//
// Precedence: command-line flags > JSON config file (--config) > defaults.
// Config-file keys use the flag names without the leading dashes; unknown
// keys are rejected. The resolved values are what the run manifest records.

#ifndef RCQA_PIPELINE_RUN_CONFIG_H_
#define RCQA_PIPELINE_RUN_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace rcqa::pipeline {

struct RunConfig {
  std::string command;

  // Files.
  std::string dataset;
  std::string annotations;
  std::string checkpoint;
  std::string rationales;
  std::string stopwords;  // empty: built-in list
  std::string pretrained;
  std::string out = "out";

  // Model and training.
  std::string model = "cosine-lite";
  std::size_t dim = 64;
  std::size_t hidden = 32;
  double learning_rate = 0.1;
  std::size_t epochs = 30;
  std::size_t batch_size = 4;
  std::size_t max_span = 8;

  // Attribution and extraction.
  std::size_t ig_steps = 50;
  std::string ig_rule = "midpoint";
  std::string ig_scaling = "standard";  // or "unscaled"
  std::string target = "log-prob";
  std::string flip = "prediction-change";
  std::string ranking = "ig";  // ig | random | ig-refresh
  std::size_t controls = 5;    // extra random-ranking runs per example

  // Evaluation.
  std::string answer_span = "both";  // include | exclude | both
  std::string exclude_span = "gold";  // gold | union
  std::size_t report_limit = 10;

  // Synthetic data.
  std::size_t num_examples = 2000;
  std::size_t test_size = 500;
  std::size_t vocab_size = 400;
  std::size_t min_passage = 40;
  std::size_t max_passage = 80;
  std::size_t min_distractors = 2;
  std::size_t max_distractors = 5;

  unsigned long long seed = 1;  // at least 64 bits, distinct from size_t
  std::size_t jobs = 1;
};

// One configurable key, bound to a RunConfig member.
struct Setting {
  std::string name;
  std::string help;
  std::variant<std::string RunConfig::*, std::size_t RunConfig::*,
               double RunConfig::*, unsigned long long RunConfig::*>
      member;
};

const std::vector<Setting>& Settings();

// Parses `text` into the member named `name`. Throws ConfigError for an
// unknown key or an unparseable value.
void ApplySetting(RunConfig& config, const std::string& name,
                  const std::string& text);

// Applies every key of a JSON object file. Throws ConfigError on unknown keys
// and ParseError on unreadable files.
void ApplyConfigFile(RunConfig& config, const std::filesystem::path& path);

// Range and enum checks. Throws ConfigError.
void Validate(const RunConfig& config);

// All settings except "out" as a JSON object (sorted keys).
nlohmann::json ToJson(const RunConfig& config);

}  // namespace rcqa::pipeline

#endif  // RCQA_PIPELINE_RUN_CONFIG_H_
