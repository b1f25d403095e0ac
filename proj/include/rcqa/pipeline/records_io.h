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

// On-disk formats of the CLI artifacts.
//
// All JSON is written with sorted keys and shortest round-trip doubles, so
// identical runs give identical bytes.

#ifndef RCQA_PIPELINE_RECORDS_IO_H_
#define RCQA_PIPELINE_RECORDS_IO_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "rcqa/attribution/integrated_gradients.h"
#include "rcqa/dataio/dataset.h"
#include "rcqa/pipeline/run_config.h"
#include "rcqa/rationale/extraction.h"

namespace rcqa::pipeline {

// A rationale together with the run context it was produced in.
struct StoredRationale {
  rationale::RationaleRecord record;
  std::string model;
  std::string flip;
  int control = -1;  // random-control replicate index, -1 for the main run
};

void WriteJson(const std::filesystem::path& path, const nlohmann::json& value);
void WriteJsonLines(const std::filesystem::path& path,
                    const std::vector<nlohmann::json>& lines);
// Throws ParseError naming the file and line.
std::vector<nlohmann::json> ReadJsonLines(const std::filesystem::path& path);

// One line per passage word: id, position, token, importance, distribution.
std::vector<nlohmann::json> AttributionLines(
    const dataio::QAExample& example,
    const attribution::AttributionResult& result);

nlohmann::json RationaleToJson(const StoredRationale& stored,
                               const dataio::QAExample& example);
// Throws ParseError on missing or mistyped fields.
StoredRationale RationaleFromJson(const nlohmann::json& line);
std::vector<StoredRationale> ReadRationales(const std::filesystem::path& path);

// {"command", "config", "inputs": {role: {"path", "sha256"}}, "outputs"}.
// Input paths under `out_dir` are stored relative to it.
nlohmann::json MakeManifest(
    const RunConfig& config,
    const std::map<std::string, std::filesystem::path>& inputs,
    const std::vector<std::string>& outputs,
    const std::filesystem::path& out_dir);

}  // namespace rcqa::pipeline

#endif  // RCQA_PIPELINE_RECORDS_IO_H_
