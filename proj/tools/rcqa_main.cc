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

// rcqa: generate, train, extract, evaluate and report rationales.

#include <exception>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "rcqa/pipeline/commands.h"
#include "rcqa/pipeline/run_config.h"

namespace {

constexpr const char* kCommands[][2] = {
    {"generate", "write a synthetic train/test split with gold rationales"},
    {"train", "train a span-prediction model on --dataset"},
    {"extract", "attribute and extract rationales for every example"},
    {"evaluate", "flip-fraction and human-overlap tables"},
    {"report", "human-readable summary with highlighted rationales"},
    {"pipeline", "generate, train, extract, evaluate and report in --out"},
};

}  // namespace

int main(int argc, char** argv) {
  using rcqa::pipeline::RunConfig;
  CLI::App app{"Decision-flip rationales for span-prediction QA models"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file;
  app.add_option("--config", config_file,
                 "JSON object of settings; flags take precedence");
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  for (const auto& s : rcqa::pipeline::Settings()) {
    options[s.name] = app.add_option("--" + s.name, values[s.name], s.help);
  }
  for (const auto& [name, help] : kCommands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rcqa::pipeline::kExitUsage;
  }

  try {
    RunConfig config;
    config.command = app.get_subcommands().front()->get_name();
    if (!config_file.empty()) {
      rcqa::pipeline::ApplyConfigFile(config, config_file);
    }
    for (const auto& [name, option] : options) {
      if (option->count() > 0) {
        rcqa::pipeline::ApplySetting(config, name, values[name]);
      }
    }
    rcqa::pipeline::Dispatch(config);
  } catch (const std::exception& e) {
    std::cerr << "rcqa: error: " << e.what() << "\n";
    return rcqa::pipeline::ExitCodeFor(std::current_exception());
  }
  return rcqa::pipeline::kExitOk;
}
