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

#include "rcqa/pipeline/run_config.h"

#include <charconv>
#include <fstream>
#include <set>

#include "rcqa/errors.h"

namespace rcqa::pipeline {
namespace {

template <typename T>
T ParseNumber(const std::string& name, const std::string& text) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("--" + name + ": cannot parse '" + text + "'");
  }
  return value;
}

void RequireOneOf(const std::string& name, const std::string& value,
                  const std::set<std::string>& allowed) {
  if (allowed.contains(value)) return;
  std::string options;
  for (const auto& a : allowed) options += (options.empty() ? "" : ", ") + a;
  throw ConfigError("--" + name + " must be one of {" + options + "}, got '" +
                    value + "'");
}

void RequirePositive(const std::string& name, std::size_t value) {
  if (value == 0) throw ConfigError("--" + name + " must be positive");
}

}  // namespace

const std::vector<Setting>& Settings() {
  static const std::vector<Setting> kSettings = {
      {"dataset", "dataset file (SQuAD v1.1 or flat JSON)", &RunConfig::dataset},
      {"annotations", "human-rationale annotation file (JSON lines)",
       &RunConfig::annotations},
      {"checkpoint", "model checkpoint file", &RunConfig::checkpoint},
      {"rationales", "rationale dump written by extract",
       &RunConfig::rationales},
      {"stopwords", "stop-word list, one per line (default: built-in)",
       &RunConfig::stopwords},
      {"pretrained", "plain-text 'word v1 ... vL' vectors to start from",
       &RunConfig::pretrained},
      {"out", "output directory", &RunConfig::out},
      {"model", "cosine-lite | dense-lite", &RunConfig::model},
      {"dim", "embedding dimension L", &RunConfig::dim},
      {"hidden", "dense-lite hidden units", &RunConfig::hidden},
      {"lr", "learning rate", &RunConfig::learning_rate},
      {"epochs", "training epochs", &RunConfig::epochs},
      {"batch-size", "mini-batch size", &RunConfig::batch_size},
      {"max-span", "longest decodable answer span", &RunConfig::max_span},
      {"ig-steps", "integrated-gradients path samples", &RunConfig::ig_steps},
      {"ig-rule", "midpoint | left | right", &RunConfig::ig_rule},
      {"ig-scaling", "standard | unscaled", &RunConfig::ig_scaling},
      {"target", "log-prob | logit-sum", &RunConfig::target},
      {"flip", "prediction-change | gold-mismatch", &RunConfig::flip},
      {"ranking", "ig | random | ig-refresh", &RunConfig::ranking},
      {"controls", "random-ranking control runs per example",
       &RunConfig::controls},
      {"answer-span", "include | exclude | both", &RunConfig::answer_span},
      {"exclude-span", "gold | union (answer span removed in exclude mode)",
       &RunConfig::exclude_span},
      {"report-limit", "examples rendered by report", &RunConfig::report_limit},
      {"num", "synthetic examples to generate", &RunConfig::num_examples},
      {"test-size", "synthetic examples held out for testing",
       &RunConfig::test_size},
      {"vocab", "synthetic vocabulary size", &RunConfig::vocab_size},
      {"min-passage", "shortest synthetic passage (tokens)",
       &RunConfig::min_passage},
      {"max-passage", "longest synthetic passage (tokens)",
       &RunConfig::max_passage},
      {"min-distractors", "fewest distractor facts", &RunConfig::min_distractors},
      {"max-distractors", "most distractor facts", &RunConfig::max_distractors},
      {"seed", "random seed", &RunConfig::seed},
      {"jobs", "parallel extraction workers", &RunConfig::jobs},
  };
  return kSettings;
}

void ApplySetting(RunConfig& config, const std::string& name,
                  const std::string& text) {
  for (const Setting& s : Settings()) {
    if (s.name != name) continue;
    std::visit(
        [&](auto member) {
          using T = std::remove_reference_t<decltype(config.*member)>;
          if constexpr (std::is_same_v<T, std::string>) {
            config.*member = text;
          } else {
            config.*member = ParseNumber<T>(name, text);
          }
        },
        s.member);
    return;
  }
  throw ConfigError("unknown setting '" + name + "'");
}

void ApplyConfigFile(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open config file");
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (!root.is_object()) {
    throw ParseError(path.string() + ": config must be a JSON object");
  }
  for (const auto& [key, value] : root.items()) {
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_number()) {
      text = value.dump();
    } else {
      throw ConfigError(path.string() + ": key '" + key +
                        "' must be a string or number");
    }
    try {
      ApplySetting(config, key, text);
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
  }
}

void Validate(const RunConfig& config) {
  RequireOneOf("model", config.model, {"cosine-lite", "dense-lite"});
  RequireOneOf("ig-rule", config.ig_rule, {"midpoint", "left", "right"});
  RequireOneOf("ig-scaling", config.ig_scaling, {"standard", "unscaled"});
  RequireOneOf("target", config.target, {"log-prob", "logit-sum"});
  RequireOneOf("flip", config.flip, {"prediction-change", "gold-mismatch"});
  RequireOneOf("ranking", config.ranking, {"ig", "random", "ig-refresh"});
  RequireOneOf("answer-span", config.answer_span,
               {"include", "exclude", "both"});
  RequireOneOf("exclude-span", config.exclude_span, {"gold", "union"});
  RequirePositive("dim", config.dim);
  RequirePositive("hidden", config.hidden);
  RequirePositive("batch-size", config.batch_size);
  RequirePositive("max-span", config.max_span);
  RequirePositive("ig-steps", config.ig_steps);
  RequirePositive("num", config.num_examples);
  RequirePositive("vocab", config.vocab_size);
  RequirePositive("min-passage", config.min_passage);
  RequirePositive("max-passage", config.max_passage);
  RequirePositive("jobs", config.jobs);
  if (!(config.learning_rate > 0.0)) {
    throw ConfigError("--lr must be positive");
  }
  if (config.test_size >= config.num_examples) {
    throw ConfigError("--test-size must be smaller than --num");
  }
  if (config.out.empty()) throw ConfigError("--out must not be empty");
}

nlohmann::json ToJson(const RunConfig& config) {
  nlohmann::json out = nlohmann::json::object();
  for (const Setting& s : Settings()) {
    if (s.name == "out") continue;
    std::visit([&](auto member) { out[s.name] = config.*member; }, s.member);
  }
  return out;
}

}  // namespace rcqa::pipeline
