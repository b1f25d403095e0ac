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

#ifndef RCQA_DATAIO_SYNTHETIC_H_
#define RCQA_DATAIO_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rcqa/dataio/annotations.h"
#include "rcqa/dataio/dataset.h"

namespace rcqa::dataio {

// Templated fact-lookup QA. Each passage holds one target fact
// "ENTITY RELATION VALUE ." plus distractor facts and filler words; the
// question names the target (ENTITY, RELATION) pair and the answer is its
// VALUE token. Distractors reuse the target's entity or relation half of the
// time so that both anchors are needed to find the answer.
struct SyntheticConfig {
  std::size_t num_examples = 2000;
  std::size_t min_passage_tokens = 40;
  std::size_t max_passage_tokens = 80;
  std::size_t vocab_size = 400;
  std::size_t min_distractors = 2;
  std::size_t max_distractors = 5;
  std::uint64_t seed = 1;
};

struct SyntheticDataset {
  std::vector<QAExample> examples;
  // Gold rationale per example: the target fact's ENTITY and RELATION
  // positions (the VALUE token is not included).
  std::vector<HumanRationale> rationales;
};

// Throws ConfigError when values are inconsistent or the vocabulary is too
// small for the requested number of distractor facts.
void ValidateSyntheticConfig(const SyntheticConfig& config);

SyntheticDataset GenerateSynthetic(const SyntheticConfig& config);

// Word-class prefixes used by the generator's vocabulary.
inline constexpr char kEntityPrefix[] = "ent";
inline constexpr char kRelationPrefix[] = "rel";
inline constexpr char kValuePrefix[] = "val";
inline constexpr char kFillerPrefix[] = "fill";

}  // namespace rcqa::dataio

#endif  // RCQA_DATAIO_SYNTHETIC_H_
