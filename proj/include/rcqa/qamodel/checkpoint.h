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

#ifndef RCQA_QAMODEL_CHECKPOINT_H_
#define RCQA_QAMODEL_CHECKPOINT_H_

#include <filesystem>

#include "rcqa/qamodel/model.h"

namespace rcqa::qamodel {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Binary container, all integers little-endian, doubles stored as their
// IEEE-754 bit patterns:
//   "RCQACKPT" u32 version
//   str kind, u64 dim, u64 hidden, u64 seed, str vocabulary_hash
//   u64 vocab_size, str word...
//   u64 rows, u64 cols, f64 embedding...
//   u64 num_arrays, { str name, u64 rank, u64 dim..., f64 value... }...
// where str is a u64 byte length followed by the bytes.
void SaveCheckpoint(const std::filesystem::path& path,
                    const ModelParameters& params);

// Reload is bit-exact. Throws ParseError on a bad magic, version, truncated
// file, vocabulary hash mismatch or array shapes inconsistent with the kind.
ModelParameters LoadCheckpoint(const std::filesystem::path& path);

}  // namespace rcqa::qamodel

#endif  // RCQA_QAMODEL_CHECKPOINT_H_
