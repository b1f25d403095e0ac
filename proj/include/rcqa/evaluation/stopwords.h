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

#ifndef RCQA_EVALUATION_STOPWORDS_H_
#define RCQA_EVALUATION_STOPWORDS_H_

#include <filesystem>
#include <string>
#include <unordered_set>
#include <vector>

namespace rcqa::evaluation {

using StopwordSet = std::unordered_set<std::string>;

// The standard English list also shipped as data/stopwords_en.txt.
const std::vector<std::string>& DefaultStopwordList();
StopwordSet DefaultStopwords();

// One word per line; blank lines and lines starting with '#' are ignored.
// Words are lowercased.
StopwordSet LoadStopwords(const std::filesystem::path& path);

}  // namespace rcqa::evaluation

#endif  // RCQA_EVALUATION_STOPWORDS_H_
