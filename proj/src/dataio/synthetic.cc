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

#include "rcqa/dataio/synthetic.h"

#include <array>
#include <cstdio>
#include <set>
#include <string>
#include <utility>

#include "rcqa/errors.h"
#include "rcqa/random.h"

namespace rcqa::dataio {
namespace {

constexpr std::array<const char*, 14> kStopFillers = {
    "the", "a", "of", "and", "in", "was", "to",
    "it",  "that", "with", "for", "on", "as", "by"};

constexpr std::array<const char*, 3> kQuestionTemplates = {
    "What is the {r} of {e}?",
    "Which {r} does {e} have?",
    "Tell me the {r} of {e}?"};

struct VocabularySplit {
  std::size_t entities;
  std::size_t relations;
  std::size_t values;
  std::size_t fillers;
};

VocabularySplit Split(std::size_t vocab_size) {
  VocabularySplit s;
  s.relations = std::max<std::size_t>(2, vocab_size / 10);
  s.entities = vocab_size * 3 / 10;
  s.values = vocab_size * 4 / 10;
  const std::size_t used = s.relations + s.entities + s.values;
  s.fillers = vocab_size > used ? vocab_size - used : 0;
  return s;
}

std::string Word(const char* prefix, std::size_t index) {
  return std::string(prefix) + std::to_string(index);
}

std::string FillTemplate(std::string text, const std::string& relation,
                         const std::string& entity) {
  text.replace(text.find("{r}"), 3, relation);
  text.replace(text.find("{e}"), 3, entity);
  return text;
}

// Appends words to a passage string, tracking the byte offset of each.
class PassageBuilder {
 public:
  // Returns the byte offset of the appended word.
  std::size_t Append(const std::string& word) {
    const bool attach = word == "." || word == "," || word == "?";
    if (!text_.empty() && !attach) text_.push_back(' ');
    const std::size_t offset = text_.size();
    text_ += word;
    ++count_;
    return offset;
  }
  std::size_t count() const { return count_; }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
  std::size_t count_ = 0;
};

}  // namespace

void ValidateSyntheticConfig(const SyntheticConfig& config) {
  if (config.num_examples == 0) throw ConfigError("num_examples must be > 0");
  if (config.min_passage_tokens == 0 ||
      config.min_passage_tokens > config.max_passage_tokens) {
    throw ConfigError("passage length range [" +
                      std::to_string(config.min_passage_tokens) + ", " +
                      std::to_string(config.max_passage_tokens) +
                      "] is empty or starts at 0");
  }
  if (config.min_distractors > config.max_distractors) {
    throw ConfigError("min_distractors exceeds max_distractors");
  }
  const VocabularySplit s = Split(config.vocab_size);
  const std::size_t facts = config.max_distractors + 1;
  if (s.entities < facts || s.values < facts || s.fillers == 0) {
    throw ConfigError(
        "vocab_size " + std::to_string(config.vocab_size) +
        " too small for " + std::to_string(config.max_distractors) +
        " distractors: need >= " + std::to_string(facts) +
        " entities and values and >= 1 filler word (have " +
        std::to_string(s.entities) + " entities, " +
        std::to_string(s.values) + " values, " + std::to_string(s.fillers) +
        " fillers)");
  }
}

SyntheticDataset GenerateSynthetic(const SyntheticConfig& config) {
  ValidateSyntheticConfig(config);
  const VocabularySplit vocab = Split(config.vocab_size);
  Rng rng(config.seed);
  SyntheticDataset out;
  out.examples.reserve(config.num_examples);
  out.rationales.reserve(config.num_examples);

  for (std::size_t n = 0; n < config.num_examples; ++n) {
    const std::size_t distractors =
        rng.Between(config.min_distractors, config.max_distractors);
    const std::size_t num_facts = distractors + 1;

    // Facts as (entity, relation) index pairs; element 0 is the target.
    std::vector<std::pair<std::size_t, std::size_t>> facts;
    std::set<std::pair<std::size_t, std::size_t>> used;
    facts.emplace_back(rng.Index(vocab.entities), rng.Index(vocab.relations));
    used.insert(facts.front());
    while (facts.size() < num_facts) {
      std::pair<std::size_t, std::size_t> fact;
      switch (rng.Index(3)) {
        case 0:  // same entity, other relation
          fact = {facts.front().first, rng.Index(vocab.relations)};
          break;
        case 1:  // same relation, other entity
          fact = {rng.Index(vocab.entities), facts.front().second};
          break;
        default:
          fact = {rng.Index(vocab.entities), rng.Index(vocab.relations)};
          break;
      }
      if (used.insert(fact).second) facts.push_back(fact);
    }
    // Distinct values per passage keep the answer unambiguous.
    std::vector<std::size_t> values;
    std::set<std::size_t> used_values;
    while (values.size() < num_facts) {
      const std::size_t v = rng.Index(vocab.values);
      if (used_values.insert(v).second) values.push_back(v);
    }

    std::vector<std::size_t> order(num_facts);
    for (std::size_t i = 0; i < num_facts; ++i) order[i] = i;
    rng.Shuffle(order);

    const std::size_t fact_tokens = 4 * num_facts;
    const std::size_t length = std::max(
        fact_tokens,
        rng.Between(config.min_passage_tokens, config.max_passage_tokens));
    // Filler words are spread over the num_facts + 1 gaps around facts.
    std::vector<std::size_t> gap_sizes(num_facts + 1, 0);
    for (std::size_t i = fact_tokens; i < length; ++i) {
      ++gap_sizes[rng.Index(gap_sizes.size())];
    }

    PassageBuilder passage;
    std::size_t answer_offset = 0;
    std::vector<std::size_t> gold_positions;
    auto emit_filler = [&](std::size_t count) {
      for (std::size_t k = 0; k < count; ++k) {
        const double u = rng.Uniform();
        if (u < 0.4) {
          passage.Append(kStopFillers[rng.Index(kStopFillers.size())]);
        } else if (u < 0.5 && k > 0) {
          passage.Append(",");
        } else {
          passage.Append(Word(kFillerPrefix, rng.Index(vocab.fillers)));
        }
      }
    };
    for (std::size_t slot = 0; slot < num_facts; ++slot) {
      emit_filler(gap_sizes[slot]);
      const std::size_t f = order[slot];
      const bool target = f == 0;
      if (target) gold_positions.push_back(passage.count());
      passage.Append(Word(kEntityPrefix, facts[f].first));
      if (target) gold_positions.push_back(passage.count());
      passage.Append(Word(kRelationPrefix, facts[f].second));
      const std::size_t value_offset =
          passage.Append(Word(kValuePrefix, values[f]));
      if (target) answer_offset = value_offset;
      passage.Append(".");
    }
    emit_filler(gap_sizes.back());

    const std::string entity = Word(kEntityPrefix, facts.front().first);
    const std::string relation = Word(kRelationPrefix, facts.front().second);
    const std::string question = FillTemplate(
        kQuestionTemplates[rng.Index(kQuestionTemplates.size())], relation,
        entity);
    const std::string answer = Word(kValuePrefix, values.front());

    char id[32];
    std::snprintf(id, sizeof(id), "syn-%06zu", n);
    out.examples.push_back(
        MakeExample(id, passage.text(), question, answer, answer_offset));
    out.rationales.push_back(
        HumanRationale{id, gold_positions, /*annotator_count=*/1,
                       /*consensus=*/true});
  }
  return out;
}

}  // namespace rcqa::dataio
