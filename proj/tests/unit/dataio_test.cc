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

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "rcqa/dataio/annotations.h"
#include "rcqa/dataio/dataset.h"
#include "rcqa/dataio/synthetic.h"
#include "rcqa/dataio/tokenizer.h"
#include "rcqa/errors.h"
#include "rcqa/random.h"

namespace rcqa::dataio {
namespace {

namespace fs = std::filesystem;

const fs::path kFixtures = RCQA_FIXTURE_DIR;

fs::path TempFile(const std::string& name, const std::string& contents) {
  const fs::path dir = fs::temp_directory_path() / "rcqa_dataio_test";
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream(path, std::ios::binary) << contents;
  return path;
}

std::vector<std::string> Words(const TokenizedText& t) {
  std::vector<std::string> out;
  for (const auto& tok : t.tokens) out.push_back(tok.text);
  return out;
}

TEST(TokenizeTest, SplitsTrailingPunctuation) {
  const TokenizedText t = Tokenize("white pants.");
  EXPECT_EQ(Words(t), (std::vector<std::string>{"white", "pants", "."}));
  EXPECT_EQ(t.tokens[0].begin, 0u);
  EXPECT_EQ(t.tokens[0].end, 5u);
  EXPECT_EQ(t.tokens[1].begin, 6u);
  EXPECT_EQ(t.tokens[1].end, 11u);
  EXPECT_EQ(t.tokens[2].begin, 11u);
  EXPECT_EQ(t.tokens[2].end, 12u);
}

TEST(TokenizeTest, EmptyText) {
  EXPECT_TRUE(Tokenize("").empty());
  EXPECT_TRUE(Tokenize(" \t\n ").empty());
}

TEST(TokenizeTest, LowercasesAndKeepsNonAsciiInWords) {
  const TokenizedText t = Tokenize("Café, NOBEL-Prize");
  EXPECT_EQ(Words(t),
            (std::vector<std::string>{"café", ",", "nobel", "-", "prize"}));
}

// Offsets must slice the raw text to the token (modulo case) for arbitrary
// input, and tokens must be ordered, disjoint and whitespace-free.
TEST(TokenizeTest, FuzzOffsetsSliceTheRawText) {
  const std::string alphabet =
      "abcXYZ019 \t\n.,;:!?'\"()-$%@/\\\xc3\xa9\xe2\x80\x94";
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    std::string text;
    const std::size_t length = rng.Index(40);
    for (std::size_t i = 0; i < length; ++i) {
      text.push_back(alphabet[rng.Index(alphabet.size())]);
    }
    const TokenizedText t = Tokenize(text);
    ASSERT_EQ(t.raw, text);
    std::size_t previous_end = 0;
    std::string covered;
    for (std::size_t p = 0; p < t.size(); ++p) {
      const Token& tok = t.tokens[p];
      ASSERT_EQ(tok.position, p);
      ASSERT_LE(previous_end, tok.begin) << "trial " << trial;
      ASSERT_LT(tok.begin, tok.end);
      std::string slice = text.substr(tok.begin, tok.end - tok.begin);
      for (char& c : slice) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      }
      ASSERT_EQ(slice, tok.text) << "trial " << trial;
      for (char c : slice) ASSERT_FALSE(std::isspace(static_cast<unsigned char>(c)));
      previous_end = tok.end;
      covered += slice;
    }
    // Every non-whitespace byte belongs to some token.
    std::string expected;
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) {
        expected.push_back(
            static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      }
    }
    ASSERT_EQ(covered, expected) << "trial " << trial;
  }
}

TEST(NormalizeTest, CollapsesWhitespaceAndCase) {
  EXPECT_EQ(NormalizeWhitespaceAndCase("  Space \t\n GAPS "), "space gaps");
}

TEST(AlignTest, OffsetInsideTokenCoversWholeToken) {
  const TokenizedText t = Tokenize("The password is swordfish today.");
  const auto span = AlignCharacterSpan(t, 21, 4);  // "fish"
  ASSERT_TRUE(span.has_value());
  EXPECT_EQ(*span, (TokenSpan{3, 3}));
}

TEST(AlignTest, RangeOutsideTextOrOnWhitespace) {
  const TokenizedText t = Tokenize("ab  cd");
  EXPECT_FALSE(AlignCharacterSpan(t, 2, 2).has_value());
  EXPECT_FALSE(AlignCharacterSpan(t, 5, 5).has_value());
  EXPECT_FALSE(AlignCharacterSpan(t, 0, 0).has_value());
}

TEST(CodePointTest, CountsUtf8Characters) {
  const std::string text = "Caf\xc3\xa9 $4";
  EXPECT_EQ(CodePointToByteOffset(text, 3), 3u);
  EXPECT_EQ(CodePointToByteOffset(text, 4), 5u);
  EXPECT_EQ(CodePointToByteOffset(text, 7), 8u);
  EXPECT_FALSE(CodePointToByteOffset(text, 8).has_value());
}

TEST(MakeExampleTest, RejectsMisplacedAnswers) {
  EXPECT_THROW(MakeExample("x", "one two", "q?", "three", 0), ContractError);
  EXPECT_THROW(MakeExample("x", "one two", "q?", "two", 40), ContractError);
  EXPECT_THROW(MakeExample("x", "", "q?", "a", 0), ContractError);
  EXPECT_THROW(MakeExample("x", "one", "", "one", 0), ContractError);
}

TEST(LoadDatasetTest, MinimalFlatFile) {
  const fs::path path = TempFile(
      "one.json",
      R"({"format": "rcqa-flat", "version": 1, "examples": [
           {"id": "a", "passage": "Sky is blue.", "question": "Color?",
            "answer_text": "blue", "answer_start": 7}]})");
  const LoadedDataset d = LoadDataset(path);
  ASSERT_EQ(d.examples.size(), 1u);
  EXPECT_EQ(d.examples[0].answer, (TokenSpan{2, 2}));
  EXPECT_EQ(d.examples[0].answer_text, "blue");
  EXPECT_TRUE(d.dropped.empty());
}

// Token indices below were labeled by hand from the fixture passages.
TEST(LoadDatasetTest, TwentyExampleFixtureMatchesHandLabels) {
  const std::map<std::string, TokenSpan> expected = {
      {"q01", {5, 5}},  {"q02", {6, 6}},   {"q03", {3, 5}},
      {"q04", {9, 9}},  {"q05", {3, 3}},   {"q06", {3, 6}},
      {"q07", {4, 5}},  {"q08", {3, 3}},   {"q09", {4, 4}},
      {"q10", {2, 4}},  {"q11", {3, 7}},   {"q12", {3, 3}},
      {"q13", {4, 5}},  {"q14", {12, 12}}, {"q15", {4, 4}},
      {"q16", {2, 6}},  {"q17", {0, 0}},   {"q18", {5, 5}},
      {"q19", {7, 8}},  {"q20", {1, 2}},
  };
  const LoadedDataset d = LoadDataset(kFixtures / "flat_twenty.json");
  ASSERT_EQ(d.examples.size(), 20u);
  EXPECT_TRUE(d.dropped.empty());
  for (const QAExample& ex : d.examples) {
    ASSERT_TRUE(expected.contains(ex.id)) << ex.id;
    EXPECT_EQ(ex.answer, expected.at(ex.id)) << ex.id;
    // The gold tokens reproduce the stored answer text.
    std::string joined;
    for (std::size_t p = ex.answer.start; p <= ex.answer.end; ++p) {
      joined += ex.passage.word(p);
    }
    std::string stored;
    for (char c : NormalizeWhitespaceAndCase(ex.answer_text)) {
      if (c != ' ') stored.push_back(c);
    }
    EXPECT_EQ(joined, stored) << ex.id;
  }
  const auto& q05 = *std::find_if(d.examples.begin(), d.examples.end(),
                                  [](const auto& e) { return e.id == "q05"; });
  EXPECT_EQ(q05.answer_text, "swordfish");
}

TEST(LoadDatasetTest, SquadShapeDropsUnalignableAnswers) {
  const LoadedDataset d = LoadDataset(kFixtures / "squad_small.json");
  ASSERT_EQ(d.examples.size(), 2u);
  EXPECT_EQ(d.examples[0].id, "s1");
  EXPECT_EQ(d.examples[0].answer, (TokenSpan{7, 7}));
  EXPECT_EQ(d.examples[1].answer, (TokenSpan{0, 1}));  // first answer wins
  ASSERT_EQ(d.dropped.size(), 1u);
  EXPECT_EQ(d.dropped[0].id, "s3");
}

TEST(LoadDatasetTest, MalformedFilesNameTheLocation) {
  try {
    LoadDataset(TempFile("bad.json", "{\"examples\": [ {\"id\": 1 ]"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.json"), std::string::npos);
  }
  try {
    LoadDataset(TempFile("missing.json",
                         R"({"examples": [{"id": "a", "passage": "x"}]})"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("examples[0]"), std::string::npos);
  }
  EXPECT_THROW(LoadDataset(TempFile("neither.json", "[1, 2]")), ParseError);
  EXPECT_THROW(LoadDataset(kFixtures / "does_not_exist.json"), ParseError);
}

TEST(LoadDatasetTest, NothingUsableIsContractError) {
  const fs::path path = TempFile(
      "none.json",
      R"({"examples": [{"id": "a", "passage": "x y", "question": "q",
                        "answer_text": "zzz", "answer_start": 0}]})");
  EXPECT_THROW(LoadDataset(path), ContractError);
}

TEST(LoadDatasetTest, SaveLoadRoundTrip) {
  const LoadedDataset d = LoadDataset(kFixtures / "flat_twenty.json");
  const fs::path path = TempFile("roundtrip.json", "");
  SaveFlatDataset(path, d.examples);
  EXPECT_EQ(LoadDataset(path).examples, d.examples);

  SyntheticConfig config;
  config.num_examples = 50;
  const auto synthetic = GenerateSynthetic(config).examples;
  SaveFlatDataset(path, synthetic);
  EXPECT_EQ(LoadDataset(path).examples, synthetic);
}

TEST(AnnotationsTest, FixtureRecordsMatchHandLabels) {
  const auto examples = LoadDataset(kFixtures / "flat_twenty.json").examples;
  const LoadedAnnotations a =
      LoadAnnotations(kFixtures / "annotations_small.jsonl", examples);
  ASSERT_EQ(a.records.size(), 4u);
  EXPECT_EQ(a.records[0].example_id, "q01");
  EXPECT_EQ(a.records[0].positions, (std::vector<std::size_t>{0, 1, 3}));
  EXPECT_EQ(a.records[1].positions,
            (std::vector<std::size_t>{1, 2, 3, 7, 8}));
  EXPECT_EQ(a.records[2].example_id, "q05");
  EXPECT_TRUE(a.records[2].positions.empty());
  EXPECT_FALSE(a.records[3].consensus);
  EXPECT_EQ(a.records[3].positions, (std::vector<std::size_t>{0, 7, 9, 10}));
  EXPECT_EQ(a.records[3].annotator_count, 2);
  ASSERT_EQ(a.warnings.size(), 1u);
  EXPECT_NE(a.warnings[0].find("zz99"), std::string::npos);
}

TEST(AnnotationsTest, OutOfBoundsAndMalformedLinesThrow) {
  const auto examples = LoadDataset(kFixtures / "flat_twenty.json").examples;
  EXPECT_THROW(
      LoadAnnotations(TempFile("oob.jsonl", R"({"id": "q17", "spans": [[0, 1]], "consensus": true})"
                                             "\n"),
                      examples),
      ParseError);
  EXPECT_THROW(LoadAnnotations(TempFile("junk.jsonl", "{not json}\n"), examples),
               ParseError);
}

TEST(AnnotationsTest, SaveLoadRoundTrip) {
  const auto examples = LoadDataset(kFixtures / "flat_twenty.json").examples;
  const std::vector<HumanRationale> records = {
      {"q03", {0, 1, 2, 5}, 2, true}, {"q10", {}, 1, false}};
  const fs::path path = TempFile("ann.jsonl", "");
  SaveAnnotations(path, records);
  EXPECT_EQ(LoadAnnotations(path, examples).records, records);
}

TEST(AnnotationsTest, PositionsToSpans) {
  EXPECT_EQ(PositionsToSpans({0, 1, 3, 7, 8, 9}),
            (std::vector<TokenSpan>{{0, 1}, {3, 3}, {7, 9}}));
  EXPECT_TRUE(PositionsToSpans({}).empty());
}

TEST(SyntheticTest, SingleFactWithoutDistractors) {
  SyntheticConfig config;
  config.num_examples = 1;
  config.min_distractors = 0;
  config.max_distractors = 0;
  const SyntheticDataset d = GenerateSynthetic(config);
  ASSERT_EQ(d.examples.size(), 1u);
  const QAExample& ex = d.examples[0];
  std::size_t values = 0;
  for (const auto& tok : ex.passage.tokens) {
    values += tok.text.starts_with(kValuePrefix);
  }
  EXPECT_EQ(values, 1u);
  EXPECT_EQ(ex.answer.length(), 1u);
  EXPECT_TRUE(ex.passage.word(ex.answer.start).starts_with(kValuePrefix));
}

TEST(SyntheticTest, SameSeedGivesIdenticalFiles) {
  SyntheticConfig config;
  config.num_examples = 100;
  config.seed = 42;
  const fs::path a = TempFile("syn_a.json", "");
  const fs::path b = TempFile("syn_b.json", "");
  SaveFlatDataset(a, GenerateSynthetic(config).examples);
  SaveFlatDataset(b, GenerateSynthetic(config).examples);
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  EXPECT_EQ(sa.str(), sb.str());
  config.seed = 43;
  EXPECT_NE(GenerateSynthetic(config).examples[0].passage.raw,
            LoadDataset(a).examples[0].passage.raw);
}

TEST(SyntheticTest, InconsistentConfigsAreRejected) {
  SyntheticConfig tiny;
  tiny.vocab_size = 12;
  EXPECT_THROW(ValidateSyntheticConfig(tiny), ConfigError);
  SyntheticConfig empty_range;
  empty_range.min_passage_tokens = 90;
  EXPECT_THROW(ValidateSyntheticConfig(empty_range), ConfigError);
  SyntheticConfig zero;
  zero.num_examples = 0;
  EXPECT_THROW(GenerateSynthetic(zero), ConfigError);
}

// Independent matcher: parse every "ENT REL VAL ." fact out of the passage
// and check the question's (ENT, REL) pair selects exactly the gold answer.
TEST(SyntheticTest, ExhaustiveScanOfDefaultSet) {
  SyntheticConfig config;  // 2000 examples
  const SyntheticDataset d = GenerateSynthetic(config);
  ASSERT_EQ(d.examples.size(), 2000u);
  ASSERT_EQ(d.rationales.size(), 2000u);
  std::set<std::string> ids;
  for (std::size_t n = 0; n < d.examples.size(); ++n) {
    const QAExample& ex = d.examples[n];
    ASSERT_TRUE(ids.insert(ex.id).second);
    ASSERT_GE(ex.passage.size(), config.min_passage_tokens);
    ASSERT_LE(ex.passage.size(), config.max_passage_tokens);

    std::string q_entity, q_relation;
    for (const auto& tok : ex.question.tokens) {
      if (tok.text.starts_with(kEntityPrefix)) q_entity = tok.text;
      if (tok.text.starts_with(kRelationPrefix)) q_relation = tok.text;
    }
    ASSERT_FALSE(q_entity.empty());
    ASSERT_FALSE(q_relation.empty());

    std::vector<std::size_t> matches;  // positions of matching VALUE tokens
    std::size_t facts = 0;
    for (std::size_t p = 0; p + 3 < ex.passage.size(); ++p) {
      const auto& w = ex.passage.tokens;
      if (!w[p].text.starts_with(kEntityPrefix)) continue;
      ASSERT_TRUE(w[p + 1].text.starts_with(kRelationPrefix)) << ex.id;
      ASSERT_TRUE(w[p + 2].text.starts_with(kValuePrefix)) << ex.id;
      ASSERT_EQ(w[p + 3].text, ".") << ex.id;
      ++facts;
      if (w[p].text == q_entity && w[p + 1].text == q_relation) {
        matches.push_back(p + 2);
      }
    }
    ASSERT_GE(facts, config.min_distractors + 1) << ex.id;
    ASSERT_LE(facts, config.max_distractors + 1) << ex.id;
    ASSERT_EQ(matches.size(), 1u) << ex.id;
    EXPECT_EQ(ex.answer, (TokenSpan{matches[0], matches[0]})) << ex.id;

    const HumanRationale& r = d.rationales[n];
    EXPECT_EQ(r.example_id, ex.id);
    EXPECT_TRUE(r.consensus);
    EXPECT_EQ(r.positions,
              (std::vector<std::size_t>{matches[0] - 2, matches[0] - 1}));
  }
}

}  // namespace
}  // namespace rcqa::dataio
