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

#include "rcqa/pipeline/commands.h"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "rcqa/dataio/annotations.h"
#include "rcqa/dataio/synthetic.h"
#include "rcqa/errors.h"
#include "rcqa/evaluation/flip_stats.h"
#include "rcqa/evaluation/overlap.h"
#include "rcqa/evaluation/report.h"
#include "rcqa/evaluation/stopwords.h"
#include "rcqa/pipeline/records_io.h"
#include "rcqa/qamodel/checkpoint.h"
#include "rcqa/qamodel/embedding.h"
#include "rcqa/qamodel/trainer.h"

namespace rcqa::pipeline {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr char kTrainFile[] = "train.json";
constexpr char kTestFile[] = "test.json";
constexpr char kTrainAnnotations[] = "train_annotations.jsonl";
constexpr char kTestAnnotations[] = "test_annotations.jsonl";
constexpr char kCheckpointFile[] = "checkpoint.bin";
constexpr char kAttributionsFile[] = "attributions.jsonl";
constexpr char kRationalesFile[] = "rationales.jsonl";
constexpr char kControlsFile[] = "controls.jsonl";

// SplitMix64 finalizer.
std::uint64_t Mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

fs::path RequireInput(const std::string& path, const std::string& flag) {
  if (path.empty()) throw ConfigError(flag + " is required");
  if (!fs::is_regular_file(path)) {
    throw ParseError(path + ": no such file (" + flag + ")");
  }
  return path;
}

void WriteText(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path.string() + ": cannot open for writing");
  out << text;
}

void WriteManifest(const RunConfig& config,
                   const std::map<std::string, fs::path>& inputs,
                   const std::vector<std::string>& outputs) {
  WriteJson(fs::path(config.out) / ("manifest_" + config.command + ".json"),
            MakeManifest(config, inputs, outputs, config.out));
}

dataio::LoadedDataset LoadDatasetReporting(const fs::path& path) {
  dataio::LoadedDataset loaded = dataio::LoadDataset(path);
  for (const auto& d : loaded.dropped) {
    std::cerr << "warning: " << path.string() << ": dropped example " << d.id
              << ": " << d.reason << "\n";
  }
  return loaded;
}

std::vector<dataio::HumanRationale> LoadAnnotationsReporting(
    const fs::path& path, const std::vector<dataio::QAExample>& examples) {
  dataio::LoadedAnnotations loaded = dataio::LoadAnnotations(path, examples);
  for (const auto& w : loaded.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  // Annotators who never agreed leave no usable reference.
  std::vector<dataio::HumanRationale> agreed;
  for (auto& r : loaded.records) {
    if (r.consensus) agreed.push_back(std::move(r));
  }
  if (const std::size_t dropped = loaded.records.size() - agreed.size()) {
    std::cerr << "warning: " << path.string() << ": skipped " << dropped
              << " record(s) without annotator consensus\n";
  }
  return agreed;
}

std::map<std::string, const dataio::QAExample*> IndexById(
    const std::vector<dataio::QAExample>& examples) {
  std::map<std::string, const dataio::QAExample*> out;
  for (const auto& e : examples) out.emplace(e.id, &e);
  return out;
}

const dataio::QAExample& Lookup(
    const std::map<std::string, const dataio::QAExample*>& index,
    const std::string& id, const fs::path& source) {
  auto it = index.find(id);
  if (it == index.end()) {
    throw ContractError(source.string() + ": example '" + id +
                        "' is not in the dataset");
  }
  return *it->second;
}

json StatsToJson(const evaluation::FlipFractionStats& s) {
  return {{"count", s.count},         {"mean", s.mean},
          {"variance", s.variance},   {"flipped", s.flipped},
          {"histogram", s.histogram}, {"bin_width", evaluation::kHistogramBinWidth}};
}

json MetricsToJson(const evaluation::OverlapMetrics& m) {
  return {{"mode", evaluation::AnswerSpanModeName(m.mode)},
          {"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1},
          {"macro_precision", m.macro_precision},
          {"macro_recall", m.macro_recall},
          {"macro_f1", m.macro_f1},
          {"evaluated", m.evaluated},
          {"skipped", m.skipped},
          {"skip_reasons", m.skip_reasons},
          {"pooled_intersection", m.pooled_intersection},
          {"pooled_model", m.pooled_model},
          {"pooled_human", m.pooled_human}};
}

// Rationale groups in a fixed order: main records first, then controls.
struct RationaleGroup {
  std::string label;
  std::vector<StoredRationale> records;
};

std::vector<RationaleGroup> GroupRationales(
    const std::vector<StoredRationale>& records) {
  std::map<std::pair<bool, std::string>, RationaleGroup> groups;
  for (const auto& r : records) {
    const std::string label = r.model + " (" + r.record.ranking_source +
                              (r.control >= 0 ? " control" : "") + ")";
    auto& g = groups[{r.control >= 0, label}];
    g.label = label;
    g.records.push_back(r);
  }
  std::vector<RationaleGroup> out;
  for (auto& [key, g] : groups) out.push_back(std::move(g));
  return out;
}

std::vector<evaluation::AnswerSpanMode> ModesFor(const std::string& name) {
  if (name == "include") return {evaluation::AnswerSpanMode::kInclude};
  if (name == "exclude") return {evaluation::AnswerSpanMode::kExclude};
  return {evaluation::AnswerSpanMode::kInclude,
          evaluation::AnswerSpanMode::kExclude};
}

}  // namespace

int ExitCodeFor(std::exception_ptr error) {
  try {
    std::rethrow_exception(error);
  } catch (const ConfigError&) {
    return kExitUsage;
  } catch (const ParseError&) {
    return kExitInput;
  } catch (const ContractError&) {
    return kExitInput;
  } catch (const fs::filesystem_error&) {
    return kExitInput;
  } catch (const NumericalError&) {
    return kExitNumerical;
  } catch (const DomainError&) {
    return kExitNumerical;
  } catch (...) {
    return kExitFailure;
  }
}

ExtractionOptions ExtractionOptionsFrom(const RunConfig& config) {
  ExtractionOptions o;
  o.ig.steps = config.ig_steps;
  o.ig.rule = attribution::ParsePathRule(config.ig_rule);
  o.ig.scaling = config.ig_scaling == "unscaled"
                     ? attribution::Scaling::kUnscaled
                     : attribution::Scaling::kStandard;
  o.predict.max_span_length = config.max_span;
  o.predict.target = qamodel::ParseTargetKind(config.target);
  o.flip = rationale::ParseFlipCriterion(config.flip);
  o.ranking = config.ranking;
  o.controls = config.controls;
  o.seed = config.seed;
  o.jobs = config.jobs;
  return o;
}

std::uint64_t ExampleSeed(std::uint64_t seed, std::size_t index,
                          std::size_t replicate) {
  return Mix(Mix(seed) ^ Mix(index + 0x632be59bd9b4e019ULL * (replicate + 1)));
}

std::vector<ExampleExtraction> ExtractExamples(
    const qamodel::ModelParameters& params,
    const std::vector<dataio::QAExample>& examples,
    const ExtractionOptions& options) {
  std::vector<ExampleExtraction> results(examples.size());

  const auto run_one = [&](std::size_t index) {
    const dataio::QAExample& ex = examples[index];
    const diffcore::Tensor passage = qamodel::Embed(ex.passage, params.embeddings);
    const diffcore::Tensor question =
        qamodel::Embed(ex.question, params.embeddings);
    const qamodel::SpanPrediction pred =
        qamodel::PredictSpan(passage, question, params, options.predict);
    const rationale::SpanPredictor predictor =
        rationale::MakeSpanPredictor(params, question, options.predict);
    const rationale::FlipTarget target{pred.span, ex.answer, options.flip};

    ExampleExtraction& out = results[index];
    out.attribution = attribution::AttributeSpan(
        params, passage, question, pred.span, options.predict.target, options.ig);
    if (options.ranking == "ig") {
      out.rationale = rationale::ExtractRationale(predictor, passage, target,
                                                  out.attribution.distribution);
    } else if (options.ranking == "random") {
      out.rationale = rationale::RandomRationaleBaseline(
          predictor, passage, target, ExampleSeed(options.seed, index, 0));
    } else if (options.ranking == "ig-refresh") {
      const rationale::Rescorer rescore = [&](const diffcore::Tensor& current) {
        return attribution::AttributeSpan(params, current, question, pred.span,
                                          options.predict.target, options.ig)
            .distribution;
      };
      out.rationale = rationale::ExtractRationaleRefreshing(predictor, passage,
                                                            target, rescore);
    } else {
      throw ConfigError("unknown ranking '" + options.ranking + "'");
    }
    out.rationale.example_id = ex.id;
    for (std::size_t c = 1; c <= options.controls; ++c) {
      out.controls.push_back(rationale::RandomRationaleBaseline(
          predictor, passage, target, ExampleSeed(options.seed, index, c)));
      out.controls.back().example_id = ex.id;
    }
  };

  const std::size_t jobs =
      std::max<std::size_t>(1, std::min(options.jobs, examples.size()));
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  const auto worker = [&] {
    for (std::size_t i = next++; i < examples.size(); i = next++) {
      try {
        run_one(i);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (!first_error) {
          // Re-tag the error with the example id, keeping its category.
          const std::string msg = "example " + examples[i].id + ": " + e.what();
          try {
            throw;
          } catch (const NumericalError&) {
            first_error = std::make_exception_ptr(NumericalError(msg));
          } catch (const DomainError&) {
            first_error = std::make_exception_ptr(DomainError(msg));
          } catch (const ContractError&) {
            first_error = std::make_exception_ptr(ContractError(msg));
          } catch (...) {
            first_error = std::current_exception();
          }
        }
        next = examples.size();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

void RunGenerate(const RunConfig& config) {
  dataio::SyntheticConfig sc;
  sc.num_examples = config.num_examples;
  sc.min_passage_tokens = config.min_passage;
  sc.max_passage_tokens = config.max_passage;
  sc.vocab_size = config.vocab_size;
  sc.min_distractors = config.min_distractors;
  sc.max_distractors = config.max_distractors;
  sc.seed = config.seed;
  dataio::ValidateSyntheticConfig(sc);
  const dataio::SyntheticDataset data = dataio::GenerateSynthetic(sc);

  const std::size_t num_train = data.examples.size() - config.test_size;
  const auto split = [&](auto& v, std::size_t first, std::size_t last) {
    return std::vector(v.begin() + first, v.begin() + last);
  };
  const fs::path out = config.out;
  dataio::SaveFlatDataset(out / kTrainFile, split(data.examples, 0, num_train));
  dataio::SaveFlatDataset(out / kTestFile,
                          split(data.examples, num_train, data.examples.size()));
  dataio::SaveAnnotations(out / kTrainAnnotations,
                          split(data.rationales, 0, num_train));
  dataio::SaveAnnotations(
      out / kTestAnnotations,
      split(data.rationales, num_train, data.rationales.size()));
  WriteManifest(config, {},
                {kTrainFile, kTestFile, kTrainAnnotations, kTestAnnotations});
  std::cout << "generated " << num_train << " train and " << config.test_size
            << " test examples in " << out.string() << "\n";
}

void RunTrain(const RunConfig& config) {
  const fs::path dataset = RequireInput(config.dataset, "--dataset");
  const dataio::LoadedDataset loaded = LoadDatasetReporting(dataset);
  std::map<std::string, fs::path> inputs{{"dataset", dataset}};

  qamodel::ModelParameters init = qamodel::InitParameters(
      qamodel::ParseModelKind(config.model),
      qamodel::BuildVocabulary(loaded.examples), config.dim, config.seed,
      config.hidden);
  std::size_t replaced = 0;
  if (!config.pretrained.empty()) {
    const fs::path pretrained = RequireInput(config.pretrained, "--pretrained");
    replaced = qamodel::LoadPretrainedVectors(pretrained, init.embeddings);
    inputs["pretrained"] = pretrained;
  }

  qamodel::TrainConfig tc;
  tc.learning_rate = config.learning_rate;
  tc.epochs = config.epochs;
  tc.batch_size = config.batch_size;
  tc.seed = config.seed;
  const qamodel::TrainResult result = qamodel::Train(loaded.examples, init, tc);

  qamodel::PredictOptions po;
  po.max_span_length = config.max_span;
  const double accuracy =
      qamodel::ExactSpanAccuracy(result.params, loaded.examples, po);
  const fs::path out = config.out;
  qamodel::SaveCheckpoint(out / kCheckpointFile, result.params);
  WriteJson(out / "training.json",
            {{"loss_trace", result.loss_trace},
             {"train_accuracy", accuracy},
             {"examples", loaded.examples.size()},
             {"dropped", loaded.dropped.size()},
             {"vocabulary", result.params.embeddings.size()},
             {"pretrained_rows", replaced}});
  WriteManifest(config, inputs, {kCheckpointFile, "training.json"});
  std::cout << "trained " << config.model << " on " << loaded.examples.size()
            << " examples: loss " << result.loss_trace.front() << " -> "
            << result.loss_trace.back() << ", span accuracy " << accuracy
            << "\n";
}

void RunExtract(const RunConfig& config) {
  const fs::path dataset = RequireInput(config.dataset, "--dataset");
  const fs::path checkpoint = RequireInput(config.checkpoint, "--checkpoint");
  const dataio::LoadedDataset loaded = LoadDatasetReporting(dataset);
  const qamodel::ModelParameters params = qamodel::LoadCheckpoint(checkpoint);
  const ExtractionOptions options = ExtractionOptionsFrom(config);
  const std::vector<ExampleExtraction> results =
      ExtractExamples(params, loaded.examples, options);

  std::vector<std::size_t> order(results.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return loaded.examples[a].id < loaded.examples[b].id;
  });

  const std::string model = qamodel::ModelKindName(params.kind);
  std::vector<json> attributions, rationales, controls, gaps;
  std::size_t correct = 0, within_two_percent = 0, degenerate = 0;
  for (std::size_t i : order) {
    const dataio::QAExample& ex = loaded.examples[i];
    const ExampleExtraction& r = results[i];
    for (json& line : AttributionLines(ex, r.attribution)) {
      attributions.push_back(std::move(line));
    }
    rationales.push_back(
        RationaleToJson({r.rationale, model, config.flip, -1}, ex));
    for (std::size_t c = 0; c < r.controls.size(); ++c) {
      controls.push_back(RationaleToJson(
          {r.controls[c], model, config.flip, static_cast<int>(c)}, ex));
    }
    const double rel = r.attribution.RelativeCompletenessGap();
    gaps.push_back({{"id", ex.id},
                    {"f_input", r.attribution.f_input},
                    {"f_baseline", r.attribution.f_baseline},
                    {"gap", r.attribution.completeness_gap},
                    {"relative_gap", rel},
                    {"degenerate", r.attribution.degenerate}});
    if (r.rationale.original_span == ex.answer) ++correct;
    if (rel <= 0.02) ++within_two_percent;
    if (r.attribution.degenerate) ++degenerate;
  }

  const fs::path out = config.out;
  WriteJsonLines(out / kAttributionsFile, attributions);
  WriteJsonLines(out / kRationalesFile, rationales);
  std::vector<std::string> outputs{kAttributionsFile, kRationalesFile};
  if (!controls.empty()) {
    WriteJsonLines(out / kControlsFile, controls);
    outputs.push_back(kControlsFile);
  }
  const double n = static_cast<double>(results.size());
  WriteJson(out / "extraction.json",
            {{"examples", results.size()},
             {"span_accuracy", correct / n},
             {"completeness_within_2pct", within_two_percent / n},
             {"degenerate_attributions", degenerate},
             {"completeness", gaps}});
  outputs.push_back("extraction.json");
  WriteManifest(config, {{"dataset", dataset}, {"checkpoint", checkpoint}},
                outputs);
  std::cout << "extracted rationales for " << results.size()
            << " examples (span accuracy " << correct / n << ")\n";
}

void RunEvaluate(const RunConfig& config) {
  const fs::path dataset = RequireInput(config.dataset, "--dataset");
  const fs::path rationales_path =
      RequireInput(config.rationales, "--rationales");
  const dataio::LoadedDataset loaded = LoadDatasetReporting(dataset);
  const auto index = IndexById(loaded.examples);
  std::map<std::string, fs::path> inputs{{"dataset", dataset},
                                         {"rationales", rationales_path}};

  std::vector<StoredRationale> stored = ReadRationales(rationales_path);
  const fs::path controls_path = rationales_path.parent_path() / kControlsFile;
  if (fs::is_regular_file(controls_path)) {
    for (auto& s : ReadRationales(controls_path)) stored.push_back(std::move(s));
    inputs["controls"] = controls_path;
  }
  for (const auto& s : stored) Lookup(index, s.record.example_id, rationales_path);
  const std::vector<RationaleGroup> groups = GroupRationales(stored);

  json report = json::object();
  std::vector<evaluation::FlipTableRow> flip_rows;
  for (const auto& g : groups) {
    std::vector<rationale::RationaleRecord> records;
    for (const auto& s : g.records) records.push_back(s.record);
    flip_rows.push_back({g.label, evaluation::ComputeFlipFractionStats(records)});
    report["flip_fraction"][g.label] = StatsToJson(flip_rows.back().stats);
  }

  // Per-example comparison of the main ranking against the mean of the
  // random controls.
  std::map<std::string, double> main_count;
  std::map<std::string, std::pair<double, std::size_t>> control_count;
  for (const auto& s : stored) {
    const double removed = static_cast<double>(s.record.indicators.size());
    if (s.control < 0) {
      main_count[s.record.example_id] = removed;
    } else {
      auto& [sum, n] = control_count[s.record.example_id];
      sum += removed;
      ++n;
    }
  }
  if (!control_count.empty()) {
    std::size_t fewer = 0, compared = 0;
    for (const auto& [id, count] : main_count) {
      auto it = control_count.find(id);
      if (it == control_count.end()) continue;
      ++compared;
      if (count < it->second.first / it->second.second) ++fewer;
    }
    report["control_comparison"] = {
        {"compared", compared},
        {"fewer_removals", fewer},
        {"fewer_removals_rate",
         compared == 0 ? 0.0 : static_cast<double>(fewer) / compared}};
  }

  std::string text = "Flip fraction\n" + evaluation::FormatFlipTable(flip_rows);
  std::vector<std::string> outputs;
  if (!config.annotations.empty()) {
    const fs::path annotations =
        RequireInput(config.annotations, "--annotations");
    inputs["annotations"] = annotations;
    std::map<std::string, std::vector<std::size_t>> human;
    for (auto& h : LoadAnnotationsReporting(annotations, loaded.examples)) {
      human[h.example_id] = std::move(h.positions);
    }
    evaluation::StopwordSet stopwords = evaluation::DefaultStopwords();
    if (!config.stopwords.empty()) {
      const fs::path path = RequireInput(config.stopwords, "--stopwords");
      stopwords = evaluation::LoadStopwords(path);
      inputs["stopwords"] = path;
    }

    std::vector<evaluation::OverlapTableRow> overlap_rows;
    for (const auto& g : groups) {
      evaluation::OverlapTableRow row{g.label, std::nullopt, std::nullopt};
      for (const auto mode : ModesFor(config.answer_span)) {
        std::vector<evaluation::OverlapCounts> counts;
        for (const auto& s : g.records) {
          const auto& ex = Lookup(index, s.record.example_id, rationales_path);
          auto h = human.find(ex.id);
          if (h == human.end()) continue;
          std::vector<dataio::TokenSpan> excluded{ex.answer};
          if (config.exclude_span == "union") {
            excluded.push_back(s.record.original_span);
          }
          counts.push_back(evaluation::ComputeOverlap(
              s.record.indicators, h->second, ex.passage, stopwords, mode,
              excluded));
        }
        const std::string mode_name = evaluation::AnswerSpanModeName(mode);
        try {
          const auto metrics = evaluation::AggregateOverlap(counts, mode);
          report["overlap"][g.label][mode_name] = MetricsToJson(metrics);
          (mode == evaluation::AnswerSpanMode::kInclude ? row.include_answer
                                                        : row.exclude_answer) =
              metrics;
        } catch (const ContractError& e) {
          std::cerr << "warning: " << g.label << " (" << mode_name
                    << "): " << e.what() << "\n";
        }
      }
      overlap_rows.push_back(std::move(row));
    }
    const std::string overlap = evaluation::FormatOverlapTable(overlap_rows);
    text += "\nOverlap with human rationales (micro-averaged, %)\n" + overlap;
    WriteText(fs::path(config.out) / "overlap_table.txt", overlap);
    outputs.push_back("overlap_table.txt");
  }

  const fs::path out = config.out;
  WriteText(out / "flip_table.txt", evaluation::FormatFlipTable(flip_rows));
  WriteJson(out / "evaluation.json", report);
  outputs.insert(outputs.begin(), {"flip_table.txt", "evaluation.json"});
  WriteManifest(config, inputs, outputs);
  std::cout << text;
}

void RunReport(const RunConfig& config) {
  const fs::path dataset = RequireInput(config.dataset, "--dataset");
  const fs::path rationales_path =
      RequireInput(config.rationales, "--rationales");
  const dataio::LoadedDataset loaded = LoadDatasetReporting(dataset);
  const auto index = IndexById(loaded.examples);
  std::map<std::string, fs::path> inputs{{"dataset", dataset},
                                         {"rationales", rationales_path}};
  const std::vector<StoredRationale> stored = ReadRationales(rationales_path);

  std::map<std::string, std::vector<std::size_t>> human;
  if (!config.annotations.empty()) {
    const fs::path annotations =
        RequireInput(config.annotations, "--annotations");
    inputs["annotations"] = annotations;
    for (auto& h : LoadAnnotationsReporting(annotations, loaded.examples)) {
      human[h.example_id] = std::move(h.positions);
    }
  }

  std::vector<rationale::RationaleRecord> records;
  std::size_t correct = 0;
  for (const auto& s : stored) {
    records.push_back(s.record);
    const auto& ex = Lookup(index, s.record.example_id, rationales_path);
    if (s.record.original_span == ex.answer) ++correct;
  }
  if (records.empty()) {
    throw ContractError(rationales_path.string() + ": no rationale records");
  }
  const auto stats = evaluation::ComputeFlipFractionStats(records);

  std::ostringstream os;
  os << "Rationale report\n"
     << "model: " << stored.front().model
     << "  ranking: " << stored.front().record.ranking_source
     << "  flip: " << stored.front().flip << "\n"
     << "examples: " << records.size() << "  flipped: " << stats.flipped
     << "  span accuracy: " << static_cast<double>(correct) / records.size()
     << "\n"
     << "flip fraction: mean " << stats.mean << ", variance " << stats.variance
     << "\n";
  const std::size_t limit = std::min(config.report_limit, stored.size());
  for (std::size_t k = 0; k < limit; ++k) {
    const StoredRationale& s = stored[k];
    const auto& ex = Lookup(index, s.record.example_id, rationales_path);
    const auto& span = s.record.original_span;
    os << "\n[" << ex.id << "] " << ex.question.raw << "\n"
       << "  gold answer: " << ex.answer_text << "\n"
       << "  predicted:   " << ex.passage.Slice(span.start, span.end) << "\n"
       << "  flip fraction: " << s.record.flip_fraction
       << (s.record.flipped ? "" : " (no flip)") << "\n"
       << "  rationale: "
       << evaluation::RenderHighlighted(ex.passage, s.record.indicators) << "\n";
    if (auto h = human.find(ex.id); h != human.end()) {
      os << "  human:     "
         << evaluation::RenderHighlighted(ex.passage, h->second) << "\n";
    }
  }
  WriteText(fs::path(config.out) / "report.txt", os.str());
  WriteManifest(config, inputs, {"report.txt"});
  std::cout << os.str();
}

void RunPipeline(const RunConfig& config) {
  const fs::path out = config.out;
  RunConfig stage = config;
  stage.command = "generate";
  RunGenerate(stage);

  stage = config;
  stage.command = "train";
  stage.dataset = (out / kTrainFile).string();
  RunTrain(stage);

  stage = config;
  stage.command = "extract";
  stage.dataset = (out / kTestFile).string();
  stage.checkpoint = (out / kCheckpointFile).string();
  RunExtract(stage);

  stage.command = "evaluate";
  stage.rationales = (out / kRationalesFile).string();
  stage.annotations = (out / kTestAnnotations).string();
  RunEvaluate(stage);

  stage.command = "report";
  RunReport(stage);

  WriteManifest(config, {},
                {"manifest_generate.json", "manifest_train.json",
                 "manifest_extract.json", "manifest_evaluate.json",
                 "manifest_report.json"});
}

void Dispatch(const RunConfig& config) {
  Validate(config);
  fs::create_directories(config.out);
  if (config.command == "generate") return RunGenerate(config);
  if (config.command == "train") return RunTrain(config);
  if (config.command == "extract") return RunExtract(config);
  if (config.command == "evaluate") return RunEvaluate(config);
  if (config.command == "report") return RunReport(config);
  if (config.command == "pipeline") return RunPipeline(config);
  throw ConfigError("unknown command '" + config.command + "'");
}

}  // namespace rcqa::pipeline
