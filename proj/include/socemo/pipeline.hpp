/*
 * Copyright 2026 The socemo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "socemo/backend.hpp"
#include "socemo/corpus.hpp"
#include "socemo/planning.hpp"

namespace socemo {

enum class Approach { reranking, prompt_based };

std::string_view to_string(Approach a);
Approach parse_approach(std::string_view s);

// Where the NO-CD response comes from: a separate single-response
// generation, or candidate 0 of the N-candidate pool.
enum class NoCdSource { separate, pool };

struct GenerationConfig {
  std::string model = "mock";
  std::size_t n_candidates = 10;
  std::size_t window = 3;
  double classifier_threshold = 0.7;
  ConditioningMode mode = ConditioningMode::no_cd;
  Approach approach = Approach::reranking;
  NoCdSource nocd_source = NoCdSource::separate;
  // Drop "neutral" when turning classifier output into a sequence, as gold
  // sequences never contain it.
  bool suppress_neutral = true;

  // Throws InvalidConfig.
  void validate() const;
};

struct Classification {
  LabelSet labels;
  Confidences confidences{};
  bool low_confidence = false;
};

// Keeps every label with confidence >= threshold. When none passes, keeps
// the single arg-max label (lowest enumerator on ties) and flags the
// result low-confidence.
Classification classify_labels(const Confidences& confidences, double threshold);

struct Candidate {
  std::size_t index = 0;  // generation order
  std::string text;
  bool parsable = true;
  LabelSet labels;
  Confidences confidences{};
  bool low_confidence = false;
  std::optional<double> nls;

  bool operator==(const Candidate&) const = default;
};

// Act-first sequence used to compare a classified set with a plan.
LabelSequence rerank_sequence(LabelSet labels, bool suppress_neutral = true);

// Scores every parsable candidate by NLS against `expected` (filling
// `nls`) and returns the position of the best one; ties go to the lowest
// position. Throws EmptyCandidateList when nothing is parsable.
std::size_t rerank(std::vector<Candidate>& candidates, const LabelSequence& expected,
                   bool suppress_neutral = true);

enum class RunStatus { ok, failed, unparsable };
std::string_view to_string(RunStatus s);

struct PipelineRunRecord {
  std::string sample_id;
  std::string conversation_id;
  std::vector<DialogueTurn> context;
  std::optional<LabelSequence> gold_labels;
  std::string gold_response;

  std::string model;
  ConditioningMode mode = ConditioningMode::no_cd;
  Approach approach = Approach::reranking;

  std::optional<PlannedSequence> planned;
  std::vector<Candidate> candidates;
  std::optional<std::size_t> selected_index;
  std::string selected_text;

  RunStatus status = RunStatus::ok;
  std::string cause;
  // CD-PRED run whose plan was not viable; selection fell back to NO-CD.
  bool fallback_nocd = false;

  bool operator==(const PipelineRunRecord&) const = default;
};

nlohmann::json to_json(const PipelineRunRecord& r);
PipelineRunRecord record_from_json(const nlohmann::json& j);
std::string write_records_jsonl(const std::vector<PipelineRunRecord>& records);
std::vector<PipelineRunRecord> read_records_jsonl(std::string_view text);

struct Backends {
  Generator* generator = nullptr;
  Classifier* classifier = nullptr;
  Planner* planner = nullptr;  // required for CD-PRED
};

// One context through the pipeline:
//   NO-CD    one response (separate generation or pool[0]), index 0
//   CD-GT    expected = gold labels
//   CD-PRED  expected = planner output; a non-viable plan falls back to NO-CD
// CD modes classify and rerank the pool (reranking approach), or generate
// one response conditioned on the labels (prompt-based approach). Backend
// failures do not throw; they produce a record with status failed.
PipelineRunRecord run_context(const ContextSample& sample, const GenerationConfig& config,
                              const Backends& backends);

// Runs every sample with at most `jobs` contexts in flight. Records come
// back in sample order regardless of completion order.
std::vector<PipelineRunRecord> run_split(const CorpusSplit& split, const GenerationConfig& config,
                                         const Backends& backends, std::size_t jobs = 1);

}  // namespace socemo
