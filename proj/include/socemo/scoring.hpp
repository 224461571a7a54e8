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

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "socemo/protocol.hpp"
#include "socemo/questionnaire.hpp"

namespace socemo {

using PoolIndex = std::map<std::string, ResponsePool>;  // context id -> pool

enum class Normalization {
  per_annotator,  // filter_i / N_i with N_i = contexts annotator i judged, averaged
  global,         // 1/k * sum_i filter_i / N
};

std::string_view to_string(Normalization n);
Normalization parse_normalization(std::string_view s);

struct ScoreOptions {
  Normalization normalization = Normalization::per_annotator;
  // N for global normalization; 0 uses the number of judged contexts.
  std::size_t n_contexts = 0;
  // Raise MissingRating when a pooled response has no step-3 rating
  // instead of counting it as 0.
  bool strict = false;
};

// Percentage of contexts in which the entry holding each key was kept.
// Denominators come from step-1 judgments. Throws NoJudgments on empty
// input and InvalidBundle when a judgment has no pool or is duplicated.
std::map<ModelKey, double> score_filter(std::span<const Step1Judgment> judgments,
                                        const PoolIndex& pools, std::span<const ModelKey> keys,
                                        const ScoreOptions& options = {});

// As score_filter with membership in the annotator's top-3. `judgments`
// supplies the per-annotator denominators so that top3 <= filter holds.
std::map<ModelKey, double> score_top3(std::span<const Step2Selection> selections,
                                      std::span<const Step1Judgment> judgments,
                                      const PoolIndex& pools, std::span<const ModelKey> keys,
                                      const ScoreOptions& options = {});

struct Step3Scores {
  double socemo = 0.0;
  std::optional<double> logical;
  std::optional<double> emotional;
  std::optional<double> social;
  double weighted_fluency = 0.0;
  std::size_t rated_instances = 0;
};

// `step3_pools` maps each step-3 context to its pooled response ids; N is
// its size and k the number of annotators. Each rated instance scores the
// mean of its three axis scores; socemo sums those over annotators and
// contexts where the key's entry is pooled and divides by N*k.
std::map<ModelKey, Step3Scores> score_step3(
    std::span<const Step3Rating> ratings,
    const std::map<std::string, std::set<std::string>>& step3_pools, const PoolIndex& pools,
    const QuestionnaireSpec& questionnaire, std::span<const std::string> annotators,
    std::span<const ModelKey> keys, const ScoreOptions& options = {});

struct PairAgreement {
  std::string a;
  std::string b;
  std::size_t shared_contexts = 0;
  std::optional<double> alpha;  // absent when undefined for this pair
  double list_jaccard = 0.0;
};

struct AgreementReport {
  std::vector<PairAgreement> pairs;
  std::optional<double> mean_alpha;
  double mean_jaccard = 0.0;
};

// Kept-sets compared per annotator pair over their shared contexts with
// Jaccard distance. Perfect observed agreement reports alpha 1 even when
// the expected disagreement is zero. Throws InsufficientData when no pair
// shares a context.
AgreementReport agreement_report(std::span<const Step1Judgment> judgments);

nlohmann::json to_json(const AgreementReport& r);
std::string format_agreement_table(const AgreementReport& r);

// Everything the scorer needs from a campaign, independent of storage.
struct AnnotationData {
  PoolIndex pools;
  std::set<std::string> practice;          // excluded from all scores
  std::vector<std::string> step3_contexts;
  std::vector<std::string> annotators;
  QuestionnaireSpec questionnaire = QuestionnaireSpec::default_spec();
  std::vector<Step1Judgment> step1;
  std::vector<Step2Selection> step2;
  std::vector<Step3Rating> step3;

  bool has_judgments() const { return !step1.empty() || !step2.empty() || !step3.empty(); }
};

// Step-3 pool of each scored step-3 context: the union of its top-3s.
std::map<std::string, std::set<std::string>> step3_pools(const AnnotationData& data);

struct KeyScores {
  std::optional<double> filter;
  std::optional<double> top3;
  std::optional<double> socemo;
  std::optional<double> logical;
  std::optional<double> emotional;
  std::optional<double> social;
  std::optional<double> weighted_fluency;
};

struct ScoreReport {
  Normalization normalization = Normalization::per_annotator;
  std::size_t step12_contexts = 0;
  std::size_t step3_contexts = 0;
  std::size_t annotators = 0;
  std::vector<std::pair<ModelKey, KeyScores>> rows;  // display order

  const KeyScores* find(const ModelKey& key) const;
};

// Scores every key found in the non-practice pools. Columns without data
// (no step-1, step-2, or step-3 judgments yet) are absent.
ScoreReport score_campaign(const AnnotationData& data, const ScoreOptions& options = {});

nlohmann::json to_json(const ScoreReport& r);
// Fixed-width table, one decimal, "NA" for absent values.
std::string format_score_table(const ScoreReport& r);

}  // namespace socemo
