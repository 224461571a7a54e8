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

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "socemo/backend.hpp"
#include "socemo/corpus.hpp"
#include "socemo/label.hpp"
#include "socemo/metrics.hpp"
#include "socemo/rng.hpp"

namespace socemo {

enum class PlannerKind { remote, random, oracle };

std::string_view to_string(PlannerKind k);
PlannerKind parse_planner_kind(std::string_view s);

struct PlannedSequence {
  LabelSequence labels;
  PlannerKind source = PlannerKind::remote;
  bool viable = true;  // false only for unparsable remote output

  bool operator==(const PlannedSequence&) const = default;
};

nlohmann::json to_json(const PlannedSequence& p);
PlannedSequence planned_from_json(const nlohmann::json& j);

// Probability of drawing two labels; gives a mean length of 1.20.
inline constexpr double kRandomTwoLabelProbability = 0.20;

// k in {1, 2} with P(k = 2) = p_two, then k distinct labels drawn uniformly
// without replacement, in draw order.
PlannedSequence plan_random(Rng& rng, double p_two = kRandomTwoLabelProbability);

// Gold labels verbatim. Throws MissingGold.
PlannedSequence plan_oracle(const ContextSample& sample);

struct LabelParseOptions {
  // Strict mode accepts only "Labels: 'a', 'b'" (optional trailing period).
  bool strict = false;
};

// Never throws. Quoted label names win over bare words; without quotes,
// every whole word that names a label is taken. Matching is
// case-insensitive, unknown tokens are dropped, duplicates keep their first
// occurrence. "None" or nothing recognisable gives an empty, non-viable
// sequence.
PlannedSequence parse_label_response(std::string_view raw, const LabelParseOptions& options = {});

// Normalises a remote predictor's label list the same way.
PlannedSequence planned_from_names(const std::optional<std::vector<std::string>>& names);

class Planner {
 public:
  virtual ~Planner() = default;
  virtual PlannedSequence plan(const ContextSample& sample) = 0;
  virtual PlannerKind kind() const = 0;
  // Whether predictions are ordered sequences worth an NLS score.
  virtual bool sequence_aware() const { return true; }
};

// Per-sample generator derived from (seed, sample id), so results do not
// depend on evaluation order or thread count.
class RandomPlanner final : public Planner {
 public:
  explicit RandomPlanner(std::uint64_t seed, double p_two = kRandomTwoLabelProbability)
      : seed_(seed), p_two_(p_two) {}
  PlannedSequence plan(const ContextSample& sample) override;
  PlannerKind kind() const override { return PlannerKind::random; }

 private:
  std::uint64_t seed_;
  double p_two_;
};

class OraclePlanner final : public Planner {
 public:
  PlannedSequence plan(const ContextSample& sample) override { return plan_oracle(sample); }
  PlannerKind kind() const override { return PlannerKind::oracle; }
};

class RemotePlanner final : public Planner {
 public:
  explicit RemotePlanner(LabelPredictor& predictor, bool sequence_aware = true)
      : predictor_(predictor), sequence_aware_(sequence_aware) {}
  PlannedSequence plan(const ContextSample& sample) override;
  PlannerKind kind() const override { return PlannerKind::remote; }
  bool sequence_aware() const override { return sequence_aware_; }

 private:
  LabelPredictor& predictor_;
  bool sequence_aware_;
};

// Runs the planner on every sample and scores it against the gold labels:
// sample Jaccard, P/R/F1 (all averagings), mean NLS when the planner is
// sequence-aware, and mean predicted length. Non-viable plans count as
// empty predictions. Errors are rethrown with the sample index prefixed.
MetricReport evaluate_planner(Planner& planner, const CorpusSplit& split);

}  // namespace socemo
