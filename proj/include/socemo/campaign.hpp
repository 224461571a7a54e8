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
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "socemo/bundle.hpp"
#include "socemo/pipeline.hpp"

namespace socemo {

struct CampaignConfig {
  std::string id = "campaign";
  std::uint64_t seed = 0;
  std::vector<std::string> annotators;
  std::size_t n_contexts = 0;  // 0: every context that has records
  std::size_t step3_contexts = 0;
  std::size_t practice_contexts = 0;
  QuestionnaireSpec questionnaire = QuestionnaireSpec::default_spec();
  TagMap tag_map = TagMap::default_map();
  // Mixed into bearer tokens. Tokens are predictable from the seed when
  // this is empty.
  std::string token_salt;

  // Throws InvalidConfig.
  void validate() const;
  static CampaignConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct Campaign {
  std::string id;
  std::uint64_t seed = 0;
  std::vector<std::string> annotators;
  QuestionnaireSpec questionnaire;
  TagMap tag_map;
  std::vector<CampaignContext> contexts;  // practice first, then sampled order
  std::map<std::string, std::string> tokens;  // annotator -> bearer token
  std::string admin_token;

  const CampaignContext* find(std::string_view context_id) const;
  std::optional<std::string> annotator_for_token(std::string_view token) const;

  bool operator==(const Campaign&) const = default;
};

nlohmann::json to_json(const Campaign& c);
Campaign campaign_from_json(const nlohmann::json& j);

// Groups records by sample, builds one deduplicated pool per context
// (reference text from `references`, else the records' gold response),
// samples practice and scored contexts, and assigns annotators: each
// scored context goes to one annotator pair in round-robin order, practice
// contexts go to everyone, and step 3 takes a seeded subset of the scored
// contexts for all annotators. Throws NoRecords on empty input.
Campaign create_campaign(std::span<const PipelineRunRecord> records,
                         const std::map<std::string, std::string>& references,
                         const CampaignConfig& config);

// ---------------------------------------------------------------------------
// Event log

enum class EventKind {
  campaign_created,
  session_opened,
  step1_submitted,
  step2_submitted,
  step3_submitted,
  pool_created,
};

std::string_view to_string(EventKind k);
EventKind parse_event_kind(std::string_view s);

struct Event {
  std::uint64_t seq = 0;
  std::string timestamp;
  EventKind kind = EventKind::session_opened;
  nlohmann::json payload;
};

nlohmann::json to_json(const Event& e);
Event event_from_json(const nlohmann::json& j);

using PairKey = std::pair<std::string, std::string>;                       // (context, annotator)
using RatingKey = std::tuple<std::string, std::string, std::string>;       // + response id

// Campaign state as a left fold over the event log.
struct CampaignState {
  std::optional<Campaign> campaign;
  std::map<std::string, std::string> sessions;  // session id -> annotator
  std::map<PairKey, Step1Judgment> step1;
  std::map<PairKey, Step2Selection> step2;
  std::map<RatingKey, Step3Rating> step3;
  std::map<std::string, std::set<std::string>> step3_pools;
  std::uint64_t last_seq = 0;

  // Throws InvalidBundle on events that do not follow `last_seq` or refer
  // to unknown campaign data.
  void apply(const Event& e);

  Bundle to_bundle() const;
  nlohmann::json to_json() const;
  static CampaignState from_json(const nlohmann::json& j);

  bool operator==(const CampaignState&) const = default;
};

CampaignState replay(std::span<const Event> events, CampaignState base = {});

// ---------------------------------------------------------------------------
// Tasks and submissions

enum class TaskStep { waiting = 0, step1 = 1, step2 = 2, step3 = 3 };

struct TaskRef {
  TaskStep step = TaskStep::waiting;
  std::string context_id;
  std::string response_id;  // step 3 only

  bool operator==(const TaskRef&) const = default;
};

// Next unfinished task: steps 1 then 2 per assigned context in campaign
// order, then step-3 responses in screen order. `waiting` means only
// step-3 work remains and its pools are not created yet; nullopt means
// the annotator is done.
std::optional<TaskRef> next_task_ref(const CampaignState& state, const std::string& annotator);

// Screen order of a context's entries for one annotator.
std::vector<const PoolEntry*> screen_order(const Campaign& campaign, const CampaignContext& ctx,
                                           const std::string& annotator);

// Anonymized task payload. Step-3 responses are pre-tagged when
// `classifier` is given (untagged when it is null or fails). Throws
// NoTasksRemaining when the annotator is done.
nlohmann::json next_task(const CampaignState& state, const std::string& annotator,
                         Classifier* classifier = nullptr);

// Validates a submission body against the state and returns the events it
// produces, without seq or timestamp: the judgment event, plus
// pool_created when it completes a step-3 context's selections. An exact
// repeat of the stored judgment yields no events. Throws ValidationFailed
// or StaleTask.
std::vector<Event> plan_submission(const CampaignState& state, const std::string& annotator,
                                   const nlohmann::json& body);

}  // namespace socemo
