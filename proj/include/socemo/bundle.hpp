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
#include <vector>

#include "socemo/corpus.hpp"
#include "socemo/protocol.hpp"
#include "socemo/questionnaire.hpp"
#include "socemo/scoring.hpp"
#include "socemo/tagging.hpp"

namespace socemo {

struct CampaignContext {
  std::string id;
  std::vector<DialogueTurn> turns;
  ResponsePool pool;
  bool practice = false;
  std::vector<std::string> step12_annotators;
  bool step3 = false;

  bool operator==(const CampaignContext&) const = default;
};

nlohmann::json to_json(const CampaignContext& c);
CampaignContext campaign_context_from_json(const nlohmann::json& j);

// Annotation bundle: the shareable, producer-revealing export of a
// campaign. JSON lines in a fixed order:
//   header, context* (campaign order), step1* , step2*, step3*, scores?
// Judgment lines are sorted by (context_id, annotator[, response_id]).
// The scores line is recomputed on every write and ignored on read.
struct Bundle {
  std::string campaign_id;
  std::uint64_t seed = 0;
  std::vector<std::string> annotators;
  QuestionnaireSpec questionnaire = QuestionnaireSpec::default_spec();
  TagMap tag_map = TagMap::default_map();
  std::vector<CampaignContext> contexts;
  std::vector<Step1Judgment> step1;
  std::vector<Step2Selection> step2;
  std::vector<Step3Rating> step3;

  AnnotationData annotation_data() const;
  bool operator==(const Bundle&) const = default;
};

// Scores are included only when the bundle holds judgments.
std::string write_bundle(const Bundle& bundle, const ScoreOptions& options = {});
// Throws InvalidBundle with the offending line number.
Bundle read_bundle(std::string_view text);

}  // namespace socemo
