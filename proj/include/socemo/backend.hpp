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

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "socemo/corpus.hpp"
#include "socemo/label.hpp"

namespace socemo {

enum class ConditioningMode { no_cd, cd_pred, cd_gt };

// "nocd", "cd-pred", "cd-gt"
std::string_view to_string(ConditioningMode m);
// Accepts the canonical spelling plus NO_CD / CD_PRED / CD_GT and no-cd.
ConditioningMode parse_mode(std::string_view s);

using Confidences = std::array<double, kLabelCount>;

struct GenerateRequest {
  std::vector<DialogueTurn> context_turns;
  std::size_t n = 1;
  ConditioningMode mode = ConditioningMode::no_cd;
  std::optional<LabelSequence> labels;  // prompt-based conditioning only
};

// Backends must tolerate concurrent calls from several worker threads.
class Generator {
 public:
  virtual ~Generator() = default;
  virtual std::vector<std::string> generate(const GenerateRequest& request) = 0;
};

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual Confidences classify(std::string_view text) = 0;
};

class LabelPredictor {
 public:
  virtual ~LabelPredictor() = default;
  // Raw label names as produced by the model, or nullopt when it produced
  // nothing usable.
  virtual std::optional<std::vector<std::string>> predict_labels(
      const std::vector<DialogueTurn>& context) = 0;
};

// Wire format (v1). Context turns carry only speaker and text.
nlohmann::json wire_context(const std::vector<DialogueTurn>& turns);
std::vector<DialogueTurn> context_from_wire(const nlohmann::json& j);

nlohmann::json to_wire(const GenerateRequest& r);
GenerateRequest generate_request_from_wire(const nlohmann::json& j);

nlohmann::json confidences_to_wire(const Confidences& c);
// Unknown label names raise BackendProtocolError; labels not present are 0.
Confidences confidences_from_wire(const nlohmann::json& j);

}  // namespace socemo
