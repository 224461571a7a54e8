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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "socemo/error.hpp"

namespace socemo {

enum class Axis { logical, emotional, social };

inline constexpr std::array<Axis, 3> kAllAxes = {Axis::logical, Axis::emotional, Axis::social};

std::string_view to_string(Axis a);
Axis parse_axis(std::string_view s);

struct Question {
  std::string id;
  Axis axis = Axis::logical;
  std::string text;
  int min = 1;
  int max = 5;

  bool operator==(const Question&) const = default;

  // Maps [min, max] linearly onto [0, 1].
  double normalize(int value) const {
    return static_cast<double>(value - min) / static_cast<double>(max - min);
  }
};

struct QuestionnaireSpec {
  std::vector<Question> questions;
  std::string fluency_question = "fluency";

  bool operator==(const QuestionnaireSpec&) const = default;

  // Six 5-point questions: usefulness, fluency, style_consistency
  // (logical); emotional_tone_adequacy (emotional);
  // dialogue_strategy_adequacy, role_consistency (social).
  static QuestionnaireSpec default_spec();
  static QuestionnaireSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  // Throws InvalidConfig: ids unique, min < max, every axis non-empty,
  // fluency question present.
  void validate() const;

  const Question* find(std::string_view id) const;

  // Every question answered, no unknown ids, values within bounds.
  std::vector<FieldError> check(const std::map<std::string, int>& ratings) const;

  // Mean normalized value per axis; ratings must pass check().
  std::array<double, 3> axis_scores(const std::map<std::string, int>& ratings) const;
};

}  // namespace socemo
