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

#include "socemo/questionnaire.hpp"

#include <set>

namespace socemo {

std::string_view to_string(Axis a) {
  switch (a) {
    case Axis::logical: return "logical";
    case Axis::emotional: return "emotional";
    case Axis::social: return "social";
  }
  return "?";
}

Axis parse_axis(std::string_view s) {
  for (Axis a : kAllAxes)
    if (to_string(a) == s) return a;
  throw InvalidConfig("unknown axis '" + std::string(s) + "'");
}

QuestionnaireSpec QuestionnaireSpec::default_spec() {
  QuestionnaireSpec q;
  q.questions = {
      {"usefulness", Axis::logical, "Does the response move the conversation forward in a useful way?"},
      {"fluency", Axis::logical, "Is the response fluent and grammatical?"},
      {"style_consistency", Axis::logical, "Does the response match the register of the dialogue?"},
      {"emotional_tone_adequacy", Axis::emotional, "Is the emotional tone appropriate to the context?"},
      {"dialogue_strategy_adequacy", Axis::social, "Is the dialogue act an appropriate move here?"},
      {"role_consistency", Axis::social, "Does the speaker stay consistent with their role?"},
  };
  return q;
}

QuestionnaireSpec QuestionnaireSpec::from_json(const nlohmann::json& j) {
  QuestionnaireSpec q;
  try {
    for (const auto& item : j.at("questions")) {
      Question question;
      question.id = item.at("id").get<std::string>();
      question.axis = parse_axis(item.at("axis").get<std::string>());
      question.text = item.value("text", "");
      question.min = item.value("min", 1);
      question.max = item.value("max", 5);
      q.questions.push_back(std::move(question));
    }
    q.fluency_question = j.value("fluency_question", "fluency");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string("questionnaire: ") + e.what());
  }
  q.validate();
  return q;
}

nlohmann::json QuestionnaireSpec::to_json() const {
  nlohmann::json qs = nlohmann::json::array();
  for (const auto& q : questions)
    qs.push_back({{"id", q.id},
                  {"axis", std::string(socemo::to_string(q.axis))},
                  {"text", q.text},
                  {"min", q.min},
                  {"max", q.max}});
  return {{"version", "v1"}, {"fluency_question", fluency_question}, {"questions", qs}};
}

void QuestionnaireSpec::validate() const {
  std::set<std::string> ids;
  std::set<Axis> axes;
  for (const auto& q : questions) {
    if (q.id.empty()) throw InvalidConfig("question with empty id");
    if (!ids.insert(q.id).second) throw InvalidConfig("duplicate question '" + q.id + "'");
    if (q.min >= q.max) throw InvalidConfig("question '" + q.id + "': min must be below max");
    axes.insert(q.axis);
  }
  for (Axis a : kAllAxes)
    if (!axes.count(a))
      throw InvalidConfig("axis " + std::string(socemo::to_string(a)) + " has no questions");
  if (!ids.count(fluency_question))
    throw InvalidConfig("fluency question '" + fluency_question + "' not defined");
}

const Question* QuestionnaireSpec::find(std::string_view id) const {
  for (const auto& q : questions)
    if (q.id == id) return &q;
  return nullptr;
}

std::vector<FieldError> QuestionnaireSpec::check(const std::map<std::string, int>& ratings) const {
  std::vector<FieldError> errs;
  for (const auto& q : questions) {
    auto it = ratings.find(q.id);
    if (it == ratings.end()) {
      errs.push_back({"ratings." + q.id, "missing"});
    } else if (it->second < q.min || it->second > q.max) {
      errs.push_back({"ratings." + q.id, "value " + std::to_string(it->second) + " outside [" +
                                             std::to_string(q.min) + ", " +
                                             std::to_string(q.max) + "]"});
    }
  }
  for (const auto& [id, _] : ratings)
    if (!find(id)) errs.push_back({"ratings." + id, "unknown question"});
  return errs;
}

std::array<double, 3> QuestionnaireSpec::axis_scores(const std::map<std::string, int>& ratings) const {
  std::array<double, 3> sum{};
  std::array<int, 3> count{};
  for (const auto& q : questions) {
    auto i = static_cast<std::size_t>(q.axis);
    sum[i] += q.normalize(ratings.at(q.id));
    ++count[i];
  }
  for (std::size_t i = 0; i < 3; ++i) sum[i] /= count[i];
  return sum;
}

}  // namespace socemo
