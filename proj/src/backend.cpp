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

#include "socemo/backend.hpp"

#include "socemo/error.hpp"

namespace socemo {

std::string_view to_string(ConditioningMode m) {
  switch (m) {
    case ConditioningMode::no_cd: return "nocd";
    case ConditioningMode::cd_pred: return "cd-pred";
    case ConditioningMode::cd_gt: return "cd-gt";
  }
  return "nocd";
}

ConditioningMode parse_mode(std::string_view s) {
  if (s == "nocd" || s == "no-cd" || s == "NO_CD") return ConditioningMode::no_cd;
  if (s == "cd-pred" || s == "CD_PRED") return ConditioningMode::cd_pred;
  if (s == "cd-gt" || s == "CD_GT") return ConditioningMode::cd_gt;
  throw InvalidConfig("unknown conditioning mode '" + std::string(s) + "'");
}

nlohmann::json wire_context(const std::vector<DialogueTurn>& turns) {
  auto arr = nlohmann::json::array();
  for (const auto& t : turns) arr.push_back({{"speaker", to_string(t.speaker)}, {"text", t.text}});
  return arr;
}

std::vector<DialogueTurn> context_from_wire(const nlohmann::json& j) {
  std::vector<DialogueTurn> out;
  for (const auto& t : j) {
    DialogueTurn turn;
    turn.speaker = parse_speaker(t.at("speaker").get<std::string>());
    turn.text = t.at("text").get<std::string>();
    out.push_back(std::move(turn));
  }
  return out;
}

nlohmann::json to_wire(const GenerateRequest& r) {
  nlohmann::json j{{"context_turns", wire_context(r.context_turns)},
                   {"n", r.n},
                   {"mode", to_string(r.mode)}};
  if (r.labels) {
    j["labels"] = nlohmann::json::array();
    for (Label l : *r.labels) j["labels"].push_back(to_string(l));
  }
  return j;
}

GenerateRequest generate_request_from_wire(const nlohmann::json& j) {
  GenerateRequest r;
  r.context_turns = context_from_wire(j.at("context_turns"));
  r.n = j.at("n").get<std::size_t>();
  r.mode = parse_mode(j.value("mode", "nocd"));
  if (j.contains("labels") && !j["labels"].is_null()) {
    LabelSequence seq;
    for (const auto& l : j["labels"]) seq.push_back(parse_label(l.get<std::string>()));
    r.labels = std::move(seq);
  }
  return r;
}

nlohmann::json confidences_to_wire(const Confidences& c) {
  nlohmann::json j = nlohmann::json::object();
  for (Label l : kAllLabels) j[std::string(to_string(l))] = c[index_of(l)];
  return j;
}

Confidences confidences_from_wire(const nlohmann::json& j) {
  Confidences c{};
  if (!j.is_object()) throw BackendProtocolError("confidences must be an object");
  for (const auto& [name, score] : j.items()) {
    auto l = label_from_string(name);
    if (!l) throw BackendProtocolError("unknown label '" + name + "' in confidences");
    if (!score.is_number()) throw BackendProtocolError("non-numeric confidence for " + name);
    c[index_of(*l)] = score.get<double>();
  }
  return c;
}

}  // namespace socemo
