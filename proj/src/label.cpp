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

#include "socemo/label.hpp"

#include "socemo/error.hpp"

namespace socemo {

namespace {
constexpr std::array<std::string_view, kLabelCount> kNames = {
    "inform",  "question", "directive", "commissive", "neutral", "anger",
    "disgust", "fear",     "happiness", "sadness",    "surprise",
};
}  // namespace

std::string_view to_string(Label l) { return kNames[index_of(l)]; }

std::string_view to_string(LabelKind k) {
  return k == LabelKind::act ? "act" : "emotion";
}

std::optional<Label> label_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (kNames[i] == name) return kAllLabels[i];
  return std::nullopt;
}

Label parse_label(std::string_view name) {
  if (auto l = label_from_string(name)) return *l;
  throw UnknownLabel("unknown label '" + std::string(name) + "'");
}

std::string join_labels(const LabelSequence& seq, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out += sep;
    out += to_string(seq[i]);
  }
  return out;
}

}  // namespace socemo
