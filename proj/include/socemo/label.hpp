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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace socemo {

// The socio-emotional strategy alphabet: four dialogue acts followed by
// the seven emotions. Enumerator order is the canonical order used when a
// label set has to be turned into a sequence (acts first).
enum class Label : std::uint8_t {
  inform,
  question,
  directive,
  commissive,
  neutral,
  anger,
  disgust,
  fear,
  happiness,
  sadness,
  surprise,
};

enum class LabelKind : std::uint8_t { act, emotion };

inline constexpr std::size_t kLabelCount = 11;

inline constexpr std::array<Label, kLabelCount> kAllLabels = {
    Label::inform,  Label::question,  Label::directive, Label::commissive,
    Label::neutral, Label::anger,     Label::disgust,   Label::fear,
    Label::happiness, Label::sadness, Label::surprise,
};

constexpr std::size_t index_of(Label l) { return static_cast<std::size_t>(l); }

constexpr LabelKind kind_of(Label l) {
  return index_of(l) < 4 ? LabelKind::act : LabelKind::emotion;
}

std::string_view to_string(Label l);
std::string_view to_string(LabelKind k);

// Exact, lowercase name lookup.
std::optional<Label> label_from_string(std::string_view name);
// Throws UnknownLabel.
Label parse_label(std::string_view name);

using LabelSequence = std::vector<Label>;

std::string join_labels(const LabelSequence& seq, std::string_view sep = ", ");

// Unordered set of labels backed by a bitmask.
class LabelSet {
 public:
  LabelSet() = default;
  LabelSet(std::initializer_list<Label> labels) {
    for (Label l : labels) insert(l);
  }
  static LabelSet from_sequence(const LabelSequence& seq) {
    LabelSet s;
    for (Label l : seq) s.insert(l);
    return s;
  }

  void insert(Label l) { bits_ |= bit(l); }
  void erase(Label l) { bits_ &= static_cast<std::uint16_t>(~bit(l)); }
  bool contains(Label l) const { return (bits_ & bit(l)) != 0; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const { return static_cast<std::size_t>(__builtin_popcount(bits_)); }

  LabelSet operator&(LabelSet o) const { return LabelSet(bits_ & o.bits_); }
  LabelSet operator|(LabelSet o) const { return LabelSet(bits_ | o.bits_); }
  bool operator==(const LabelSet&) const = default;

  // Acts first, then emotions, each in enumerator order.
  LabelSequence canonical_sequence() const {
    LabelSequence out;
    for (Label l : kAllLabels)
      if (contains(l)) out.push_back(l);
    return out;
  }

  std::uint16_t mask() const { return bits_; }

 private:
  explicit LabelSet(unsigned bits) : bits_(static_cast<std::uint16_t>(bits)) {}
  static std::uint16_t bit(Label l) {
    return static_cast<std::uint16_t>(1u << index_of(l));
  }

  std::uint16_t bits_ = 0;
};

}  // namespace socemo
