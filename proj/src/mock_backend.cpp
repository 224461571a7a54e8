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

#include "socemo/mock_backend.hpp"

#include <algorithm>
#include <array>

#include "socemo/prompts.hpp"
#include "socemo/text.hpp"

namespace socemo {

namespace {

const std::array<std::vector<std::string>, kLabelCount> kPhrases = {{
    // inform
    {"The shop opens at nine.", "It takes about ten minutes on foot.",
     "My brother lives near the station.", "The report is on your desk."},
    // question
    {"What time does it start?", "Do you want to come along?", "Where did you find it?",
     "Have you been there before?"},
    // directive
    {"Please sit down and wait here.", "Let's take a taxi instead.",
     "Don't forget to bring your ticket.", "Please call the front desk."},
    // commissive
    {"I will call you tomorrow.", "I promise to be there on time.", "I'll take care of it.",
     "I will send it tonight."},
    // neutral
    {},
    // anger
    {"This is outrageous!", "I am so annoyed with them.", "I'm furious about the delay."},
    // disgust
    {"That is disgusting.", "Yuck, the food smells bad.", "That's gross."},
    // fear
    {"I'm scared of the dark road.", "I'm afraid something bad will happen.",
     "I'm terrified of flying."},
    // happiness
    {"That's wonderful news!", "I'm so glad to hear that.", "I'm delighted."},
    // sadness
    {"I feel so sad today.", "What a pity.", "I'm miserable without you."},
    // surprise
    {"Wow, look at that!", "That's unbelievable!", "It was so unexpected!"},
}};

struct Cue {
  Label label;
  std::vector<std::string_view> words;    // whole-word matches
  std::vector<std::string_view> phrases;  // substring matches on normalised text
};

const std::vector<Cue>& cues() {
  static const std::vector<Cue> kCues = {
      {Label::directive, {"please"}, {"let's", "don't forget", "make sure"}},
      {Label::commissive, {}, {"i will", "i'll", "i promise"}},
      {Label::anger, {"outrageous", "annoyed", "furious", "angry"}, {}},
      {Label::disgust, {"disgusting", "yuck", "gross"}, {}},
      {Label::fear, {"scared", "afraid", "terrified"}, {}},
      {Label::happiness, {"wonderful", "glad", "delighted", "happy"}, {}},
      {Label::sadness, {"sad", "pity", "miserable"}, {}},
      {Label::surprise, {"wow", "unbelievable", "unexpected"}, {}},
  };
  return kCues;
}

std::vector<std::string> words_of(const std::string& lower) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : lower) {
    if ((c >= 'a' && c <= 'z') || c == '\'') {
      cur += c;
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

constexpr std::array<Label, 6> kEmotions = {Label::anger,     Label::disgust, Label::fear,
                                            Label::happiness, Label::sadness, Label::surprise};

}  // namespace

const std::vector<std::string>& phrase_bank(Label l) { return kPhrases[index_of(l)]; }

std::string TemplateGenerator::realise(const LabelSequence& labels, Rng& rng) {
  std::string out;
  for (Label l : labels) {
    const auto& bank = phrase_bank(l);
    if (bank.empty()) continue;
    if (!out.empty()) out += ' ';
    out += bank[uniform_index(rng, bank.size())];
  }
  return out;
}

std::vector<std::string> TemplateGenerator::generate(const GenerateRequest& request) {
  const std::string key = format_context(request.context_turns);
  std::vector<std::string> out;
  out.reserve(request.n);
  for (std::size_t i = 0; i < request.n; ++i) {
    Rng rng(mix_seed(seed_, {"template-generator", key, std::to_string(i)}));
    if (request.labels) {
      out.push_back(realise(*request.labels, rng));
      continue;
    }
    LabelSequence labels{kAllLabels[uniform_index(rng, 4)]};
    if (uniform_unit(rng) >= 0.6) labels.push_back(kEmotions[uniform_index(rng, kEmotions.size())]);
    out.push_back(realise(labels, rng));
  }
  return out;
}

Confidences KeywordClassifier::classify(std::string_view text) {
  Confidences c;
  c.fill(0.04);
  const std::string lower = normalize_whitespace(to_lower_ascii(text));
  const auto words = words_of(lower);
  auto has_word = [&](std::string_view w) {
    return std::find(words.begin(), words.end(), w) != words.end();
  };

  if (lower.find('?') != std::string::npos) c[index_of(Label::question)] = 0.92;
  bool any_emotion = false;
  for (const auto& cue : cues()) {
    bool hit = std::any_of(cue.words.begin(), cue.words.end(), has_word) ||
               std::any_of(cue.phrases.begin(), cue.phrases.end(), [&](std::string_view p) {
                 return lower.find(p) != std::string::npos;
               });
    if (!hit) continue;
    c[index_of(cue.label)] = 0.92;
    any_emotion = any_emotion || kind_of(cue.label) == LabelKind::emotion;
  }
  const bool any_act = std::any_of(kAllLabels.begin(), kAllLabels.begin() + 4,
                                   [&](Label l) { return c[index_of(l)] > 0.5; });
  if (!any_act) c[index_of(Label::inform)] = 0.80;
  if (!any_emotion) c[index_of(Label::neutral)] = 0.60;
  return c;
}

std::optional<std::vector<std::string>> MockLabelPredictor::predict_labels(
    const std::vector<DialogueTurn>& context) {
  if (context.empty()) return std::nullopt;
  const std::string key = format_context(context);
  Rng rng(mix_seed(seed_, {"mock-predictor", key}));
  if (uniform_unit(rng) < null_rate_) return std::nullopt;

  KeywordClassifier classifier;
  const auto conf = classifier.classify(context.back().text);
  auto hit = [&](Label l) { return conf[index_of(l)] >= 0.7; };

  Label act = Label::inform;
  if (hit(Label::directive)) act = Label::commissive;
  else if (hit(Label::question)) act = Label::inform;
  else if (hit(Label::commissive)) act = Label::inform;
  std::vector<std::string> out{std::string(to_string(act))};
  for (Label e : kEmotions)
    if (hit(e)) {
      out.emplace_back(to_string(e));
      break;
    }
  return out;
}

std::vector<std::string> PromptedGenerator::generate(const GenerateRequest& request) {
  if (request.labels) {
    return {std::string(trim(complete_(build_pb_prompt(request.context_turns, *request.labels))))};
  }
  if (request.n == 1) {
    return {std::string(trim(complete_(build_nocd_prompt(request.context_turns))))};
  }
  // The prompt already ends with "1: ", so the completion starts inside
  // the first item.
  const auto raw = "1: " + complete_(build_multi_prompt(request.context_turns, request.n));
  const auto parsed = parse_multi_response(raw, request.n);
  std::vector<std::string> out;
  out.reserve(request.n);
  for (const auto& slot : parsed.slots) out.push_back(slot.value_or(""));
  return out;
}

std::optional<std::vector<std::string>> PromptedLabelPredictor::predict_labels(
    const std::vector<DialogueTurn>& context) {
  const auto parsed = parse_label_response(complete_(build_label_prompt(context)));
  if (!parsed.viable) return std::nullopt;
  std::vector<std::string> out;
  for (Label l : parsed.labels) out.emplace_back(to_string(l));
  return out;
}

}  // namespace socemo
