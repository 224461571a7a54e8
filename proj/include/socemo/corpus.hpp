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
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "socemo/label.hpp"

namespace socemo {

enum class Speaker : std::uint8_t { A, B };

std::string_view to_string(Speaker s);
Speaker parse_speaker(std::string_view s);

struct DialogueTurn {
  Speaker speaker = Speaker::A;
  std::string text;
  Label act = Label::inform;
  Label emotion = Label::neutral;

  bool operator==(const DialogueTurn&) const = default;
};

struct Conversation {
  std::string id;
  std::vector<DialogueTurn> turns;

  bool operator==(const Conversation&) const = default;
};

struct ContextSample {
  std::string sample_id;  // "<conversation id>#<target turn index>"
  std::string conversation_id;
  std::vector<DialogueTurn> context;
  std::optional<LabelSequence> gold_labels;
  std::string gold_response;

  bool operator==(const ContextSample&) const = default;
};

struct CorpusSplit {
  std::string name;
  std::vector<ContextSample> samples;
};

// Integer code -> label tables for the act and emotion streams.
struct CodeTable {
  std::map<int, Label> acts;
  std::map<int, Label> emotions;

  // acts 1..4 -> inform, question, directive, commissive;
  // emotions 0..6 -> neutral, anger, disgust, fear, happiness, sadness, surprise.
  static CodeTable daily_dialog();
  static CodeTable from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct ParseOptions {
  CodeTable codes = CodeTable::daily_dialog();
  std::string id_prefix;  // conversation ids are id_prefix + 0-based line index
};

// Parses three parallel line-oriented streams (utterances separated by
// `__eou__`, space-separated act codes, space-separated emotion codes).
// Utterances are trimmed; internal spacing is kept byte-for-byte. Speakers
// alternate A, B, A, ... within a conversation.
std::vector<Conversation> parse_corpus(std::string_view dialogues,
                                       std::string_view acts,
                                       std::string_view emotions,
                                       const ParseOptions& options = {});

// Inverse of parse_corpus for one conversation: {dialogue line, acts line,
// emotions line}, without trailing newlines.
std::array<std::string, 3> serialize_conversation(const Conversation& c,
                                                  const CodeTable& codes = CodeTable::daily_dialog());

// Throws MalformedCorpus when speakers do not alternate A, B, ..., a turn
// text is blank, or act/emotion kinds are wrong.
void validate_conversation(const Conversation& c);

// [act] when the emotion is neutral, else [act, emotion].
LabelSequence turn_labels(const DialogueTurn& turn, bool suppress_neutral = true);

struct SampleOptions {
  std::size_t window = 3;
  bool suppress_neutral = true;
  std::string split_name = "test";
};

// Sliding window: every run of `window` consecutive turns followed by a
// next turn yields one sample. Conversations with <= window turns yield none.
CorpusSplit build_samples(const std::vector<Conversation>& conversations,
                          const SampleOptions& options = {});

struct CorpusStats {
  std::size_t n_samples = 0;
  double mean_length = 0.0;
  std::array<std::size_t, kLabelCount> label_frequency{};
};

// Throws EmptySplit. Samples without gold labels are skipped; a split with
// no labelled samples is empty.
CorpusStats corpus_stats(const CorpusSplit& split);

nlohmann::json to_json(const DialogueTurn& t);
DialogueTurn turn_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ContextSample& s);
ContextSample sample_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CorpusStats& s);

// JSON-lines sample files: one ContextSample per line.
std::string write_samples_jsonl(const CorpusSplit& split);
CorpusSplit read_samples_jsonl(std::string_view text, std::string split_name = "test");

}  // namespace socemo
