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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "socemo/corpus.hpp"
#include "socemo/label.hpp"

namespace socemo {

// "SPEAKER A: utt1 SPEAKER B: utt2 SPEAKER A: utt3". Speakers are
// relabelled by position in the window, so the first turn is always A.
std::string format_context(const std::vector<DialogueTurn>& context);

// Few-shot next-label prompt; ends with "Dialogue: " + formatted context.
std::string build_label_prompt(const std::vector<DialogueTurn>& context);

// Single-response (unconditioned) few-shot prompt.
std::string build_nocd_prompt(const std::vector<DialogueTurn>& context);

// Asks for n numbered responses; ends with "1: " so the completion
// continues the first item.
std::string build_multi_prompt(const std::vector<DialogueTurn>& context, std::size_t n);

// Prompt-based conditioning on an expected label sequence. Throws
// InvalidConfig on an empty sequence.
std::string build_pb_prompt(const std::vector<DialogueTurn>& context, const LabelSequence& labels);

struct ParsedCandidates {
  // slots[k] holds the text of item k+1, or nothing when the marker was
  // missing or its text blank.
  std::vector<std::optional<std::string>> slots;

  std::size_t parsable_count() const;
  bool unparsable() const { return parsable_count() == 0; }
};

// Splits a numbered completion on line-initial "k:" markers, 1 <= k <= n,
// in increasing order. Text before the first marker and markers out of
// order or out of range are treated as continuation text.
ParsedCandidates parse_multi_response(std::string_view raw, std::size_t n);

}  // namespace socemo
