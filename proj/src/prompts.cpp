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

#include "socemo/prompts.hpp"

#include "socemo/error.hpp"
#include "socemo/text.hpp"

namespace socemo {

namespace {

constexpr std::string_view kLabelPromptHead =
    "Predict the sequence of labels associated with the utterance that follows the given "
    "dialogue.\n"
    "We consider the following labels: 'inform', 'question', 'directive', 'commissive', "
    "'neutral', 'anger', 'disgust', 'fear', 'happiness', 'sadness' and 'surprise'. The answer "
    "must be one or a sequence of multiple labels from this list.\n"
    "\n"
    "Here are a few examples,\n"
    "Dialogue: Good morning, sir. Is there a bank near here ?\n"
    "Labels: 'inform'.\n"
    "Dialogue: Is it far ?\n"
    "Labels:'inform'\n"
    "Dialogue: No, It's only about five minutes walk.\n"
    "Labels: 'inform', 'happiness'.\n"
    "\n"
    "What labels are associated with the utterance following this dialogue: \n"
    "Dialogue: ";

constexpr std::string_view kNoCdPromptHead =
    "Generate the response following the given context. \n"
    "\n"
    "For example:\n"
    "A: Do you like some soup? \n"
    "B: Yes, but I don't know what soup you have \n"
    "A: We have beef soup and tomato soup \n"
    "Response: Good. I prefer beef soup .\n"
    "\n"
    "A: Can I take your order now, Madam? \n"
    "B: Yes, what would you recommend? \n"
    "A: I'm happy to recommend the fish, It tastes delicious, and it is today's special. Our "
    "chef is from the coast, and loves seafood. Today's special is actually his favorite dish. "
    "so I'm sure it is a \n"
    "Response: It does sound wonderful, maybe I'll try it .\n"
    "\n"
    "Generate the response following the following dialogue: ";

}  // namespace

std::string format_context(const std::vector<DialogueTurn>& context) {
  std::string out;
  for (std::size_t i = 0; i < context.size(); ++i) {
    if (i) out += ' ';
    out += i % 2 == 0 ? "SPEAKER A: " : "SPEAKER B: ";
    out += context[i].text;
  }
  return out;
}

std::string build_label_prompt(const std::vector<DialogueTurn>& context) {
  return std::string(kLabelPromptHead) + format_context(context);
}

std::string build_nocd_prompt(const std::vector<DialogueTurn>& context) {
  return std::string(kNoCdPromptHead) + format_context(context);
}

std::string build_multi_prompt(const std::vector<DialogueTurn>& context, std::size_t n) {
  if (n == 0) throw InvalidConfig("multi-response prompt needs n >= 1");
  const auto k = std::to_string(n);
  return "Generate " + k + " responses following this dialogue: " + format_context(context) +
         "\nNumber the generated sequences from 1 to " + k + "\nGenerated sequences: \n1: ";
}

std::string build_pb_prompt(const std::vector<DialogueTurn>& context, const LabelSequence& labels) {
  if (labels.empty()) throw InvalidConfig("prompt-based conditioning needs at least one label");
  return "Generate the response following the given context : " + format_context(context) +
         "\nThe tone of the response must be " + join_labels(labels, ", ") + "\nResponse: ";
}

std::size_t ParsedCandidates::parsable_count() const {
  std::size_t c = 0;
  for (const auto& s : slots) c += s.has_value();
  return c;
}

ParsedCandidates parse_multi_response(std::string_view raw, std::size_t n) {
  ParsedCandidates out;
  out.slots.resize(n);
  std::size_t current = 0;  // 1-based marker being filled, 0 = none yet
  std::string buffer;

  auto flush = [&] {
    if (current == 0) return;
    auto t = trim(buffer);
    if (!t.empty()) out.slots[current - 1] = std::string(t);
    buffer.clear();
  };

  for (auto line : split_lines(raw)) {
    auto body = line;
    while (!body.empty() && is_space(body.front())) body.remove_prefix(1);
    std::size_t digits = 0;
    while (digits < body.size() && body[digits] >= '0' && body[digits] <= '9') ++digits;
    if (digits > 0 && digits <= 6 && digits < body.size() && body[digits] == ':') {
      const std::size_t k = std::stoul(std::string(body.substr(0, digits)));
      if (k >= 1 && k <= n && k > current) {
        flush();
        current = k;
        buffer = std::string(body.substr(digits + 1));
        continue;
      }
    }
    if (current != 0) {
      buffer += '\n';
      buffer += line;
    }
  }
  flush();
  return out;
}

}  // namespace socemo
