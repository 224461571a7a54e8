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

#include <cstdint>
#include <functional>
#include <string>

#include "socemo/backend.hpp"
#include "socemo/planning.hpp"

namespace socemo {

// Stock sentences that realise each label; the keyword classifier below
// recovers the label from any of them.
const std::vector<std::string>& phrase_bank(Label l);

// Deterministic stand-in for a response generator. Candidate i for a
// context is built from a generator seeded by (seed, context text, i), so
// the pool does not depend on the conditioning mode and the NO-CD single
// response equals candidate 0 of the pool. When the request carries labels
// the candidates realise exactly those labels.
class TemplateGenerator final : public Generator {
 public:
  explicit TemplateGenerator(std::uint64_t seed = 0) : seed_(seed) {}
  std::vector<std::string> generate(const GenerateRequest& request) override;

  // Text realising `labels` (act sentences, then emotion sentences).
  static std::string realise(const LabelSequence& labels, Rng& rng);

 private:
  std::uint64_t seed_;
};

// Lexicon classifier. Matched labels get 0.92; acts default to inform at
// 0.80 when no act cue is present; neutral gets 0.60 when no emotion cue is
// present; everything else 0.04.
class KeywordClassifier final : public Classifier {
 public:
  Confidences classify(std::string_view text) override;
};

// Predicts the next labels from the last context turn with simple
// adjacency rules (question -> inform, directive -> commissive, otherwise
// the same act), carrying over a non-neutral emotion. A fraction
// `null_rate` of contexts (chosen by hash) returns nothing.
class MockLabelPredictor final : public LabelPredictor {
 public:
  explicit MockLabelPredictor(std::uint64_t seed = 0, double null_rate = 0.0)
      : seed_(seed), null_rate_(null_rate) {}
  std::optional<std::vector<std::string>> predict_labels(
      const std::vector<DialogueTurn>& context) override;

 private:
  std::uint64_t seed_;
  double null_rate_;
};

using CompletionFn = std::function<std::string(const std::string& prompt)>;

// Generator over a raw text-completion model: builds the few-shot prompts
// and parses the numbered completion. Unparsable slots come back as empty
// strings, which the pipeline excludes from reranking.
class PromptedGenerator final : public Generator {
 public:
  explicit PromptedGenerator(CompletionFn complete) : complete_(std::move(complete)) {}
  std::vector<std::string> generate(const GenerateRequest& request) override;

 private:
  CompletionFn complete_;
};

// Label predictor over a raw text-completion model using the few-shot
// label prompt and the lenient label parser.
class PromptedLabelPredictor final : public LabelPredictor {
 public:
  explicit PromptedLabelPredictor(CompletionFn complete) : complete_(std::move(complete)) {}
  std::optional<std::vector<std::string>> predict_labels(
      const std::vector<DialogueTurn>& context) override;

 private:
  CompletionFn complete_;
};

}  // namespace socemo
