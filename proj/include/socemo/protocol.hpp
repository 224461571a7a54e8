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

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "socemo/backend.hpp"
#include "socemo/pipeline.hpp"

namespace socemo {

// Identity of a system under evaluation. The dataset reference carries
// the reserved key {model "reference", no mode, approach "reference"}.
struct ModelKey {
  std::string model;
  std::optional<ConditioningMode> mode;
  std::string approach = "reranking";  // reranking | prompt-based | reference

  auto operator<=>(const ModelKey&) const = default;
  bool operator==(const ModelKey&) const = default;

  static ModelKey reference();
  bool is_reference() const { return approach == "reference"; }
  // Human-readable row label, e.g. "bart-base CD-GT" or "beluga PB CD-pred".
  std::string label() const;
};

nlohmann::json to_json(const ModelKey& k);
ModelKey model_key_from_json(const nlohmann::json& j);
ModelKey key_of(const PipelineRunRecord& r);

// Display order: by model, approach, then NO-CD, CD-pred, CD-GT; the
// reference sorts last.
bool display_before(const ModelKey& a, const ModelKey& b);

struct PoolEntry {
  std::string response_id;
  std::string text;
  std::set<ModelKey> producers;

  bool operator==(const PoolEntry&) const = default;
};

// Deduplicated responses for one context. Entries are ordered by
// response_id, which is a salted hash of the text and so carries no
// information about producers or input order.
struct ResponsePool {
  std::string context_id;
  std::vector<PoolEntry> entries;
  std::set<ModelKey> absent;  // keys whose run produced no response

  const PoolEntry* entry_of(const ModelKey& key) const;
  const PoolEntry* find(std::string_view response_id) const;

  bool operator==(const ResponsePool&) const = default;
};

nlohmann::json to_json(const ResponsePool& p);
ResponsePool pool_from_json(const nlohmann::json& j);

// Text identity used for dedup: trimmed, whitespace runs collapsed,
// case-sensitive.
std::string dedup_text(std::string_view text);
std::string response_id_for(std::string_view context_id, std::string_view normalized_text);

struct PoolInput {
  ModelKey key;
  std::optional<std::string> text;  // nullopt: no response for this key
};

// One entry per distinct text; producers is the union of the keys whose
// text matched. Throws NoRecords on empty input.
ResponsePool dedup_pool(std::string context_id, std::span<const PoolInput> inputs);

// Records must share one sample_id. The reference response defaults to the
// records' gold response.
ResponsePool dedup_pool(std::span<const PipelineRunRecord> records,
                        std::optional<std::string> reference = std::nullopt);

// Presentation order for one screen: a permutation of entry indices that
// depends only on (pool, seed).
std::vector<std::size_t> shuffle_pool(const ResponsePool& pool, std::uint64_t seed);

std::uint64_t screen_seed(std::uint64_t campaign_seed, std::string_view context_id,
                          std::string_view annotator);

// ---------------------------------------------------------------------------
// Judgments

struct Step1Judgment {
  std::string annotator;
  std::string context_id;
  std::map<std::string, bool> kept;  // response_id -> kept
  std::map<std::string, bool> consistent;
  std::map<std::string, bool> specific;

  std::set<std::string> kept_set() const;
  bool operator==(const Step1Judgment&) const = default;
};

struct Step2Selection {
  std::string annotator;
  std::string context_id;
  std::vector<std::string> top3;

  bool operator==(const Step2Selection&) const = default;
};

struct Step3Rating {
  std::string annotator;
  std::string context_id;
  std::string response_id;
  std::string tagged_text;
  std::map<std::string, int> ratings;  // question id -> ordinal value

  bool operator==(const Step3Rating&) const = default;
};

nlohmann::json to_json(const Step1Judgment& j);
nlohmann::json to_json(const Step2Selection& s);
nlohmann::json to_json(const Step3Rating& r);
Step1Judgment step1_from_json(const nlohmann::json& j);
Step2Selection step2_from_json(const nlohmann::json& j);
Step3Rating step3_from_json(const nlohmann::json& j);

// Union of the selected ids across annotators for one context.
std::set<std::string> union_top3(std::span<const Step2Selection> selections);

// Step-1 judgment must cover exactly the pool's entries. Returns field
// errors (empty when valid).
std::vector<FieldError> check_step1(const Step1Judgment& j, const ResponsePool& pool);

// Top-3 must hold min(3, |kept|) distinct ids from the annotator's kept set.
std::vector<FieldError> check_step2(const Step2Selection& s, const Step1Judgment& kept);

}  // namespace socemo
