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

#include "socemo/protocol.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "socemo/error.hpp"
#include "socemo/rng.hpp"
#include "socemo/text.hpp"

namespace socemo {

using nlohmann::json;

ModelKey ModelKey::reference() { return ModelKey{"reference", std::nullopt, "reference"}; }

namespace {

std::string_view mode_label(ConditioningMode m) {
  switch (m) {
    case ConditioningMode::no_cd: return "NO-CD";
    case ConditioningMode::cd_pred: return "CD-pred";
    case ConditioningMode::cd_gt: return "CD-GT";
  }
  return "?";
}

int mode_rank(const std::optional<ConditioningMode>& m) {
  if (!m) return -1;
  return static_cast<int>(*m);
}

}  // namespace

std::string ModelKey::label() const {
  if (is_reference()) return "Reference";
  std::string out = model;
  if (approach == "prompt-based") out += " PB";
  if (mode) {
    out += ' ';
    out += mode_label(*mode);
  }
  return out;
}

bool display_before(const ModelKey& a, const ModelKey& b) {
  if (a.is_reference() != b.is_reference()) return b.is_reference();
  if (a.model != b.model) return a.model < b.model;
  if (a.approach != b.approach) return a.approach > b.approach;  // reranking first
  return mode_rank(a.mode) < mode_rank(b.mode);
}

json to_json(const ModelKey& k) {
  return json{{"model", k.model},
              {"mode", k.mode ? json(std::string(to_string(*k.mode))) : json(nullptr)},
              {"approach", k.approach}};
}

ModelKey model_key_from_json(const json& j) {
  ModelKey k;
  k.model = j.at("model").get<std::string>();
  const auto& m = j.at("mode");
  if (!m.is_null()) k.mode = parse_mode(m.get<std::string>());
  k.approach = j.at("approach").get<std::string>();
  if (k.approach != "reranking" && k.approach != "prompt-based" && k.approach != "reference")
    throw InvalidConfig("unknown approach '" + k.approach + "'");
  return k;
}

ModelKey key_of(const PipelineRunRecord& r) {
  return ModelKey{r.model, r.mode, std::string(to_string(r.approach))};
}

const PoolEntry* ResponsePool::entry_of(const ModelKey& key) const {
  for (const auto& e : entries)
    if (e.producers.count(key)) return &e;
  return nullptr;
}

const PoolEntry* ResponsePool::find(std::string_view response_id) const {
  for (const auto& e : entries)
    if (e.response_id == response_id) return &e;
  return nullptr;
}

json to_json(const ResponsePool& p) {
  json entries = json::array();
  for (const auto& e : p.entries) {
    json producers = json::array();
    for (const auto& k : e.producers) producers.push_back(to_json(k));
    entries.push_back({{"response_id", e.response_id}, {"text", e.text}, {"producers", producers}});
  }
  json absent = json::array();
  for (const auto& k : p.absent) absent.push_back(to_json(k));
  return json{{"context_id", p.context_id}, {"entries", entries}, {"absent", absent}};
}

ResponsePool pool_from_json(const json& j) {
  ResponsePool p;
  p.context_id = j.at("context_id").get<std::string>();
  for (const auto& e : j.at("entries")) {
    PoolEntry entry;
    entry.response_id = e.at("response_id").get<std::string>();
    entry.text = e.at("text").get<std::string>();
    for (const auto& k : e.at("producers")) entry.producers.insert(model_key_from_json(k));
    p.entries.push_back(std::move(entry));
  }
  if (j.contains("absent"))
    for (const auto& k : j.at("absent")) p.absent.insert(model_key_from_json(k));
  return p;
}

std::string dedup_text(std::string_view text) { return normalize_whitespace(text); }

std::string response_id_for(std::string_view context_id, std::string_view normalized_text) {
  std::uint64_t h = fnv1a64(context_id);
  h = fnv1a64("\x1f", h);
  h = splitmix64(fnv1a64(normalized_text, h));
  char buf[24];
  std::snprintf(buf, sizeof buf, "r%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ResponsePool dedup_pool(std::string context_id, std::span<const PoolInput> inputs) {
  if (inputs.empty()) throw NoRecords("no responses for context " + context_id);
  ResponsePool pool;
  pool.context_id = std::move(context_id);
  std::map<std::string, PoolEntry> by_text;
  std::set<ModelKey> seen;
  for (const auto& in : inputs) {
    if (!seen.insert(in.key).second)
      throw InvalidConfig("duplicate producer " + in.key.label() + " for context " +
                          pool.context_id);
    std::string norm = in.text ? dedup_text(*in.text) : std::string();
    if (norm.empty()) {
      pool.absent.insert(in.key);
      continue;
    }
    auto& entry = by_text[norm];
    if (entry.producers.empty()) {
      entry.response_id = response_id_for(pool.context_id, norm);
      entry.text = norm;
    }
    entry.producers.insert(in.key);
  }
  for (auto& [_, e] : by_text) pool.entries.push_back(std::move(e));
  std::sort(pool.entries.begin(), pool.entries.end(),
            [](const PoolEntry& a, const PoolEntry& b) { return a.response_id < b.response_id; });
  for (std::size_t i = 1; i < pool.entries.size(); ++i)
    if (pool.entries[i].response_id == pool.entries[i - 1].response_id)
      throw InvalidConfig("response id collision in context " + pool.context_id);
  return pool;
}

ResponsePool dedup_pool(std::span<const PipelineRunRecord> records,
                        std::optional<std::string> reference) {
  if (records.empty()) throw NoRecords("no run records");
  const std::string& sample_id = records.front().sample_id;
  std::vector<PoolInput> inputs;
  for (const auto& r : records) {
    if (r.sample_id != sample_id)
      throw InvalidConfig("records span contexts " + sample_id + " and " + r.sample_id);
    PoolInput in{key_of(r), std::nullopt};
    if (r.status != RunStatus::failed && r.selected_index) in.text = r.selected_text;
    inputs.push_back(std::move(in));
  }
  inputs.push_back({ModelKey::reference(),
                    reference ? std::move(reference) : records.front().gold_response});
  return dedup_pool(sample_id, inputs);
}

std::vector<std::size_t> shuffle_pool(const ResponsePool& pool, std::uint64_t seed) {
  std::vector<std::size_t> order(pool.entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  fisher_yates(order, rng);
  return order;
}

std::uint64_t screen_seed(std::uint64_t campaign_seed, std::string_view context_id,
                          std::string_view annotator) {
  return mix_seed(campaign_seed, {"screen", context_id, annotator});
}

// ---------------------------------------------------------------------------

std::set<std::string> Step1Judgment::kept_set() const {
  std::set<std::string> out;
  for (const auto& [id, k] : kept)
    if (k) out.insert(id);
  return out;
}

json to_json(const Step1Judgment& j) {
  json out{{"annotator", j.annotator}, {"context_id", j.context_id}, {"kept", j.kept}};
  if (!j.consistent.empty()) out["consistent"] = j.consistent;
  if (!j.specific.empty()) out["specific"] = j.specific;
  return out;
}

json to_json(const Step2Selection& s) {
  return json{{"annotator", s.annotator}, {"context_id", s.context_id}, {"top3", s.top3}};
}

json to_json(const Step3Rating& r) {
  return json{{"annotator", r.annotator},
              {"context_id", r.context_id},
              {"response_id", r.response_id},
              {"tagged_text", r.tagged_text},
              {"ratings", r.ratings}};
}

Step1Judgment step1_from_json(const json& j) {
  Step1Judgment out;
  out.annotator = j.at("annotator").get<std::string>();
  out.context_id = j.at("context_id").get<std::string>();
  out.kept = j.at("kept").get<std::map<std::string, bool>>();
  if (j.contains("consistent")) out.consistent = j["consistent"].get<std::map<std::string, bool>>();
  if (j.contains("specific")) out.specific = j["specific"].get<std::map<std::string, bool>>();
  return out;
}

Step2Selection step2_from_json(const json& j) {
  return Step2Selection{j.at("annotator").get<std::string>(), j.at("context_id").get<std::string>(),
                        j.at("top3").get<std::vector<std::string>>()};
}

Step3Rating step3_from_json(const json& j) {
  return Step3Rating{j.at("annotator").get<std::string>(), j.at("context_id").get<std::string>(),
                     j.at("response_id").get<std::string>(),
                     j.at("tagged_text").get<std::string>(),
                     j.at("ratings").get<std::map<std::string, int>>()};
}

std::set<std::string> union_top3(std::span<const Step2Selection> selections) {
  std::set<std::string> out;
  for (const auto& s : selections) out.insert(s.top3.begin(), s.top3.end());
  return out;
}

std::vector<FieldError> check_step1(const Step1Judgment& j, const ResponsePool& pool) {
  std::vector<FieldError> errs;
  for (const auto& e : pool.entries)
    if (!j.kept.count(e.response_id))
      errs.push_back({"kept." + e.response_id, "missing judgment"});
  for (const auto& [id, _] : j.kept)
    if (!pool.find(id)) errs.push_back({"kept." + id, "not in pool"});
  for (const auto* flags : {&j.consistent, &j.specific})
    for (const auto& [id, _] : *flags)
      if (!pool.find(id))
        errs.push_back({(flags == &j.consistent ? "consistent." : "specific.") + id,
                        "not in pool"});
  return errs;
}

std::vector<FieldError> check_step2(const Step2Selection& s, const Step1Judgment& prior) {
  std::vector<FieldError> errs;
  const auto kept = prior.kept_set();
  const std::size_t want = std::min<std::size_t>(3, kept.size());
  if (s.top3.size() != want)
    errs.push_back({"top3", "expected " + std::to_string(want) + " responses, got " +
                                std::to_string(s.top3.size())});
  std::set<std::string> seen;
  for (std::size_t i = 0; i < s.top3.size(); ++i) {
    const auto& id = s.top3[i];
    const std::string field = "top3[" + std::to_string(i) + "]";
    if (!seen.insert(id).second)
      errs.push_back({field, "duplicate response " + id});
    else if (!kept.count(id))
      errs.push_back({field, "response " + id + " was not kept in step 1"});
  }
  return errs;
}

}  // namespace socemo
