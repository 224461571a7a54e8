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

#include "support.hpp"

#include <algorithm>
#include <map>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace socemo::testing {

using nlohmann::json;

std::vector<DialogueTurn> turns(const std::vector<std::string>& texts) {
  std::vector<DialogueTurn> out;
  for (std::size_t i = 0; i < texts.size(); ++i)
    out.push_back({i % 2 ? Speaker::B : Speaker::A, texts[i], Label::inform, Label::neutral});
  return out;
}

PipelineRunRecord make_record(const std::string& sample_id, const std::string& model,
                              ConditioningMode mode, const std::string& selected_text,
                              RunStatus status) {
  PipelineRunRecord r;
  r.sample_id = sample_id;
  r.conversation_id = sample_id.substr(0, sample_id.find('#'));
  r.context = turns({"Hello there .", "Hi , how are you ?", "Fine , thanks ."});
  r.gold_labels = LabelSequence{Label::inform};
  r.gold_response = "Reference reply for " + sample_id + " .";
  r.model = model;
  r.mode = mode;
  r.status = status;
  if (status != RunStatus::failed) {
    r.candidates.push_back(Candidate{0, selected_text, true, {}, {}, false, std::nullopt});
    r.selected_index = 0;
    r.selected_text = selected_text;
  } else {
    r.cause = "BackendUnavailable: down";
  }
  return r;
}

std::vector<PipelineRunRecord> synthetic_records(std::size_t n) {
  std::vector<PipelineRunRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string id = "c" + std::to_string(i) + "#3";
    const bool shared = i % 3 == 0;
    const bool nocd_fails = i % 5 == 4;
    out.push_back(make_record(id, "bart", ConditioningMode::no_cd,
                              "Plain answer " + std::to_string(i) + " .",
                              nocd_fails ? RunStatus::failed : RunStatus::ok));
    out.push_back(make_record(id, "bart", ConditioningMode::cd_pred,
                              "Planned answer " + std::to_string(i) + " ."));
    out.push_back(make_record(id, "bart", ConditioningMode::cd_gt,
                              shared ? "Planned answer " + std::to_string(i) + " ."
                                     : "Gold answer " + std::to_string(i) + " ."));
  }
  return out;
}

Campaign small_campaign(std::size_t contexts, std::size_t step3, std::size_t practice,
                        std::uint64_t seed, std::vector<std::string> annotators) {
  CampaignConfig cfg;
  cfg.seed = seed;
  cfg.annotators = std::move(annotators);
  cfg.n_contexts = contexts;
  cfg.step3_contexts = step3;
  cfg.practice_contexts = practice;
  cfg.token_salt = "test";
  const auto records = synthetic_records(contexts + practice);
  return create_campaign(records, {}, cfg);
}

namespace {

std::uint64_t h(std::uint64_t salt, std::initializer_list<std::string_view> parts) {
  return mix_seed(salt, parts);
}

}  // namespace

json answer_for(const CampaignState& state, const std::string& annotator, const TaskRef& ref,
                std::uint64_t salt) {
  const auto& campaign = *state.campaign;
  const auto* ctx = campaign.find(ref.context_id);
  if (!ctx) throw std::logic_error("unknown context " + ref.context_id);
  switch (ref.step) {
    case TaskStep::step1: {
      json kept = json::object();
      for (const auto& e : ctx->pool.entries)
        kept[e.response_id] = h(salt, {"kept", annotator, ctx->id, e.response_id}) % 3 != 0;
      return {{"step", 1}, {"context_id", ctx->id}, {"kept", kept}};
    }
    case TaskStep::step2: {
      auto kept = state.step1.at({ctx->id, annotator}).kept_set();
      std::vector<std::string> ids(kept.begin(), kept.end());
      std::sort(ids.begin(), ids.end(), [&](const auto& a, const auto& b) {
        return h(salt, {"rank", annotator, ctx->id, a}) < h(salt, {"rank", annotator, ctx->id, b});
      });
      ids.resize(std::min<std::size_t>(3, ids.size()));
      return {{"step", 2}, {"context_id", ctx->id}, {"top3", ids}};
    }
    case TaskStep::step3: {
      const auto* e = ctx->pool.find(ref.response_id);
      json ratings = json::object();
      for (const auto& q : campaign.questionnaire.questions)
        ratings[q.id] = static_cast<int>(
            q.min + h(salt, {"rate", annotator, ctx->id, e->response_id, q.id}) %
                        static_cast<std::uint64_t>(q.max - q.min + 1));
      return {{"step", 3},
              {"context_id", ctx->id},
              {"response_id", e->response_id},
              {"tagged_text", "<I>" + e->text + "</I>"},
              {"ratings", ratings}};
    }
    case TaskStep::waiting: break;
  }
  throw std::logic_error("no answer for a waiting task");
}

std::vector<Event> submit(CampaignState& state, const std::string& annotator, const json& body) {
  auto events = plan_submission(state, annotator, body);
  for (auto& e : events) {
    e.seq = state.last_seq + 1;
    e.timestamp = "2026-01-01T00:00:00Z";
    state.apply(e);
  }
  return events;
}

Interleaving run_interleaving(const Campaign& campaign, std::uint64_t order_seed,
                              std::uint64_t answer_salt) {
  Interleaving out;
  Event created{1, "2026-01-01T00:00:00Z", EventKind::campaign_created,
                json{{"campaign", to_json(campaign)}}};
  out.state.apply(created);
  out.log.push_back(created);

  Rng rng(order_seed);
  for (;;) {
    std::vector<std::pair<std::string, TaskRef>> ready;
    for (const auto& a : campaign.annotators)
      if (auto ref = next_task_ref(out.state, a); ref && ref->step != TaskStep::waiting)
        ready.emplace_back(a, *ref);
    if (ready.empty()) break;
    const auto& [who, ref] = ready[uniform_index(rng, ready.size())];
    if (uniform_index(rng, 8) == 0) {
      Event e{out.state.last_seq + 1, "2026-01-01T00:00:00Z", EventKind::session_opened,
              json{{"session_id", "s" + std::to_string(out.state.last_seq + 1)},
                   {"annotator", who}}};
      out.state.apply(e);
      out.log.push_back(e);
    }
    auto events = submit(out.state, who, answer_for(out.state, who, ref, answer_salt));
    out.log.insert(out.log.end(), events.begin(), events.end());
  }
  return out;
}

std::size_t brute_levenshtein(const LabelSequence& a, const LabelSequence& b) {
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();
  const LabelSequence ta(a.begin() + 1, a.end()), tb(b.begin() + 1, b.end());
  if (a.front() == b.front()) return brute_levenshtein(ta, tb);
  return 1 + std::min({brute_levenshtein(ta, b), brute_levenshtein(a, tb),
                       brute_levenshtein(ta, tb)});
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tests_dir() { return SOCEMO_TESTS_DIR; }

const ModelKey kFixtureNoCd{"bart", ConditioningMode::no_cd};
const ModelKey kFixturePred{"bart", ConditioningMode::cd_pred};
const ModelKey kFixtureGt{"bart", ConditioningMode::cd_gt};

AnnotationData scoring_fixture() {
  const auto R = ModelKey::reference();
  const std::map<std::string, std::vector<PoolInput>> inputs{
      {"c1", {{kFixtureNoCd, "e1"}, {kFixturePred, "e2"}, {kFixtureGt, "e2"}, {R, "e3"}}},
      {"c2", {{kFixtureNoCd, "e4"}, {kFixturePred, "e5"}, {kFixtureGt, "e6"}, {R, "e7"}}},
      {"c3", {{kFixtureNoCd, "e8"}, {kFixturePred, "e9"}, {kFixtureGt, "e10"}, {R, "e8"}}},
  };
  AnnotationData d;
  for (const auto& [ctx, in] : inputs) d.pools[ctx] = dedup_pool(ctx, in);
  d.annotators = {"a", "b", "c"};
  d.step3_contexts = {"c1", "c3"};
  auto id = [&](const std::string& ctx, int e) {
    return d.pools.at(ctx).find(response_id_for(ctx, "e" + std::to_string(e)))->response_id;
  };
  auto ids = [&](const std::string& ctx, const std::vector<int>& es) {
    std::vector<std::string> out;
    for (int e : es) out.push_back(id(ctx, e));
    return out;
  };
  struct Row {
    std::string who, ctx;
    std::vector<int> kept, top;
  };
  const std::vector<Row> rows{{"a", "c1", {1, 2, 3}, {1, 2, 3}}, {"b", "c1", {2, 3}, {2, 3}},
                              {"a", "c2", {5, 6}, {5, 6}},       {"c", "c2", {4, 5, 6, 7}, {4, 5, 7}},
                              {"b", "c3", {8, 9, 10}, {8, 9, 10}}, {"c", "c3", {10}, {10}}};
  for (const auto& r : rows) {
    Step1Judgment j{r.who, r.ctx, {}, {}, {}};
    for (const auto& e : d.pools.at(r.ctx).entries) j.kept[e.response_id] = false;
    for (const auto& k : ids(r.ctx, r.kept)) j.kept[k] = true;
    d.step1.push_back(j);
    d.step2.push_back({r.who, r.ctx, ids(r.ctx, r.top)});
  }
  const auto& qs = d.questionnaire.questions;
  for (int ai = 0; ai < 3; ++ai)
    for (const auto& [ctx, es] : std::vector<std::pair<std::string, std::vector<int>>>{
             {"c1", {1, 2, 3}}, {"c3", {8, 9, 10}}}) {
      for (int e : es) {
        if (ai == 2 && e == 9) continue;
        Step3Rating r{d.annotators[static_cast<std::size_t>(ai)], ctx, id(ctx, e),
                      "<I>e" + std::to_string(e) + "</I>", {}};
        for (std::size_t q = 0; q < qs.size(); ++q)
          r.ratings[qs[q].id] = 1 + (static_cast<int>(q) * 3 + ai * 2 + e) % 5;
        d.step3.push_back(r);
      }
    }
  return d;
}

}  // namespace socemo::testing
