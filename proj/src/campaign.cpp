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

#include "socemo/campaign.hpp"

#include <algorithm>
#include <cstdio>

#include "socemo/error.hpp"
#include "socemo/rng.hpp"
#include "socemo/text.hpp"

namespace socemo {

using nlohmann::json;

void CampaignConfig::validate() const {
  if (id.empty()) throw InvalidConfig("campaign id is empty");
  if (annotators.size() < 2) throw InvalidConfig("a campaign needs at least two annotators");
  std::set<std::string> seen;
  for (const auto& a : annotators) {
    if (a.empty()) throw InvalidConfig("empty annotator id");
    if (!seen.insert(a).second) throw InvalidConfig("duplicate annotator '" + a + "'");
  }
  if (n_contexts && step3_contexts > n_contexts)
    throw InvalidConfig("step3_contexts exceeds n_contexts");
  questionnaire.validate();
}

CampaignConfig CampaignConfig::from_json(const json& j) {
  CampaignConfig c;
  try {
    c.id = j.value("id", c.id);
    c.seed = j.value("seed", c.seed);
    c.annotators = j.at("annotators").get<std::vector<std::string>>();
    c.n_contexts = j.value("n_contexts", c.n_contexts);
    c.step3_contexts = j.value("step3_contexts", c.step3_contexts);
    c.practice_contexts = j.value("practice_contexts", c.practice_contexts);
    if (j.contains("questionnaire")) c.questionnaire = QuestionnaireSpec::from_json(j["questionnaire"]);
    if (j.contains("tag_map")) c.tag_map = TagMap::from_json(j["tag_map"]);
    c.token_salt = j.value("token_salt", c.token_salt);
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("campaign config: ") + e.what());
  }
  c.validate();
  return c;
}

json CampaignConfig::to_json() const {
  return json{{"id", id},
              {"seed", seed},
              {"annotators", annotators},
              {"n_contexts", n_contexts},
              {"step3_contexts", step3_contexts},
              {"practice_contexts", practice_contexts},
              {"questionnaire", questionnaire.to_json()},
              {"tag_map", tag_map.to_json()},
              {"token_salt", token_salt}};
}

const CampaignContext* Campaign::find(std::string_view context_id) const {
  for (const auto& c : contexts)
    if (c.id == context_id) return &c;
  return nullptr;
}

std::optional<std::string> Campaign::annotator_for_token(std::string_view token) const {
  for (const auto& [annotator, t] : tokens)
    if (t == token) return annotator;
  return std::nullopt;
}

json to_json(const Campaign& c) {
  json contexts = json::array();
  for (const auto& ctx : c.contexts) contexts.push_back(to_json(ctx));
  return json{{"id", c.id},
              {"seed", c.seed},
              {"annotators", c.annotators},
              {"questionnaire", c.questionnaire.to_json()},
              {"tag_map", c.tag_map.to_json()},
              {"contexts", contexts},
              {"tokens", c.tokens},
              {"admin_token", c.admin_token}};
}

Campaign campaign_from_json(const json& j) {
  Campaign c;
  c.id = j.at("id").get<std::string>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.annotators = j.at("annotators").get<std::vector<std::string>>();
  c.questionnaire = QuestionnaireSpec::from_json(j.at("questionnaire"));
  c.tag_map = TagMap::from_json(j.at("tag_map"));
  for (const auto& ctx : j.at("contexts")) c.contexts.push_back(campaign_context_from_json(ctx));
  c.tokens = j.at("tokens").get<std::map<std::string, std::string>>();
  c.admin_token = j.at("admin_token").get<std::string>();
  return c;
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string make_token(std::uint64_t seed, std::string_view salt, std::string_view who) {
  return hex64(mix_seed(seed, {"token", salt, who})) + hex64(mix_seed(seed, {"token-2", salt, who}));
}

}  // namespace

Campaign create_campaign(std::span<const PipelineRunRecord> records,
                         const std::map<std::string, std::string>& references,
                         const CampaignConfig& config) {
  if (records.empty()) throw NoRecords("no run records");
  config.validate();

  std::map<std::string, std::vector<PipelineRunRecord>> groups;
  for (const auto& r : records) groups[r.sample_id].push_back(r);
  std::vector<std::string> ids;
  for (const auto& [id, _] : groups) ids.push_back(id);

  const std::size_t available = ids.size();
  if (config.practice_contexts > available)
    throw InvalidConfig("practice_contexts exceeds the " + std::to_string(available) +
                        " available contexts");
  const std::size_t n_main =
      config.n_contexts ? config.n_contexts : available - config.practice_contexts;
  if (config.practice_contexts + n_main > available)
    throw InvalidConfig("requested " + std::to_string(config.practice_contexts + n_main) +
                        " contexts but only " + std::to_string(available) + " have records");
  if (config.step3_contexts > n_main) throw InvalidConfig("step3_contexts exceeds scored contexts");

  Rng rng(mix_seed(config.seed, {"campaign-contexts"}));
  fisher_yates(ids, rng);
  std::vector<std::string> practice(ids.begin(), ids.begin() + config.practice_contexts);
  std::vector<std::string> main(ids.begin() + config.practice_contexts,
                                ids.begin() + config.practice_contexts + n_main);

  auto s3 = main;
  Rng rng3(mix_seed(config.seed, {"campaign-step3"}));
  fisher_yates(s3, rng3);
  const std::set<std::string> step3(s3.begin(), s3.begin() + config.step3_contexts);

  std::vector<std::vector<std::string>> pairs;
  for (std::size_t i = 0; i < config.annotators.size(); ++i)
    for (std::size_t j = i + 1; j < config.annotators.size(); ++j)
      pairs.push_back({config.annotators[i], config.annotators[j]});

  Campaign c;
  c.id = config.id;
  c.seed = config.seed;
  c.annotators = config.annotators;
  c.questionnaire = config.questionnaire;
  c.tag_map = config.tag_map;

  auto make_context = [&](const std::string& id) {
    const auto& recs = groups.at(id);
    std::optional<std::string> ref;
    if (auto it = references.find(id); it != references.end()) ref = it->second;
    CampaignContext ctx;
    ctx.id = id;
    ctx.turns = recs.front().context;
    ctx.pool = dedup_pool(recs, ref);
    return ctx;
  };
  for (const auto& id : practice) {
    auto ctx = make_context(id);
    ctx.practice = true;
    ctx.step12_annotators = config.annotators;
    c.contexts.push_back(std::move(ctx));
  }
  for (std::size_t t = 0; t < main.size(); ++t) {
    auto ctx = make_context(main[t]);
    ctx.step12_annotators = pairs[t % pairs.size()];
    ctx.step3 = step3.count(main[t]) > 0;
    c.contexts.push_back(std::move(ctx));
  }
  for (const auto& a : config.annotators) c.tokens[a] = make_token(config.seed, config.token_salt, a);
  c.admin_token = make_token(config.seed, config.token_salt, "admin\n");
  return c;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::pair<EventKind, std::string_view> kEventNames[] = {
    {EventKind::campaign_created, "campaign_created"},
    {EventKind::session_opened, "session_opened"},
    {EventKind::step1_submitted, "step1_submitted"},
    {EventKind::step2_submitted, "step2_submitted"},
    {EventKind::step3_submitted, "step3_submitted"},
    {EventKind::pool_created, "pool_created"},
};

}  // namespace

std::string_view to_string(EventKind k) {
  for (const auto& [kind, name] : kEventNames)
    if (kind == k) return name;
  return "?";
}

EventKind parse_event_kind(std::string_view s) {
  for (const auto& [kind, name] : kEventNames)
    if (name == s) return kind;
  throw InvalidBundle("unknown event kind '" + std::string(s) + "'");
}

json to_json(const Event& e) {
  return json{{"seq", e.seq},
              {"timestamp", e.timestamp},
              {"kind", std::string(to_string(e.kind))},
              {"payload", e.payload}};
}

Event event_from_json(const json& j) {
  Event e;
  e.seq = j.at("seq").get<std::uint64_t>();
  e.timestamp = j.at("timestamp").get<std::string>();
  e.kind = parse_event_kind(j.at("kind").get<std::string>());
  e.payload = j.at("payload");
  return e;
}

void CampaignState::apply(const Event& e) {
  if (e.seq != last_seq + 1)
    throw InvalidBundle("event " + std::to_string(e.seq) + " does not follow " +
                        std::to_string(last_seq));
  if (e.kind != EventKind::campaign_created && !campaign)
    throw InvalidBundle("event " + std::to_string(e.seq) + " precedes campaign creation");
  try {
    switch (e.kind) {
      case EventKind::campaign_created:
        if (campaign) throw InvalidBundle("campaign already created");
        campaign = campaign_from_json(e.payload.at("campaign"));
        break;
      case EventKind::session_opened:
        sessions[e.payload.at("session_id").get<std::string>()] =
            e.payload.at("annotator").get<std::string>();
        break;
      case EventKind::step1_submitted: {
        auto j = step1_from_json(e.payload);
        step1[{j.context_id, j.annotator}] = std::move(j);
        break;
      }
      case EventKind::step2_submitted: {
        auto s = step2_from_json(e.payload);
        step2[{s.context_id, s.annotator}] = std::move(s);
        break;
      }
      case EventKind::step3_submitted: {
        auto r = step3_from_json(e.payload);
        step3[{r.context_id, r.annotator, r.response_id}] = std::move(r);
        break;
      }
      case EventKind::pool_created:
        step3_pools[e.payload.at("context_id").get<std::string>()] =
            e.payload.at("response_ids").get<std::set<std::string>>();
        break;
    }
  } catch (const json::exception& ex) {
    throw InvalidBundle("event " + std::to_string(e.seq) + ": " + ex.what());
  }
  last_seq = e.seq;
}

Bundle CampaignState::to_bundle() const {
  Bundle b;
  if (!campaign) return b;
  b.campaign_id = campaign->id;
  b.seed = campaign->seed;
  b.annotators = campaign->annotators;
  b.questionnaire = campaign->questionnaire;
  b.tag_map = campaign->tag_map;
  b.contexts = campaign->contexts;
  for (const auto& [_, j] : step1) b.step1.push_back(j);
  for (const auto& [_, s] : step2) b.step2.push_back(s);
  for (const auto& [_, r] : step3) b.step3.push_back(r);
  return b;
}

json CampaignState::to_json() const {
  json s1 = json::array(), s2 = json::array(), s3 = json::array();
  for (const auto& [_, j] : step1) s1.push_back(socemo::to_json(j));
  for (const auto& [_, s] : step2) s2.push_back(socemo::to_json(s));
  for (const auto& [_, r] : step3) s3.push_back(socemo::to_json(r));
  return json{{"version", "v1"},
              {"campaign", campaign ? socemo::to_json(*campaign) : json(nullptr)},
              {"sessions", sessions},
              {"step1", s1},
              {"step2", s2},
              {"step3", s3},
              {"step3_pools", step3_pools},
              {"last_seq", last_seq}};
}

CampaignState CampaignState::from_json(const json& j) {
  CampaignState s;
  try {
    if (!j.at("campaign").is_null()) s.campaign = campaign_from_json(j["campaign"]);
    s.sessions = j.at("sessions").get<std::map<std::string, std::string>>();
    for (const auto& x : j.at("step1")) {
      auto v = step1_from_json(x);
      s.step1[{v.context_id, v.annotator}] = std::move(v);
    }
    for (const auto& x : j.at("step2")) {
      auto v = step2_from_json(x);
      s.step2[{v.context_id, v.annotator}] = std::move(v);
    }
    for (const auto& x : j.at("step3")) {
      auto v = step3_from_json(x);
      s.step3[{v.context_id, v.annotator, v.response_id}] = std::move(v);
    }
    s.step3_pools = j.at("step3_pools").get<std::map<std::string, std::set<std::string>>>();
    s.last_seq = j.at("last_seq").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw InvalidBundle(std::string("snapshot: ") + e.what());
  }
  return s;
}

CampaignState replay(std::span<const Event> events, CampaignState base) {
  for (const auto& e : events) base.apply(e);
  return base;
}

// ---------------------------------------------------------------------------

namespace {

bool assigned_step12(const CampaignContext& ctx, const std::string& annotator) {
  return std::find(ctx.step12_annotators.begin(), ctx.step12_annotators.end(), annotator) !=
         ctx.step12_annotators.end();
}

}  // namespace

std::vector<const PoolEntry*> screen_order(const Campaign& campaign, const CampaignContext& ctx,
                                           const std::string& annotator) {
  std::vector<const PoolEntry*> out;
  for (auto i : shuffle_pool(ctx.pool, screen_seed(campaign.seed, ctx.id, annotator)))
    out.push_back(&ctx.pool.entries[i]);
  return out;
}

std::optional<TaskRef> next_task_ref(const CampaignState& state, const std::string& annotator) {
  if (!state.campaign) return std::nullopt;
  const auto& campaign = *state.campaign;
  for (const auto& ctx : campaign.contexts) {
    if (!assigned_step12(ctx, annotator)) continue;
    if (!state.step1.count({ctx.id, annotator})) return TaskRef{TaskStep::step1, ctx.id, {}};
    if (!state.step2.count({ctx.id, annotator})) return TaskRef{TaskStep::step2, ctx.id, {}};
  }
  bool waiting = false;
  for (const auto& ctx : campaign.contexts) {
    if (!ctx.step3) continue;
    auto pool = state.step3_pools.find(ctx.id);
    if (pool == state.step3_pools.end()) {
      waiting = true;
      continue;
    }
    for (const auto* e : screen_order(campaign, ctx, annotator)) {
      if (!pool->second.count(e->response_id)) continue;
      if (!state.step3.count({ctx.id, annotator, e->response_id}))
        return TaskRef{TaskStep::step3, ctx.id, e->response_id};
    }
  }
  if (waiting) return TaskRef{};
  return std::nullopt;
}

nlohmann::json next_task(const CampaignState& state, const std::string& annotator,
                         Classifier* classifier) {
  auto ref = next_task_ref(state, annotator);
  if (!ref) throw NoTasksRemaining("no tasks remain for " + annotator);
  const auto& campaign = *state.campaign;

  std::size_t assigned = 0, completed = 0;
  for (const auto& ctx : campaign.contexts) {
    if (assigned_step12(ctx, annotator)) {
      assigned += 2;
      completed += state.step1.count({ctx.id, annotator}) + state.step2.count({ctx.id, annotator});
    }
    if (auto p = state.step3_pools.find(ctx.id); ctx.step3 && p != state.step3_pools.end()) {
      assigned += p->second.size();
      for (const auto& id : p->second) completed += state.step3.count({ctx.id, annotator, id});
    }
  }

  json out{{"version", "v1"},
           {"campaign_id", campaign.id},
           {"annotator", annotator},
           {"step", static_cast<int>(ref->step)},
           {"progress", {{"completed", completed}, {"assigned", assigned}}}};
  if (ref->step == TaskStep::waiting) {
    out["status"] = "waiting";
    return out;
  }
  out["status"] = "ready";
  const auto& ctx = *campaign.find(ref->context_id);
  out["context_id"] = ctx.id;
  out["context"] = wire_context(ctx.turns);

  auto item = [](const PoolEntry& e) { return json{{"response_id", e.response_id}, {"text", e.text}}; };
  if (ref->step == TaskStep::step1) {
    json responses = json::array();
    for (const auto* e : screen_order(campaign, ctx, annotator)) responses.push_back(item(*e));
    out["responses"] = responses;
  } else if (ref->step == TaskStep::step2) {
    const auto kept = state.step1.at({ctx.id, annotator}).kept_set();
    json responses = json::array();
    for (const auto* e : screen_order(campaign, ctx, annotator))
      if (kept.count(e->response_id)) responses.push_back(item(*e));
    out["responses"] = responses;
    out["select"] = std::min<std::size_t>(3, kept.size());
  } else {
    const auto* e = ctx.pool.find(ref->response_id);
    json response = item(*e);
    response["tagged_text"] = nullptr;
    if (classifier) {
      try {
        response["tagged_text"] = pretag_response(e->text, *classifier, campaign.tag_map);
      } catch (const std::exception&) {
        // Pre-annotation is best effort; the annotator tags from scratch.
      }
    }
    out["response"] = response;
    out["questionnaire"] = campaign.questionnaire.to_json();
    out["tag_map"] = campaign.tag_map.to_json();
  }
  return out;
}

namespace {

template <class T>
std::optional<T> field(const json& body, const std::string& name, std::vector<FieldError>& errs) {
  if (!body.contains(name)) {
    errs.push_back({name, "missing"});
    return std::nullopt;
  }
  try {
    return body[name].get<T>();
  } catch (const json::exception&) {
    errs.push_back({name, "wrong type"});
    return std::nullopt;
  }
}

void fail_if(const std::vector<FieldError>& errs) {
  if (!errs.empty()) throw ValidationFailed(errs);
}

}  // namespace

std::vector<Event> plan_submission(const CampaignState& state, const std::string& annotator,
                                   const json& body) {
  if (!state.campaign) throw NotFound("no campaign");
  const auto& campaign = *state.campaign;
  if (!body.is_object()) throw ValidationFailed("body", "must be a JSON object");

  std::vector<FieldError> errs;
  auto step = field<int>(body, "step", errs);
  auto context_id = field<std::string>(body, "context_id", errs);
  fail_if(errs);
  const auto* ctx = campaign.find(*context_id);
  if (!ctx) throw ValidationFailed("context_id", "unknown context " + *context_id);
  const PairKey pair{ctx->id, annotator};

  if (*step == 1 || *step == 2) {
    if (!assigned_step12(*ctx, annotator))
      throw ValidationFailed("context_id", "not assigned to " + annotator);
  }

  if (*step == 1) {
    Step1Judgment j{annotator, ctx->id, {}, {}, {}};
    if (auto kept = field<std::map<std::string, bool>>(body, "kept", errs)) j.kept = *kept;
    if (body.contains("consistent"))
      if (auto v = field<std::map<std::string, bool>>(body, "consistent", errs)) j.consistent = *v;
    if (body.contains("specific"))
      if (auto v = field<std::map<std::string, bool>>(body, "specific", errs)) j.specific = *v;
    fail_if(errs);
    fail_if(check_step1(j, ctx->pool));
    if (auto it = state.step1.find(pair); it != state.step1.end() && it->second == j) return {};
    if (state.step2.count(pair))
      throw StaleTask("step 2 already submitted for " + ctx->id + "; step 1 is closed");
    return {Event{0, {}, EventKind::step1_submitted, to_json(j)}};
  }

  if (*step == 2) {
    auto prior = state.step1.find(pair);
    if (prior == state.step1.end())
      throw ValidationFailed("step", "step 1 not submitted for " + ctx->id);
    Step2Selection s{annotator, ctx->id, {}};
    if (auto top = field<std::vector<std::string>>(body, "top3", errs)) s.top3 = *top;
    fail_if(errs);
    fail_if(check_step2(s, prior->second));
    if (auto it = state.step2.find(pair); it != state.step2.end() && it->second == s) return {};
    if (state.step3_pools.count(ctx->id))
      throw StaleTask("step-3 pool for " + ctx->id + " exists; step 2 is closed");
    std::vector<Event> events{Event{0, {}, EventKind::step2_submitted, to_json(s)}};
    if (ctx->step3) {
      std::vector<Step2Selection> all{s};
      bool complete = true;
      for (const auto& a : ctx->step12_annotators) {
        if (a == annotator) continue;
        auto it = state.step2.find({ctx->id, a});
        if (it == state.step2.end()) {
          complete = false;
          break;
        }
        all.push_back(it->second);
      }
      if (complete)
        events.push_back(Event{0, {}, EventKind::pool_created,
                               json{{"context_id", ctx->id}, {"response_ids", union_top3(all)}}});
    }
    return events;
  }

  if (*step == 3) {
    if (!ctx->step3) throw ValidationFailed("context_id", ctx->id + " is not a step-3 context");
    auto pool = state.step3_pools.find(ctx->id);
    if (pool == state.step3_pools.end())
      throw ValidationFailed("context_id", "step-3 pool for " + ctx->id + " not created yet");
    Step3Rating r{annotator, ctx->id, {}, {}, {}};
    auto rid = field<std::string>(body, "response_id", errs);
    auto tagged = field<std::string>(body, "tagged_text", errs);
    auto ratings = field<std::map<std::string, int>>(body, "ratings", errs);
    const PoolEntry* entry = nullptr;
    if (rid) {
      r.response_id = *rid;
      if (pool->second.count(*rid)) entry = ctx->pool.find(*rid);
      if (!entry) errs.push_back({"response_id", "not in the step-3 pool of " + ctx->id});
    }
    if (tagged) {
      r.tagged_text = *tagged;
      try {
        auto segments = parse_tagged_response(*tagged, campaign.tag_map);
        std::string joined;
        for (const auto& seg : segments) joined += seg.text + " ";
        if (segments.empty())
          errs.push_back({"tagged_text", "no tagged segments"});
        else if (entry && normalize_whitespace(joined) != dedup_text(entry->text))
          errs.push_back({"tagged_text", "segment text differs from the response"});
      } catch (const TagError& e) {
        errs.push_back({"tagged_text", std::string(e.code()) + ": " + e.what()});
      }
    }
    if (ratings) {
      r.ratings = *ratings;
      for (auto& fe : campaign.questionnaire.check(r.ratings)) errs.push_back(std::move(fe));
    }
    fail_if(errs);
    if (auto it = state.step3.find({ctx->id, annotator, r.response_id});
        it != state.step3.end() && it->second == r)
      return {};
    return {Event{0, {}, EventKind::step3_submitted, to_json(r)}};
  }

  throw ValidationFailed("step", "must be 1, 2 or 3");
}

}  // namespace socemo
