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

#include "socemo/service.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <thread>

#include <httplib.h>

#include "socemo/error.hpp"
#include "socemo/rng.hpp"

namespace socemo {

using nlohmann::json;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

CampaignService::CampaignService(EventStore& store, Classifier* classifier, ServiceOptions options)
    : store_(store), classifier_(classifier), options_(std::move(options)) {
  if (!options_.clock) options_.clock = utc_now;
  auto [base, tail] = store_.load();
  state_ = std::make_shared<const CampaignState>(replay(tail, std::move(base)));
}

std::shared_ptr<const CampaignState> CampaignService::state() const {
  std::lock_guard lock(publish_mu_);
  return state_;
}

void CampaignService::commit(std::vector<Event> events) {
  if (events.empty()) return;
  auto next = std::make_shared<CampaignState>(*state());
  const auto before = next->last_seq;
  for (auto& e : events) {
    e.seq = next->last_seq + 1;
    e.timestamp = options_.clock();
    next->apply(e);
  }
  for (const auto& e : events) store_.append(e);
  if (options_.snapshot_every &&
      next->last_seq / options_.snapshot_every != before / options_.snapshot_every)
    store_.snapshot(*next);
  std::lock_guard lock(publish_mu_);
  state_ = std::move(next);
}

Campaign CampaignService::create(std::span<const PipelineRunRecord> records,
                                 const std::map<std::string, std::string>& references,
                                 const CampaignConfig& config) {
  std::lock_guard lock(write_mu_);
  if (state()->campaign) throw Conflict("a campaign already exists");
  auto campaign = create_campaign(records, references, config);
  commit({Event{0, {}, EventKind::campaign_created, json{{"campaign", to_json(campaign)}}}});
  return campaign;
}

std::string CampaignService::open_session(const std::string& token) {
  std::lock_guard lock(write_mu_);
  const auto s = state();
  if (!s->campaign) throw NotFound("no campaign");
  auto annotator = s->campaign->annotator_for_token(token);
  if (!annotator) throw Unauthorized("unknown token");
  char buf[24];
  std::snprintf(buf, sizeof buf, "s%016llx",
                static_cast<unsigned long long>(mix_seed(
                    s->campaign->seed, {"session", token, std::to_string(s->last_seq + 1)})));
  std::string session_id = buf;
  commit({Event{0, {}, EventKind::session_opened,
                json{{"session_id", session_id}, {"annotator", *annotator}}}});
  return session_id;
}

const std::string& CampaignService::require_session(const CampaignState& s,
                                                    const std::string& session_id,
                                                    const std::string& token) const {
  if (!s.campaign) throw NotFound("no campaign");
  auto it = s.sessions.find(session_id);
  if (it == s.sessions.end()) throw NotFound("unknown session " + session_id);
  auto owner = s.campaign->tokens.find(it->second);
  if (owner == s.campaign->tokens.end() || owner->second != token)
    throw Unauthorized("token does not own session " + session_id);
  return it->second;
}

void CampaignService::require_admin(const CampaignState& s, const std::string& token) const {
  if (!s.campaign) throw NotFound("no campaign");
  if (token != s.campaign->admin_token) throw Unauthorized("admin token required");
}

json CampaignService::next(const std::string& session_id, const std::string& token) {
  const auto s = state();
  const auto& annotator = require_session(*s, session_id, token);
  return next_task(*s, annotator, classifier_);
}

json CampaignService::submit(const std::string& session_id, const std::string& token,
                             const json& body) {
  std::lock_guard lock(write_mu_);
  const auto s = state();
  const auto& annotator = require_session(*s, session_id, token);
  auto events = plan_submission(*s, annotator, body);
  const bool changed = !events.empty();
  commit(std::move(events));
  return json{{"status", changed ? "accepted" : "unchanged"}, {"seq", state()->last_seq}};
}

ScoreReport CampaignService::scores(const std::string& admin_token,
                                    const ScoreOptions& options) const {
  const auto s = state();
  require_admin(*s, admin_token);
  return score_campaign(s->to_bundle().annotation_data(), options);
}

std::optional<AgreementReport> CampaignService::agreement(const std::string& admin_token) const {
  const auto s = state();
  require_admin(*s, admin_token);
  const auto data = s->to_bundle().annotation_data();
  std::vector<Step1Judgment> scored;
  for (const auto& j : data.step1)
    if (!data.practice.count(j.context_id)) scored.push_back(j);
  try {
    return agreement_report(scored);
  } catch (const InsufficientData&) {
    return std::nullopt;
  }
}

std::string CampaignService::export_bundle(const std::string& admin_token,
                                           const ScoreOptions& options) const {
  const auto s = state();
  require_admin(*s, admin_token);
  return write_bundle(s->to_bundle(), options);
}

// ---------------------------------------------------------------------------

ServiceConfig ServiceConfig::from_json(const json& j) {
  ServiceConfig c;
  try {
    c.host = j.value("host", c.host);
    c.port = j.value("port", c.port);
    c.data_dir = j.value("data_dir", c.data_dir);
    c.backend_url = j.value("backend_url", c.backend_url);
    c.backend_timeout_ms = j.value("backend_timeout_ms", c.backend_timeout_ms);
    c.backend_retries = j.value("backend_retries", c.backend_retries);
    c.snapshot_every = j.value("snapshot_every", c.snapshot_every);
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("service config: ") + e.what());
  }
  return c;
}

json ServiceConfig::to_json() const {
  return json{{"host", host},
              {"port", port},
              {"data_dir", data_dir},
              {"backend_url", backend_url},
              {"backend_timeout_ms", backend_timeout_ms},
              {"backend_retries", backend_retries},
              {"snapshot_every", snapshot_every}};
}

void ServiceConfig::apply_env() {
  if (const char* v = std::getenv("SOCEMO_PORT")) {
    try {
      port = std::stoi(v);
    } catch (const std::exception&) {
      throw InvalidConfig(std::string("SOCEMO_PORT is not a number: ") + v);
    }
  }
  if (const char* v = std::getenv("SOCEMO_DATA_DIR")) data_dir = v;
  if (const char* v = std::getenv("SOCEMO_BACKEND_URL")) backend_url = v;
}

int http_status_for(const std::string& code) {
  static const std::map<std::string, int> table = {
      {"ValidationFailed", 422}, {"StaleTask", 409},    {"Conflict", 409},
      {"Unauthorized", 401},     {"NotFound", 404},     {"NoTasksRemaining", 404},
      {"InternalError", 500},    {"BackendUnavailable", 502},
  };
  auto it = table.find(code);
  return it == table.end() ? 400 : it->second;
}

json error_body(const std::exception& e) {
  json fields = json::array();
  std::string code = "InternalError";
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    code = err->code();
    if (const auto* v = dynamic_cast<const ValidationFailed*>(&e))
      for (const auto& f : v->fields()) fields.push_back({{"field", f.field}, {"reason", f.reason}});
  } else if (dynamic_cast<const json::exception*>(&e)) {
    code = "InvalidRequest";
  }
  return json{{"error", {{"code", code}, {"message", e.what()}, {"fields", fields}}}};
}

struct HttpService::Impl {
  CampaignService& service;
  httplib::Server server;
  std::thread thread;

  explicit Impl(CampaignService& s) : service(s) {}

  static std::string bearer(const httplib::Request& req) {
    const auto h = req.get_header_value("Authorization");
    constexpr std::string_view prefix = "Bearer ";
    if (h.compare(0, prefix.size(), prefix) != 0) throw Unauthorized("missing bearer token");
    return h.substr(prefix.size());
  }

  void check_campaign(const std::string& id) {
    const auto s = service.state();
    if (!s->campaign || s->campaign->id != id) throw NotFound("unknown campaign " + id);
  }

  template <class F>
  static httplib::Server::Handler wrap(F&& fn) {
    return [fn = std::forward<F>(fn)](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const std::exception& e) {
        auto body = error_body(e);
        res.status = http_status_for(body["error"]["code"].get<std::string>());
        res.set_content(body.dump(), "application/json");
      }
    };
  }

  static void reply(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  void install() {
    server.Post("/v1/campaigns", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const auto body = json::parse(req.body);
      const auto config = CampaignConfig::from_json(body.at("config"));
      std::vector<PipelineRunRecord> records;
      for (const auto& r : body.at("records")) records.push_back(record_from_json(r));
      std::map<std::string, std::string> refs;
      if (body.contains("references"))
        refs = body["references"].get<std::map<std::string, std::string>>();
      const auto c = service.create(records, refs, config);
      reply(res, {{"version", "v1"}, {"campaign_id", c.id}, {"tokens", c.tokens},
                  {"admin_token", c.admin_token}, {"contexts", c.contexts.size()}},
            201);
    }));
    server.Post("/v1/sessions", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const auto token = bearer(req);
      const auto id = service.open_session(token);
      const auto s = service.state();
      reply(res, {{"version", "v1"}, {"session_id", id}, {"annotator", s->sessions.at(id)}}, 201);
    }));
    server.Get(R"(/v1/sessions/([^/]+)/next)",
               wrap([this](const httplib::Request& req, httplib::Response& res) {
                 reply(res, service.next(req.matches[1], bearer(req)));
               }));
    server.Post(R"(/v1/sessions/([^/]+)/submit)",
                wrap([this](const httplib::Request& req, httplib::Response& res) {
                  const auto token = bearer(req);
                  json body;
                  try {
                    body = json::parse(req.body);
                  } catch (const json::exception& e) {
                    throw ValidationFailed("body", std::string("not JSON: ") + e.what());
                  }
                  reply(res, service.submit(req.matches[1], token, body));
                }));
    server.Get(R"(/v1/campaigns/([^/]+)/scores)",
               wrap([this](const httplib::Request& req, httplib::Response& res) {
                 check_campaign(req.matches[1]);
                 ScoreOptions opts;
                 if (req.has_param("normalization"))
                   opts.normalization = parse_normalization(req.get_param_value("normalization"));
                 opts.strict = req.has_param("strict") && req.get_param_value("strict") != "0";
                 const auto token = bearer(req);
                 auto report = service.scores(token, opts);
                 auto agreement = service.agreement(token);
                 reply(res, {{"version", "v1"},
                             {"report", to_json(report)},
                             {"agreement", agreement ? to_json(*agreement) : json(nullptr)}});
               }));
    server.Get(R"(/v1/campaigns/([^/]+)/export)",
               wrap([this](const httplib::Request& req, httplib::Response& res) {
                 check_campaign(req.matches[1]);
                 res.set_content(service.export_bundle(bearer(req)), "application/x-ndjson");
               }));
  }
};

HttpService::HttpService(CampaignService& service) : impl_(std::make_unique<Impl>(service)) {
  impl_->install();
}

HttpService::~HttpService() { stop(); }

int HttpService::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw InvalidConfig("cannot bind " + host + ":" + std::to_string(port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void HttpService::run(const std::string& host, int port) {
  if (!impl_->server.listen(host, port))
    throw InvalidConfig("cannot listen on " + host + ":" + std::to_string(port));
}

void HttpService::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace socemo
