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

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "socemo/campaign.hpp"
#include "socemo/event_store.hpp"
#include "socemo/scoring.hpp"

namespace socemo {

struct ServiceOptions {
  std::size_t snapshot_every = 100;  // 0 disables snapshots
  // Event timestamps; defaults to UTC wall clock in ISO 8601.
  std::function<std::string()> clock;
};

// Transport-independent annotation service. Every mutation runs under one
// writer lock: validate against the current state, append to the store,
// then publish a new immutable state. Readers copy the published pointer
// and never block on writers for longer than that copy.
class CampaignService {
 public:
  explicit CampaignService(EventStore& store, Classifier* classifier = nullptr,
                           ServiceOptions options = {});

  // Throws Conflict when a campaign already exists.
  Campaign create(std::span<const PipelineRunRecord> records,
                  const std::map<std::string, std::string>& references,
                  const CampaignConfig& config);

  // Bearer token -> new session id. Throws Unauthorized.
  std::string open_session(const std::string& token);

  // Throws NotFound (unknown session), Unauthorized (token does not own
  // the session) and NoTasksRemaining.
  nlohmann::json next(const std::string& session_id, const std::string& token);

  // {"status": "accepted" | "unchanged", "seq": last event}. Throws as
  // next() plus ValidationFailed and StaleTask.
  nlohmann::json submit(const std::string& session_id, const std::string& token,
                        const nlohmann::json& body);

  // Admin token required.
  ScoreReport scores(const std::string& admin_token, const ScoreOptions& options = {}) const;
  std::optional<AgreementReport> agreement(const std::string& admin_token) const;
  std::string export_bundle(const std::string& admin_token, const ScoreOptions& options = {}) const;

  std::shared_ptr<const CampaignState> state() const;

 private:
  const std::string& require_session(const CampaignState& s, const std::string& session_id,
                                     const std::string& token) const;
  void require_admin(const CampaignState& s, const std::string& token) const;
  void commit(std::vector<Event> events);  // caller holds write_mu_

  EventStore& store_;
  Classifier* classifier_;
  ServiceOptions options_;
  std::mutex write_mu_;
  mutable std::mutex publish_mu_;
  std::shared_ptr<const CampaignState> state_;
};

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8090;
  std::string data_dir = "socemo-data";
  std::string backend_url;  // classifier for step-3 pre-tagging; empty: none
  int backend_timeout_ms = 30000;
  int backend_retries = 2;
  std::size_t snapshot_every = 100;

  static ServiceConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  // SOCEMO_PORT, SOCEMO_DATA_DIR, SOCEMO_BACKEND_URL.
  void apply_env();
};

// HTTP front end for CampaignService (v1 endpoints):
//   POST /v1/campaigns                  {config, records, references?}
//   POST /v1/sessions                   Authorization: Bearer <annotator token>
//   GET  /v1/sessions/{id}/next         Authorization: Bearer <annotator token>
//   POST /v1/sessions/{id}/submit       Authorization: Bearer <annotator token>
//   GET  /v1/campaigns/{id}/scores      Authorization: Bearer <admin token>
//   GET  /v1/campaigns/{id}/export      Authorization: Bearer <admin token>
// Errors: {"error": {"code", "message", "fields": [{"field", "reason"}]}}.
class HttpService {
 public:
  explicit HttpService(CampaignService& service);
  ~HttpService();
  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  // Binds (port 0 picks a free one), starts serving on a background thread
  // and returns the bound port.
  int start(const std::string& host, int port);
  // Serves on the calling thread until stop().
  void run(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

int http_status_for(const std::string& error_code);
nlohmann::json error_body(const std::exception& e);

}  // namespace socemo
