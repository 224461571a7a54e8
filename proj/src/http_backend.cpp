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

#include "socemo/http_backend.hpp"

#include <httplib.h>

#include "socemo/error.hpp"

namespace socemo {

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {}

nlohmann::json HttpBackend::post(const std::string& path, const nlohmann::json& body) {
  const std::string payload = body.dump();
  std::string last_error;
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    httplib::Client cli(config_.base_url);
    const auto secs = config_.timeout_ms / 1000;
    const auto usecs = (config_.timeout_ms % 1000) * 1000;
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    cli.set_write_timeout(secs, usecs);
    auto res = cli.Post(path, payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status < 200 || res->status >= 300)
      throw BackendProtocolError(path + " returned HTTP " + std::to_string(res->status) + ": " +
                                 res->body);
    try {
      return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      throw BackendProtocolError(path + " returned malformed JSON: " + e.what());
    }
  }
  throw BackendUnavailable(config_.base_url + path + ": " + last_error);
}

std::vector<std::string> HttpBackend::generate(const GenerateRequest& request) {
  auto j = post("/v1/generate", to_wire(request));
  try {
    return j.at("candidates").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw BackendProtocolError(std::string("/v1/generate: ") + e.what());
  }
}

Confidences HttpBackend::classify(std::string_view text) {
  auto j = post("/v1/classify", {{"text", std::string(text)}});
  if (!j.contains("confidences")) throw BackendProtocolError("/v1/classify: missing confidences");
  return confidences_from_wire(j["confidences"]);
}

std::optional<std::vector<std::string>> HttpBackend::predict_labels(
    const std::vector<DialogueTurn>& context) {
  auto j = post("/v1/predict-labels", {{"context_turns", wire_context(context)}});
  try {
    const auto& labels = j.at("labels");
    if (labels.is_null()) return std::nullopt;
    return labels.get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw BackendProtocolError(std::string("/v1/predict-labels: ") + e.what());
  }
}

struct BackendServer::Impl {
  Generator& generator;
  Classifier& classifier;
  LabelPredictor& predictor;
  httplib::Server server;
  std::thread thread;

  Impl(Generator& g, Classifier& c, LabelPredictor& p) : generator(g), classifier(c), predictor(p) {}

  template <class F>
  void route(const std::string& path, F&& handler) {
    server.Post(path, [handler = std::forward<F>(handler)](const httplib::Request& req,
                                                           httplib::Response& res) {
      try {
        auto body = nlohmann::json::parse(req.body);
        res.set_content(handler(body).dump(), "application/json");
      } catch (const std::exception& e) {
        res.status = 400;
        res.set_content(nlohmann::json{{"error", e.what()}}.dump(), "application/json");
      }
    });
  }
};

BackendServer::BackendServer(Generator& generator, Classifier& classifier,
                             LabelPredictor& predictor)
    : impl_(std::make_unique<Impl>(generator, classifier, predictor)) {
  impl_->route("/v1/generate", [this](const nlohmann::json& body) {
    return nlohmann::json{
        {"candidates", impl_->generator.generate(generate_request_from_wire(body))}};
  });
  impl_->route("/v1/classify", [this](const nlohmann::json& body) {
    return nlohmann::json{
        {"confidences",
         confidences_to_wire(impl_->classifier.classify(body.at("text").get<std::string>()))}};
  });
  impl_->route("/v1/predict-labels", [this](const nlohmann::json& body) {
    auto labels = impl_->predictor.predict_labels(context_from_wire(body.at("context_turns")));
    return nlohmann::json{{"labels", labels ? nlohmann::json(*labels) : nlohmann::json(nullptr)}};
  });
}

BackendServer::~BackendServer() { stop(); }

int BackendServer::start(const std::string& host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host) : port;
  if (port != 0 && !impl_->server.bind_to_port(host, port))
    throw BackendUnavailable("cannot bind " + host + ":" + std::to_string(port));
  if (bound < 0) throw BackendUnavailable("cannot bind " + host);
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void BackendServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace socemo
