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

#include <memory>
#include <string>
#include <thread>

#include "socemo/backend.hpp"

namespace socemo {

struct HttpBackendConfig {
  std::string base_url = "http://127.0.0.1:8080";  // scheme://host:port
  int timeout_ms = 30000;
  int retries = 2;  // extra attempts after a transport failure
};

// Client for a model server speaking the v1 backend protocol:
//   POST /v1/generate        {context_turns, n, mode, labels?} -> {candidates: [text]}
//   POST /v1/classify        {text}                            -> {confidences: {label: score}}
//   POST /v1/predict-labels  {context_turns}                   -> {labels: [text] | null}
// Transport failures (after retries) raise BackendUnavailable; non-2xx
// replies and malformed bodies raise BackendProtocolError. A fresh
// connection is used per call, so one instance may be shared by threads.
class HttpBackend final : public Generator, public Classifier, public LabelPredictor {
 public:
  explicit HttpBackend(HttpBackendConfig config);

  std::vector<std::string> generate(const GenerateRequest& request) override;
  Confidences classify(std::string_view text) override;
  std::optional<std::vector<std::string>> predict_labels(
      const std::vector<DialogueTurn>& context) override;

 private:
  nlohmann::json post(const std::string& path, const nlohmann::json& body);

  HttpBackendConfig config_;
};

// Serves the v1 backend protocol from in-process backends. Used to stand
// up a hermetic model server in tests and demos.
class BackendServer {
 public:
  BackendServer(Generator& generator, Classifier& classifier, LabelPredictor& predictor);
  ~BackendServer();
  BackendServer(const BackendServer&) = delete;
  BackendServer& operator=(const BackendServer&) = delete;

  // Binds to host on an ephemeral port (or `port` when non-zero), starts
  // the listener thread, and returns the bound port.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace socemo
