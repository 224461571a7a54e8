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

#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "socemo/campaign.hpp"

namespace socemo {

// Append-only event persistence with optional snapshots. `load` returns
// the latest snapshot (or the empty state) and the events after it.
class EventStore {
 public:
  virtual ~EventStore() = default;
  virtual std::pair<CampaignState, std::vector<Event>> load() = 0;
  virtual void append(const Event& e) = 0;
  virtual void snapshot(const CampaignState& state) = 0;
};

class MemoryEventStore final : public EventStore {
 public:
  std::pair<CampaignState, std::vector<Event>> load() override;
  void append(const Event& e) override;
  void snapshot(const CampaignState& state) override;

  std::vector<Event> events() const;

 private:
  mutable std::mutex mu_;
  std::vector<Event> events_;
  std::optional<CampaignState> snapshot_;
};

// <dir>/events.jsonl, one event per line, flushed on every append;
// <dir>/snapshot.json, replaced atomically. A torn final line (no
// trailing newline) is ignored on load.
class FileEventStore final : public EventStore {
 public:
  explicit FileEventStore(std::filesystem::path dir);

  std::pair<CampaignState, std::vector<Event>> load() override;
  void append(const Event& e) override;
  void snapshot(const CampaignState& state) override;

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::mutex mu_;
  std::ofstream log_;
};

}  // namespace socemo
