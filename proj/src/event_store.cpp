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

#include "socemo/event_store.hpp"

#include <sstream>

#include "socemo/error.hpp"
#include "socemo/text.hpp"

namespace socemo {

std::pair<CampaignState, std::vector<Event>> MemoryEventStore::load() {
  std::lock_guard lock(mu_);
  CampaignState base = snapshot_.value_or(CampaignState{});
  std::vector<Event> tail;
  for (const auto& e : events_)
    if (e.seq > base.last_seq) tail.push_back(e);
  return {std::move(base), std::move(tail)};
}

void MemoryEventStore::append(const Event& e) {
  std::lock_guard lock(mu_);
  events_.push_back(e);
}

void MemoryEventStore::snapshot(const CampaignState& state) {
  std::lock_guard lock(mu_);
  snapshot_ = state;
}

std::vector<Event> MemoryEventStore::events() const {
  std::lock_guard lock(mu_);
  return events_;
}

FileEventStore::FileEventStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw InvalidConfig("cannot create data directory " + dir_.string() + ": " + ec.message());
}

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::pair<CampaignState, std::vector<Event>> FileEventStore::load() {
  std::lock_guard lock(mu_);
  CampaignState base;
  const auto snap = dir_ / "snapshot.json";
  if (std::filesystem::exists(snap)) {
    try {
      base = CampaignState::from_json(nlohmann::json::parse(slurp(snap)));
    } catch (const nlohmann::json::exception& e) {
      throw InvalidBundle("snapshot.json: " + std::string(e.what()));
    }
  }
  std::vector<Event> tail;
  const auto log = dir_ / "events.jsonl";
  if (std::filesystem::exists(log)) {
    const std::string text = slurp(log);
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (trim(lines[i]).empty()) continue;
      const bool last_unterminated = i + 1 == lines.size() && !text.empty() && text.back() != '\n';
      try {
        auto e = event_from_json(nlohmann::json::parse(lines[i]));
        if (e.seq > base.last_seq) tail.push_back(std::move(e));
      } catch (const std::exception& e) {
        if (last_unterminated) {
          const auto keep = text.rfind('\n');
          std::filesystem::resize_file(log, keep == std::string::npos ? 0 : keep + 1);
          break;
        }
        throw InvalidBundle("events.jsonl line " + std::to_string(i + 1) + ": " + e.what());
      }
    }
  }
  return {std::move(base), std::move(tail)};
}

void FileEventStore::append(const Event& e) {
  std::lock_guard lock(mu_);
  if (!log_.is_open()) {
    log_.open(dir_ / "events.jsonl", std::ios::binary | std::ios::app);
    if (!log_) throw InvalidConfig("cannot open " + (dir_ / "events.jsonl").string());
  }
  log_ << to_json(e).dump() << '\n';
  log_.flush();
  if (!log_) throw InvalidConfig("write to events.jsonl failed");
}

void FileEventStore::snapshot(const CampaignState& state) {
  std::lock_guard lock(mu_);
  const auto tmp = dir_ / "snapshot.json.tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << state.to_json().dump() << '\n';
    if (!out) throw InvalidConfig("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, dir_ / "snapshot.json");
}

}  // namespace socemo
