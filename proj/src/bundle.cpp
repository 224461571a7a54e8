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

#include "socemo/bundle.hpp"

#include <algorithm>
#include <set>

#include "socemo/error.hpp"
#include "socemo/text.hpp"

namespace socemo {

using nlohmann::json;

json to_json(const CampaignContext& c) {
  json turns = json::array();
  for (const auto& t : c.turns) turns.push_back(to_json(t));
  return json{{"context_id", c.id},
              {"turns", turns},
              {"pool", to_json(c.pool)},
              {"practice", c.practice},
              {"step12_annotators", c.step12_annotators},
              {"step3", c.step3}};
}

CampaignContext campaign_context_from_json(const json& j) {
  CampaignContext c;
  c.id = j.at("context_id").get<std::string>();
  for (const auto& t : j.at("turns")) c.turns.push_back(turn_from_json(t));
  c.pool = pool_from_json(j.at("pool"));
  c.practice = j.at("practice").get<bool>();
  c.step12_annotators = j.at("step12_annotators").get<std::vector<std::string>>();
  c.step3 = j.at("step3").get<bool>();
  return c;
}

AnnotationData Bundle::annotation_data() const {
  AnnotationData d;
  for (const auto& c : contexts) {
    d.pools.emplace(c.id, c.pool);
    if (c.practice) d.practice.insert(c.id);
    if (c.step3) d.step3_contexts.push_back(c.id);
  }
  d.annotators = annotators;
  d.questionnaire = questionnaire;
  d.step1 = step1;
  d.step2 = step2;
  d.step3 = step3;
  return d;
}

std::string write_bundle(const Bundle& b, const ScoreOptions& options) {
  std::string out;
  auto line = [&out](json j) {
    out += j.dump();
    out += '\n';
  };
  line({{"type", "header"},
        {"version", "v1"},
        {"campaign_id", b.campaign_id},
        {"seed", b.seed},
        {"annotators", b.annotators},
        {"questionnaire", b.questionnaire.to_json()},
        {"tag_map", b.tag_map.to_json()}});
  for (const auto& c : b.contexts) {
    auto j = to_json(c);
    j["type"] = "context";
    line(std::move(j));
  }

  auto s1 = b.step1;
  std::sort(s1.begin(), s1.end(), [](const auto& x, const auto& y) {
    return std::tie(x.context_id, x.annotator) < std::tie(y.context_id, y.annotator);
  });
  for (const auto& j : s1) {
    auto o = to_json(j);
    o["type"] = "step1";
    line(std::move(o));
  }
  auto s2 = b.step2;
  std::sort(s2.begin(), s2.end(), [](const auto& x, const auto& y) {
    return std::tie(x.context_id, x.annotator) < std::tie(y.context_id, y.annotator);
  });
  for (const auto& s : s2) {
    auto o = to_json(s);
    o["type"] = "step2";
    line(std::move(o));
  }
  auto s3 = b.step3;
  std::sort(s3.begin(), s3.end(), [](const auto& x, const auto& y) {
    return std::tie(x.context_id, x.annotator, x.response_id) <
           std::tie(y.context_id, y.annotator, y.response_id);
  });
  for (const auto& r : s3) {
    auto o = to_json(r);
    o["type"] = "step3";
    line(std::move(o));
  }

  const auto data = b.annotation_data();
  if (data.has_judgments()) {
    json agreement = nullptr;
    try {
      std::vector<Step1Judgment> scored;
      for (const auto& j : data.step1)
        if (!data.practice.count(j.context_id)) scored.push_back(j);
      agreement = to_json(agreement_report(scored));
    } catch (const InsufficientData&) {
    }
    line({{"type", "scores"},
          {"report", to_json(score_campaign(data, options))},
          {"agreement", agreement}});
  }
  return out;
}

Bundle read_bundle(std::string_view text) {
  Bundle b;
  bool have_header = false;
  std::set<std::string> ids;
  std::size_t lineno = 0;
  for (auto raw : split_lines(text)) {
    ++lineno;
    if (trim(raw).empty()) continue;
    try {
      const auto j = json::parse(raw);
      const auto type = j.at("type").get<std::string>();
      if (!have_header && type != "header") throw InvalidBundle("first record must be the header");
      if (type == "header") {
        if (have_header) throw InvalidBundle("second header");
        if (j.at("version").get<std::string>() != "v1")
          throw InvalidBundle("unsupported version " + j.at("version").dump());
        b.campaign_id = j.at("campaign_id").get<std::string>();
        b.seed = j.at("seed").get<std::uint64_t>();
        b.annotators = j.at("annotators").get<std::vector<std::string>>();
        b.questionnaire = QuestionnaireSpec::from_json(j.at("questionnaire"));
        b.tag_map = TagMap::from_json(j.at("tag_map"));
        have_header = true;
      } else if (type == "context") {
        auto c = campaign_context_from_json(j);
        if (!ids.insert(c.id).second) throw InvalidBundle("duplicate context " + c.id);
        b.contexts.push_back(std::move(c));
      } else if (type == "step1") {
        b.step1.push_back(step1_from_json(j));
      } else if (type == "step2") {
        b.step2.push_back(step2_from_json(j));
      } else if (type == "step3") {
        b.step3.push_back(step3_from_json(j));
      } else if (type != "scores") {
        throw InvalidBundle("unknown record type '" + type + "'");
      }
    } catch (const std::exception& e) {
      throw InvalidBundle("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_header) throw InvalidBundle("missing header");
  auto check_ctx = [&](const std::string& id, const char* what) {
    if (!ids.count(id)) throw InvalidBundle(std::string(what) + " references unknown context " + id);
  };
  for (const auto& j : b.step1) check_ctx(j.context_id, "step1");
  for (const auto& s : b.step2) check_ctx(s.context_id, "step2");
  for (const auto& r : b.step3) check_ctx(r.context_id, "step3");
  return b;
}

}  // namespace socemo
