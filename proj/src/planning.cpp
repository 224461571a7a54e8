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

#include "socemo/planning.hpp"

#include <algorithm>

#include "socemo/error.hpp"
#include "socemo/text.hpp"

namespace socemo {

std::string_view to_string(PlannerKind k) {
  switch (k) {
    case PlannerKind::remote: return "remote";
    case PlannerKind::random: return "random";
    case PlannerKind::oracle: return "oracle";
  }
  return "remote";
}

PlannerKind parse_planner_kind(std::string_view s) {
  if (s == "remote") return PlannerKind::remote;
  if (s == "random") return PlannerKind::random;
  if (s == "oracle") return PlannerKind::oracle;
  throw InvalidConfig("unknown planner '" + std::string(s) + "'");
}

nlohmann::json to_json(const PlannedSequence& p) {
  auto labels = nlohmann::json::array();
  for (Label l : p.labels) labels.push_back(to_string(l));
  return {{"labels", labels}, {"source", to_string(p.source)}, {"viable", p.viable}};
}

PlannedSequence planned_from_json(const nlohmann::json& j) {
  PlannedSequence p;
  for (const auto& l : j.at("labels")) p.labels.push_back(parse_label(l.get<std::string>()));
  p.source = parse_planner_kind(j.at("source").get<std::string>());
  p.viable = j.at("viable").get<bool>();
  return p;
}

PlannedSequence plan_random(Rng& rng, double p_two) {
  const std::size_t k = uniform_unit(rng) < p_two ? 2 : 1;
  std::vector<Label> pool(kAllLabels.begin(), kAllLabels.end());
  PlannedSequence out{{}, PlannerKind::random, true};
  // Partial Fisher-Yates: the first k slots become a uniform draw without
  // replacement.
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + uniform_index(rng, pool.size() - i);
    std::swap(pool[i], pool[j]);
    out.labels.push_back(pool[i]);
  }
  return out;
}

PlannedSequence plan_oracle(const ContextSample& sample) {
  if (!sample.gold_labels || sample.gold_labels->empty())
    throw MissingGold("sample " + sample.sample_id + " has no gold labels");
  return {*sample.gold_labels, PlannerKind::oracle, true};
}

namespace {

void push_unique(LabelSequence& seq, Label l) {
  if (std::find(seq.begin(), seq.end(), l) == seq.end()) seq.push_back(l);
}

bool is_quote(char c) { return c == '\'' || c == '`' || c == '"'; }

bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

// Strict shape: Labels: 'a', 'b'[.]
std::optional<LabelSequence> parse_strict(std::string_view raw) {
  auto s = trim(raw);
  constexpr std::string_view kPrefix = "Labels:";
  if (s.substr(0, kPrefix.size()) != kPrefix) return std::nullopt;
  s.remove_prefix(kPrefix.size());
  if (!s.empty() && s.back() == '.') s.remove_suffix(1);
  LabelSequence out;
  bool expect_item = true;
  while (true) {
    s = trim(s);
    if (s.empty()) break;
    if (!expect_item) {
      if (s.front() != ',') return std::nullopt;
      s.remove_prefix(1);
      expect_item = true;
      continue;
    }
    if (!is_quote(s.front())) return std::nullopt;
    auto close = s.find_first_of("'`\"", 1);
    if (close == s.npos) return std::nullopt;
    auto l = label_from_string(s.substr(1, close - 1));
    if (!l) return std::nullopt;
    push_unique(out, *l);
    s.remove_prefix(close + 1);
    expect_item = false;
  }
  if (out.empty() || expect_item) return std::nullopt;
  return out;
}

}  // namespace

PlannedSequence parse_label_response(std::string_view raw, const LabelParseOptions& options) {
  PlannedSequence out{{}, PlannerKind::remote, false};
  if (options.strict) {
    if (auto seq = parse_strict(raw)) {
      out.labels = std::move(*seq);
      out.viable = true;
    }
    return out;
  }

  const std::string lower = to_lower_ascii(raw);
  if (trim(lower) == "none") return out;

  // Quoted spans first: text between an opening and the next closing quote.
  LabelSequence quoted;
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!is_quote(lower[i])) continue;
    auto close = lower.find_first_of("'`\"", i + 1);
    if (close == std::string::npos) break;
    if (auto l = label_from_string(trim(std::string_view(lower).substr(i + 1, close - i - 1))))
      push_unique(quoted, *l);
    i = close;
  }

  if (!quoted.empty()) {
    out.labels = std::move(quoted);
  } else {
    std::size_t i = 0;
    while (i < lower.size()) {
      while (i < lower.size() && !is_word_char(lower[i])) ++i;
      std::size_t b = i;
      while (i < lower.size() && is_word_char(lower[i])) ++i;
      if (i > b)
        if (auto l = label_from_string(std::string_view(lower).substr(b, i - b)))
          push_unique(out.labels, *l);
    }
  }
  out.viable = !out.labels.empty();
  return out;
}

PlannedSequence planned_from_names(const std::optional<std::vector<std::string>>& names) {
  PlannedSequence out{{}, PlannerKind::remote, false};
  if (!names) return out;
  for (const auto& n : *names)
    if (auto l = label_from_string(to_lower_ascii(trim(n)))) push_unique(out.labels, *l);
  out.viable = !out.labels.empty();
  return out;
}

PlannedSequence RandomPlanner::plan(const ContextSample& sample) {
  Rng rng(mix_seed(seed_, {"random-planner", sample.sample_id}));
  return plan_random(rng, p_two_);
}

PlannedSequence RemotePlanner::plan(const ContextSample& sample) {
  return planned_from_names(predictor_.predict_labels(sample.context));
}

MetricReport evaluate_planner(Planner& planner, const CorpusSplit& split) {
  if (split.samples.empty()) throw EmptySplit("split '" + split.name + "' is empty");
  std::vector<LabelSet> golds, preds;
  golds.reserve(split.samples.size());
  preds.reserve(split.samples.size());
  double nls_sum = 0.0;
  double len_sum = 0.0;

  for (std::size_t i = 0; i < split.samples.size(); ++i) {
    const auto& s = split.samples[i];
    if (!s.gold_labels) throw MissingGold("sample " + std::to_string(i) + " has no gold labels");
    PlannedSequence p;
    try {
      p = planner.plan(s);
    } catch (const Error& e) {
      throw Error(e.code(), "sample " + std::to_string(i) + " (" + s.sample_id + "): " + e.what());
    }
    const LabelSequence pred = p.viable ? p.labels : LabelSequence{};
    golds.push_back(LabelSet::from_sequence(*s.gold_labels));
    preds.push_back(LabelSet::from_sequence(pred));
    nls_sum += nls(pred, *s.gold_labels);
    len_sum += static_cast<double>(pred.size());
  }

  MetricReport r = multilabel_prf(golds, preds);
  const double n = static_cast<double>(split.samples.size());
  r.mean_len = len_sum / n;
  if (planner.sequence_aware()) r.nls = nls_sum / n;
  return r;
}

}  // namespace socemo
