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

#include "socemo/pipeline.hpp"

#include <atomic>
#include <thread>

#include "socemo/error.hpp"
#include "socemo/text.hpp"

namespace socemo {

std::string_view to_string(Approach a) {
  return a == Approach::reranking ? "reranking" : "prompt-based";
}

Approach parse_approach(std::string_view s) {
  if (s == "reranking") return Approach::reranking;
  if (s == "prompt-based" || s == "prompt_based") return Approach::prompt_based;
  throw InvalidConfig("unknown approach '" + std::string(s) + "'");
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::ok: return "ok";
    case RunStatus::failed: return "failed";
    case RunStatus::unparsable: return "unparsable";
  }
  return "ok";
}

namespace {
RunStatus parse_status(std::string_view s) {
  if (s == "ok") return RunStatus::ok;
  if (s == "failed") return RunStatus::failed;
  if (s == "unparsable") return RunStatus::unparsable;
  throw InvalidConfig("unknown run status '" + std::string(s) + "'");
}
}  // namespace

void GenerationConfig::validate() const {
  if (n_candidates < 1) throw InvalidConfig("n_candidates must be >= 1");
  if (window < 1) throw InvalidConfig("window must be >= 1");
  if (!(classifier_threshold > 0.0 && classifier_threshold < 1.0))
    throw InvalidConfig("classifier_threshold must lie in (0, 1)");
}

Classification classify_labels(const Confidences& confidences, double threshold) {
  Classification out;
  out.confidences = confidences;
  std::size_t best = 0;
  for (std::size_t k = 0; k < kLabelCount; ++k) {
    if (confidences[k] >= threshold) out.labels.insert(kAllLabels[k]);
    if (confidences[k] > confidences[best]) best = k;
  }
  if (out.labels.empty()) {
    out.labels.insert(kAllLabels[best]);
    out.low_confidence = true;
  }
  return out;
}

LabelSequence rerank_sequence(LabelSet labels, bool suppress_neutral) {
  if (suppress_neutral) labels.erase(Label::neutral);
  return labels.canonical_sequence();
}

std::size_t rerank(std::vector<Candidate>& candidates, const LabelSequence& expected,
                   bool suppress_neutral) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto& c = candidates[i];
    if (!c.parsable) continue;
    c.nls = nls(rerank_sequence(c.labels, suppress_neutral), expected);
    if (!best || *c.nls > *candidates[*best].nls) best = i;
  }
  if (!best) throw EmptyCandidateList("no parsable candidate to rerank");
  return *best;
}

namespace {

std::vector<Candidate> make_candidates(std::vector<std::string> texts, std::size_t limit) {
  if (texts.size() > limit) texts.resize(limit);
  std::vector<Candidate> out;
  out.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    Candidate c;
    c.index = i;
    c.text = std::string(trim(texts[i]));
    c.parsable = !c.text.empty();
    out.push_back(std::move(c));
  }
  return out;
}

void classify_all(std::vector<Candidate>& candidates, Classifier& classifier, double threshold) {
  for (auto& c : candidates) {
    if (!c.parsable) continue;
    Confidences conf;
    try {
      conf = classifier.classify(c.text);
    } catch (const BackendUnavailable& e) {
      throw ClassifierUnavailable(e.what());
    } catch (const BackendProtocolError& e) {
      throw ClassifierUnavailable(e.what());
    }
    auto cls = classify_labels(conf, threshold);
    c.labels = cls.labels;
    c.confidences = cls.confidences;
    c.low_confidence = cls.low_confidence;
  }
}

bool any_parsable(const std::vector<Candidate>& cs) {
  for (const auto& c : cs)
    if (c.parsable) return true;
  return false;
}

}  // namespace

PipelineRunRecord run_context(const ContextSample& sample, const GenerationConfig& config,
                              const Backends& backends) {
  PipelineRunRecord rec;
  rec.sample_id = sample.sample_id;
  rec.conversation_id = sample.conversation_id;
  rec.context = sample.context;
  rec.gold_labels = sample.gold_labels;
  rec.gold_response = sample.gold_response;
  rec.model = config.model;
  rec.mode = config.mode;
  rec.approach = config.approach;

  try {
    config.validate();
    if (!backends.generator) throw InvalidConfig("no generator backend configured");

    std::vector<DialogueTurn> window = sample.context;
    if (window.size() > config.window)
      window.erase(window.begin(), window.end() - static_cast<std::ptrdiff_t>(config.window));

    std::optional<LabelSequence> expected;
    if (config.mode == ConditioningMode::cd_gt) {
      rec.planned = plan_oracle(sample);
      expected = rec.planned->labels;
    } else if (config.mode == ConditioningMode::cd_pred) {
      if (!backends.planner) throw InvalidConfig("CD-PRED needs a planner");
      rec.planned = backends.planner->plan(sample);
      if (rec.planned->viable) expected = rec.planned->labels;
      else rec.fallback_nocd = true;
    }

    GenerateRequest req;
    req.context_turns = window;
    req.mode = config.mode;

    if (!expected) {
      req.mode = ConditioningMode::no_cd;
      req.n = config.nocd_source == NoCdSource::separate ? 1 : config.n_candidates;
      rec.candidates = make_candidates(backends.generator->generate(req), req.n);
      if (rec.candidates.empty() || !rec.candidates.front().parsable) {
        rec.status = RunStatus::unparsable;
        rec.cause = "first candidate is empty or unparsable";
        return rec;
      }
      rec.selected_index = 0;
    } else {
      if (!backends.classifier) throw InvalidConfig("conditioned modes need a classifier backend");
      if (config.approach == Approach::prompt_based) {
        req.n = 1;
        req.labels = expected;
      } else {
        req.n = config.n_candidates;
      }
      rec.candidates = make_candidates(backends.generator->generate(req), req.n);
      if (!any_parsable(rec.candidates)) {
        rec.status = RunStatus::unparsable;
        rec.cause = "no parsable candidate";
        return rec;
      }
      classify_all(rec.candidates, *backends.classifier, config.classifier_threshold);
      rec.selected_index = rerank(rec.candidates, *expected, config.suppress_neutral);
    }
    rec.selected_text = rec.candidates[*rec.selected_index].text;
  } catch (const Error& e) {
    rec.status = RunStatus::failed;
    rec.cause = e.code() + ": " + e.what();
    rec.selected_index.reset();
    rec.selected_text.clear();
  } catch (const std::exception& e) {
    rec.status = RunStatus::failed;
    rec.cause = std::string("InternalError: ") + e.what();
    rec.selected_index.reset();
    rec.selected_text.clear();
  }
  return rec;
}

std::vector<PipelineRunRecord> run_split(const CorpusSplit& split, const GenerationConfig& config,
                                         const Backends& backends, std::size_t jobs) {
  std::vector<PipelineRunRecord> out(split.samples.size());
  if (jobs <= 1 || split.samples.size() <= 1) {
    for (std::size_t i = 0; i < split.samples.size(); ++i)
      out[i] = run_context(split.samples[i], config, backends);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  const std::size_t n_workers = std::min(jobs, split.samples.size());
  workers.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < split.samples.size(); i = next++)
        out[i] = run_context(split.samples[i], config, backends);
    });
  }
  for (auto& t : workers) t.join();
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json labels_json(const LabelSequence& seq) {
  auto arr = nlohmann::json::array();
  for (Label l : seq) arr.push_back(to_string(l));
  return arr;
}

LabelSequence labels_from(const nlohmann::json& j) {
  LabelSequence seq;
  for (const auto& l : j) seq.push_back(parse_label(l.get<std::string>()));
  return seq;
}

nlohmann::json to_json(const Candidate& c) {
  return {{"index", c.index},
          {"text", c.text},
          {"parsable", c.parsable},
          {"labels", labels_json(c.labels.canonical_sequence())},
          {"confidences", confidences_to_wire(c.confidences)},
          {"low_confidence", c.low_confidence},
          {"nls", c.nls ? nlohmann::json(*c.nls) : nlohmann::json(nullptr)}};
}

Candidate candidate_from_json(const nlohmann::json& j) {
  Candidate c;
  c.index = j.at("index").get<std::size_t>();
  c.text = j.at("text").get<std::string>();
  c.parsable = j.value("parsable", true);
  c.labels = LabelSet::from_sequence(labels_from(j.value("labels", nlohmann::json::array())));
  if (j.contains("confidences")) c.confidences = confidences_from_wire(j["confidences"]);
  c.low_confidence = j.value("low_confidence", false);
  if (j.contains("nls") && !j["nls"].is_null()) c.nls = j["nls"].get<double>();
  return c;
}

}  // namespace

nlohmann::json to_json(const PipelineRunRecord& r) {
  nlohmann::json j;
  j["sample_id"] = r.sample_id;
  j["conversation_id"] = r.conversation_id;
  j["context"] = nlohmann::json::array();
  for (const auto& t : r.context) j["context"].push_back(to_json(t));
  j["gold_labels"] = r.gold_labels ? labels_json(*r.gold_labels) : nlohmann::json(nullptr);
  j["gold_response"] = r.gold_response;
  j["model"] = r.model;
  j["mode"] = to_string(r.mode);
  j["approach"] = to_string(r.approach);
  j["planned"] = r.planned ? to_json(*r.planned) : nlohmann::json(nullptr);
  j["candidates"] = nlohmann::json::array();
  for (const auto& c : r.candidates) j["candidates"].push_back(to_json(c));
  j["selected_index"] = r.selected_index ? nlohmann::json(*r.selected_index) : nlohmann::json(nullptr);
  j["selected_text"] = r.selected_index ? nlohmann::json(r.selected_text) : nlohmann::json(nullptr);
  j["status"] = to_string(r.status);
  j["cause"] = r.cause;
  j["fallback_nocd"] = r.fallback_nocd;
  return j;
}

PipelineRunRecord record_from_json(const nlohmann::json& j) {
  PipelineRunRecord r;
  r.sample_id = j.at("sample_id").get<std::string>();
  r.conversation_id = j.value("conversation_id", "");
  for (const auto& t : j.at("context")) r.context.push_back(turn_from_json(t));
  if (j.contains("gold_labels") && !j["gold_labels"].is_null())
    r.gold_labels = labels_from(j["gold_labels"]);
  r.gold_response = j.value("gold_response", "");
  r.model = j.at("model").get<std::string>();
  r.mode = parse_mode(j.at("mode").get<std::string>());
  r.approach = parse_approach(j.value("approach", "reranking"));
  if (j.contains("planned") && !j["planned"].is_null()) r.planned = planned_from_json(j["planned"]);
  for (const auto& c : j.value("candidates", nlohmann::json::array()))
    r.candidates.push_back(candidate_from_json(c));
  if (j.contains("selected_index") && !j["selected_index"].is_null()) {
    r.selected_index = j["selected_index"].get<std::size_t>();
    r.selected_text = j.at("selected_text").get<std::string>();
  }
  r.status = parse_status(j.value("status", "ok"));
  r.cause = j.value("cause", "");
  r.fallback_nocd = j.value("fallback_nocd", false);
  return r;
}

std::string write_records_jsonl(const std::vector<PipelineRunRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json(r).dump();
    out += '\n';
  }
  return out;
}

std::vector<PipelineRunRecord> read_records_jsonl(std::string_view text) {
  std::vector<PipelineRunRecord> out;
  std::size_t line_no = 0;
  for (auto line : split_lines(text)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      out.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw InvalidBundle("run records line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace socemo
