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

// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "socemo/bundle.hpp"
#include "socemo/corpus.hpp"
#include "socemo/metrics.hpp"
#include "socemo/pipeline.hpp"
#include "socemo/planning.hpp"
#include "socemo/prompts.hpp"
#include "socemo/scoring.hpp"
#include "support.hpp"

namespace socemo {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<LabelSequence> sequences_up_to(std::size_t max_len, const std::vector<Label>& alphabet) {
  std::vector<LabelSequence> out{{}}, frontier{{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<LabelSequence> next;
    for (const auto& s : frontier)
      for (Label l : alphabet) {
        auto t = s;
        t.push_back(l);
        next.push_back(t);
      }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

LabelSet random_set(Rng& rng, std::size_t max_size) {
  LabelSet s;
  const auto n = uniform_index(rng, max_size + 1);
  for (std::size_t i = 0; i < n; ++i) s.insert(kAllLabels[uniform_index(rng, kAllLabels.size())]);
  return s;
}

std::vector<Conversation> random_conversations(Rng& rng, std::size_t count, std::size_t max_turns) {
  std::vector<Conversation> out;
  for (std::size_t c = 0; c < count; ++c) {
    Conversation conv{"c" + std::to_string(c), {}};
    const auto t = uniform_index(rng, max_turns + 1);
    for (std::size_t i = 0; i < t; ++i)
      conv.turns.push_back({i % 2 ? Speaker::B : Speaker::A, "turn " + std::to_string(i) + " .",
                            kAllLabels[uniform_index(rng, 4)],
                            kAllLabels[4 + uniform_index(rng, 7)]});
    out.push_back(conv);
  }
  return out;
}

Outcome edit_distance_oracle() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto seqs = sequences_up_to(4, {Label::inform, Label::question, Label::happiness});
  std::size_t pairs = 0;
  for (const auto& a : seqs)
    for (const auto& b : seqs) {
      ++pairs;
      o.require(levenshtein(a, b) == testing::brute_levenshtein(a, b), "mismatch with brute force");
    }
  const double s = seconds_since(t0);
  o.require(s < 1.0, fmt::format("took {:.3f} s", s));
  if (o.pass) o.detail = fmt::format("{} pairs agree in {:.3f} s", pairs, s);
  return o;
}

Outcome nls_properties() {
  Outcome o;
  using L = Label;
  o.require(nls({L::inform, L::happiness}, {L::inform}) == 0.5, "[inform,happiness] vs [inform]");
  o.require(nls({L::inform}, {L::question}) == 0.0, "disjoint singletons");
  const auto seqs = sequences_up_to(3, {L::inform, L::question, L::happiness, L::fear});
  for (const auto& a : seqs)
    for (const auto& b : seqs) {
      const double v = nls(a, b);
      o.require(v >= 0.0 && v <= 1.0, "out of [0,1]");
      o.require(v == nls(b, a), "not symmetric");
      o.require((v == 1.0) == (a == b), "identity");
    }
  if (o.pass) o.detail = fmt::format("worked values exact; bounds/symmetry/identity on {} pairs",
                                     seqs.size() * seqs.size());
  return o;
}

Outcome random_baseline() {
  Outcome o;
  const auto t0 = Clock::now();
  constexpr std::size_t kDraws = 100000;
  Rng rng(0);
  std::array<std::size_t, kAllLabels.size()> hits{};
  std::size_t total = 0;
  for (std::size_t i = 0; i < kDraws; ++i) {
    const auto p = plan_random(rng);
    total += p.labels.size();
    for (Label l : p.labels) ++hits[index_of(l)];
  }
  const double mean = static_cast<double>(total) / kDraws;
  o.require(std::abs(mean - 1.20) <= 0.01, fmt::format("mean length {:.4f}", mean));
  const double p = mean / static_cast<double>(kAllLabels.size());
  const double se = std::sqrt(p * (1 - p) / kDraws);
  double worst = 0.0;
  for (Label l : kAllLabels) {
    const double z = std::abs(static_cast<double>(hits[index_of(l)]) / kDraws - p) / se;
    worst = std::max(worst, z);
    o.require(z <= 3.0, fmt::format("{} marginal off by {:.2f} SE", to_string(l), z));
  }
  const double s = seconds_since(t0);
  o.require(s < 5.0, fmt::format("took {:.3f} s", s));
  if (o.pass)
    o.detail = fmt::format("mean length {:.4f}, worst marginal {:.2f} SE, {:.3f} s", mean, worst, s);
  return o;
}

Outcome oracle_fixed_point() {
  Outcome o;
  Rng rng(3);
  OraclePlanner oracle;
  for (int trial = 0; trial < 20; ++trial) {
    SampleOptions so;
    so.suppress_neutral = trial % 2 == 0;
    const auto split = build_samples(random_conversations(rng, 30, 12), so);
    if (split.samples.empty()) continue;
    const auto r = evaluate_planner(oracle, split);
    for (double v : {r.jaccard, r.micro.precision, r.micro.recall, r.micro.f1, r.macro.precision,
                     r.macro.recall, r.macro.f1, r.samples.precision, r.samples.recall,
                     r.samples.f1, r.nls.value_or(-1.0)})
      o.require(v == 1.0, fmt::format("metric {} on trial {}", v, trial));
  }
  if (o.pass) o.detail = "Jaccard, P, R, F1 (all averagings) and NLS equal 1 on 20 splits";
  return o;
}

Outcome reranker_exactness() {
  Outcome o;
  Rng rng(5);
  std::size_t matched = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<Candidate> pool(1 + uniform_index(rng, 10));
    for (std::size_t i = 0; i < pool.size(); ++i) {
      pool[i].index = i;
      pool[i].text = "c" + std::to_string(i);
      pool[i].labels = random_set(rng, 3);
      pool[i].parsable = uniform_index(rng, 10) != 0;
    }
    const auto& pick = pool[uniform_index(rng, pool.size())];
    auto expected = rerank_sequence(pick.labels);
    if (uniform_index(rng, 4) == 0) expected = rerank_sequence(random_set(rng, 2));
    if (expected.empty()) expected = {Label::inform};
    bool exists = false;
    for (const auto& c : pool) exists |= c.parsable && rerank_sequence(c.labels) == expected;
    if (std::none_of(pool.begin(), pool.end(), [](const auto& c) { return c.parsable; })) continue;
    const auto best = rerank(pool, expected);
    if (exists) {
      ++matched;
      o.require(pool[best].nls == 1.0, fmt::format("trial {} selected nls {}", trial,
                                                   pool[best].nls.value_or(-1.0)));
    }
  }
  o.require(matched > 1000, "too few pools with an exact match");
  if (o.pass) o.detail = fmt::format("{} pools with an exact match all select NLS 1", matched);
  return o;
}

Outcome scoring_fixtures() {
  Outcome o;
  struct Row {
    ModelKey key;
    std::array<double, 7> v;  // filter, top3, socemo, fluency, logical, emotional, social
  };
  const std::vector<Row> expected{
      {testing::kFixtureNoCd, {50.0, 50.0, 875.0 / 18, 50.0, 50.0, 325.0 / 6, 125.0 / 3}},
      {testing::kFixturePred, {250.0 / 3, 250.0 / 3, 1100.0 / 27, 50.0, 155.0 / 3, 35.0, 60.0}},
      {testing::kFixtureGt, {100.0, 250.0 / 3, 925.0 / 18, 275.0 / 6, 275.0 / 6, 50.0, 175.0 / 3}},
      {ModelKey::reference(),
       {200.0 / 3, 200.0 / 3, 2725.0 / 54, 100.0 / 3, 425.0 / 9, 175.0 / 3, 275.0 / 6}},
  };
  const auto report = score_campaign(testing::scoring_fixture());
  double worst = 0.0;
  for (const auto& row : expected) {
    const auto* s = report.find(row.key);
    o.require(s != nullptr, "missing row " + row.key.label());
    if (!s) continue;
    const std::array<std::optional<double>, 7> got{s->filter,  s->top3,    s->socemo,
                                                   s->weighted_fluency, s->logical,
                                                   s->emotional, s->social};
    for (std::size_t i = 0; i < got.size(); ++i) {
      o.require(got[i].has_value(), "absent value for " + row.key.label());
      const double err = std::abs(got[i].value_or(1e9) - row.v[i]);
      worst = std::max(worst, err);
      o.require(err <= 1e-9, fmt::format("{} column {} off by {}", row.key.label(), i, err));
    }
  }

  // Shared entry: restricted to the context where CD-pred and CD-GT
  // produced the same text, both keys score identically.
  auto shared = testing::scoring_fixture();
  std::erase_if(shared.step1, [](const auto& j) { return j.context_id != "c1"; });
  std::erase_if(shared.step2, [](const auto& s) { return s.context_id != "c1"; });
  std::erase_if(shared.step3, [](const auto& r) { return r.context_id != "c1"; });
  shared.pools.erase("c2");
  shared.pools.erase("c3");
  shared.step3_contexts = {"c1"};
  const auto sr = score_campaign(shared);
  const auto* p = sr.find(testing::kFixturePred);
  const auto* g = sr.find(testing::kFixtureGt);
  o.require(p && g && p->filter == g->filter && p->top3 == g->top3 && p->socemo == g->socemo &&
                p->logical == g->logical && p->emotional == g->emotional &&
                p->social == g->social && p->weighted_fluency == g->weighted_fluency,
            "shared entry scored differently");
  if (o.pass)
    o.detail = fmt::format("4 keys x 7 columns within {:.1e}; shared entry scores identically", worst);
  return o;
}

Outcome krippendorff_fixtures() {
  Outcome o;
  const auto nominal = [](const std::string& a, const std::string& b) { return a == b ? 0.0 : 1.0; };
  AnnotationMatrix<std::string> m(4, 2);
  const std::vector<std::vector<std::string>> units{{"a", "a"}, {"b", "b"}, {"a", "b"}, {"b", "a"}};
  for (std::size_t u = 0; u < 4; ++u) {
    m.set(u, 0, units[u][0]);
    m.set(u, 1, units[u][1]);
  }
  const double nominal_alpha = krippendorff_alpha(m, nominal);
  const double nominal_oracle = testing::coincidence_alpha(units, nominal);
  o.require(std::abs(nominal_alpha - nominal_oracle) <= 1e-12,
            fmt::format("nominal {} vs {}", nominal_alpha, nominal_oracle));

  using S = std::set<std::string>;
  const std::vector<std::vector<S>> set_units{{{"r1", "r2"}, {"r1", "r2"}},
                                              {{"r1"}, {"r1", "r2"}},
                                              {{"r2", "r3"}, {"r3"}},
                                              {{}, {"r1"}}};
  const auto jd = [](const S& a, const S& b) { return 1.0 - set_jaccard(a, b); };
  AnnotationMatrix<S> sm(4, 2);
  for (std::size_t u = 0; u < 4; ++u) {
    sm.set(u, 0, set_units[u][0]);
    sm.set(u, 1, set_units[u][1]);
  }
  const double set_alpha = krippendorff_alpha(sm, jd);
  const double set_oracle = testing::coincidence_alpha(set_units, jd);
  o.require(std::abs(set_alpha - set_oracle) <= 1e-12,
            fmt::format("set-valued {} vs {}", set_alpha, set_oracle));

  AnnotationMatrix<std::string> perfect(5, 3);
  for (std::size_t u = 0; u < 5; ++u)
    for (std::size_t a = 0; a < 3; ++a) perfect.set(u, a, u % 2 ? "x" : "y");
  o.require(krippendorff_alpha(perfect, nominal) == 1.0, "perfect agreement is not exactly 1");
  if (o.pass)
    o.detail = fmt::format("nominal {:.6f}, set-valued {:.6f}, perfect 1", nominal_alpha, set_alpha);
  return o;
}

Outcome corpus_arithmetic() {
  Outcome o;
  Rng rng(9);
  for (std::size_t t = 0; t <= 15; ++t) {
    std::vector<Conversation> convs(1);
    convs[0].id = "c";
    for (std::size_t i = 0; i < t; ++i)
      convs[0].turns.push_back({i % 2 ? Speaker::B : Speaker::A, "x .",
                                kAllLabels[uniform_index(rng, 4)], Label::neutral});
    const auto n = build_samples(convs).samples.size();
    o.require(n == (t > 3 ? t - 3 : 0), fmt::format("T={} gave {} samples", t, n));
  }
  std::string dataset = "dataset absent, split counts skipped";
  if (const char* dir = std::getenv("SOCEMO_DAILYDIALOG_DIR")) {
    const std::vector<std::pair<std::string, std::size_t>> expected{
        {"train", 76052}, {"validation", 7070}, {"test", 6740}};
    for (const auto& [split, count] : expected) {
      const std::string base = std::string(dir) + "/" + split + "/";
      const auto convs =
          parse_corpus(testing::read_text(base + "dialogues_" + split + ".txt"),
                       testing::read_text(base + "dialogues_act_" + split + ".txt"),
                       testing::read_text(base + "dialogues_emotion_" + split + ".txt"));
      const auto n = build_samples(convs).samples.size();
      o.require(n == count, fmt::format("{} split has {} samples", split, n));
    }
    dataset = "split counts 76052/7070/6740";
  }
  if (o.pass) o.detail = "max(0, T-3) samples for T = 0..15; " + dataset;
  return o;
}

Outcome prompt_goldens() {
  Outcome o;
  auto tea = testing::turns({"Sure, I like drinking tea at teahouses .", "Oh, so do I .",
                             "Why don't we go for one now ?"});
  for (auto& t : tea) t.speaker = t.speaker == Speaker::A ? Speaker::B : Speaker::A;
  const auto golden = [](const std::string& name) {
    return testing::read_text(testing::tests_dir() + "/golden/" + name);
  };
  o.require(build_label_prompt(tea) == golden("label_prompt.txt"), "label prompt");
  o.require(build_nocd_prompt(tea) == golden("nocd_prompt.txt"), "NO-CD prompt");
  o.require(build_multi_prompt(tea, 10) == golden("multi_prompt.txt"), "multi-response prompt");
  o.require(build_pb_prompt(tea, {Label::commissive, Label::happiness}) == golden("pb_prompt.txt"),
            "prompt-based prompt");
  if (o.pass) o.detail = "4 prompt builders byte-identical to golden files";
  return o;
}

Outcome event_log_replay() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto campaign = testing::small_campaign(4, 2, 1);
  std::string first_export;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto run = testing::run_interleaving(campaign, seed, 77);
    o.require(replay(run.log) == run.state, fmt::format("replay differs for order {}", seed));
    const auto text = write_bundle(run.state.to_bundle());
    if (seed == 0) first_export = text;
    o.require(text == first_export, fmt::format("export differs for order {}", seed));
  }
  if (o.pass)
    o.detail = fmt::format("1000 interleavings replay and export identically ({:.2f} s)",
                           seconds_since(t0));
  return o;
}

}  // namespace
}  // namespace socemo

int main() {
  using namespace socemo;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"edit-distance oracle equivalence", edit_distance_oracle},
      {"NLS properties", nls_properties},
      {"random-baseline statistics", random_baseline},
      {"oracle-planner fixed point", oracle_fixed_point},
      {"reranker exactness", reranker_exactness},
      {"scoring-formula fixtures", scoring_fixtures},
      {"Krippendorff's alpha fixtures", krippendorff_fixtures},
      {"corpus arithmetic", corpus_arithmetic},
      {"prompt byte-exactness", prompt_goldens},
      {"event-log replay", event_log_replay},
  };
  const auto t0 = Clock::now();
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    failed += !o.pass;
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  }
  const double total = seconds_since(t0);
  const bool fast = total < 60.0;
  failed += !fast;
  std::printf("%s  full suite under one minute: %.2f s\n", fast ? "PASS" : "FAIL", total);
  return failed ? 1 : 0;
}
