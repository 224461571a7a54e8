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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "socemo/campaign.hpp"
#include "socemo/corpus.hpp"
#include "socemo/pipeline.hpp"
#include "socemo/rng.hpp"
#include "socemo/scoring.hpp"

namespace socemo::testing {

// Turns with alternating speakers starting at A; labels default to
// inform/neutral.
std::vector<DialogueTurn> turns(const std::vector<std::string>& texts);

PipelineRunRecord make_record(const std::string& sample_id, const std::string& model,
                              ConditioningMode mode, const std::string& selected_text,
                              RunStatus status = RunStatus::ok);

// Records for `n` contexts and three keys (bart NO-CD, CD-pred, CD-GT).
// CD-pred and CD-GT share their text in every third context; NO-CD runs
// fail in every fifth.
std::vector<PipelineRunRecord> synthetic_records(std::size_t n);

Campaign small_campaign(std::size_t contexts, std::size_t step3, std::size_t practice,
                        std::uint64_t seed = 7,
                        std::vector<std::string> annotators = {"ann1", "ann2", "ann3"});

// A valid submission body for `ref`, derived from (salt, annotator, task)
// only, so the answer does not depend on when the task is done.
nlohmann::json answer_for(const CampaignState& state, const std::string& annotator,
                          const TaskRef& ref, std::uint64_t salt);

// Plans and applies one submission, stamping seq numbers; returns the
// events it produced.
std::vector<Event> submit(CampaignState& state, const std::string& annotator,
                          const nlohmann::json& body);

struct Interleaving {
  CampaignState state;
  std::vector<Event> log;
};

// Creates the campaign, then repeatedly picks a random annotator with a
// ready task and submits its answer until no task is ready.
Interleaving run_interleaving(const Campaign& campaign, std::uint64_t order_seed,
                              std::uint64_t answer_salt);

// Three contexts c1..c3, annotators a, b, c with pairs (a,b), (a,c),
// (b,c); keys bart NO-CD/CD-pred/CD-GT plus the reference. CD-pred and
// CD-GT share an entry in c1; NO-CD and the reference share one in c3.
// Step-3 contexts c1 and c3; annotator c never rates the CD-pred response
// of c3. Rating of question q by annotator i on entry e (entries numbered
// 1..10 across contexts) is 1 + (3q + 2i + e) mod 5.
AnnotationData scoring_fixture();
extern const ModelKey kFixtureNoCd, kFixturePred, kFixtureGt;

// Exponential recursive edit distance.
std::size_t brute_levenshtein(const LabelSequence& a, const LabelSequence& b);

// Krippendorff's alpha from the coincidence matrix over distinct values:
//   alpha = 1 - (n - 1) * sum_ck o_ck d_ck / sum_ck n_c n_k d_ck
// units: each a list of the values present for that unit.
template <class V, class D>
double coincidence_alpha(const std::vector<std::vector<V>>& units, D&& d) {
  std::vector<V> values;
  auto index = [&](const V& v) {
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i] == v) return i;
    values.push_back(v);
    return values.size() - 1;
  };
  for (const auto& u : units)
    for (const auto& v : u) index(v);
  const std::size_t c = values.size();
  std::vector<std::vector<double>> o(c, std::vector<double>(c, 0.0));
  for (const auto& u : units) {
    if (u.size() < 2) continue;
    const double m = static_cast<double>(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < u.size(); ++j)
        if (i != j) o[index(u[i])][index(u[j])] += 1.0 / (m - 1.0);
  }
  std::vector<double> nc(c, 0.0);
  double n = 0.0;
  for (std::size_t a = 0; a < c; ++a)
    for (std::size_t b = 0; b < c; ++b) nc[a] += o[a][b];
  for (double x : nc) n += x;
  double num = 0.0, den = 0.0;
  for (std::size_t a = 0; a < c; ++a)
    for (std::size_t b = 0; b < c; ++b) {
      num += o[a][b] * d(values[a], values[b]);
      den += nc[a] * nc[b] * d(values[a], values[b]);
    }
  return 1.0 - (n - 1.0) * num / den;
}

std::string read_text(const std::string& path);

// Root of the source tree's tests/ directory.
std::string tests_dir();

}  // namespace socemo::testing
