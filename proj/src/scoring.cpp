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

#include "socemo/scoring.hpp"

#include <algorithm>
#include <array>
#include <tuple>
#include <utility>

#include <fmt/format.h>

#include "socemo/error.hpp"
#include "socemo/metrics.hpp"

namespace socemo {

std::string_view to_string(Normalization n) {
  return n == Normalization::global ? "global" : "per-annotator";
}

Normalization parse_normalization(std::string_view s) {
  if (s == "per-annotator") return Normalization::per_annotator;
  if (s == "global") return Normalization::global;
  throw InvalidConfig("unknown normalization '" + std::string(s) + "'");
}

namespace {

using Hits = std::map<std::string, std::map<ModelKey, std::size_t>>;

struct Denominators {
  std::map<std::string, std::size_t> per_annotator;  // N_i
  std::size_t contexts = 0;                          // distinct judged contexts
};

Denominators step1_denominators(std::span<const Step1Judgment> judgments, const PoolIndex& pools) {
  if (judgments.empty()) throw NoJudgments("no step-1 judgments");
  Denominators d;
  std::set<std::pair<std::string, std::string>> seen;
  std::set<std::string> contexts;
  for (const auto& j : judgments) {
    if (!pools.count(j.context_id))
      throw InvalidBundle("step-1 judgment for unknown context " + j.context_id);
    if (!seen.emplace(j.annotator, j.context_id).second)
      throw InvalidBundle("duplicate step-1 judgment by " + j.annotator + " on " + j.context_id);
    ++d.per_annotator[j.annotator];
    contexts.insert(j.context_id);
  }
  d.contexts = contexts.size();
  return d;
}

std::map<ModelKey, double> combine(const Hits& hits, const Denominators& d,
                                   std::span<const ModelKey> keys, const ScoreOptions& options) {
  std::map<ModelKey, double> out;
  const double k = static_cast<double>(d.per_annotator.size());
  const double n = static_cast<double>(options.n_contexts ? options.n_contexts : d.contexts);
  for (const auto& key : keys) {
    double sum = 0.0;
    for (const auto& [annotator, n_i] : d.per_annotator) {
      std::size_t h = 0;
      if (auto it = hits.find(annotator); it != hits.end())
        if (auto jt = it->second.find(key); jt != it->second.end()) h = jt->second;
      const double denom =
          options.normalization == Normalization::per_annotator ? static_cast<double>(n_i) : n;
      sum += static_cast<double>(h) / denom;
    }
    out[key] = 100.0 * sum / k;
  }
  return out;
}

}  // namespace

std::map<ModelKey, double> score_filter(std::span<const Step1Judgment> judgments,
                                        const PoolIndex& pools, std::span<const ModelKey> keys,
                                        const ScoreOptions& options) {
  const auto d = step1_denominators(judgments, pools);
  Hits hits;
  for (const auto& j : judgments) {
    const auto& pool = pools.at(j.context_id);
    const auto kept = j.kept_set();
    for (const auto& key : keys)
      if (const auto* e = pool.entry_of(key); e && kept.count(e->response_id))
        ++hits[j.annotator][key];
  }
  return combine(hits, d, keys, options);
}

std::map<ModelKey, double> score_top3(std::span<const Step2Selection> selections,
                                      std::span<const Step1Judgment> judgments,
                                      const PoolIndex& pools, std::span<const ModelKey> keys,
                                      const ScoreOptions& options) {
  if (selections.empty()) throw NoJudgments("no step-2 selections");
  const auto d = step1_denominators(judgments, pools);
  std::set<std::pair<std::string, std::string>> judged, seen;
  for (const auto& j : judgments) judged.emplace(j.annotator, j.context_id);
  Hits hits;
  for (const auto& s : selections) {
    if (!judged.count({s.annotator, s.context_id}))
      throw InvalidBundle("step-2 selection by " + s.annotator + " on " + s.context_id +
                          " without a step-1 judgment");
    if (!seen.emplace(s.annotator, s.context_id).second)
      throw InvalidBundle("duplicate step-2 selection by " + s.annotator + " on " + s.context_id);
    const auto& pool = pools.at(s.context_id);
    const std::set<std::string> top(s.top3.begin(), s.top3.end());
    for (const auto& key : keys)
      if (const auto* e = pool.entry_of(key); e && top.count(e->response_id))
        ++hits[s.annotator][key];
  }
  return combine(hits, d, keys, options);
}

std::map<ModelKey, Step3Scores> score_step3(
    std::span<const Step3Rating> ratings,
    const std::map<std::string, std::set<std::string>>& step3_pools, const PoolIndex& pools,
    const QuestionnaireSpec& questionnaire, std::span<const std::string> annotators,
    std::span<const ModelKey> keys, const ScoreOptions& options) {
  const std::size_t n = step3_pools.size();
  const std::size_t k = annotators.size();
  if (n == 0 || k == 0) throw NoJudgments("no step-3 contexts or annotators");

  const std::set<std::string> annotator_set(annotators.begin(), annotators.end());
  std::map<std::tuple<std::string, std::string, std::string>, const Step3Rating*> index;
  for (const auto& r : ratings) {
    auto pit = step3_pools.find(r.context_id);
    if (pit == step3_pools.end() || !pit->second.count(r.response_id))
      throw InvalidBundle("step-3 rating for " + r.response_id + " outside the step-3 pool of " +
                          r.context_id);
    if (!annotator_set.count(r.annotator))
      throw InvalidBundle("step-3 rating by unknown annotator " + r.annotator);
    if (auto errs = questionnaire.check(r.ratings); !errs.empty()) throw ValidationFailed(errs);
    if (!index.emplace(std::make_tuple(r.annotator, r.context_id, r.response_id), &r).second)
      throw InvalidBundle("duplicate step-3 rating by " + r.annotator + " of " + r.response_id);
  }

  const Question* fluency = questionnaire.find(questionnaire.fluency_question);
  if (!fluency) throw InvalidConfig("fluency question missing");

  struct Acc {
    double socemo = 0.0, fluency = 0.0;
    std::array<double, 3> axes{};
    std::size_t instances = 0;
  };
  std::map<ModelKey, Acc> acc;
  for (const auto& annotator : annotators) {
    for (const auto& [context, ids] : step3_pools) {
      auto pool_it = pools.find(context);
      if (pool_it == pools.end()) throw InvalidBundle("no pool for step-3 context " + context);
      for (const auto& id : ids) {
        auto it = index.find(std::make_tuple(annotator, context, id));
        if (it == index.end()) {
          if (options.strict)
            throw MissingRating(annotator + " has not rated " + id + " in " + context);
          continue;
        }
        const auto axes = questionnaire.axis_scores(it->second->ratings);
        const double score = (axes[0] + axes[1] + axes[2]) / 3.0;
        const double fl = fluency->normalize(it->second->ratings.at(fluency->id));
        for (const auto& key : keys) {
          const auto* e = pool_it->second.entry_of(key);
          if (!e || e->response_id != id) continue;
          auto& a = acc[key];
          a.socemo += score;
          a.fluency += fl;
          for (std::size_t x = 0; x < 3; ++x) a.axes[x] += axes[x];
          ++a.instances;
        }
      }
    }
  }

  const double nk = static_cast<double>(n * k);
  std::map<ModelKey, Step3Scores> out;
  for (const auto& key : keys) {
    Step3Scores s;
    if (auto it = acc.find(key); it != acc.end()) {
      const auto& a = it->second;
      const double m = static_cast<double>(a.instances);
      s.socemo = 100.0 * a.socemo / nk;
      s.weighted_fluency = 100.0 * a.fluency / nk;
      s.logical = 100.0 * a.axes[0] / m;
      s.emotional = 100.0 * a.axes[1] / m;
      s.social = 100.0 * a.axes[2] / m;
      s.rated_instances = a.instances;
    }
    out[key] = s;
  }
  return out;
}

AgreementReport agreement_report(std::span<const Step1Judgment> judgments) {
  std::map<std::string, std::map<std::string, std::set<std::string>>> kept;  // annotator -> ctx
  for (const auto& j : judgments)
    if (!kept[j.annotator].emplace(j.context_id, j.kept_set()).second)
      throw InvalidBundle("duplicate step-1 judgment by " + j.annotator + " on " + j.context_id);

  AgreementReport report;
  for (auto a = kept.begin(); a != kept.end(); ++a) {
    for (auto b = std::next(a); b != kept.end(); ++b) {
      std::vector<std::string> shared;
      for (const auto& [ctx, _] : a->second)
        if (b->second.count(ctx)) shared.push_back(ctx);
      if (shared.empty()) continue;

      PairAgreement pair{a->first, b->first, shared.size(), std::nullopt, 0.0};
      AnnotationMatrix<std::set<std::string>> matrix(shared.size(), 2);
      bool identical = true;
      double jac = 0.0;
      for (std::size_t u = 0; u < shared.size(); ++u) {
        const auto& ka = a->second.at(shared[u]);
        const auto& kb = b->second.at(shared[u]);
        matrix.set(u, 0, ka);
        matrix.set(u, 1, kb);
        identical = identical && ka == kb;
        jac += pairwise_list_jaccard(ka, kb);
      }
      pair.list_jaccard = jac / static_cast<double>(shared.size());
      if (identical) {
        pair.alpha = 1.0;
      } else {
        try {
          pair.alpha = krippendorff_alpha(
              matrix, [](const std::set<std::string>& x, const std::set<std::string>& y) {
                return jaccard_distance(x, y);
              });
        } catch (const InsufficientData&) {
        }
      }
      report.pairs.push_back(std::move(pair));
    }
  }
  if (report.pairs.empty()) throw InsufficientData("no annotator pair shares a context");

  double alpha_sum = 0.0, jac_sum = 0.0;
  std::size_t alpha_n = 0;
  for (const auto& p : report.pairs) {
    jac_sum += p.list_jaccard;
    if (p.alpha) {
      alpha_sum += *p.alpha;
      ++alpha_n;
    }
  }
  report.mean_jaccard = jac_sum / static_cast<double>(report.pairs.size());
  if (alpha_n) report.mean_alpha = alpha_sum / static_cast<double>(alpha_n);
  return report;
}

namespace {

nlohmann::json opt(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string cell(const std::optional<double>& v) {
  return v ? fmt::format("{:.1f}", *v) : std::string("NA");
}

std::string cell2(const std::optional<double>& v) {
  return v ? fmt::format("{:.2f}", *v) : std::string("NA");
}

}  // namespace

nlohmann::json to_json(const AgreementReport& r) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : r.pairs)
    pairs.push_back({{"a", p.a},
                     {"b", p.b},
                     {"shared_contexts", p.shared_contexts},
                     {"alpha", opt(p.alpha)},
                     {"list_jaccard", p.list_jaccard}});
  return {{"version", "v1"},
          {"pairs", pairs},
          {"mean_alpha", opt(r.mean_alpha)},
          {"mean_jaccard", r.mean_jaccard}};
}

std::string format_agreement_table(const AgreementReport& r) {
  std::size_t w = 4;
  for (const auto& p : r.pairs) w = std::max(w, p.a.size() + p.b.size() + 3);
  std::string out = fmt::format("{:<{}}  {:>6}  {:>6}  {:>7}\n", "pair", w, "shared", "alpha",
                                "jaccard");
  for (const auto& p : r.pairs)
    out += fmt::format("{:<{}}  {:>6}  {:>6}  {:>7.2f}\n", p.a + " / " + p.b, w,
                       p.shared_contexts, cell2(p.alpha), p.list_jaccard);
  out += fmt::format("{:<{}}  {:>6}  {:>6}  {:>7.2f}\n", "mean", w, "", cell2(r.mean_alpha),
                     r.mean_jaccard);
  return out;
}

std::map<std::string, std::set<std::string>> step3_pools(const AnnotationData& data) {
  std::map<std::string, std::vector<Step2Selection>> by_context;
  for (const auto& s : data.step2) by_context[s.context_id].push_back(s);
  std::map<std::string, std::set<std::string>> out;
  for (const auto& c : data.step3_contexts) {
    if (data.practice.count(c)) continue;
    out[c] = union_top3(by_context[c]);
  }
  return out;
}

const KeyScores* ScoreReport::find(const ModelKey& key) const {
  for (const auto& [k, s] : rows)
    if (k == key) return &s;
  return nullptr;
}

ScoreReport score_campaign(const AnnotationData& data, const ScoreOptions& options) {
  PoolIndex pools;
  std::set<ModelKey> key_set;
  for (const auto& [id, pool] : data.pools) {
    if (data.practice.count(id)) continue;
    pools.emplace(id, pool);
    for (const auto& e : pool.entries) key_set.insert(e.producers.begin(), e.producers.end());
    key_set.insert(pool.absent.begin(), pool.absent.end());
  }
  std::vector<ModelKey> keys(key_set.begin(), key_set.end());
  std::stable_sort(keys.begin(), keys.end(), display_before);

  auto scored = [&](const auto& items) {
    std::vector<std::decay_t<decltype(items.front())>> out;
    for (const auto& x : items)
      if (!data.practice.count(x.context_id)) out.push_back(x);
    return out;
  };
  const auto step1 = scored(data.step1);
  const auto step2 = scored(data.step2);
  const auto step3 = scored(data.step3);
  const auto s3_pools = step3_pools(data);

  ScoreReport report;
  report.normalization = options.normalization;
  report.step12_contexts = pools.size();
  report.step3_contexts = s3_pools.size();
  report.annotators = data.annotators.size();

  ScoreOptions opts = options;
  if (!opts.n_contexts) opts.n_contexts = pools.size();

  std::map<ModelKey, double> filter, top3;
  std::map<ModelKey, Step3Scores> s3;
  if (!step1.empty()) filter = score_filter(step1, pools, keys, opts);
  if (!step1.empty() && !step2.empty()) top3 = score_top3(step2, step1, pools, keys, opts);
  const bool have_s3 = !step3.empty() && !s3_pools.empty() && !data.annotators.empty();
  if (have_s3)
    s3 = score_step3(step3, s3_pools, pools, data.questionnaire, data.annotators, keys, opts);

  for (const auto& key : keys) {
    KeyScores ks;
    if (!filter.empty()) ks.filter = filter.at(key);
    if (!top3.empty()) ks.top3 = top3.at(key);
    if (have_s3) {
      const auto& s = s3.at(key);
      ks.socemo = s.socemo;
      ks.logical = s.logical;
      ks.emotional = s.emotional;
      ks.social = s.social;
      ks.weighted_fluency = s.weighted_fluency;
    }
    report.rows.emplace_back(key, ks);
  }
  return report;
}

nlohmann::json to_json(const ScoreReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [key, s] : r.rows)
    rows.push_back({{"key", to_json(key)},
                    {"label", key.label()},
                    {"filter", opt(s.filter)},
                    {"top3", opt(s.top3)},
                    {"socemo", opt(s.socemo)},
                    {"logical", opt(s.logical)},
                    {"emotional", opt(s.emotional)},
                    {"social", opt(s.social)},
                    {"weighted_fluency", opt(s.weighted_fluency)}});
  return {{"version", "v1"},
          {"normalization", std::string(to_string(r.normalization))},
          {"step12_contexts", r.step12_contexts},
          {"step3_contexts", r.step3_contexts},
          {"annotators", r.annotators},
          {"rows", rows}};
}

std::string format_score_table(const ScoreReport& r) {
  std::size_t w = 5;
  for (const auto& [key, _] : r.rows) w = std::max(w, key.label().size());
  std::string out = fmt::format("{:<{}}  {:>8}  {:>5}  {:>6}  {:>7}  {:>9}  {:>6}  {:>16}\n",
                                "model", w, "filtered", "top3", "socemo", "logical",
                                "emotional", "social", "weighted_fluency");
  for (const auto& [key, s] : r.rows)
    out += fmt::format("{:<{}}  {:>8}  {:>5}  {:>6}  {:>7}  {:>9}  {:>6}  {:>16}\n", key.label(), w,
                       cell(s.filter), cell(s.top3), cell(s.socemo), cell(s.logical),
                       cell(s.emotional), cell(s.social), cell(s.weighted_fluency));
  return out;
}

}  // namespace socemo
