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

#include <gtest/gtest.h>

#include <algorithm>

#include "socemo/scoring.hpp"
#include "support.hpp"

namespace socemo {
namespace {

using testing::coincidence_alpha;
using testing::kFixtureGt;
using testing::kFixtureNoCd;
using testing::kFixturePred;
using testing::scoring_fixture;

const ModelKey kM{"m", ConditioningMode::cd_gt};
const ModelKey kOther{"m", ConditioningMode::no_cd};

// Pools with one entry for kM and one for kOther per context.
PoolIndex two_entry_pools(std::initializer_list<std::string> contexts) {
  PoolIndex out;
  for (const auto& c : contexts)
    out[c] = dedup_pool(c, std::vector<PoolInput>{{kM, "m in " + c}, {kOther, "other in " + c}});
  return out;
}

Step1Judgment keep(const PoolIndex& pools, const std::string& who, const std::string& ctx,
                   std::initializer_list<ModelKey> kept) {
  Step1Judgment j{who, ctx, {}, {}, {}};
  for (const auto& e : pools.at(ctx).entries) j.kept[e.response_id] = false;
  for (const auto& k : kept) j.kept[pools.at(ctx).entry_of(k)->response_id] = true;
  return j;
}

std::string id_of(const PoolIndex& pools, const std::string& ctx, const ModelKey& k) {
  return pools.at(ctx).entry_of(k)->response_id;
}

TEST(ScoreFilter, KeptInOneOfTwoContextsByEachAnnotator) {
  const auto pools = two_entry_pools({"c1", "c2"});
  const std::vector<Step1Judgment> j{keep(pools, "a", "c1", {kM}), keep(pools, "a", "c2", {kOther}),
                                     keep(pools, "b", "c1", {kOther}), keep(pools, "b", "c2", {kM})};
  const std::vector<ModelKey> keys{kM, kOther};
  EXPECT_DOUBLE_EQ(score_filter(j, pools, keys).at(kM), 50.0);
}

TEST(ScoreFilter, KeptEverywhereIsHundred) {
  const auto pools = two_entry_pools({"c1", "c2"});
  std::vector<Step1Judgment> j;
  for (auto who : {"a", "b"})
    for (auto c : {"c1", "c2"}) j.push_back(keep(pools, who, c, {kM, kOther}));
  const std::vector<ModelKey> keys{kM};
  EXPECT_DOUBLE_EQ(score_filter(j, pools, keys).at(kM), 100.0);
}

TEST(ScoreFilter, DedupedEntryKeptByOneAnnotator) {
  PoolIndex pools;
  pools["c"] = dedup_pool("c", std::vector<PoolInput>{{kM, "same ."}, {kOther, " same  ."}});
  const std::vector<Step1Judgment> j{keep(pools, "a", "c", {kM}), keep(pools, "b", "c", {})};
  const std::vector<ModelKey> keys{kM, kOther};
  const auto s = score_filter(j, pools, keys);
  EXPECT_DOUBLE_EQ(s.at(kM), 50.0);
  EXPECT_DOUBLE_EQ(s.at(kOther), 50.0);
}

TEST(ScoreFilter, GlobalNormalizationDividesByAllContexts) {
  const auto pools = two_entry_pools({"c1", "c2"});
  // a judged only c1, b judged both.
  const std::vector<Step1Judgment> j{keep(pools, "a", "c1", {kM}), keep(pools, "b", "c1", {kM}),
                                     keep(pools, "b", "c2", {})};
  const std::vector<ModelKey> keys{kM};
  EXPECT_DOUBLE_EQ(score_filter(j, pools, keys).at(kM), 100.0 * (1.0 + 0.5) / 2.0);
  ScoreOptions global{Normalization::global, 0, false};
  EXPECT_DOUBLE_EQ(score_filter(j, pools, keys, global).at(kM), 100.0 * (0.5 + 0.5) / 2.0);
}

TEST(ScoreFilter, Errors) {
  const auto pools = two_entry_pools({"c1"});
  const std::vector<ModelKey> keys{kM};
  EXPECT_THROW(score_filter(std::vector<Step1Judgment>{}, pools, keys), NoJudgments);
  const std::vector<Step1Judgment> unknown{{"a", "zz", {}, {}, {}}};
  EXPECT_THROW(score_filter(unknown, pools, keys), InvalidBundle);
  const std::vector<Step1Judgment> dup{keep(pools, "a", "c1", {}), keep(pools, "a", "c1", {})};
  EXPECT_THROW(score_filter(dup, pools, keys), InvalidBundle);
}

TEST(ScoreTop3, SelectedByOneAnnotatorInOneOfTwoContexts) {
  const auto pools = two_entry_pools({"c1", "c2"});
  std::vector<Step1Judgment> j;
  for (auto who : {"a", "b"})
    for (auto c : {"c1", "c2"}) j.push_back(keep(pools, who, c, {kM, kOther}));
  const std::vector<Step2Selection> s{{"a", "c1", {id_of(pools, "c1", kM), id_of(pools, "c1", kOther)}},
                                      {"a", "c2", {id_of(pools, "c2", kOther)}},
                                      {"b", "c1", {id_of(pools, "c1", kOther)}},
                                      {"b", "c2", {id_of(pools, "c2", kOther)}}};
  const std::vector<ModelKey> keys{kM, kOther};
  const auto t = score_top3(s, j, pools, keys);
  EXPECT_DOUBLE_EQ(t.at(kM), 25.0);
  EXPECT_DOUBLE_EQ(t.at(kOther), 100.0);
}

TEST(ScoreTop3, RejectsSelectionsWithoutJudgment) {
  const auto pools = two_entry_pools({"c1"});
  const std::vector<Step1Judgment> j{keep(pools, "a", "c1", {kM})};
  const std::vector<Step2Selection> s{{"b", "c1", {id_of(pools, "c1", kM)}}};
  const std::vector<ModelKey> keys{kM};
  EXPECT_THROW(score_top3(s, j, pools, keys), InvalidBundle);
  EXPECT_THROW(score_top3(std::vector<Step2Selection>{}, j, pools, keys), NoJudgments);
}

TEST(ScoreStep3, PooledInThirtyOfFiftyNineContexts) {
  const auto q = QuestionnaireSpec::default_spec();
  PoolIndex pools;
  std::map<std::string, std::set<std::string>> s3;
  std::vector<Step3Rating> ratings;
  const std::vector<std::string> annotators{"a", "b", "c"};
  for (int i = 0; i < 59; ++i) {
    const auto ctx = "c" + std::to_string(i);
    pools[ctx] = dedup_pool(ctx, std::vector<PoolInput>{{kM, "m " + ctx}, {kOther, "o " + ctx}});
    const auto pooled = i < 30 ? pools[ctx].entry_of(kM) : pools[ctx].entry_of(kOther);
    s3[ctx] = {pooled->response_id};
    for (const auto& a : annotators) {
      Step3Rating r{a, ctx, pooled->response_id, "", {}};
      for (const auto& question : q.questions) r.ratings[question.id] = question.max;
      ratings.push_back(r);
    }
  }
  const std::vector<ModelKey> keys{kM, kOther, {"never", ConditioningMode::no_cd}};
  const auto s = score_step3(ratings, s3, pools, q, annotators, keys);
  EXPECT_NEAR(s.at(kM).socemo, 100.0 * 30.0 / 59.0, 1e-9);
  EXPECT_NEAR(s.at(kM).weighted_fluency, 100.0 * 30.0 / 59.0, 1e-9);
  EXPECT_DOUBLE_EQ(*s.at(kM).logical, 100.0);
  EXPECT_EQ(s.at(kM).rated_instances, 90u);
  const auto& never = s.at({"never", ConditioningMode::no_cd});
  EXPECT_EQ(never.socemo, 0.0);
  EXPECT_FALSE(never.logical);
}

// Values below come from an exact-fraction evaluation of the fixture
// described in support.hpp.
struct Expected {
  ModelKey key;
  double filter, top3, socemo, weighted_fluency, logical, emotional, social;
};

std::vector<Expected> expected_rows() {
  return {
    {kFixtureNoCd, 50.0, 50.0, 875.0 / 18, 50.0, 50.0, 325.0 / 6, 125.0 / 3},
    {kFixturePred, 250.0 / 3, 250.0 / 3, 1100.0 / 27, 50.0, 155.0 / 3, 35.0, 60.0},
    {kFixtureGt, 100.0, 250.0 / 3, 925.0 / 18, 275.0 / 6, 275.0 / 6, 50.0, 175.0 / 3},
    {ModelKey::reference(), 200.0 / 3, 200.0 / 3, 2725.0 / 54, 100.0 / 3, 425.0 / 9, 175.0 / 3,
     275.0 / 6},
  };
}

TEST(ScoreCampaign, FixtureMatchesExactFractions) {
  const auto report = score_campaign(scoring_fixture());
  ASSERT_EQ(report.rows.size(), 4u);
  EXPECT_EQ(report.rows.front().first, kFixtureNoCd);
  EXPECT_EQ(report.rows.back().first, ModelKey::reference());
  EXPECT_EQ(report.step12_contexts, 3u);
  EXPECT_EQ(report.step3_contexts, 2u);
  for (const auto& e : expected_rows()) {
    const auto* s = report.find(e.key);
    ASSERT_TRUE(s) << e.key.label();
    EXPECT_NEAR(*s->filter, e.filter, 1e-9) << e.key.label();
    EXPECT_NEAR(*s->top3, e.top3, 1e-9) << e.key.label();
    EXPECT_NEAR(*s->socemo, e.socemo, 1e-9) << e.key.label();
    EXPECT_NEAR(*s->weighted_fluency, e.weighted_fluency, 1e-9) << e.key.label();
    EXPECT_NEAR(*s->logical, e.logical, 1e-9) << e.key.label();
    EXPECT_NEAR(*s->emotional, e.emotional, 1e-9) << e.key.label();
    EXPECT_NEAR(*s->social, e.social, 1e-9) << e.key.label();
  }
}

TEST(ScoreCampaign, StrictModeRequiresEveryRating) {
  ScoreOptions strict;
  strict.strict = true;
  EXPECT_THROW(score_campaign(scoring_fixture(), strict), MissingRating);
}

TEST(ScoreCampaign, SharedEntryGivesEqualStep12Scores) {
  // CD-pred and CD-GT share c1's entry; make their c2/c3 entries behave
  // identically too by dropping c2 and c3.
  auto d = scoring_fixture();
  std::erase_if(d.step1, [](const auto& j) { return j.context_id != "c1"; });
  std::erase_if(d.step2, [](const auto& s) { return s.context_id != "c1"; });
  std::erase_if(d.step3, [](const auto& r) { return r.context_id != "c1"; });
  d.pools.erase("c2");
  d.pools.erase("c3");
  d.step3_contexts = {"c1"};
  const auto report = score_campaign(d);
  const auto* p = report.find(kFixturePred);
  const auto* g = report.find(kFixtureGt);
  EXPECT_EQ(*p->filter, *g->filter);
  EXPECT_EQ(*p->top3, *g->top3);
  EXPECT_EQ(*p->socemo, *g->socemo);
}

TEST(ScoreCampaign, InvariantUnderAnnotatorRelabelAndContextOrder) {
  const auto base = score_campaign(scoring_fixture());
  auto d = scoring_fixture();
  const std::map<std::string, std::string> rename{{"a", "zed"}, {"b", "amy"}, {"c", "kim"}};
  for (auto& j : d.step1) j.annotator = rename.at(j.annotator);
  for (auto& s : d.step2) s.annotator = rename.at(s.annotator);
  for (auto& r : d.step3) r.annotator = rename.at(r.annotator);
  for (auto& a : d.annotators) a = rename.at(a);
  std::reverse(d.step1.begin(), d.step1.end());
  std::reverse(d.step2.begin(), d.step2.end());
  std::reverse(d.step3.begin(), d.step3.end());
  std::reverse(d.step3_contexts.begin(), d.step3_contexts.end());
  const auto moved = score_campaign(d);
  for (const auto& [key, s] : base.rows) {
    const auto* m = moved.find(key);
    EXPECT_NEAR(*m->filter, *s.filter, 1e-12);
    EXPECT_NEAR(*m->top3, *s.top3, 1e-12);
    EXPECT_NEAR(*m->socemo, *s.socemo, 1e-12);
  }
}

TEST(ScoreCampaign, Top3NeverExceedsFilterAndSocemoIsBounded) {
  const auto d = scoring_fixture();
  const auto report = score_campaign(d);
  const auto pools = step3_pools(d);
  for (const auto& [key, s] : report.rows) {
    EXPECT_LE(*s.top3, *s.filter + 1e-12);
    EXPECT_GE(*s.top3, 0.0);
    EXPECT_LE(*s.filter, 100.0);
    std::size_t pooled = 0;
    for (const auto& [ctx, ids] : pools)
      if (const auto* e = d.pools.at(ctx).entry_of(key); e && ids.count(e->response_id)) ++pooled;
    EXPECT_LE(*s.socemo, 100.0 * static_cast<double>(pooled) / static_cast<double>(pools.size()));
  }
}

TEST(ScoreCampaign, PracticeContextsAreExcluded) {
  auto d = scoring_fixture();
  const auto base = score_campaign(d);
  d.practice.insert("c2");
  const auto without = score_campaign(d);
  EXPECT_EQ(without.step12_contexts, 2u);
  auto dropped = scoring_fixture();
  std::erase_if(dropped.step1, [](const auto& j) { return j.context_id == "c2"; });
  std::erase_if(dropped.step2, [](const auto& s) { return s.context_id == "c2"; });
  const auto expected = score_campaign(dropped);
  for (const auto& [key, s] : expected.rows) {
    EXPECT_EQ(*without.find(key)->filter, *s.filter) << key.label();
    EXPECT_EQ(*without.find(key)->top3, *s.top3) << key.label();
  }
  EXPECT_NE(*without.find(kFixturePred)->filter, *base.find(kFixturePred)->filter);
}

TEST(ScoreCampaign, TableLayout) {
  const auto table = format_score_table(score_campaign(scoring_fixture()));
  const auto first_line = table.substr(0, table.find('\n'));
  EXPECT_NE(first_line.find("filtered"), std::string::npos);
  EXPECT_NE(first_line.find("weighted_fluency"), std::string::npos);
  EXPECT_NE(table.find("bart CD-GT"), std::string::npos);
  EXPECT_NE(table.find("100.0"), std::string::npos);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 5);
}

// ---------------------------------------------------------------------------

Step1Judgment kept_ids(const std::string& who, const std::string& ctx,
                       std::initializer_list<const char*> kept,
                       std::initializer_list<const char*> dropped = {}) {
  Step1Judgment j{who, ctx, {}, {}, {}};
  for (auto k : kept) j.kept[k] = true;
  for (auto k : dropped) j.kept[k] = false;
  return j;
}

TEST(Agreement, FourContextFixtureMatchesOracle) {
  const std::vector<Step1Judgment> j{
      kept_ids("a", "c1", {"r1", "r2"}), kept_ids("b", "c1", {"r1", "r2"}),
      kept_ids("a", "c2", {"r1"}, {"r2"}), kept_ids("b", "c2", {"r1", "r2"}),
      kept_ids("a", "c3", {"r2", "r3"}), kept_ids("b", "c3", {"r3"}, {"r2"}),
      kept_ids("a", "c4", {}, {"r1"}), kept_ids("b", "c4", {"r1"})};
  using S = std::set<std::string>;
  const std::vector<std::vector<S>> units{{{"r1", "r2"}, {"r1", "r2"}},
                                          {{"r1"}, {"r1", "r2"}},
                                          {{"r2", "r3"}, {"r3"}},
                                          {{}, {"r1"}}};
  const double oracle =
      coincidence_alpha(units, [](const S& x, const S& y) { return 1.0 - set_jaccard(x, y); });
  const auto report = agreement_report(j);
  ASSERT_EQ(report.pairs.size(), 1u);
  EXPECT_EQ(report.pairs[0].shared_contexts, 4u);
  EXPECT_NEAR(*report.pairs[0].alpha, oracle, 1e-12);
  EXPECT_NEAR(report.mean_jaccard, 0.5, 1e-12);
  EXPECT_NEAR(*report.mean_alpha, oracle, 1e-12);
}

TEST(Agreement, IdenticalKeptSetsGiveOne) {
  const std::vector<Step1Judgment> j{kept_ids("a", "c1", {"r1"}), kept_ids("b", "c1", {"r1"}),
                                     kept_ids("a", "c2", {"r1"}), kept_ids("b", "c2", {"r1"})};
  const auto report = agreement_report(j);
  EXPECT_EQ(*report.pairs[0].alpha, 1.0);
  EXPECT_EQ(report.mean_jaccard, 1.0);
}

TEST(Agreement, NoSharedContextThrows) {
  const std::vector<Step1Judgment> j{kept_ids("a", "c1", {"r1"}), kept_ids("b", "c2", {"r1"})};
  EXPECT_THROW(agreement_report(j), InsufficientData);
}

TEST(Agreement, PairsFollowSharedContexts) {
  const auto report = agreement_report(scoring_fixture().step1);
  ASSERT_EQ(report.pairs.size(), 3u);
  for (const auto& p : report.pairs) EXPECT_EQ(p.shared_contexts, 1u);
  EXPECT_NE(format_agreement_table(report).find("a / b"), std::string::npos);
}

}  // namespace
}  // namespace socemo
