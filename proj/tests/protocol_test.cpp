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
#include <set>

#include "socemo/mock_backend.hpp"
#include "socemo/protocol.hpp"
#include "socemo/questionnaire.hpp"
#include "socemo/tagging.hpp"
#include "support.hpp"

namespace socemo {
namespace {

using testing::make_record;
using L = Label;

const ModelKey kNoCd{"bart", ConditioningMode::no_cd};
const ModelKey kPred{"bart", ConditioningMode::cd_pred};
const ModelKey kGt{"bart", ConditioningMode::cd_gt};

TEST(ModelKey, LabelsAndOrder) {
  EXPECT_EQ(kGt.label(), "bart CD-GT");
  EXPECT_EQ(ModelKey::reference().label(), "Reference");
  EXPECT_EQ((ModelKey{"beluga", ConditioningMode::cd_pred, "prompt-based"}).label(),
            "beluga PB CD-pred");
  EXPECT_TRUE(display_before(kNoCd, kPred));
  EXPECT_TRUE(display_before(kPred, kGt));
  EXPECT_TRUE(display_before(kGt, ModelKey::reference()));
  EXPECT_EQ(model_key_from_json(to_json(kPred)), kPred);
  EXPECT_EQ(model_key_from_json(to_json(ModelKey::reference())), ModelKey::reference());
}

TEST(DedupPool, MergesWhitespaceVariantsAndTracksAbsence) {
  const std::vector<PoolInput> in{{kNoCd, std::string("Sure .")},
                                  {kPred, std::string("  I will  come .")},
                                  {kGt, std::string("I will come .\n")},
                                  {{"gpt2", ConditioningMode::no_cd}, std::nullopt},
                                  {ModelKey::reference(), std::string("Fine .")}};
  const auto pool = dedup_pool("c1", in);
  EXPECT_EQ(pool.entries.size(), 3u);
  EXPECT_EQ(pool.entry_of(kPred), pool.entry_of(kGt));
  EXPECT_EQ(pool.entry_of(kPred)->producers, (std::set<ModelKey>{kPred, kGt}));
  EXPECT_EQ(pool.absent, (std::set<ModelKey>{{"gpt2", ConditioningMode::no_cd}}));
  EXPECT_FALSE(pool.entry_of({"gpt2", ConditioningMode::no_cd}));
  EXPECT_TRUE(std::is_sorted(pool.entries.begin(), pool.entries.end(),
                             [](const auto& a, const auto& b) { return a.response_id < b.response_id; }));
  EXPECT_EQ(pool_from_json(to_json(pool)), pool);
}

TEST(DedupPool, IdsDependOnTextNotProducersOrOrder) {
  std::vector<PoolInput> in{{kNoCd, std::string("A .")}, {kGt, std::string("B .")}};
  const auto p1 = dedup_pool("c", in);
  std::reverse(in.begin(), in.end());
  in[0].key = {"other", ConditioningMode::cd_gt};
  const auto p2 = dedup_pool("c", in);
  ASSERT_EQ(p1.entries.size(), p2.entries.size());
  for (std::size_t i = 0; i < p1.entries.size(); ++i)
    EXPECT_EQ(p1.entries[i].response_id, p2.entries[i].response_id);
  EXPECT_EQ(p1.entries[0].response_id, response_id_for("c", dedup_text(p1.entries[0].text)));
  EXPECT_EQ(p1.entries[0].response_id.size(), 17u);
}

TEST(DedupPool, Errors) {
  EXPECT_THROW(dedup_pool("c", std::vector<PoolInput>{}), NoRecords);
  const std::vector<PoolInput> dup{{kNoCd, std::string("a")}, {kNoCd, std::string("b")}};
  EXPECT_THROW(dedup_pool("c", dup), InvalidConfig);
  const std::vector<PipelineRunRecord> mixed{make_record("a#3", "m", ConditioningMode::no_cd, "x"),
                                             make_record("b#3", "m", ConditioningMode::no_cd, "y")};
  EXPECT_THROW(dedup_pool(mixed), InvalidConfig);
}

TEST(DedupPool, FromRecordsAddsReferenceAndAbsentFailures) {
  const std::vector<PipelineRunRecord> recs{
      make_record("a#3", "bart", ConditioningMode::no_cd, "x", RunStatus::failed),
      make_record("a#3", "bart", ConditioningMode::cd_gt, "Same .")};
  const auto pool = dedup_pool(recs, std::string("Same ."));
  ASSERT_EQ(pool.entries.size(), 1u);
  EXPECT_EQ(pool.entries[0].producers, (std::set<ModelKey>{kGt, ModelKey::reference()}));
  EXPECT_TRUE(pool.absent.count(kNoCd));
}

TEST(ShufflePool, IsASeededPermutation) {
  std::vector<PoolInput> in;
  for (int i = 0; i < 6; ++i)
    in.push_back({{"m" + std::to_string(i), ConditioningMode::no_cd}, "text " + std::to_string(i)});
  const auto pool = dedup_pool("c", in);
  std::set<std::vector<std::size_t>> orders;
  std::vector<std::size_t> first_slot(6, 0);
  for (std::uint64_t seed = 0; seed < 600; ++seed) {
    auto order = shuffle_pool(pool, seed);
    EXPECT_EQ(order, shuffle_pool(pool, seed));
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < 6; ++i) ASSERT_EQ(sorted[i], i);
    ++first_slot[order[0]];
    orders.insert(order);
  }
  EXPECT_GT(orders.size(), 300u);
  // Each entry leads about 100 of 600 screens; 5 sigma is about 46.
  for (auto n : first_slot) EXPECT_NEAR(static_cast<double>(n), 100.0, 46.0);
  EXPECT_NE(screen_seed(1, "c", "ann1"), screen_seed(1, "c", "ann2"));
}

Step2Selection sel(const std::string& who, std::vector<std::string> ids) {
  return {who, "c", std::move(ids)};
}

TEST(UnionTop3, Sizes) {
  EXPECT_EQ(union_top3(std::vector{sel("a", {"r1", "r2", "r3"}), sel("b", {"r2", "r3", "r4"})}).size(), 4u);
  EXPECT_EQ(union_top3(std::vector{sel("a", {"r1", "r2", "r3"}), sel("b", {"r3", "r1", "r2"})}).size(), 3u);
  EXPECT_EQ(union_top3(std::vector{sel("a", {"r1", "r2", "r3"}), sel("b", {"r4", "r5", "r6"})}).size(), 6u);
}

TEST(JudgmentChecks, Step1AndStep2) {
  const auto pool = dedup_pool("c", std::vector<PoolInput>{{kNoCd, std::string("a")},
                                                           {kPred, std::string("b")},
                                                           {kGt, std::string("c")},
                                                           {ModelKey::reference(), std::string("d")}});
  Step1Judgment j{"ann", "c", {}, {}, {}};
  for (const auto& e : pool.entries) j.kept[e.response_id] = true;
  EXPECT_TRUE(check_step1(j, pool).empty());
  auto missing = j;
  missing.kept.erase(missing.kept.begin());
  EXPECT_EQ(check_step1(missing, pool).size(), 1u);
  auto extra = j;
  extra.kept["rbogus"] = false;
  EXPECT_EQ(check_step1(extra, pool).size(), 1u);

  std::vector<std::string> ids;
  for (const auto& e : pool.entries) ids.push_back(e.response_id);
  EXPECT_TRUE(check_step2(sel("ann", {ids[0], ids[1], ids[2]}), j).empty());
  EXPECT_FALSE(check_step2(sel("ann", {ids[0], ids[1]}), j).empty());
  EXPECT_FALSE(check_step2(sel("ann", {ids[0], ids[0], ids[1]}), j).empty());
  auto partial = j;
  partial.kept[ids[3]] = false;
  partial.kept[ids[2]] = false;
  EXPECT_TRUE(check_step2(sel("ann", {ids[0], ids[1]}), partial).empty());
  EXPECT_FALSE(check_step2(sel("ann", {ids[0], ids[2]}), partial).empty());
}

TEST(Judgments, JsonRoundTrip) {
  Step1Judgment j{"a", "c", {{"r1", true}, {"r2", false}}, {{"r1", true}}, {}};
  EXPECT_EQ(step1_from_json(to_json(j)), j);
  EXPECT_EQ(j.kept_set(), (std::set<std::string>{"r1"}));
  Step2Selection s{"a", "c", {"r1"}};
  EXPECT_EQ(step2_from_json(to_json(s)), s);
  Step3Rating r{"a", "c", "r1", "<I>x</I>", {{"fluency", 4}}};
  EXPECT_EQ(step3_from_json(to_json(r)), r);
}

// ---------------------------------------------------------------------------

constexpr const char* kSuzy =
    "<I> I'm sorry to hear about Suzy's cold.</I> <Q> Do you think you could ask someone from "
    "the family or close friends to help out?</Q> <I> It might be best not to take her on the "
    "trip if she's not feeling well.</I>";

TEST(Tagging, SuzyExample) {
  const auto segs = parse_tagged_response(kSuzy);
  ASSERT_EQ(segs.size(), 3u);
  EXPECT_EQ(segs[0].act, L::inform);
  EXPECT_EQ(segs[1].act, L::question);
  EXPECT_EQ(segs[2].act, L::inform);
  EXPECT_EQ(segs[0].text, " I'm sorry to hear about Suzy's cold.");
  EXPECT_EQ(serialize_segments(segs), kSuzy);
}

TEST(Tagging, Errors) {
  EXPECT_EQ(parse_tagged_response("<I>Hi.</I>"), (std::vector<Segment>{{L::inform, "Hi."}}));
  try {
    parse_tagged_response("<I>Hi.");
    FAIL();
  } catch (const UnbalancedTags& e) {
    EXPECT_EQ(e.offset(), 6u);
  }
  try {
    parse_tagged_response("<I>a</I> <X>b</X>");
    FAIL();
  } catch (const UnknownTag& e) {
    EXPECT_EQ(e.offset(), 9u);
  }
  EXPECT_THROW(parse_tagged_response("<I>a<Q>b</Q></I>"), UnbalancedTags);
  EXPECT_THROW(parse_tagged_response("<I>a</Q>"), UnbalancedTags);
  EXPECT_THROW(parse_tagged_response("</I>"), UnbalancedTags);
  EXPECT_THROW(parse_tagged_response("<I>a</I> stray"), UntaggedText);
  EXPECT_TRUE(parse_tagged_response("  ").empty());
}

TEST(Tagging, SerializeThenParseIsIdentity) {
  Rng rng(17);
  const auto map = TagMap::default_map();
  const std::vector<Label> acts{L::inform, L::question, L::directive, L::commissive};
  const std::string alphabet = "ab .?!,'\"x y";
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Segment> segs(1 + uniform_index(rng, 4));
    for (auto& s : segs) {
      s.act = acts[uniform_index(rng, acts.size())];
      const auto len = uniform_index(rng, 12);
      for (std::size_t i = 0; i < len; ++i) s.text += alphabet[uniform_index(rng, alphabet.size())];
    }
    EXPECT_EQ(parse_tagged_response(serialize_segments(segs, map), map), segs);
  }
}

TEST(Tagging, CustomMapAndLookups) {
  const auto map = TagMap::from_json({{"INF", "inform"}, {"ASK", "question"}});
  EXPECT_EQ(parse_tagged_response("<ASK>why?</ASK>", map)[0].act, L::question);
  EXPECT_THROW(parse_tagged_response("<I>x</I>", map), UnknownTag);
  EXPECT_EQ(map.tag_for(L::inform), "INF");
  EXPECT_THROW(map.tag_for(L::directive), UnknownLabel);
  EXPECT_EQ(TagMap::from_json(map.to_json()), map);
}

TEST(Tagging, SentenceSplitAndPretag) {
  EXPECT_EQ(split_sentences("Hi there. How are you? Fine!"),
            (std::vector<std::string>{"Hi there.", "How are you?", "Fine!"}));
  KeywordClassifier cls;
  const auto tagged = pretag_response("I am fine. Could you help me?", cls);
  const auto segs = parse_tagged_response(tagged);
  ASSERT_EQ(segs.size(), 2u);
  EXPECT_EQ(segs[1].act, L::question);
}

// ---------------------------------------------------------------------------

TEST(Questionnaire, DefaultSpec) {
  const auto q = QuestionnaireSpec::default_spec();
  EXPECT_NO_THROW(q.validate());
  EXPECT_EQ(q.questions.size(), 6u);
  ASSERT_TRUE(q.find("fluency"));
  EXPECT_EQ(q.find("fluency")->axis, Axis::logical);
  EXPECT_DOUBLE_EQ(q.find("fluency")->normalize(4), 0.75);
  EXPECT_EQ(QuestionnaireSpec::from_json(q.to_json()), q);
}

TEST(Questionnaire, CheckAndAxisScores) {
  const auto q = QuestionnaireSpec::default_spec();
  std::map<std::string, int> r;
  for (const auto& x : q.questions) r[x.id] = 5;
  EXPECT_TRUE(q.check(r).empty());
  r["usefulness"] = 1;
  r["fluency"] = 3;
  const auto axes = q.axis_scores(r);
  EXPECT_DOUBLE_EQ(axes[0], (0.0 + 0.5 + 1.0) / 3.0);
  EXPECT_DOUBLE_EQ(axes[1], 1.0);
  EXPECT_DOUBLE_EQ(axes[2], 1.0);

  auto bad = r;
  bad["fluency"] = 6;
  bad.erase("usefulness");
  bad["extra"] = 1;
  EXPECT_EQ(q.check(bad).size(), 3u);
}

TEST(Questionnaire, ValidationErrors) {
  auto q = QuestionnaireSpec::default_spec();
  q.questions.push_back(q.questions.front());
  EXPECT_THROW(q.validate(), InvalidConfig);
  auto no_social = QuestionnaireSpec::default_spec();
  std::erase_if(no_social.questions, [](const Question& x) { return x.axis == Axis::social; });
  EXPECT_THROW(no_social.validate(), InvalidConfig);
  auto no_fluency = QuestionnaireSpec::default_spec();
  no_fluency.fluency_question = "missing";
  EXPECT_THROW(no_fluency.validate(), InvalidConfig);
  auto flat = QuestionnaireSpec::default_spec();
  flat.questions[0].max = flat.questions[0].min;
  EXPECT_THROW(flat.validate(), InvalidConfig);
}

}  // namespace
}  // namespace socemo
