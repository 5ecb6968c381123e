#include "lcq/eval.h"

#include <sstream>

#include <gtest/gtest.h>

#include "lcq/error.h"

namespace lcq {
namespace {

using Names = std::vector<std::string>;
using NameSet = std::set<std::string>;

TEST(PrecisionAtK, Examples) {
  Names abc = {"a", "b", "c"};
  EXPECT_DOUBLE_EQ(PrecisionAtK(abc, {"a", "c"}, 2), 0.5);
  for (std::size_t k = 1; k <= 3; ++k) {
    EXPECT_DOUBLE_EQ(PrecisionAtK(abc, {"a", "b", "c", "d"}, k), 1.0);
  }
  EXPECT_EQ(PrecisionAtK({}, {"a"}, 3), 0.0);
  // Fewer results than k: divide by the list length.
  EXPECT_DOUBLE_EQ(PrecisionAtK(abc, {"a"}, 10), 1.0 / 3.0);
}

TEST(RecallAtK, Examples) {
  Names abc = {"a", "b", "c"};
  EXPECT_DOUBLE_EQ(RecallAtK(abc, {"a", "c"}, 2), 0.5);
  EXPECT_DOUBLE_EQ(RecallAtK(abc, {"a", "c"}, 3), 1.0);
  EXPECT_DOUBLE_EQ(RecallAtK(abc, {"a", "c"}, 7), 1.0);
  EXPECT_EQ(RecallAtK(abc, {"x", "y"}, 3), 0.0);
}

TEST(RatioAtK, Examples) {
  EXPECT_DOUBLE_EQ(RatioAtK(Names{"a", "n1", "n2"}, {"a", "b", "c"}), 0.5);
  EXPECT_EQ(RatioAtK(Names{"a", "b"}, {"a", "b", "c"}), 0.0);
  EXPECT_DOUBLE_EQ(RatioAtK(Names{"1", "2", "3", "4", "5"}, {}), 5.0);
}

TEST(Metrics, CountingOrigin) {
  Names ranked = {"a", "b", "c", "d", "e"};
  NameSet truth = {"b", "e", "z"};
  for (std::size_t k = 1; k <= 7; ++k) {
    double p = PrecisionAtK(ranked, truth, k) *
               static_cast<double>(std::min(k, ranked.size()));
    double r = RecallAtK(ranked, truth, k) * 3.0;
    EXPECT_NEAR(p, std::round(p), 1e-12);
    EXPECT_NEAR(r, std::round(r), 1e-12);
  }
}

TEST(IntProBaseline, Fixture) {
  Taxonomy t = FixtureF1();
  std::vector<ConceptId> cq = {*t.FindConcept("top university"),
                               *t.FindConcept("american university")};
  auto out = IntProBaseline(t, cq, 10);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(t.name(out[0]), "a");
  EXPECT_EQ(t.name(out[1]), "b");
  auto one = IntProBaseline(t, cq, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(t.name(one[0]), "a");
  std::vector<ConceptId> disjoint = {*t.FindConcept("famous university"),
                                     *t.FindConcept("american university"),
                                     *t.FindConcept("top university")};
  // a and b are in all three; x is not.
  EXPECT_EQ(IntProBaseline(t, disjoint, 10).size(), 2u);
  std::vector<CooccurrenceRecord> rows = {{"p q", "a", 1}, {"r q", "b", 1}};
  Taxonomy apart = Taxonomy::Ingest(rows);
  std::vector<ConceptId> both = {static_cast<ConceptId>(0), static_cast<ConceptId>(1)};
  EXPECT_TRUE(IntProBaseline(apart, both, 10).empty());
}

TEST(IntProBaseline, RanksBySummedCounts) {
  std::vector<CooccurrenceRecord> rows = {
      {"p q", "a", 1}, {"p q", "b", 5}, {"p q", "c", 2},
      {"r q", "a", 1}, {"r q", "b", 1}, {"r q", "c", 4}};
  Taxonomy t = Taxonomy::Ingest(rows);
  std::vector<ConceptId> cq = {static_cast<ConceptId>(0), static_cast<ConceptId>(1)};
  auto out = IntProBaseline(t, cq, 10);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(t.name(out[0]), "b");
  EXPECT_EQ(t.name(out[1]), "c");
  EXPECT_EQ(t.name(out[2]), "a");
}

TEST(GeneratePlanted, Structure) {
  PlantedConfig cfg;
  cfg.seed = 4;
  PlantedInstance inst = GeneratePlanted(cfg);
  Taxonomy t = Taxonomy::Ingest(inst.records);
  EXPECT_EQ(inst.query, "top american private university");
  ASSERT_EQ(inst.answers.size(), 10u);
  NameSet answers(inst.answers.begin(), inst.answers.end());
  NameSet equivalent;
  for (const auto &m : t.EntitiesOf(inst.equivalent_concept)) {
    equivalent.insert(t.name(m.id));
  }
  EXPECT_EQ(equivalent, answers);
  Decomposition d = Decompose(ParseQuery(inst.query), t);
  ASSERT_EQ(d.short_concepts.size(), 3u);
  NameSet intersection;
  for (EntityId e : IntersectEntities(t, d.short_concepts)) {
    intersection.insert(t.name(e));
  }
  EXPECT_EQ(intersection, answers);
  // Same seed, same instance.
  EXPECT_TRUE(Taxonomy::Ingest(GeneratePlanted(cfg).records) == t);
}

TEST(HoldoutExperiment, RecoversPlantedAnswers) {
  PlantedConfig cfg;
  PlantedInstance inst = GeneratePlanted(cfg);
  Taxonomy t = Taxonomy::Ingest(inst.records);
  std::vector<std::size_t> ks = {5, 10};
  HoldoutReport r = HoldoutExperiment(t, inst.query, 0.5, 0, ks, {});
  ASSERT_EQ(r.removed.size(), 5u);
  EXPECT_EQ(r.intersection.size(), 5u);
  // The five untouched answers stay on top as seeds; the removed five come
  // right after them, so recall reaches 1 at k = |E*|.
  EXPECT_DOUBLE_EQ(r.recall.at(inst.answers.size()), 1.0);
  EXPECT_LT(r.recall.at(5), 1.0);
  EXPECT_EQ(r.intpro_recall.at(10), 0.0);
  EXPECT_EQ(r.intpro_ratio.at(10), 0.0);
  EXPECT_GT(r.ratio.at(10), 0.0);
}

TEST(HoldoutExperiment, KeepsEquivalentEdges) {
  PlantedConfig cfg;
  PlantedInstance inst = GeneratePlanted(cfg);
  Taxonomy t = Taxonomy::Ingest(inst.records);
  std::vector<std::size_t> ks = {10};
  HoldoutReport r = HoldoutExperiment(t, inst.query, 0.5, 3, ks, {});
  // Rebuild the reduced taxonomy the same way and check the planted edges.
  Decomposition d = Decompose(ParseQuery(inst.query), t);
  NameSet removed(r.removed.begin(), r.removed.end());
  Taxonomy reduced = t.WithoutEdges([&](ConceptId c, EntityId e) {
    return removed.count(t.name(e)) &&
           std::find(d.short_concepts.begin(), d.short_concepts.end(), c) !=
               d.short_concepts.end();
  });
  for (const auto &name : r.removed) {
    auto e = reduced.FindEntity(name);
    ASSERT_TRUE(e.has_value());
    EXPECT_GT(reduced.Count(*reduced.FindConcept(inst.equivalent_concept), *e), 0u);
  }
}

TEST(HoldoutExperiment, DeterministicAndGuarded) {
  Taxonomy t = FixtureF1();
  std::vector<std::size_t> ks = {4};
  HoldoutReport a = HoldoutExperiment(t, "top american university", 0.5, 7, ks, {});
  HoldoutReport b = HoldoutExperiment(t, "top american university", 0.5, 7, ks, {});
  EXPECT_EQ(a.removed, b.removed);
  EXPECT_EQ(a.pipeline_top, b.pipeline_top);
  EXPECT_EQ(a.recall, b.recall);
  EXPECT_EQ(a.removed.size(), 1u);
  EXPECT_THROW(HoldoutExperiment(t, "top american university", 0.0, 7, ks, {}),
               Error);
  EXPECT_THROW(HoldoutExperiment(t, "top american university", 1.0, 7, ks, {}),
               Error);
  std::vector<CooccurrenceRecord> rows = {{"p q", "a", 1}, {"r q", "a", 1},
                                          {"r q", "b", 1}};
  Taxonomy small = Taxonomy::Ingest(rows);
  EXPECT_THROW(HoldoutExperiment(small, "p r q", 0.5, 0, ks, {}), Error);
}

TEST(ReadGroundTruth, ParsesAndGroups) {
  std::istringstream in(
      "# truth\nTop American University\ta\ntop american university\tb\n\n"
      "ivy university\tc\r\n");
  auto truth = ReadGroundTruth(in);
  ASSERT_EQ(truth.size(), 2u);
  EXPECT_EQ(truth[0].query, "top american university");
  EXPECT_EQ(truth[0].answers, (NameSet{"a", "b"}));
  EXPECT_EQ(truth[1].answers, (NameSet{"c"}));
}

TEST(ReadGroundTruth, MalformedLineNamed) {
  std::istringstream in("q\ta\nq a\n");
  try {
    ReadGroundTruth(in);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(EvaluateQueries, HandComputedOnFixture) {
  Taxonomy t = FixtureF1();
  Names queries = {"top american university", "ivy purple university",
                   "unknown query here"};
  std::vector<GroundTruth> truth = {{"top american university", {"a", "b"}},
                                    {"ivy purple university", {"a"}}};
  std::vector<std::size_t> ks = {5, 2};
  EvalReport r = EvaluateQueries(t, queries, truth, ks, {});
  EXPECT_EQ(r.ks, (std::vector<std::size_t>{2, 5}));
  ASSERT_EQ(r.queries.size(), 2u);
  const QueryMetrics &m = r.queries[0];
  // Ranked list: a, b first, then the three others.
  EXPECT_DOUBLE_EQ(m.precision.at(2), 1.0);
  EXPECT_DOUBLE_EQ(m.recall.at(2), 1.0);
  EXPECT_DOUBLE_EQ(m.ratio.at(2), 0.0);
  EXPECT_DOUBLE_EQ(m.precision.at(5), 2.0 / 5.0);
  EXPECT_DOUBLE_EQ(m.recall.at(5), 1.0);
  EXPECT_DOUBLE_EQ(m.ratio.at(5), 3.0 / 3.0);
  // No short concept resolves for the second query: zero scores, warning.
  EXPECT_EQ(r.queries[1].recall.at(5), 0.0);
  EXPECT_EQ(r.warnings.size(), 2u);
  EXPECT_DOUBLE_EQ(r.average.recall.at(5), 0.5);
}

TEST(EvaluateQueries, EmptyInput) {
  Taxonomy t = FixtureF1();
  std::vector<std::size_t> ks = {10};
  EvalReport r = EvaluateQueries(t, {}, {}, ks, {});
  EXPECT_TRUE(r.queries.empty());
  EXPECT_TRUE(r.warnings.empty());
}

TEST(EvaluateHoldout, OneQuery) {
  PlantedInstance inst = GeneratePlanted({});
  Taxonomy t = Taxonomy::Ingest(inst.records);
  Names queries = {inst.query};
  std::vector<std::size_t> ks = {10};
  EvalReport r = EvaluateHoldout(t, queries, 0.5, 0, ks, {});
  ASSERT_EQ(r.queries.size(), 1u);
  EXPECT_DOUBLE_EQ(r.queries[0].recall.at(10), 1.0);
  EXPECT_DOUBLE_EQ(r.queries[0].precision.at(10), 0.5);
}

}  // namespace
}  // namespace lcq
