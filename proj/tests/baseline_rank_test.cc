#include "lcq/baseline_rank.h"

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "lcq/error.h"
#include "lcq/eval.h"
#include "oracles.h"

namespace lcq {
namespace {

std::vector<std::string> Order(const Taxonomy &t, const BaselineRanking &r) {
  std::vector<std::string> out;
  for (const auto &s : r.ordering) out.push_back(t.name(s.entity));
  return out;
}

std::vector<ConceptId> Cq(const Taxonomy &t, std::vector<const char *> names) {
  std::vector<ConceptId> out;
  for (auto n : names) out.push_back(*t.FindConcept(n));
  return out;
}

TEST(BaselineRank, FixtureOrdering) {
  Taxonomy t = FixtureF1();
  BaselineRanking r = BaselineRank(t, Cq(t, {"top university", "american university"}));
  EXPECT_EQ(Order(t, r), (std::vector<std::string>{"a", "b", "c", "d"}));
  EXPECT_GT(r.ordering[1].weight, r.ordering[2].weight);
  EXPECT_TRUE(r.converged);
  EXPECT_DOUBLE_EQ(r.ordering[0].weight, 1.0);
  for (const auto &s : r.ordering) {
    EXPECT_GE(s.sigma, 0.0);
    EXPECT_LT(s.sigma, 1.0);
  }
  ASSERT_EQ(r.concept_scores.size(), 2u);
}

TEST(BaselineRank, SingleConceptIsLexicographic) {
  Taxonomy t = FixtureF1();
  BaselineRanking r = BaselineRank(t, Cq(t, {"top university"}));
  EXPECT_EQ(Order(t, r), (std::vector<std::string>{"a", "b", "d"}));
  EXPECT_EQ(r.ordering[0].weight, r.ordering[2].weight);
}

TEST(BaselineRank, OnlyCandidatesOfQueryConcepts) {
  Taxonomy t = FixtureF1();
  BaselineRanking r = BaselineRank(t, Cq(t, {"top university", "american university"}));
  for (const auto &s : r.ordering) EXPECT_NE(t.name(s.entity), "x");
}

TEST(BaselineRank, Errors) {
  Taxonomy t = FixtureF1();
  EXPECT_THROW(BaselineRank(t, {}), Error);
  BaselineOptions bad;
  bad.max_iter = 0;
  EXPECT_THROW(BaselineRank(t, Cq(t, {"ivy league"}), bad), Error);
  bad = {};
  bad.tol = 0.0;
  EXPECT_THROW(BaselineRank(t, Cq(t, {"ivy league"}), bad), Error);
}

TEST(BaselineRank, InitialScaleDoesNotMatter) {
  Taxonomy t = FixtureF1();
  auto cq = Cq(t, {"top university", "american university", "famous university"});
  BaselineRanking a = BaselineRank(t, cq);
  BaselineOptions o;
  o.initial_concept_weight = 17.0;
  BaselineRanking b = BaselineRank(t, cq, o);
  EXPECT_EQ(Order(t, a), Order(t, b));
  for (std::size_t i = 0; i < a.ordering.size(); ++i) {
    EXPECT_NEAR(a.ordering[i].weight, b.ordering[i].weight, 1e-9);
  }
}

TEST(BaselineRank, AddingMembershipNeverHurts) {
  std::vector<CooccurrenceRecord> rows = {
      {"p q", "a", 1}, {"p q", "b", 1}, {"p q", "e", 1},
      {"r q", "a", 1}, {"r q", "b", 1}, {"r q", "c", 1}, {"s q", "c", 1},
      {"s q", "d", 1}};
  Taxonomy before = Taxonomy::Ingest(rows);
  rows.push_back({"r q", "e", 1});
  Taxonomy after = Taxonomy::Ingest(rows);
  auto position = [](const Taxonomy &t) {
    auto order = Order(t, BaselineRank(t, Cq(t, {"p q", "r q", "s q"})));
    return std::find(order.begin(), order.end(), "e") - order.begin();
  };
  EXPECT_LE(position(after), position(before));
}

TEST(BaselineRank, SeededTieBreak) {
  Taxonomy t = FixtureF1();
  auto cq = Cq(t, {"top university"});
  BaselineOptions o;
  o.tie_break_seed = 5;
  auto a = Order(t, BaselineRank(t, cq, o));
  auto b = Order(t, BaselineRank(t, cq, o));
  EXPECT_EQ(a, b);
  std::sort(a.begin(), a.end());
  EXPECT_EQ(a, (std::vector<std::string>{"a", "b", "d"}));
}

// Power iteration equals the principal eigenvector of B B^T.
TEST(BaselineRank, MatchesEigenOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int nc = 2 + static_cast<int>(rng() % 3);
    const int ne = 2 + static_cast<int>(rng() % 6);
    std::vector<std::vector<int>> b(ne, std::vector<int>(nc, 0));
    for (int e = 0; e < ne; ++e) b[e][rng() % nc] = 1;
    for (int c = 0; c < nc; ++c) b[rng() % ne][c] = 1;
    for (int i = 0; i < ne; ++i) b[i][(i + 1) % nc] |= (rng() % 2);
    // Chain concepts together so the graph is connected.
    for (int c = 1; c < nc; ++c) {
      int e = static_cast<int>(rng() % ne);
      b[e][c] = b[e][c - 1] = 1;
    }
    std::vector<CooccurrenceRecord> rows;
    for (int e = 0; e < ne; ++e) {
      for (int c = 0; c < nc; ++c) {
        if (b[e][c]) {
          rows.push_back({"c" + std::to_string(c), "e" + std::to_string(e),
                          static_cast<std::int64_t>(1 + rng() % 4)});
        }
      }
    }
    Taxonomy t = Taxonomy::Ingest(rows);
    std::vector<ConceptId> cq;
    for (int c = 0; c < nc; ++c) cq.push_back(*t.FindConcept("c" + std::to_string(c)));
    BaselineOptions o;
    o.max_iter = 100000;
    o.tol = 1e-13;
    BaselineRanking r = BaselineRank(t, cq, o);
    std::vector<double> truth = oracle::PrincipalEntityVector(b);
    ASSERT_EQ(r.ordering.size(), static_cast<std::size_t>(ne));
    for (const auto &s : r.ordering) {
      int e = std::stoi(t.name(s.entity).substr(1));
      EXPECT_NEAR(s.weight, truth[e], 1e-6) << "trial " << trial;
    }
  }
}

}  // namespace
}  // namespace lcq
