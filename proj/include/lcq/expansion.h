#ifndef LCQ_EXPANSION_H_
#define LCQ_EXPANSION_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "lcq/query.h"
#include "lcq/taxonomy.h"

namespace lcq {

enum class ExpansionKind { kNaiveBayes, kNoisyOr };

std::string_view ExpansionKindName(ExpansionKind kind);

struct ExpansionModel {
  ExpansionKind kind = ExpansionKind::kNoisyOr;
  double gamma = 0.5;   // Naive-Bayes smoothing weight, (0, 1]
  double lambda = 0.1;  // Noisy-Or leak probability, [0, 1)
  double delta = 0.5;   // penalty floor, (0, 1)

  // Throws Error(kInvalidArgument) when a parameter is out of range.
  void Validate() const;
};

// Read-only view of one query: the taxonomy, the query concepts C_q and
// membership in their entity union E_u(C_q).
class ExpansionContext {
 public:
  ExpansionContext(const Taxonomy &taxonomy,
                   std::span<const ConceptId> query_concepts,
                   ExpansionModel model);

  const Taxonomy &taxonomy() const { return *taxonomy_; }
  const ExpansionModel &model() const { return model_; }
  std::span<const ConceptId> query_concepts() const { return query_concepts_; }
  bool InUnion(EntityId e) const {
    return Index(e) < in_union_.size() && in_union_[Index(e)];
  }
  bool IsQueryConcept(ConceptId c) const;

 private:
  const Taxonomy *taxonomy_;
  std::vector<ConceptId> query_concepts_;
  std::vector<bool> in_union_;
  ExpansionModel model_;
};

// Over-generality penalty
//   g(c) = (delta + sum_{e in e(c), e not in E_u} (n(e,c)+1))
//          / sum_{e in e(c)} (n(e,c)+1).
// A concept with no entities gets 1.
double GPenalty(const ExpansionContext &ctx, ConceptId c);

// P(c) * prod_seeds (gamma P(e|c) + (1-gamma) P(e)) / g(c), evaluated in the
// log domain.
double RelNaiveBayes(const ExpansionContext &ctx, ConceptId c,
                     std::span<const EntityId> seeds);

// (1 - (1-lambda) prod_seeds (1 - P(c|e))) / g(c).
double RelNoisyOr(const ExpansionContext &ctx, ConceptId c,
                  std::span<const EntityId> seeds);

// Dispatches on the context's model kind.
double Relevance(const ExpansionContext &ctx, ConceptId c,
                 std::span<const EntityId> seeds);

struct ConceptRelevance {
  ConceptId concept_id;
  double score;
  std::vector<ConceptId> source_subset;
};

// Scores every concept of any seed and returns the best `top_k`, ties by
// concept name. Throws Error(kInvalidArgument) on empty seeds or top_k == 0.
std::vector<ConceptRelevance> ExpandConcepts(
    const ExpansionContext &ctx, std::span<const EntityId> seeds,
    std::size_t top_k, std::span<const ConceptId> source_subset = {});

struct ScoredEntity {
  EntityId entity;
  double score;
};

// rel(e) = sum_c P(e|c) rel(c) over the given concepts; every member of a
// given concept is ranked, descending, ties by entity name.
std::vector<ScoredEntity> RankEntities(const Taxonomy &taxonomy,
                                       std::span<const ConceptRelevance> concepts);

// Entities grouped by the largest subset size whose intersection holds them.
struct SeedTier {
  std::size_t size;
  std::vector<EntityId> entities;  // sorted by id
};

// Tiers sorted by size descending; tiers partition the input entities.
std::vector<SeedTier> GenerateSeedTiers(
    std::span<const SubsetIntersection> subsets);

// higher >- lower, as entity sets.
struct PairwiseConstraint {
  std::vector<EntityId> higher;
  std::vector<EntityId> lower;
};

// One constraint per consecutive tier pair.
std::vector<PairwiseConstraint> BuildPairwiseConstraints(
    std::span<const SeedTier> tiers);

struct ExpansionResult {
  // Subsets whose intersections seeded the concept expansion.
  std::vector<SubsetIntersection> seed_sets;
  std::vector<ConceptRelevance> concepts;  // pooled, descending score
  std::vector<ScoredEntity> r_c;
  std::vector<SeedTier> tiers;
  std::vector<PairwiseConstraint> r_p;
};

struct ExpansionOptions {
  // Concepts kept per seed set.
  std::size_t top_k = 10;
  // When false, R_c sums over the retained concepts outside C_q only, and
  // falls back to C_q when no other concept was retained.
  bool query_concepts_in_entity_ordering = false;
};

// Seeds from E(C_q) when non-empty, otherwise from every largest proper
// subset with a non-empty intersection. Each seed set keeps its own top_k
// concepts; concepts found by several runs have their scores summed. Query
// concepts missing from the pool are added with their score summed over all
// runs. R_c ranks every entity of the ordering concepts plus every tier
// entity; tier entities outside those concepts score 0.
ExpansionResult Expand(const ExpansionContext &ctx,
                       const SubsetEnumeration &subsets,
                       const ExpansionOptions &options);

}  // namespace lcq

#endif  // LCQ_EXPANSION_H_
