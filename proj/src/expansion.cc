#include "lcq/expansion.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include <fmt/core.h>

#include "lcq/error.h"

namespace lcq {

std::string_view ExpansionKindName(ExpansionKind kind) {
  switch (kind) {
    case ExpansionKind::kNaiveBayes:
      return "nb";
    case ExpansionKind::kNoisyOr:
      return "noisy-or";
  }
  return "unknown";
}

void ExpansionModel::Validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("gamma must be in (0,1], got {}", gamma));
  }
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("lambda must be in [0,1), got {}", lambda));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("delta must be in (0,1), got {}", delta));
  }
}

ExpansionContext::ExpansionContext(const Taxonomy &taxonomy,
                                   std::span<const ConceptId> query_concepts,
                                   ExpansionModel model)
    : taxonomy_(&taxonomy),
      query_concepts_(query_concepts.begin(), query_concepts.end()),
      in_union_(taxonomy.num_entities(), false),
      model_(model) {
  model_.Validate();
  for (ConceptId c : query_concepts_) {
    for (const auto &m : taxonomy.EntitiesOf(c)) in_union_[Index(m.id)] = true;
  }
}

bool ExpansionContext::IsQueryConcept(ConceptId c) const {
  return std::find(query_concepts_.begin(), query_concepts_.end(), c) !=
         query_concepts_.end();
}

double GPenalty(const ExpansionContext &ctx, ConceptId c) {
  double outside = 0.0;
  double total = 0.0;
  for (const auto &m : ctx.taxonomy().EntitiesOf(c)) {
    double weight = static_cast<double>(m.count) + 1.0;
    total += weight;
    if (!ctx.InUnion(m.id)) outside += weight;
  }
  if (total == 0.0) return 1.0;
  return (ctx.model().delta + outside) / total;
}

double RelNaiveBayes(const ExpansionContext &ctx, ConceptId c,
                     std::span<const EntityId> seeds) {
  const Taxonomy &t = ctx.taxonomy();
  const double gamma = ctx.model().gamma;
  double prior = t.ConceptPrior(c);
  if (prior <= 0.0) return 0.0;
  double log_score = std::log(prior);
  for (EntityId e : seeds) {
    double factor = gamma * t.ProbEntityGivenConcept(c, e) +
                    (1.0 - gamma) * t.EntityPrior(e);
    if (factor <= 0.0) return 0.0;
    log_score += std::log(factor);
  }
  log_score -= std::log(GPenalty(ctx, c));
  return std::exp(log_score);
}

double RelNoisyOr(const ExpansionContext &ctx, ConceptId c,
                  std::span<const EntityId> seeds) {
  const Taxonomy &t = ctx.taxonomy();
  double miss = 1.0 - ctx.model().lambda;
  for (EntityId e : seeds) miss *= 1.0 - t.ProbConceptGivenEntity(c, e);
  return (1.0 - miss) / GPenalty(ctx, c);
}

double Relevance(const ExpansionContext &ctx, ConceptId c,
                 std::span<const EntityId> seeds) {
  return ctx.model().kind == ExpansionKind::kNaiveBayes
             ? RelNaiveBayes(ctx, c, seeds)
             : RelNoisyOr(ctx, c, seeds);
}

namespace {

void SortConcepts(const Taxonomy &t, std::vector<ConceptRelevance> &concepts) {
  std::sort(concepts.begin(), concepts.end(),
            [&](const ConceptRelevance &a, const ConceptRelevance &b) {
              if (a.score != b.score) return a.score > b.score;
              return t.name(a.concept_id) < t.name(b.concept_id);
            });
}

}  // namespace

std::vector<ConceptRelevance> ExpandConcepts(
    const ExpansionContext &ctx, std::span<const EntityId> seeds,
    std::size_t top_k, std::span<const ConceptId> source_subset) {
  if (seeds.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "expansion needs seed entities");
  }
  if (top_k == 0) {
    throw Error(ErrorKind::kInvalidArgument, "top_k must be >= 1");
  }
  const Taxonomy &t = ctx.taxonomy();
  std::vector<ConceptId> candidates;
  for (EntityId e : seeds) {
    for (const auto &m : t.ConceptsOf(e)) candidates.push_back(m.id);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  std::vector<ConceptRelevance> scored;
  scored.reserve(candidates.size());
  for (ConceptId c : candidates) {
    scored.push_back({c, Relevance(ctx, c, seeds),
                      {source_subset.begin(), source_subset.end()}});
  }
  SortConcepts(t, scored);
  if (scored.size() > top_k) scored.resize(top_k);
  return scored;
}

std::vector<ScoredEntity> RankEntities(
    const Taxonomy &taxonomy, std::span<const ConceptRelevance> concepts) {
  std::map<EntityId, double> rel;
  for (const auto &cr : concepts) {
    for (const auto &m : taxonomy.EntitiesOf(cr.concept_id)) {
      rel[m.id] += taxonomy.ProbEntityGivenConcept(cr.concept_id, m.id) *
                   cr.score;
    }
  }
  std::vector<ScoredEntity> out;
  out.reserve(rel.size());
  for (const auto &[e, score] : rel) out.push_back({e, score});
  std::sort(out.begin(), out.end(),
            [&](const ScoredEntity &a, const ScoredEntity &b) {
              if (a.score != b.score) return a.score > b.score;
              return taxonomy.name(a.entity) < taxonomy.name(b.entity);
            });
  return out;
}

std::vector<SeedTier> GenerateSeedTiers(
    std::span<const SubsetIntersection> subsets) {
  std::map<EntityId, std::size_t> best;
  for (const auto &s : subsets) {
    for (EntityId e : s.entities) {
      auto &size = best[e];
      size = std::max(size, s.size());
    }
  }
  std::map<std::size_t, std::vector<EntityId>, std::greater<>> grouped;
  for (const auto &[e, size] : best) grouped[size].push_back(e);

  std::vector<SeedTier> tiers;
  for (auto &[size, entities] : grouped) {
    tiers.push_back({size, std::move(entities)});
  }
  return tiers;
}

std::vector<PairwiseConstraint> BuildPairwiseConstraints(
    std::span<const SeedTier> tiers) {
  std::vector<PairwiseConstraint> out;
  for (std::size_t i = 1; i < tiers.size(); ++i) {
    out.push_back({tiers[i - 1].entities, tiers[i].entities});
  }
  return out;
}

ExpansionResult Expand(const ExpansionContext &ctx,
                       const SubsetEnumeration &subsets,
                       const ExpansionOptions &options) {
  const Taxonomy &t = ctx.taxonomy();
  ExpansionResult result;

  if (!subsets.full.entities.empty()) {
    result.seed_sets.push_back(subsets.full);
  } else if (!subsets.proper.empty()) {
    const std::size_t largest = subsets.proper.front().size();
    for (const auto &s : subsets.proper) {
      if (s.size() == largest) result.seed_sets.push_back(s);
    }
  }
  if (result.seed_sets.empty()) {
    throw Error(ErrorKind::kUnanswerable, "no non-empty seed intersection");
  }

  // Pool keyed by concept id so summation order is fixed.
  std::map<ConceptId, ConceptRelevance> pool;
  for (const auto &seeds : result.seed_sets) {
    for (auto &cr : ExpandConcepts(ctx, seeds.entities, options.top_k,
                                   seeds.subset)) {
      auto [it, inserted] = pool.try_emplace(cr.concept_id, cr);
      if (!inserted) it->second.score += cr.score;
    }
  }
  std::vector<ConceptId> query_set(ctx.query_concepts().begin(),
                                   ctx.query_concepts().end());
  for (ConceptId c : ctx.query_concepts()) {
    if (pool.count(c) != 0) continue;
    double score = 0.0;
    for (const auto &seeds : result.seed_sets) {
      score += Relevance(ctx, c, seeds.entities);
    }
    pool.emplace(c, ConceptRelevance{c, score, query_set});
  }

  for (auto &[c, cr] : pool) result.concepts.push_back(std::move(cr));
  SortConcepts(t, result.concepts);

  std::vector<ConceptRelevance> ordering_concepts;
  for (const auto &cr : result.concepts) {
    if (options.query_concepts_in_entity_ordering ||
        !ctx.IsQueryConcept(cr.concept_id)) {
      ordering_concepts.push_back(cr);
    }
  }
  if (ordering_concepts.empty()) ordering_concepts = result.concepts;
  result.r_c = RankEntities(t, ordering_concepts);

  std::vector<SubsetIntersection> non_empty = subsets.NonEmpty();
  result.tiers = GenerateSeedTiers(non_empty);
  result.r_p = BuildPairwiseConstraints(result.tiers);

  std::set<EntityId> ranked;
  for (const auto &se : result.r_c) ranked.insert(se.entity);
  std::vector<ScoredEntity> unreached;
  for (const auto &tier : result.tiers) {
    for (EntityId e : tier.entities) {
      if (ranked.count(e) == 0) unreached.push_back({e, 0.0});
    }
  }
  std::sort(unreached.begin(), unreached.end(),
            [&](const ScoredEntity &a, const ScoredEntity &b) {
              return t.name(a.entity) < t.name(b.entity);
            });
  // Scores are non-negative, so zero-score entities already sit at the tail.
  auto tail = std::find_if(result.r_c.begin(), result.r_c.end(),
                           [](const ScoredEntity &se) { return se.score <= 0.0; });
  std::vector<ScoredEntity> zeros(tail, result.r_c.end());
  result.r_c.erase(tail, result.r_c.end());
  zeros.insert(zeros.end(), unreached.begin(), unreached.end());
  std::sort(zeros.begin(), zeros.end(),
            [&](const ScoredEntity &a, const ScoredEntity &b) {
              return t.name(a.entity) < t.name(b.entity);
            });
  result.r_c.insert(result.r_c.end(), zeros.begin(), zeros.end());
  return result;
}

}  // namespace lcq
