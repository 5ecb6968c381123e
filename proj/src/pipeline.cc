#include "lcq/pipeline.h"

#include <algorithm>
#include <unordered_set>

#include <fmt/core.h>

#include "lcq/error.h"

namespace lcq {

void PipelineOptions::Validate() const {
  if (k == 0) throw Error(ErrorKind::kInvalidArgument, "k must be >= 1");
  if (concepts_top_k == 0) {
    throw Error(ErrorKind::kInvalidArgument, "concepts top-k must be >= 1");
  }
  if (baseline.max_iter < 1 || !(baseline.tol > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "baseline needs max_iter >= 1 and tol > 0");
  }
  model.Validate();
  weights.Validate();
  optimizer.Validate();
}

std::string_view ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kSeed:
      return "seed";
    case Provenance::kExpanded:
      return "expanded";
    case Provenance::kBaselineOnly:
      return "baseline-only";
  }
  return "unknown";
}

std::vector<std::string> QueryResult::RankedNames() const {
  std::vector<std::string> out;
  out.reserve(ranked.size());
  for (const auto &r : ranked) out.push_back(r.entity);
  return out;
}

QueryResult RunQuery(const Taxonomy &taxonomy, std::string_view raw_query,
                     const PipelineOptions &options) {
  std::optional<std::string_view> head;
  if (options.head) head = *options.head;
  return RunQuery(taxonomy, ParseQuery(raw_query, head), options);
}

QueryResult RunQuery(const Taxonomy &taxonomy, const LongConceptQuery &query,
                     const PipelineOptions &options) {
  options.Validate();
  QueryResult result;
  result.query = query;
  result.decomposition = Decompose(query, taxonomy);
  const auto &concepts = result.decomposition.short_concepts;

  result.subsets = EnumerateSubsets(taxonomy, concepts);
  result.baseline = BaselineRank(taxonomy, concepts, options.baseline);

  ExpansionContext ctx(taxonomy, concepts, options.model);
  ExpansionOptions expansion_options;
  expansion_options.top_k = options.concepts_top_k;
  expansion_options.query_concepts_in_entity_ordering = options.rc_query_concepts;
  result.expansion = Expand(ctx, result.subsets, expansion_options);

  std::vector<std::string> r_b;
  for (const auto &s : result.baseline.ordering) {
    r_b.push_back(taxonomy.name(s.entity));
  }
  std::vector<std::string> r_c;
  for (const auto &s : result.expansion.r_c) {
    r_c.push_back(taxonomy.name(s.entity));
  }
  std::vector<LabeledConstraint> r_p;
  for (const auto &c : result.expansion.r_p) {
    LabeledConstraint lc;
    for (EntityId e : c.higher) lc.higher.push_back(taxonomy.name(e));
    for (EntityId e : c.lower) lc.lower.push_back(taxonomy.name(e));
    r_p.push_back(std::move(lc));
  }
  result.problem = MakeRankingProblem(r_b, r_c, r_p);
  result.aggregation =
      Optimize(result.problem, options.weights, options.optimizer);

  std::unordered_set<std::string> seeds;
  for (const auto &s : result.expansion.seed_sets) {
    for (EntityId e : s.entities) seeds.insert(taxonomy.name(e));
  }
  const std::size_t n =
      std::min(options.k, result.aggregation.ordering.size());
  for (std::size_t rank = 0; rank < n; ++rank) {
    std::size_t i = result.aggregation.ordering[rank];
    const std::string &name = result.problem.labels[i];
    Provenance provenance = Provenance::kBaselineOnly;
    if (seeds.count(name) != 0) {
      provenance = Provenance::kSeed;
    } else if (!ctx.InUnion(*taxonomy.FindEntity(name))) {
      provenance = Provenance::kExpanded;
    }
    result.ranked.push_back({name, result.aggregation.scores[i], provenance});
  }
  return result;
}

}  // namespace lcq
