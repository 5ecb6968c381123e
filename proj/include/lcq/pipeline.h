#ifndef LCQ_PIPELINE_H_
#define LCQ_PIPELINE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lcq/aggregate.h"
#include "lcq/baseline_rank.h"
#include "lcq/expansion.h"
#include "lcq/query.h"
#include "lcq/taxonomy.h"

namespace lcq {

struct PipelineOptions {
  std::optional<std::string> head;
  std::size_t k = 10;
  ExpansionModel model;
  std::size_t concepts_top_k = 10;
  // Include C_q concepts in the R_c sum (see ExpansionOptions).
  bool rc_query_concepts = false;
  BaselineOptions baseline;
  ObjectiveWeights weights;
  OptimizerParams optimizer;

  // Throws Error(kInvalidArgument) on any out-of-range value.
  void Validate() const;
};

enum class Provenance {
  kSeed,          // in a seed intersection used for expansion
  kExpanded,      // reached only through expanded concepts
  kBaselineOnly,  // member of some query concept but not a seed
};

std::string_view ProvenanceName(Provenance p);

struct RankedEntity {
  std::string entity;
  double score;
  Provenance provenance;
};

struct QueryResult {
  LongConceptQuery query;
  Decomposition decomposition;
  SubsetEnumeration subsets;
  BaselineRanking baseline;
  ExpansionResult expansion;
  RankingProblem problem;
  AggregationResult aggregation;
  // Top-k of the aggregated ordering.
  std::vector<RankedEntity> ranked;

  std::vector<std::string> RankedNames() const;
};

// parse -> decompose -> subsets -> baseline -> expansion -> aggregation.
QueryResult RunQuery(const Taxonomy &taxonomy, std::string_view raw_query,
                     const PipelineOptions &options);
QueryResult RunQuery(const Taxonomy &taxonomy, const LongConceptQuery &query,
                     const PipelineOptions &options);

}  // namespace lcq

#endif  // LCQ_PIPELINE_H_
