#ifndef LCQ_BASELINE_RANK_H_
#define LCQ_BASELINE_RANK_H_

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lcq/taxonomy.h"

namespace lcq {

struct BaselineOptions {
  int max_iter = 100;
  double tol = 1e-9;
  // w(c) = -log(1 - sigma(c)) at start; sigma(c) = 0.5.
  double initial_concept_weight = std::log(2.0);
  // Ties are broken by entity name unless a seed is given, in which case a
  // seeded random permutation decides.
  std::optional<std::uint64_t> tie_break_seed;
};

struct ScoredConcept {
  ConceptId concept_id;
  double weight;  // normalized w(c)
  double sigma;   // 1 - exp(-w)
};

struct ScoredCandidate {
  EntityId entity;
  double weight;  // normalized w(e), max 1
  double sigma;
};

// Noisy-Or baseline: sigma(e) over the candidates E_u(C_q) in descending
// order, and sigma(c) for each query concept.
struct BaselineRanking {
  std::vector<ScoredCandidate> ordering;
  std::vector<ScoredConcept> concept_scores;  // in query concept order
  int iterations_run = 0;
  bool converged = false;

  std::vector<EntityId> Entities() const;
};

// Scores closer than this on the normalized weight scale are treated as tied.
inline constexpr double kBaselineTieResolution = 1e-9;

// Log-domain iteration of the mutually recursive Noisy-Or scores with
// per-iteration rescaling by max w(e). Each iteration updates every w(e)
// from the previous w(c) and then every w(c) from the new w(e), which makes
// it power iteration on B B^T for the binary membership matrix B restricted
// to C_q x E_u(C_q).
//
// Throws Error(kInvalidArgument) for bad options or an empty concept set and
// Error(kUnanswerable) when the query concepts have no entities.
BaselineRanking BaselineRank(const Taxonomy &taxonomy,
                             std::span<const ConceptId> query_concepts,
                             const BaselineOptions &options = {});

}  // namespace lcq

#endif  // LCQ_BASELINE_RANK_H_
