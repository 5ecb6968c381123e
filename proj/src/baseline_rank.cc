#include "lcq/baseline_rank.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include <fmt/core.h>

#include "lcq/error.h"
#include "lcq/query.h"

namespace lcq {

std::vector<EntityId> BaselineRanking::Entities() const {
  std::vector<EntityId> out;
  out.reserve(ordering.size());
  for (const auto &s : ordering) out.push_back(s.entity);
  return out;
}

BaselineRanking BaselineRank(const Taxonomy &taxonomy,
                             std::span<const ConceptId> query_concepts,
                             const BaselineOptions &options) {
  if (query_concepts.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "empty query concept set");
  }
  if (options.max_iter < 1 || !(options.tol > 0) ||
      !(options.initial_concept_weight > 0)) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("invalid baseline options: max_iter={} tol={}",
                            options.max_iter, options.tol));
  }

  const std::vector<EntityId> candidates =
      UnionEntities(taxonomy, query_concepts);
  if (candidates.empty()) {
    throw Error(ErrorKind::kUnanswerable, "no candidate entities");
  }
  const std::size_t m = query_concepts.size();
  const std::size_t n = candidates.size();

  // Local adjacency: concept -> candidate positions, candidate -> concepts.
  std::vector<std::vector<std::size_t>> concept_rows(m);
  std::vector<std::vector<std::size_t>> entity_rows(n);
  for (std::size_t ci = 0; ci < m; ++ci) {
    for (const auto &member : taxonomy.EntitiesOf(query_concepts[ci])) {
      auto it = std::lower_bound(candidates.begin(), candidates.end(),
                                 member.id);
      std::size_t ei = static_cast<std::size_t>(it - candidates.begin());
      concept_rows[ci].push_back(ei);
      entity_rows[ei].push_back(ci);
    }
  }

  std::vector<double> wc(m, options.initial_concept_weight);
  std::vector<double> we(n, 0.0);
  std::vector<double> we_prev;
  BaselineRanking result;

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    // Jacobi update: every w(e) reads the previous w(c) vector only.
    for (std::size_t ei = 0; ei < n; ++ei) {
      double sum = 0.0;
      for (std::size_t ci : entity_rows[ei]) sum += wc[ci];
      we[ei] = sum;
    }
    for (std::size_t ci = 0; ci < m; ++ci) {
      double sum = 0.0;
      for (std::size_t ei : concept_rows[ci]) sum += we[ei];
      wc[ci] = sum;
    }
    const double scale = *std::max_element(we.begin(), we.end());
    for (double &w : we) w /= scale;
    for (double &w : wc) w /= scale;

    result.iterations_run = iter;
    if (!we_prev.empty()) {
      double change = 0.0;
      for (std::size_t ei = 0; ei < n; ++ei) {
        change = std::max(change, std::abs(we[ei] - we_prev[ei]));
      }
      if (change < options.tol) {
        result.converged = true;
        break;
      }
    }
    we_prev = we;
  }

  std::vector<std::uint64_t> tie_rank(n);
  if (options.tie_break_seed) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(*options.tie_break_seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t pos = 0; pos < n; ++pos) tie_rank[perm[pos]] = pos;
  }

  std::vector<std::int64_t> bucket(n);
  for (std::size_t ei = 0; ei < n; ++ei) {
    bucket[ei] = std::llround(we[ei] / kBaselineTieResolution);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (bucket[a] != bucket[b]) return bucket[a] > bucket[b];
    if (options.tie_break_seed) return tie_rank[a] < tie_rank[b];
    return taxonomy.name(candidates[a]) < taxonomy.name(candidates[b]);
  });

  result.ordering.reserve(n);
  for (std::size_t ei : order) {
    result.ordering.push_back(
        {candidates[ei], we[ei], 1.0 - std::exp(-we[ei])});
  }
  result.concept_scores.reserve(m);
  for (std::size_t ci = 0; ci < m; ++ci) {
    result.concept_scores.push_back(
        {query_concepts[ci], wc[ci], 1.0 - std::exp(-wc[ci])});
  }
  return result;
}

}  // namespace lcq
