#ifndef LCQ_AGGREGATE_H_
#define LCQ_AGGREGATE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lcq {

// Rank aggregation over a universe of labelled items. Item i has score s_i
// and strength exp(s_i). Two total orderings are scored with the
// Plackett-Luce likelihood and set-level constraints X >- Y with the
// Bradley-Terry likelihood on summed strengths.

struct ObjectiveWeights {
  double alpha = 1.0 / 3.0;  // weight of R_c
  double beta = 1.0 / 3.0;   // weight of R_p; R_b gets 1 - alpha - beta

  void Validate() const;
};

struct OptimizerParams {
  double learning_rate = 0.05;
  int max_epochs = 1000;
  double tol = 1e-8;
  std::uint64_t rng_seed = 0;
  // Per-term updates in a shuffled order instead of full-batch steps.
  bool stochastic = false;

  void Validate() const;
};

struct SetConstraint {
  std::vector<std::size_t> higher;
  std::vector<std::size_t> lower;
};

struct RankingProblem {
  std::vector<std::string> labels;
  std::vector<std::size_t> r_b;
  std::vector<std::size_t> r_c;
  std::vector<SetConstraint> r_p;

  std::size_t size() const { return labels.size(); }
};

struct LabeledConstraint {
  std::vector<std::string> higher;
  std::vector<std::string> lower;
};

// Universe in order of first appearance across r_b, r_c, r_p. Throws
// Error(kInvalidArgument) on a repeated item within one ordering, an empty
// constraint side, or overlapping constraint sides.
RankingProblem MakeRankingProblem(
    std::span<const std::string> r_b, std::span<const std::string> r_c,
    std::span<const LabeledConstraint> r_p);

// exp(sx) / (exp(sx) + exp(sy)).
double BtPairProb(double sx, double sy);

// sum_{i < n-1} log(exp(s_{z_i}) / sum_{j >= i} exp(s_{z_j})).
double ListwiseLogLikelihood(std::span<const std::size_t> ordering,
                             std::span<const double> scores);

// sum log(sum_X exp(s) / (sum_X exp(s) + sum_Y exp(s))).
double PairwiseLogLikelihood(std::span<const SetConstraint> constraints,
                             std::span<const double> scores);

// (1-alpha-beta) L(R_b) + alpha L(R_c) + beta L(R_p).
double Objective(const RankingProblem &problem, std::span<const double> scores,
                 const ObjectiveWeights &weights);

// Exact gradient of Objective.
std::vector<double> Gradient(const RankingProblem &problem,
                             std::span<const double> scores,
                             const ObjectiveWeights &weights);

// Descending score, ties by label.
std::vector<std::size_t> OrderByScore(const RankingProblem &problem,
                                      std::span<const double> scores);

struct AggregationResult {
  std::vector<double> scores;  // mean zero
  std::vector<std::size_t> ordering;
  double objective = 0.0;
  int epochs = 0;
  bool converged = false;
};

// Gradient ascent from s = 0 until the objective changes by less than tol
// or max_epochs pass. Throws Error(kNumerical) on a non-finite objective.
AggregationResult Optimize(const RankingProblem &problem,
                           const ObjectiveWeights &weights,
                           const OptimizerParams &params);

}  // namespace lcq

#endif  // LCQ_AGGREGATE_H_
