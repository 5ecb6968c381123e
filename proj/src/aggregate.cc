#include "lcq/aggregate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include <fmt/core.h>

#include "lcq/error.h"

namespace lcq {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double LogAddExp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kNegInf) return a;
  return a + std::log1p(std::exp(b - a));
}

double LogSumExp(std::span<const std::size_t> items,
                 std::span<const double> scores) {
  double m = kNegInf;
  for (std::size_t i : items) m = std::max(m, scores[i]);
  if (m == kNegInf) return kNegInf;
  double sum = 0.0;
  for (std::size_t i : items) sum += std::exp(scores[i] - m);
  return m + std::log(sum);
}

// Suffix log-sum-exp: lse[i] = log sum_{j >= i} exp(s_{z_j}).
std::vector<double> SuffixLse(std::span<const std::size_t> ordering,
                              std::span<const double> scores) {
  std::vector<double> lse(ordering.size());
  double acc = kNegInf;
  for (std::size_t i = ordering.size(); i-- > 0;) {
    acc = LogAddExp(scores[ordering[i]], acc);
    lse[i] = acc;
  }
  return lse;
}

void AddListwiseGradient(std::span<const std::size_t> ordering,
                         std::span<const double> scores, double weight,
                         std::vector<double> &grad) {
  const std::size_t n = ordering.size();
  if (n < 2 || weight == 0.0) return;
  std::vector<double> lse = SuffixLse(ordering, scores);
  // prefix = log sum_{k <= p, k < n-1} exp(-lse[k]); every such term's
  // suffix contains z_p.
  double prefix = kNegInf;
  for (std::size_t p = 0; p < n; ++p) {
    if (p + 1 < n) prefix = LogAddExp(prefix, -lse[p]);
    const double head = p + 1 < n ? 1.0 : 0.0;
    const double s = scores[ordering[p]];
    grad[ordering[p]] += weight * (head - std::exp(s + prefix));
  }
}

void AddPairwiseGradient(const SetConstraint &c, std::span<const double> scores,
                         double weight, std::vector<double> &grad) {
  if (weight == 0.0) return;
  const double lse_x = LogSumExp(c.higher, scores);
  const double lse_y = LogSumExp(c.lower, scores);
  const double lse_all = LogAddExp(lse_x, lse_y);
  for (std::size_t i : c.higher) {
    grad[i] += weight * std::exp(scores[i] - lse_x + lse_y - lse_all);
  }
  for (std::size_t i : c.lower) {
    grad[i] -= weight * std::exp(scores[i] - lse_all);
  }
}

double ConstraintLogLikelihood(const SetConstraint &c,
                               std::span<const double> scores) {
  const double lse_x = LogSumExp(c.higher, scores);
  const double lse_y = LogSumExp(c.lower, scores);
  return lse_x - LogAddExp(lse_x, lse_y);
}

double BaselineWeight(const ObjectiveWeights &w) {
  return 1.0 - w.alpha - w.beta;
}

void CheckScores(const RankingProblem &problem,
                 std::span<const double> scores) {
  if (scores.size() != problem.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("score vector has {} entries, universe has {}",
                            scores.size(), problem.size()));
  }
}

}  // namespace

void ObjectiveWeights::Validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0) || alpha + beta > 1.0 + 1e-12) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("need alpha, beta >= 0 and alpha + beta <= 1, "
                            "got alpha={} beta={}",
                            alpha, beta));
  }
}

void OptimizerParams::Validate() const {
  if (!(learning_rate > 0.0) || max_epochs < 1 || !(tol > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("invalid optimizer params: lr={} epochs={} tol={}",
                            learning_rate, max_epochs, tol));
  }
}

RankingProblem MakeRankingProblem(std::span<const std::string> r_b,
                                  std::span<const std::string> r_c,
                                  std::span<const LabeledConstraint> r_p) {
  RankingProblem problem;
  std::unordered_map<std::string, std::size_t> index;
  auto intern = [&](const std::string &label) {
    auto [it, inserted] = index.try_emplace(label, problem.labels.size());
    if (inserted) problem.labels.push_back(label);
    return it->second;
  };
  auto ordering = [&](std::span<const std::string> labels, const char *what) {
    std::vector<std::size_t> out;
    std::unordered_set<std::size_t> seen;
    for (const auto &label : labels) {
      std::size_t i = intern(label);
      if (!seen.insert(i).second) {
        throw Error(ErrorKind::kInvalidArgument,
                    fmt::format("'{}' repeated in {}", label, what));
      }
      out.push_back(i);
    }
    return out;
  };
  problem.r_b = ordering(r_b, "R_b");
  problem.r_c = ordering(r_c, "R_c");
  for (const auto &lc : r_p) {
    if (lc.higher.empty() || lc.lower.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "constraint with an empty side");
    }
    SetConstraint c;
    c.higher = ordering(lc.higher, "constraint");
    c.lower = ordering(lc.lower, "constraint");
    for (std::size_t i : c.lower) {
      if (std::find(c.higher.begin(), c.higher.end(), i) != c.higher.end()) {
        throw Error(ErrorKind::kInvalidArgument,
                    fmt::format("'{}' on both sides of a constraint",
                                problem.labels[i]));
      }
    }
    problem.r_p.push_back(std::move(c));
  }
  return problem;
}

double BtPairProb(double sx, double sy) {
  return 1.0 / (1.0 + std::exp(sy - sx));
}

double ListwiseLogLikelihood(std::span<const std::size_t> ordering,
                             std::span<const double> scores) {
  if (ordering.size() < 2) return 0.0;
  std::vector<double> lse = SuffixLse(ordering, scores);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < ordering.size(); ++i) {
    total += scores[ordering[i]] - lse[i];
  }
  return total;
}

double PairwiseLogLikelihood(std::span<const SetConstraint> constraints,
                             std::span<const double> scores) {
  double total = 0.0;
  for (const auto &c : constraints) total += ConstraintLogLikelihood(c, scores);
  return total;
}

double Objective(const RankingProblem &problem, std::span<const double> scores,
                 const ObjectiveWeights &weights) {
  CheckScores(problem, scores);
  double total = 0.0;
  const double wb = BaselineWeight(weights);
  if (wb != 0.0) total += wb * ListwiseLogLikelihood(problem.r_b, scores);
  if (weights.alpha != 0.0) {
    total += weights.alpha * ListwiseLogLikelihood(problem.r_c, scores);
  }
  if (weights.beta != 0.0) {
    total += weights.beta * PairwiseLogLikelihood(problem.r_p, scores);
  }
  return total;
}

std::vector<double> Gradient(const RankingProblem &problem,
                             std::span<const double> scores,
                             const ObjectiveWeights &weights) {
  CheckScores(problem, scores);
  std::vector<double> grad(problem.size(), 0.0);
  AddListwiseGradient(problem.r_b, scores, BaselineWeight(weights), grad);
  AddListwiseGradient(problem.r_c, scores, weights.alpha, grad);
  for (const auto &c : problem.r_p) {
    AddPairwiseGradient(c, scores, weights.beta, grad);
  }
  return grad;
}

std::vector<std::size_t> OrderByScore(const RankingProblem &problem,
                                      std::span<const double> scores) {
  std::vector<std::size_t> order(problem.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return problem.labels[a] < problem.labels[b];
  });
  return order;
}

AggregationResult Optimize(const RankingProblem &problem,
                           const ObjectiveWeights &weights,
                           const OptimizerParams &params) {
  weights.Validate();
  params.Validate();
  if (problem.r_b.empty() && problem.r_c.empty()) {
    throw Error(ErrorKind::kInvalidArgument,
                "aggregation needs at least one total ordering");
  }

  AggregationResult result;
  std::vector<double> s(problem.size(), 0.0);
  double current = Objective(problem, s, weights);

  // Stochastic mode treats R_b, R_c and each constraint as one term.
  struct Term {
    int kind;  // 0 = R_b, 1 = R_c, 2 = constraint
    std::size_t index;
  };
  std::vector<Term> terms;
  std::mt19937_64 rng(params.rng_seed);
  if (params.stochastic) {
    terms.push_back({0, 0});
    terms.push_back({1, 0});
    for (std::size_t i = 0; i < problem.r_p.size(); ++i) terms.push_back({2, i});
  }

  std::vector<double> grad(problem.size());
  for (int epoch = 1; epoch <= params.max_epochs; ++epoch) {
    if (!params.stochastic) {
      grad = Gradient(problem, s, weights);
      for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] += params.learning_rate * grad[i];
      }
    } else {
      std::shuffle(terms.begin(), terms.end(), rng);
      for (const Term &term : terms) {
        std::fill(grad.begin(), grad.end(), 0.0);
        if (term.kind == 0) {
          AddListwiseGradient(problem.r_b, s, BaselineWeight(weights), grad);
        } else if (term.kind == 1) {
          AddListwiseGradient(problem.r_c, s, weights.alpha, grad);
        } else {
          AddPairwiseGradient(problem.r_p[term.index], s, weights.beta, grad);
        }
        for (std::size_t i = 0; i < s.size(); ++i) {
          s[i] += params.learning_rate * grad[i];
        }
      }
    }

    const double next = Objective(problem, s, weights);
    if (!std::isfinite(next)) {
      throw Error(ErrorKind::kNumerical,
                  fmt::format("objective became {} at epoch {}", next, epoch));
    }
    result.epochs = epoch;
    const double change = std::abs(next - current);
    current = next;
    if (change < params.tol) {
      result.converged = true;
      break;
    }
  }

  const double mean =
      s.empty() ? 0.0 : std::accumulate(s.begin(), s.end(), 0.0) / s.size();
  for (double &v : s) v -= mean;

  result.objective = current;
  result.ordering = OrderByScore(problem, s);
  result.scores = std::move(s);
  return result;
}

}  // namespace lcq
