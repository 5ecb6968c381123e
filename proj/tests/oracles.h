#ifndef LCQ_TESTS_ORACLES_H_
#define LCQ_TESTS_ORACLES_H_

// Reference implementations used only by tests. They work from raw records
// and plain formulas and share no code with the library beyond its types.

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lcq/aggregate.h"
#include "lcq/taxonomy.h"

namespace lcq::oracle {

// Merged counts keyed by normalized (concept, entity) names.
struct Counts {
  std::map<std::pair<std::string, std::string>, double> n;
  std::map<std::string, double> concept_total;
  std::map<std::string, double> entity_total;
  double grand = 0.0;

  double Pair(const std::string &c, const std::string &e) const;
  std::set<std::string> EntitiesOf(const std::string &c) const;
};

Counts CountRecords(const std::vector<CooccurrenceRecord> &records);

struct ModelParams {
  double gamma = 0.5;
  double lambda = 0.1;
  double delta = 0.5;
};

double G(const Counts &k, const std::string &c,
         const std::vector<std::string> &query_concepts, double delta);

// Plain products, no log domain.
double NoisyOr(const Counts &k, const std::string &c,
               const std::vector<std::string> &seeds,
               const std::vector<std::string> &query_concepts,
               const ModelParams &p);
double NaiveBayes(const Counts &k, const std::string &c,
                  const std::vector<std::string> &seeds,
                  const std::vector<std::string> &query_concepts,
                  const ModelParams &p);

// Principal eigenvector of B B^T for a 0/1 entity x concept matrix,
// positive and scaled to max 1, from a dense symmetric eigensolver.
std::vector<double> PrincipalEntityVector(
    const std::vector<std::vector<int>> &membership);

// Log of the Plackett-Luce probability as a direct product of ratios.
double ListwiseDirect(const std::vector<std::size_t> &ordering,
                      const std::vector<double> &scores);
double PairwiseDirect(const std::vector<SetConstraint> &constraints,
                      const std::vector<double> &scores);
double ObjectiveDirect(const RankingProblem &problem,
                       const std::vector<double> &scores, double alpha,
                       double beta);

std::vector<double> CentralDifference(
    const std::function<double(const std::vector<double> &)> &f,
    std::vector<double> x, double h);

// Kendall tau between two orderings of the same items.
double KendallTau(const std::vector<std::size_t> &a,
                  const std::vector<std::size_t> &b);

// Random taxonomy stream: up to `max_edges` rows over small name pools,
// with duplicates and case/whitespace variants.
std::vector<CooccurrenceRecord> RandomStream(std::mt19937_64 &rng,
                                             std::size_t max_edges);

}  // namespace lcq::oracle

#endif  // LCQ_TESTS_ORACLES_H_
