#ifndef LCQ_EVAL_H_
#define LCQ_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "lcq/pipeline.h"
#include "lcq/taxonomy.h"

namespace lcq {

// --- Metrics ---------------------------------------------------------------

// |top-k ∩ truth| / min(k, |ranked|); 0 for an empty ranking.
double PrecisionAtK(std::span<const std::string> ranked,
                    const std::set<std::string> &truth, std::size_t k);

// |top-k ∩ truth| / |truth|; 0 for an empty truth set.
double RecallAtK(std::span<const std::string> ranked,
                 const std::set<std::string> &truth, std::size_t k);

// New-entity yield: |top_k \ intersection| / (|intersection| + 1).
double RatioAtK(std::span<const std::string> top_k,
                const std::set<std::string> &intersection);

// Decomposition-then-intersection baseline: E(C_q) ranked by summed
// co-occurrence counts with the query concepts, ties by name, cut at k.
std::vector<EntityId> IntProBaseline(const Taxonomy &taxonomy,
                                     std::span<const ConceptId> query_concepts,
                                     std::size_t k);

// --- Fixtures --------------------------------------------------------------

// The four-concept test taxonomy: "top university" {a:2, b:1, d:1},
// "american university" {a:1, b:2, c:1}, "ivy league" {a:3, b:3},
// "famous university" {a:1, b:1, x:5}.
std::vector<CooccurrenceRecord> FixtureF1Records();
Taxonomy FixtureF1();

// Ground-truth-bearing synthetic taxonomy. A planted answer set E* sits in
// every short concept "m<i> <head>" together with per-concept noise
// entities, and in one equivalent concept holding exactly E*. Distractor
// concepts hold a few answers plus entities outside every short concept.
struct PlantedConfig {
  std::size_t answers = 10;
  std::size_t short_concepts = 3;
  std::size_t noise_per_concept = 4;
  std::size_t distractors = 3;
  std::size_t distractor_answers = 3;
  std::size_t distractor_outsiders = 6;
  std::int64_t answer_count = 3;       // n(short concept, answer)
  std::int64_t noise_count = 1;        // n(short concept, noise)
  std::int64_t equivalent_count = 20;  // n(equivalent, answer)
  std::int64_t distractor_count = 2;
  std::uint64_t seed = 0;
  std::string head = "university";
};

struct PlantedInstance {
  std::vector<CooccurrenceRecord> records;
  std::string query;  // "m1 m2 ... head"
  std::string equivalent_concept;
  std::vector<std::string> answers;  // E*
};

PlantedInstance GeneratePlanted(const PlantedConfig &config);

// --- Hold-out experiment ---------------------------------------------------

struct HoldoutReport {
  std::string query;
  double removal_fraction = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> removed;       // ground truth, sorted
  std::vector<std::string> intersection;  // E(C_q) after removal, sorted
  std::vector<std::string> pipeline_top;  // max(ks) entities
  std::vector<std::string> intpro_top;
  std::map<std::size_t, double> recall;         // pipeline, per k
  std::map<std::size_t, double> ratio;          // pipeline, per k
  std::map<std::size_t, double> intpro_recall;  // per k
  std::map<std::size_t, double> intpro_ratio;   // per k
};

// Removes the edges between ceil(fraction * |E(C_q)|) seeded-random members
// of E(C_q) and every query concept, reruns the pipeline on the reduced
// copy and scores recovery of the removed entities at each k.
// Throws Error(kInvalidArgument) when nothing would be removed or E(C_q) has
// fewer than two entities.
HoldoutReport HoldoutExperiment(const Taxonomy &taxonomy,
                                std::string_view raw_query,
                                double removal_fraction, std::uint64_t seed,
                                std::span<const std::size_t> ks,
                                const PipelineOptions &options);

// --- Batch evaluation ------------------------------------------------------

struct GroundTruth {
  std::string query;
  std::set<std::string> answers;
};

// `query<TAB>entity` lines; blank and '#' lines skipped. Errors name the
// line. Queries and entities are normalized.
std::vector<GroundTruth> ReadGroundTruth(std::istream &in);

// One query per line; blank and '#' lines skipped.
std::vector<std::string> ReadQueries(std::istream &in);

struct QueryMetrics {
  std::string query;
  std::map<std::size_t, double> precision;
  std::map<std::size_t, double> recall;
  std::map<std::size_t, double> ratio;
};

struct EvalReport {
  std::vector<std::size_t> ks;
  std::vector<QueryMetrics> queries;
  QueryMetrics average;  // macro average; `query` is "average"
  std::vector<std::string> warnings;
};

// Runs the pipeline for every query that has ground truth. Queries without
// ground truth are skipped with a warning; unanswerable queries score zero
// and are reported as warnings.
EvalReport EvaluateQueries(const Taxonomy &taxonomy,
                           std::span<const std::string> queries,
                           std::span<const GroundTruth> truth,
                           std::span<const std::size_t> ks,
                           const PipelineOptions &options);

// Per-query hold-out runs summarized as an EvalReport (recall and ratio of
// recovery; precision is measured against the removed set).
EvalReport EvaluateHoldout(const Taxonomy &taxonomy,
                           std::span<const std::string> queries,
                           double removal_fraction, std::uint64_t seed,
                           std::span<const std::size_t> ks,
                           const PipelineOptions &options);

}  // namespace lcq

#endif  // LCQ_EVAL_H_
