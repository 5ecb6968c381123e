#include "lcq/eval.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <iterator>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include <fmt/core.h>
#include <fmt/ranges.h>

#include "lcq/error.h"

namespace lcq {

namespace {

std::size_t Hits(std::span<const std::string> ranked,
                 const std::set<std::string> &truth, std::size_t k) {
  std::size_t hits = 0;
  const std::size_t n = std::min(k, ranked.size());
  for (std::size_t i = 0; i < n; ++i) hits += truth.count(ranked[i]);
  return hits;
}

std::vector<std::string> Names(const Taxonomy &t,
                               std::span<const EntityId> entities) {
  std::vector<std::string> out;
  out.reserve(entities.size());
  for (EntityId e : entities) out.push_back(t.name(e));
  return out;
}

std::vector<std::string> Prefix(const std::vector<std::string> &v,
                                std::size_t k) {
  return {v.begin(), v.begin() + static_cast<std::ptrdiff_t>(
                                     std::min(k, v.size()))};
}

std::size_t MaxK(std::span<const std::size_t> ks) {
  if (ks.empty()) throw Error(ErrorKind::kInvalidArgument, "no k requested");
  std::size_t k = *std::max_element(ks.begin(), ks.end());
  if (k == 0) throw Error(ErrorKind::kInvalidArgument, "k must be >= 1");
  return k;
}

bool SkipLine(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos ||
         line.front() == '#';
}

}  // namespace

// ---------------------------------------------------------------------------
// Metrics

double PrecisionAtK(std::span<const std::string> ranked,
                    const std::set<std::string> &truth, std::size_t k) {
  const std::size_t denom = std::min(k, ranked.size());
  if (denom == 0) return 0.0;
  return static_cast<double>(Hits(ranked, truth, k)) /
         static_cast<double>(denom);
}

double RecallAtK(std::span<const std::string> ranked,
                 const std::set<std::string> &truth, std::size_t k) {
  if (truth.empty()) return 0.0;
  return static_cast<double>(Hits(ranked, truth, k)) /
         static_cast<double>(truth.size());
}

double RatioAtK(std::span<const std::string> top_k,
                const std::set<std::string> &intersection) {
  std::size_t fresh = 0;
  for (const auto &e : top_k) fresh += intersection.count(e) == 0 ? 1 : 0;
  return static_cast<double>(fresh) /
         static_cast<double>(intersection.size() + 1);
}

std::vector<EntityId> IntProBaseline(const Taxonomy &taxonomy,
                                     std::span<const ConceptId> query_concepts,
                                     std::size_t k) {
  std::vector<EntityId> entities = IntersectEntities(taxonomy, query_concepts);
  std::vector<std::pair<std::uint64_t, EntityId>> scored;
  scored.reserve(entities.size());
  for (EntityId e : entities) {
    std::uint64_t sum = 0;
    for (ConceptId c : query_concepts) sum += taxonomy.Count(c, e);
    scored.emplace_back(sum, e);
  }
  std::sort(scored.begin(), scored.end(), [&](const auto &a, const auto &b) {
    if (a.first != b.first) return a.first > b.first;
    return taxonomy.name(a.second) < taxonomy.name(b.second);
  });
  std::vector<EntityId> out;
  for (std::size_t i = 0; i < scored.size() && i < k; ++i) {
    out.push_back(scored[i].second);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fixtures

std::vector<CooccurrenceRecord> FixtureF1Records() {
  return {
      {"top university", "a", 2},      {"top university", "b", 1},
      {"top university", "d", 1},      {"american university", "a", 1},
      {"american university", "b", 2}, {"american university", "c", 1},
      {"ivy league", "a", 3},          {"ivy league", "b", 3},
      {"famous university", "a", 1},   {"famous university", "b", 1},
      {"famous university", "x", 5},
  };
}

Taxonomy FixtureF1() { return Taxonomy::Ingest(FixtureF1Records()); }

PlantedInstance GeneratePlanted(const PlantedConfig &config) {
  static constexpr const char *kModifiers[] = {
      "top",    "american", "private", "research", "public", "elite",
      "urban",  "catholic", "liberal", "technical", "coastal", "northern",
      "small",  "large",    "old",     "new",      "rural",  "southern",
      "online", "national"};
  constexpr std::size_t kMaxModifiers = std::size(kModifiers);
  if (config.answers == 0 || config.short_concepts == 0 ||
      config.short_concepts > kMaxModifiers) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("planted config needs answers >= 1 and 1..{} "
                            "short concepts",
                            kMaxModifiers));
  }
  if (config.answer_count < 1 || config.noise_count < 1 ||
      config.equivalent_count < 1 || config.distractor_count < 1) {
    throw Error(ErrorKind::kInvalidArgument, "planted counts must be >= 1");
  }

  std::mt19937_64 rng(config.seed);
  // Small per-edge jitter so instances differ across seeds.
  auto jitter = [&](std::int64_t base) {
    return base + static_cast<std::int64_t>(rng() % 3);
  };

  PlantedInstance out;
  for (std::size_t i = 0; i < config.answers; ++i) {
    out.answers.push_back(fmt::format("answer-{:02}", i));
  }

  std::vector<std::string> modifiers;
  for (std::size_t m = 0; m < config.short_concepts; ++m) {
    modifiers.emplace_back(kModifiers[m]);
  }
  for (std::size_t m = 0; m < config.short_concepts; ++m) {
    const std::string concept_name = modifiers[m] + " " + config.head;
    for (const auto &a : out.answers) {
      out.records.push_back({concept_name, a, jitter(config.answer_count)});
    }
    for (std::size_t j = 0; j < config.noise_per_concept; ++j) {
      out.records.push_back({concept_name, fmt::format("noise-{}-{}", m, j),
                             jitter(config.noise_count)});
    }
  }

  out.equivalent_concept = "equivalent " + config.head;
  for (const auto &a : out.answers) {
    out.records.push_back(
        {out.equivalent_concept, a, jitter(config.equivalent_count)});
  }

  for (std::size_t d = 0; d < config.distractors; ++d) {
    const std::string concept_name = fmt::format("distractor-{}", d);
    std::vector<std::string> picked = out.answers;
    std::shuffle(picked.begin(), picked.end(), rng);
    picked.resize(std::min(config.distractor_answers, picked.size()));
    std::sort(picked.begin(), picked.end());
    for (const auto &a : picked) {
      out.records.push_back({concept_name, a, jitter(config.distractor_count)});
    }
    for (std::size_t j = 0; j < config.distractor_outsiders; ++j) {
      out.records.push_back({concept_name, fmt::format("outsider-{}-{}", d, j),
                             jitter(config.distractor_count)});
    }
  }

  out.query = fmt::format("{} {}", fmt::join(modifiers, " "), config.head);
  return out;
}

// ---------------------------------------------------------------------------
// Hold-out

HoldoutReport HoldoutExperiment(const Taxonomy &taxonomy,
                                std::string_view raw_query,
                                double removal_fraction, std::uint64_t seed,
                                std::span<const std::size_t> ks,
                                const PipelineOptions &options) {
  if (!(removal_fraction > 0.0 && removal_fraction < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("removal fraction must be in (0,1), got {}",
                            removal_fraction));
  }
  const std::size_t max_k = MaxK(ks);
  std::optional<std::string_view> head;
  if (options.head) head = *options.head;
  const LongConceptQuery query = ParseQuery(raw_query, head);
  const Decomposition decomposition = Decompose(query, taxonomy);
  const auto &concepts = decomposition.short_concepts;

  std::vector<std::string> pool =
      Names(taxonomy, IntersectEntities(taxonomy, concepts));
  if (pool.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("intersection of '{}' has {} entities; need >= 2",
                            query.raw, pool.size()));
  }
  // Guard against 0.5 * 10 landing a hair above 5 in floating point.
  const std::size_t remove = static_cast<std::size_t>(
      std::ceil(removal_fraction * static_cast<double>(pool.size()) - 1e-9));
  if (remove == 0) {
    throw Error(ErrorKind::kInvalidArgument,
                "removal fraction selects no entities");
  }
  std::sort(pool.begin(), pool.end());
  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  std::set<std::string> removed(pool.begin(),
                                pool.begin() + static_cast<std::ptrdiff_t>(remove));

  std::unordered_set<std::uint32_t> drop_entities;
  for (const auto &name : removed) {
    drop_entities.insert(static_cast<std::uint32_t>(*taxonomy.FindEntity(name)));
  }
  Taxonomy reduced = taxonomy.WithoutEdges([&](ConceptId c, EntityId e) {
    return drop_entities.count(static_cast<std::uint32_t>(e)) != 0 &&
           std::find(concepts.begin(), concepts.end(), c) != concepts.end();
  });

  PipelineOptions run_options = options;
  run_options.k = max_k;
  QueryResult result = RunQuery(reduced, query, run_options);

  const auto &reduced_concepts = result.decomposition.short_concepts;
  std::vector<std::string> intersection =
      Names(reduced, IntersectEntities(reduced, reduced_concepts));
  std::sort(intersection.begin(), intersection.end());
  std::set<std::string> intersection_set(intersection.begin(),
                                         intersection.end());

  HoldoutReport report;
  report.query = query.raw;
  report.removal_fraction = removal_fraction;
  report.seed = seed;
  report.removed.assign(removed.begin(), removed.end());
  report.intersection = intersection;
  report.pipeline_top = result.RankedNames();
  report.intpro_top =
      Names(reduced, IntProBaseline(reduced, reduced_concepts, max_k));
  for (std::size_t k : ks) {
    auto top = Prefix(report.pipeline_top, k);
    auto intpro = Prefix(report.intpro_top, k);
    report.recall[k] = RecallAtK(top, removed, k);
    report.ratio[k] = RatioAtK(top, intersection_set);
    report.intpro_recall[k] = RecallAtK(intpro, removed, k);
    report.intpro_ratio[k] = RatioAtK(intpro, intersection_set);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Batch evaluation

std::vector<GroundTruth> ReadGroundTruth(std::istream &in) {
  std::vector<GroundTruth> out;
  std::unordered_map<std::string, std::size_t> index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (SkipLine(line)) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw Error(ErrorKind::kData,
                  fmt::format("line {}: expected query<TAB>entity", line_no));
    }
    std::string query = NormalizeName(std::string_view(line).substr(0, tab));
    std::string entity = NormalizeName(std::string_view(line).substr(tab + 1));
    if (query.empty() || entity.empty()) {
      throw Error(ErrorKind::kData,
                  fmt::format("line {}: empty query or entity", line_no));
    }
    auto [it, inserted] = index.try_emplace(query, out.size());
    if (inserted) out.push_back({query, {}});
    out[it->second].answers.insert(entity);
  }
  return out;
}

std::vector<std::string> ReadQueries(std::istream &in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (SkipLine(line)) continue;
    out.push_back(NormalizeName(line));
  }
  return out;
}

namespace {

void Average(EvalReport &report) {
  report.average = {};
  report.average.query = "average";
  if (report.queries.empty()) return;
  const double n = static_cast<double>(report.queries.size());
  for (std::size_t k : report.ks) {
    double p = 0.0, r = 0.0, q = 0.0;
    for (const auto &m : report.queries) {
      p += m.precision.at(k);
      r += m.recall.at(k);
      q += m.ratio.at(k);
    }
    report.average.precision[k] = p / n;
    report.average.recall[k] = r / n;
    report.average.ratio[k] = q / n;
  }
}

std::vector<std::size_t> SortedKs(std::span<const std::size_t> ks) {
  std::vector<std::size_t> out(ks.begin(), ks.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

EvalReport EvaluateQueries(const Taxonomy &taxonomy,
                           std::span<const std::string> queries,
                           std::span<const GroundTruth> truth,
                           std::span<const std::size_t> ks,
                           const PipelineOptions &options) {
  EvalReport report;
  report.ks = SortedKs(ks);
  const std::size_t max_k = MaxK(ks);
  std::unordered_map<std::string, const GroundTruth *> by_query;
  for (const auto &g : truth) by_query[NormalizeName(g.query)] = &g;

  PipelineOptions run_options = options;
  run_options.k = max_k;
  for (const auto &raw : queries) {
    const std::string q = NormalizeName(raw);
    auto it = by_query.find(q);
    if (it == by_query.end()) {
      report.warnings.push_back(
          fmt::format("query '{}' has no ground truth; skipped", q));
      continue;
    }
    QueryMetrics m;
    m.query = q;
    std::vector<std::string> ranked;
    std::set<std::string> intersection;
    try {
      QueryResult result = RunQuery(taxonomy, q, run_options);
      ranked = result.RankedNames();
      for (EntityId e : result.subsets.full.entities) {
        intersection.insert(taxonomy.name(e));
      }
    } catch (const Error &err) {
      if (err.kind() != ErrorKind::kUnanswerable) throw;
      report.warnings.push_back(
          fmt::format("query '{}' unanswerable: {}", q, err.what()));
    }
    for (std::size_t k : report.ks) {
      auto top = Prefix(ranked, k);
      m.precision[k] = PrecisionAtK(ranked, it->second->answers, k);
      m.recall[k] = RecallAtK(ranked, it->second->answers, k);
      m.ratio[k] = RatioAtK(top, intersection);
    }
    report.queries.push_back(std::move(m));
  }
  Average(report);
  return report;
}

EvalReport EvaluateHoldout(const Taxonomy &taxonomy,
                           std::span<const std::string> queries,
                           double removal_fraction, std::uint64_t seed,
                           std::span<const std::size_t> ks,
                           const PipelineOptions &options) {
  EvalReport report;
  report.ks = SortedKs(ks);
  for (const auto &q : queries) {
    HoldoutReport h =
        HoldoutExperiment(taxonomy, q, removal_fraction, seed, ks, options);
    std::set<std::string> truth(h.removed.begin(), h.removed.end());
    QueryMetrics m;
    m.query = h.query;
    for (std::size_t k : report.ks) {
      m.precision[k] = PrecisionAtK(h.pipeline_top, truth, k);
      m.recall[k] = h.recall.at(k);
      m.ratio[k] = h.ratio.at(k);
    }
    report.queries.push_back(std::move(m));
  }
  Average(report);
  return report;
}

}  // namespace lcq
