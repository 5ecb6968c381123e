#include "cli.h"

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <fmt/core.h>
#include <fmt/ostream.h>

#include "lcq/error.h"
#include "lcq/eval.h"
#include "lcq/pipeline.h"
#include "lcq/taxonomy.h"

namespace lcq {
namespace {

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::string taxonomy_path;
  std::string format = "text";

  // query
  std::string query;
  std::size_t k = 10;

  // eval
  std::string queries_path;
  std::string truth_path;
  std::vector<std::size_t> ks;
  std::optional<double> holdout;

  std::string model = "noisy-or";
  std::string head;
  std::uint64_t seed = 0;
  bool random_ties = false;
  PipelineOptions options;
};

int ExitStatus(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
      return kExitUsage;
    case ErrorKind::kData:
      return kExitData;
    case ErrorKind::kUnanswerable:
      return kExitUnanswerable;
    case ErrorKind::kNumerical:
      return kExitFailure;
  }
  return kExitFailure;
}

void AddFormatFlag(CLI::App *cmd, RunConfig &cfg) {
  cmd->add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
}

void AddPipelineFlags(CLI::App *cmd, RunConfig &cfg) {
  PipelineOptions &o = cfg.options;
  cmd->add_option("--model", cfg.model, "Concept relevance model")
      ->check(CLI::IsMember({"nb", "noisy-or"}))
      ->capture_default_str();
  cmd->add_option("--gamma", o.model.gamma, "Naive-Bayes smoothing, (0,1]")
      ->capture_default_str();
  cmd->add_option("--lambda", o.model.lambda, "Noisy-Or leak, [0,1)")
      ->capture_default_str();
  cmd->add_option("--delta", o.model.delta, "Penalty constant, (0,1)")
      ->capture_default_str();
  cmd->add_option("--alpha", o.weights.alpha, "Weight of the expansion ordering")
      ->capture_default_str();
  cmd->add_option("--beta", o.weights.beta, "Weight of the tier constraints")
      ->capture_default_str();
  cmd->add_option("--concepts-top-k", o.concepts_top_k,
                  "Expanded concepts kept per seed set")
      ->capture_default_str();
  cmd->add_flag("--rc-query-concepts", o.rc_query_concepts,
                "Let query concepts contribute to the expansion ordering");
  cmd->add_option("--lr", o.optimizer.learning_rate, "Learning rate")
      ->capture_default_str();
  cmd->add_option("--epochs", o.optimizer.max_epochs, "Maximum epochs")
      ->capture_default_str();
  cmd->add_option("--tol", o.optimizer.tol, "Objective change tolerance")
      ->capture_default_str();
  cmd->add_flag("--stochastic", o.optimizer.stochastic,
                "Shuffled per-term updates instead of full-batch steps");
  cmd->add_option("--baseline-iter", o.baseline.max_iter,
                  "Baseline iteration cap")
      ->capture_default_str();
  cmd->add_option("--baseline-tol", o.baseline.tol, "Baseline tolerance")
      ->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  cmd->add_flag("--random-ties", cfg.random_ties,
                "Break baseline ties by a seeded permutation");
  cmd->add_option("--head", cfg.head, "Head noun (suffix of the query)");
}

// Copies the parsed flags into the pipeline options.
void Finalize(RunConfig &cfg) {
  PipelineOptions &o = cfg.options;
  o.model.kind = cfg.model == "nb" ? ExpansionKind::kNaiveBayes
                                   : ExpansionKind::kNoisyOr;
  o.head.reset();
  if (!cfg.head.empty()) o.head = cfg.head;
  o.optimizer.rng_seed = cfg.seed;
  o.baseline.tie_break_seed.reset();
  if (cfg.random_ties) o.baseline.tie_break_seed = cfg.seed;
}

Json PipelineConfig(const RunConfig &cfg) {
  const PipelineOptions &o = cfg.options;
  Json j;
  j["model"] = std::string(ExpansionKindName(o.model.kind));
  j["gamma"] = o.model.gamma;
  j["lambda"] = o.model.lambda;
  j["delta"] = o.model.delta;
  j["alpha"] = o.weights.alpha;
  j["beta"] = o.weights.beta;
  j["concepts_top_k"] = o.concepts_top_k;
  j["rc_query_concepts"] = o.rc_query_concepts;
  j["lr"] = o.optimizer.learning_rate;
  j["epochs"] = o.optimizer.max_epochs;
  j["tol"] = o.optimizer.tol;
  j["stochastic"] = o.optimizer.stochastic;
  j["baseline_iter"] = o.baseline.max_iter;
  j["baseline_tol"] = o.baseline.tol;
  j["seed"] = cfg.seed;
  j["random_ties"] = cfg.random_ties;
  j["head"] = o.head ? Json(*o.head) : Json(nullptr);
  return j;
}

void WriteHeader(std::ostream &out, const std::string &command,
                 const Json &config) {
  fmt::print(out, "# lcq {}\n", command);
  for (const auto &[key, value] : config.items()) {
    std::string text = value.is_string() ? value.get<std::string>()
                                         : value.dump();
    fmt::print(out, "# {}={}\n", key, text);
  }
}

std::ifstream OpenInput(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kData, fmt::format("cannot open '{}'", path));
  return in;
}

std::string FormatScore(double v) { return fmt::format("{:.6f}", v); }

// --- validate ---------------------------------------------------------------

void RunValidate(const RunConfig &cfg, std::ostream &out) {
  Json config;
  config["taxonomy"] = cfg.taxonomy_path;
  config["format"] = cfg.format;
  Taxonomy t = ReadTaxonomyFile(cfg.taxonomy_path);
  if (!t.VerifyMarginals()) {
    throw Error(ErrorKind::kData, "marginal totals disagree with the edges");
  }
  if (cfg.format == "json") {
    Json j;
    j["command"] = "validate";
    j["config"] = config;
    j["concepts"] = t.num_concepts();
    j["entities"] = t.num_entities();
    j["edges"] = t.num_edges();
    j["grand_total"] = t.grand_total();
    j["marginals_ok"] = true;
    out << j.dump(2) << '\n';
    return;
  }
  WriteHeader(out, "validate", config);
  fmt::print(out, "concepts={}\nentities={}\nedges={}\ngrand_total={}\n",
             t.num_concepts(), t.num_entities(), t.num_edges(),
             t.grand_total());
  fmt::print(out, "marginals=ok\n");
}

// --- query ------------------------------------------------------------------

void RunQueryCommand(const RunConfig &cfg, std::ostream &out,
                     std::ostream &err) {
  Json config;
  config["taxonomy"] = cfg.taxonomy_path;
  config["query"] = cfg.query;
  config["format"] = cfg.format;
  config["k"] = cfg.options.k;
  config.update(PipelineConfig(cfg));

  Taxonomy t = ReadTaxonomyFile(cfg.taxonomy_path);
  QueryResult r = RunQuery(t, cfg.query, cfg.options);

  std::vector<std::string> concepts;
  for (ConceptId c : r.decomposition.short_concepts) {
    concepts.push_back(t.name(c));
  }
  for (const auto &m : r.decomposition.unresolved) {
    fmt::print(err, "warning: no concept '{} {}'; modifier dropped\n", m,
               r.query.head);
  }

  if (cfg.format == "json") {
    Json j;
    j["command"] = "query";
    j["config"] = config;
    j["head"] = r.query.head;
    j["modifiers"] = r.query.modifiers;
    j["short_concepts"] = concepts;
    j["unresolved"] = r.decomposition.unresolved;
    j["converged"] = r.aggregation.converged;
    j["epochs_run"] = r.aggregation.epochs;
    Json results = Json::array();
    for (std::size_t i = 0; i < r.ranked.size(); ++i) {
      const auto &e = r.ranked[i];
      results.push_back({{"rank", i + 1},
                         {"entity", e.entity},
                         {"score", e.score},
                         {"provenance", std::string(ProvenanceName(e.provenance))}});
    }
    j["results"] = results;
    out << j.dump(2) << '\n';
    return;
  }

  WriteHeader(out, "query", config);
  fmt::print(out, "# short_concepts={}\n", fmt::join(concepts, ","));
  if (!r.decomposition.unresolved.empty()) {
    fmt::print(out, "# unresolved={}\n",
               fmt::join(r.decomposition.unresolved, ","));
  }
  fmt::print(out, "# epochs_run={} converged={}\n", r.aggregation.epochs,
             r.aggregation.converged);
  for (std::size_t i = 0; i < r.ranked.size(); ++i) {
    const auto &e = r.ranked[i];
    fmt::print(out, "{}\t{}\t{}\t{}\n", i + 1, e.entity, FormatScore(e.score),
               ProvenanceName(e.provenance));
  }
}

// --- eval -------------------------------------------------------------------

Json MetricsJson(const QueryMetrics &m) {
  Json j;
  j["query"] = m.query;
  for (const char *name : {"precision", "recall", "ratio"}) {
    const auto &values = std::string(name) == "precision" ? m.precision
                         : std::string(name) == "recall"  ? m.recall
                                                          : m.ratio;
    Json per_k = Json::object();
    for (const auto &[k, v] : values) per_k[std::to_string(k)] = v;
    j[name] = per_k;
  }
  return j;
}

void WriteMetricsText(std::ostream &out, const QueryMetrics &m) {
  fmt::print(out, "query={}\n", m.query);
  for (const auto &[k, v] : m.precision) {
    fmt::print(out, "precision@{}={}\n", k, FormatScore(v));
  }
  for (const auto &[k, v] : m.recall) {
    fmt::print(out, "recall@{}={}\n", k, FormatScore(v));
  }
  for (const auto &[k, v] : m.ratio) {
    fmt::print(out, "ratio@{}={}\n", k, FormatScore(v));
  }
}

void RunEval(RunConfig cfg, std::ostream &out, std::ostream &err) {
  if (cfg.ks.empty()) cfg.ks = {10};
  Json config;
  config["taxonomy"] = cfg.taxonomy_path;
  config["queries"] = cfg.queries_path;
  config["truth"] = cfg.truth_path.empty() ? Json(nullptr) : Json(cfg.truth_path);
  config["format"] = cfg.format;
  config["k"] = cfg.ks;
  config["holdout"] = cfg.holdout ? Json(*cfg.holdout) : Json(nullptr);
  config.update(PipelineConfig(cfg));

  Taxonomy t = ReadTaxonomyFile(cfg.taxonomy_path);
  std::ifstream qin = OpenInput(cfg.queries_path);
  std::vector<std::string> queries = ReadQueries(qin);

  EvalReport report;
  if (cfg.holdout) {
    report = EvaluateHoldout(t, queries, *cfg.holdout, cfg.seed, cfg.ks,
                             cfg.options);
  } else {
    std::ifstream tin = OpenInput(cfg.truth_path);
    std::vector<GroundTruth> truth;
    try {
      truth = ReadGroundTruth(tin);
    } catch (const Error &e) {
      throw Error(e.kind(), fmt::format("{}: {}", cfg.truth_path, e.what()));
    }
    report = EvaluateQueries(t, queries, truth, cfg.ks, cfg.options);
  }
  for (const auto &w : report.warnings) fmt::print(err, "warning: {}\n", w);

  if (cfg.format == "json") {
    Json j;
    j["command"] = "eval";
    j["config"] = config;
    Json per_query = Json::array();
    for (const auto &m : report.queries) per_query.push_back(MetricsJson(m));
    j["queries"] = per_query;
    j["average"] = MetricsJson(report.average);
    j["warnings"] = report.warnings;
    out << j.dump(2) << '\n';
    return;
  }
  WriteHeader(out, "eval", config);
  for (const auto &w : report.warnings) fmt::print(out, "warning={}\n", w);
  for (const auto &m : report.queries) {
    WriteMetricsText(out, m);
    out << '\n';
  }
  fmt::print(out, "queries_evaluated={}\n", report.queries.size());
  WriteMetricsText(out, report.average);
}

}  // namespace

int RunCli(int argc, const char *const *argv, std::ostream &out,
           std::ostream &err) {
  RunConfig cfg;
  CLI::App app{"Long concept queries over an isA taxonomy", "lcq"};
  app.require_subcommand(1);

  CLI::App *validate =
      app.add_subcommand("validate", "Print taxonomy statistics and check marginals");
  validate->add_option("taxonomy", cfg.taxonomy_path, "Taxonomy file")->required();
  AddFormatFlag(validate, cfg);

  CLI::App *query = app.add_subcommand("query", "Answer one long concept query");
  query->add_option("taxonomy", cfg.taxonomy_path, "Taxonomy file")->required();
  query->add_option("query", cfg.query, "Long concept query")->required();
  query->add_option("--k", cfg.options.k, "Entities to return")
      ->capture_default_str();
  AddPipelineFlags(query, cfg);
  AddFormatFlag(query, cfg);

  CLI::App *eval = app.add_subcommand("eval", "Evaluate a batch of queries");
  eval->add_option("taxonomy", cfg.taxonomy_path, "Taxonomy file")->required();
  eval->add_option("queries", cfg.queries_path, "One query per line")->required();
  eval->add_option("truth", cfg.truth_path, "query<TAB>entity ground truth");
  eval->add_option("--k", cfg.ks, "Cutoffs (repeatable, default 10)")
      ->delimiter(',');
  eval->add_option("--holdout", cfg.holdout,
                   "Hold out this fraction of each intersection instead of "
                   "using ground truth");
  AddPipelineFlags(eval, cfg);
  AddFormatFlag(eval, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int status = app.exit(e, out, err);
    return status == 0 ? kExitOk : kExitUsage;
  }

  std::ostringstream buffer;
  try {
    Finalize(cfg);
    if (*validate) {
      RunValidate(cfg, buffer);
    } else {
      cfg.options.Validate();
      if (*query) {
        RunQueryCommand(cfg, buffer, err);
      } else {
        for (std::size_t k : cfg.ks) {
          if (k == 0) throw Error(ErrorKind::kInvalidArgument, "k must be >= 1");
        }
        if (cfg.holdout && !(*cfg.holdout > 0.0 && *cfg.holdout < 1.0)) {
          throw Error(ErrorKind::kInvalidArgument,
                      "--holdout must be in (0,1)");
        }
        if (!cfg.holdout && cfg.truth_path.empty()) {
          throw Error(ErrorKind::kInvalidArgument,
                      "eval needs a truth file unless --holdout is given");
        }
        RunEval(cfg, buffer, err);
      }
    }
  } catch (const Error &e) {
    fmt::print(err, "lcq: {}\n", e.what());
    return ExitStatus(e.kind());
  }
  out << buffer.str();
  return kExitOk;
}

}  // namespace lcq
