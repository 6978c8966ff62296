#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmsbm/bounds.hpp"
#include "pmsbm/edge_probs.hpp"
#include "pmsbm/label_sets.hpp"
#include "pmsbm/mcmc.hpp"
#include "pmsbm/model_family.hpp"
#include "pmsbm/prior.hpp"

namespace pmsbm {

enum class Engine { Exact, Mcmc };
enum class ExperimentKind { Contraction, Coverage, Testing };

// One experiment, read from a single JSON document. Every field has a
// default, and the resolved values are echoed back by to_json().
struct ExperimentConfig {
  int n = 8;
  nlohmann::ordered_json family_spec;   // {"kind": "sizes"|"window"|"all", ...}
  ModelFamily family;
  EdgeProbs probs;
  PriorKind prior_kind = PriorKind::FlatUniform;
  nlohmann::ordered_json theta0_spec;   // "1 1 2 2" | {"sizes": [..]} | {"random": true}
  Labelling theta0;
  long long replicates = 100;
  std::uint64_t seed = 1;
  int threads = 0;                      // 0: hardware concurrency
  Engine engine = Engine::Exact;
  McmcOptions mcmc;
  ExperimentKind kind = ExperimentKind::Contraction;
  std::vector<std::string> targets;     // contraction
  double alpha = 0.1;                   // coverage
  std::vector<int> k;                   // coverage enlargement radii
  std::string a = "model";              // testing hypotheses
  std::string b = "not-model";
  double r = 1.0;
  bool timing = false;
  EnumerationLimits limits;

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;
  Prior prior() const;
};

// Set specs: model[:l], not-model[:l], theta0, theta0-complement,
// point-complement, ring:k, w:k, ball:k, ball-complement:k. Without an
// explicit l, model specs use the class count of theta0.
LabelSet parse_set_spec(const std::string& spec, const Labelling& theta0);

// The bound attached to a contraction target; composite targets add the
// bounds of the pieces that cover them.
BoundReport bound_for_target(const std::string& spec, const Prior& prior, const Labelling& theta0,
                             double rho, const EnumerationLimits& limits = {});

struct ReportRow {
  std::string target;
  std::string bound_name;
  double bound = 0.0;
  double empirical_mean = 0.0;
  double standard_error = 0.0;  // the one entering the pass rule
  double mean_standard_error = 0.0;
  bool vacuous = false;
  bool pass = false;
  nlohmann::ordered_json detail = nlohmann::ordered_json::object();
  nlohmann::ordered_json to_json() const;
};

struct MonteCarloReport {
  nlohmann::ordered_json config;
  std::string experiment;
  std::vector<ReportRow> rows;
  std::vector<std::string> warnings;
  std::optional<double> runtime_seconds;
  bool all_pass() const;
  nlohmann::ordered_json to_json() const;
};

MonteCarloReport run_contraction_experiment(const ExperimentConfig& cfg);
MonteCarloReport run_coverage_experiment(const ExperimentConfig& cfg);
MonteCarloReport run_testing_experiment(const ExperimentConfig& cfg);
MonteCarloReport run_experiment(const ExperimentConfig& cfg);

// mean <= bound + 3 se.
bool passes(double mean, double bound, double se);

}  // namespace pmsbm
