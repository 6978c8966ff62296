#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pmsbm/bounds.hpp"
#include "pmsbm/enumerate.hpp"
#include "pmsbm/error.hpp"
#include "pmsbm/experiment.hpp"
#include "pmsbm/graph.hpp"
#include "pmsbm/inference.hpp"
#include "pmsbm/mcmc.hpp"
#include "pmsbm/posterior.hpp"
#include "pmsbm/sbm.hpp"

namespace {

using namespace pmsbm;
using ojson = nlohmann::ordered_json;

struct ModelArgs {
  int n = 0;
  std::vector<std::string> sizes;  // one size vector per flag, comma separated
  int window = 0;
  int max_classes = 0;
  std::string phase = "dense";
  double p = 0.9, q = 0.1;
  double a = 4.0, b = 1.0, c = 4.0, d = 1.0;
  std::string prior = "flat-uniform";
  std::string theta0;
  std::uint64_t seed = 1;
  int max_n = 14;
};

void add_family(CLI::App* app, ModelArgs& m) {
  app->add_option("--n", m.n, "number of vertices");
  app->add_option("--sizes", m.sizes, "admissible size vector, e.g. 4,4 (repeatable)");
  app->add_option("--L", m.window, "window family: up to L classes, sizes within [n/(2L), 2n/L]");
  app->add_option("--max-classes", m.max_classes, "all partitions with at most this many classes");
  app->add_option("--enumeration-cap", m.max_n, "largest n enumerated exactly");
}

void add_probs(CLI::App* app, ModelArgs& m) {
  app->add_option("--phase", m.phase, "dense | chernoff-hellinger | kesten-stigum | explicit");
  app->add_option("--p", m.p, "within-class edge probability");
  app->add_option("--q", m.q, "between-class edge probability");
  app->add_option("--a", m.a, "Chernoff-Hellinger scale: p = a log n / n");
  app->add_option("--b", m.b, "Chernoff-Hellinger scale: q = b log n / n");
  app->add_option("--c", m.c, "Kesten-Stigum scale: p = c / n");
  app->add_option("--d", m.d, "Kesten-Stigum scale: q = d / n");
}

SizeVector parse_sizes(const std::string& text) {
  SizeVector v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stoi(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ParseError("bad size vector '" + text + "'");
    }
  }
  if (v.empty()) throw ParseError("empty size vector");
  return v;
}

ModelFamily make_family(const ModelArgs& m) {
  if (m.n < 1) throw InvalidArgument("--n is required and must be positive");
  if (!m.sizes.empty()) {
    std::vector<SizeVector> vectors;
    for (const auto& s : m.sizes) vectors.push_back(parse_sizes(s));
    return ModelFamily::from_size_vectors(m.n, vectors);
  }
  if (m.window > 0) return ModelFamily::from_window(m.n, m.window);
  return ModelFamily::all_partitions(m.n, m.max_classes > 0 ? m.max_classes : m.n);
}

EdgeProbs make_probs(const ModelArgs& m) {
  switch (parse_phase(m.phase)) {
    case Phase::Dense: return EdgeProbs::dense(m.p, m.q);
    case Phase::Explicit: return EdgeProbs::explicit_probs(m.p, m.q);
    case Phase::ChernoffHellinger: return EdgeProbs::chernoff_hellinger(m.a, m.b, m.n);
    case Phase::KestenStigum: return EdgeProbs::kesten_stigum(m.c, m.d, m.n);
  }
  throw InvalidArgument("unknown phase");
}

Prior make_prior(const ModelArgs& m) {
  const ModelFamily fam = make_family(m);
  switch (parse_prior_kind(m.prior)) {
    case PriorKind::HierarchicalUniform: return Prior::hierarchical_uniform(fam);
    case PriorKind::FlatUniform: return Prior::flat_uniform(fam);
    case PriorKind::ExplicitMass: break;
  }
  throw InvalidArgument("explicit-mass priors are only available through the library");
}

EnumerationLimits limits_of(const ModelArgs& m) {
  EnumerationLimits l;
  l.max_n = m.max_n;
  return l;
}

Labelling need_theta0(const ModelArgs& m) {
  if (m.theta0.empty()) throw InvalidArgument("--theta0 is required");
  Labelling t = Labelling::parse(m.theta0);
  if (static_cast<int>(t.n()) != m.n) throw InvalidArgument("--theta0 has the wrong number of vertices");
  return t;
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file '" + path + "'");
  return read_graph(in);
}

// Writes to the file when a path is given, otherwise to stdout.
template <typename F>
void emit(const std::string& path, F&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  write(out);
  if (!out) throw ParseError("write failed for '" + path + "'");
}

std::string json_text(const ojson& j) { return j.dump(2) + "\n"; }

struct PosteriorArgs {
  std::string graph;
  std::string engine = "exact";
  long long steps = 100000;
};

void add_posterior(CLI::App* app, PosteriorArgs& pa) {
  app->add_option("--graph", pa.graph, "graph file")->required();
  app->add_option("--engine", pa.engine, "exact | mcmc");
  app->add_option("--steps", pa.steps, "MCMC steps");
}

PosteriorTable compute_posterior(const ModelArgs& m, const PosteriorArgs& pa) {
  const Graph g = load_graph(pa.graph);
  if (static_cast<int>(g.n()) != m.n) throw InvalidArgument("graph has " + std::to_string(g.n()) + " vertices, --n is " +
                                          std::to_string(m.n));
  const Prior prior = make_prior(m);
  const EdgeProbs probs = make_probs(m);
  if (pa.engine == "exact") {
    auto space = std::make_shared<const PosteriorSpace>(prior, limits_of(m));
    return exact_posterior(space, g, probs);
  }
  if (pa.engine == "mcmc") {
    McmcOptions opts;
    opts.steps = pa.steps;
    const auto res = mcmc_posterior(g, prior, probs, opts, m.seed);
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
    return empirical_posterior(res, prior);
  }
  throw InvalidArgument("--engine must be exact or mcmc");
}

// Set specs that name theta0 need it; explicit model:l and not-model:l do not.
LabelSet set_from_spec(const std::string& spec, const ModelArgs& m) {
  if (!m.theta0.empty()) return parse_set_spec(spec, need_theta0(m));
  const bool standalone = (spec.rfind("model:", 0) == 0 || spec.rfind("not-model:", 0) == 0);
  if (!standalone) throw InvalidArgument("set '" + spec + "' refers to theta0; pass --theta0");
  return parse_set_spec(spec, Labelling::blocks(std::vector<int>{m.n}));
}

int run_simulate(const ModelArgs& m, const std::string& out, const std::string& labels_out) {
  const ModelFamily fam = make_family(m);
  const EdgeProbs probs = make_probs(m);
  Rng rng(m.seed);
  Labelling theta0 = m.theta0.empty() ? sample_labelling_from_family(fam, rng) : need_theta0(m);
  if (!fam.contains(theta0)) throw InvalidArgument("--theta0 is not in the family");
  const Graph g = sample_graph(theta0, probs, rng);
  emit(out, [&](std::ostream& os) { write_graph(os, g); });
  if (!labels_out.empty()) {
    emit(labels_out, [&](std::ostream& os) { os << theta0.to_string() << "\n"; });
  }
  return 0;
}

int run_posterior(const ModelArgs& m, const PosteriorArgs& pa, const std::string& out) {
  const PosteriorTable t = compute_posterior(m, pa);
  emit(out, [&](std::ostream& os) { t.write_csv(os); });
  return 0;
}

struct BoundArgs {
  std::string name;
  int ell = 0;
  int k = 1;
  double a_hat = -1.0, b_hat = -1.0, r = 1.0;
  long long samples = 1000000;
};

int run_bounds(const ModelArgs& m, const BoundArgs& ba, const std::string& out) {
  ojson result;
  const std::string& name = ba.name;
  if (name.rfind("example-", 0) == 0) {
    const int L = m.window > 0 ? m.window : m.max_classes;
    if (L < 2) throw InvalidArgument("--L is required for phase examples");
    std::vector<BoundReport> reports;
    if (name.rfind("example-dense", 0) == 0) {
      reports = phase_example_bounds(Phase::Dense, m.n, L, m.p, m.q);
    } else if (name.rfind("example-ch", 0) == 0) {
      reports = phase_example_bounds(Phase::ChernoffHellinger, m.n, L, m.a, m.b);
    } else if (name.rfind("example-ks", 0) == 0) {
      reports = phase_example_bounds(Phase::KestenStigum, m.n, L, m.c, m.d);
    }
    for (const auto& r : reports) {
      if (r.name == name) result = r.to_json();
    }
    if (result.is_null()) throw InvalidArgument("unknown bound '" + name + "'");
  } else if (name == "thm-odds") {
    if (ba.a_hat < 0.0) throw InvalidArgument("--a-hat is required for thm-odds");
    std::optional<double> b;
    if (ba.b_hat >= 0.0) b = ba.b_hat;
    result = odds_error_bound(ba.a_hat, b, ba.r).to_json();
  } else if (name == "aux-inequalities") {
    const AuxReport rep = aux_inequalities_check(ba.samples, m.seed);
    result["name"] = name;
    result["pass"] = rep.pass();
    result["lemmas"] = rep.to_json();
  } else {
    const Prior prior = make_prior(m);
    const Labelling theta0 = need_theta0(m);
    const double rho = hellinger_affinity(make_probs(m).p, make_probs(m).q);
    const auto lim = limits_of(m);
    BoundReport r;
    if (name == "prop-model-select") {
      r = model_selection_bound(prior, theta0, ba.ell, rho);
    } else if (name == "prop-model-select-sum") {
      r = bound_for_target("not-model", prior, theta0, rho, lim);
    } else if (name == "prop-ring") {
      r = ring_bound(prior, theta0, ba.k, rho, lim);
    } else if (name == "prop-ring-sum") {
      r = ring_sum_bound(prior, theta0, ba.k, rho, lim);
    } else if (name == "cor-point") {
      r = point_bound(prior, theta0, rho);
    } else {
      throw InvalidArgument("unknown bound '" + name + "'");
    }
    result = r.to_json();
  }
  emit(out, [&](std::ostream& os) { os << json_text(result); });
  return 0;
}

struct CredibleArgs {
  double alpha = 0.1;
  int k = 0;
  double x = -1.0;
};

int run_credible(const ModelArgs& m, const PosteriorArgs& pa, const CredibleArgs& ca,
                 const std::string& out) {
  const PosteriorTable t = compute_posterior(m, pa);
  const CredibleSet cs = hpd_credible_set(t, ca.alpha);
  ojson j;
  j["credible_set"] = cs.to_json();
  if (ca.k > 0) {
    const auto big = enlarge(cs.members, ca.k, make_family(m), limits_of(m));
    ojson members = ojson::array();
    for (const auto& e : big) members.push_back(e.to_string());
    j["enlargement"] = {{"k", ca.k}, {"size", big.size()}, {"members", members}};
  }
  // x_n is the expected mass outside the k-ball around the truth. Without a
  // supplied value it is replaced by this graph's plug-in estimate around
  // theta0, or around the posterior mode when theta0 is unknown.
  double x = ca.x;
  std::string source = "supplied";
  if (x < 0.0) {
    const Labelling centre = m.theta0.empty() ? cs.members.front() : need_theta0(m);
    x = std::max(0.0, 1.0 - set_mass(t, sets::ball(centre, ca.k)));
    source = m.theta0.empty() ? "plug-in at posterior mode" : "plug-in at theta0";
  }
  ojson conf = confidence_from_credible(ca.alpha, x, ca.k, cs.members.size()).to_json();
  conf["x_source"] = source;
  j["confidence"] = conf;
  emit(out, [&](std::ostream& os) { os << json_text(j); });
  return 0;
}

struct TestArgs {
  std::string a = "model", b = "not-model";
  double r = 1.0;
};

int run_test(const ModelArgs& m, const PosteriorArgs& pa, const TestArgs& ta, const std::string& out) {
  const PosteriorTable t = compute_posterior(m, pa);
  const LabelSet A = set_from_spec(ta.a, m);
  const LabelSet B = set_from_spec(ta.b, m);
  ojson j = odds_test(t, A, B, ta.r).to_json();
  j["A"] = ta.a;
  j["B"] = ta.b;
  emit(out, [&](std::ostream& os) { os << json_text(j); });
  return 0;
}

std::string csv_field(const ojson& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    std::ostringstream os;
    os << std::setprecision(17) << v.get<double>();
    return os.str();
  }
  return v.dump();
}

int run_verify(const std::string& config_path, int threads, const std::string& out,
               const std::string& csv) {
  std::ifstream in(config_path);
  if (!in) throw ParseError("cannot open config '" + config_path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig cfg = ExperimentConfig::from_json(j);
  if (threads >= 0) cfg.threads = threads;
  const MonteCarloReport rep = run_experiment(cfg);
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
  emit(out, [&](std::ostream& os) { os << json_text(rep.to_json()); });
  if (!csv.empty()) {
    emit(csv, [&](std::ostream& os) {
      os << "target,bound_name,bound,empirical_mean,standard_error,vacuous,pass\n";
      for (const auto& r : rep.rows) {
        const ojson rj = r.to_json();
        os << csv_field(rj["target"]) << ',' << csv_field(rj["bound_name"]) << ','
           << csv_field(rj["bound"]) << ',' << csv_field(rj["empirical_mean"]) << ','
           << csv_field(rj["standard_error"]) << ',' << (r.vacuous ? "true" : "false") << ','
           << (r.pass ? "true" : "false") << "\n";
      }
    });
  }
  return 0;
}

int run_enumerate(const ModelArgs& m, int ell) {
  const ModelFamily fam = make_family(m);
  std::optional<int> only;
  if (ell > 0) only = ell;
  for_each_labelling(
      fam, only, [](const Labelling& t) { std::cout << t.to_string() << "\n"; }, limits_of(m));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian inference and bound verification for planted multi-section block models"};
  app.require_subcommand(1);
  ModelArgs m;
  PosteriorArgs pa;
  std::string out;

  auto* simulate = app.add_subcommand("simulate", "sample a graph from a labelling");
  add_family(simulate, m);
  add_probs(simulate, m);
  simulate->add_option("--theta0", m.theta0, "true labelling (default: drawn from the family)");
  simulate->add_option("--seed", m.seed);
  simulate->add_option("--out", out, "graph file (default stdout)");
  std::string labels_out;
  simulate->add_option("--labels-out", labels_out, "write the labelling used");

  auto* posterior = app.add_subcommand("posterior", "posterior table as CSV");
  add_family(posterior, m);
  add_probs(posterior, m);
  add_posterior(posterior, pa);
  posterior->add_option("--prior", m.prior);
  posterior->add_option("--seed", m.seed);
  posterior->add_option("--out", out);

  auto* bounds = app.add_subcommand("bounds", "evaluate a bound as JSON");
  BoundArgs ba;
  add_family(bounds, m);
  add_probs(bounds, m);
  bounds->add_option("--name", ba.name)->required();
  bounds->add_option("--prior", m.prior);
  bounds->add_option("--theta0", m.theta0);
  bounds->add_option("--ell", ba.ell, "class count of the competing model");
  bounds->add_option("--k", ba.k, "ring radius");
  bounds->add_option("--a-hat", ba.a_hat, "E Pi(A^c|X) for thm-odds");
  bounds->add_option("--b-hat", ba.b_hat, "E Pi(B|X) for thm-odds");
  bounds->add_option("--r", ba.r, "odds threshold for thm-odds");
  bounds->add_option("--samples", ba.samples, "samples per inequality for aux-inequalities");
  bounds->add_option("--seed", m.seed);
  bounds->add_option("--out", out);

  auto* credible = app.add_subcommand("credible", "HPD credible set and confidence statement");
  CredibleArgs ca;
  add_family(credible, m);
  add_probs(credible, m);
  add_posterior(credible, pa);
  credible->add_option("--prior", m.prior);
  credible->add_option("--alpha", ca.alpha);
  credible->add_option("--k", ca.k, "enlargement radius");
  credible->add_option("--x", ca.x, "expected mass outside the k-ball");
  credible->add_option("--theta0", m.theta0);
  credible->add_option("--seed", m.seed);
  credible->add_option("--out", out);

  auto* test = app.add_subcommand("test", "posterior odds test of A against B");
  TestArgs ta;
  add_family(test, m);
  add_probs(test, m);
  add_posterior(test, pa);
  test->add_option("--prior", m.prior);
  test->add_option("--A", ta.a, "null hypothesis set");
  test->add_option("--B", ta.b, "alternative set");
  test->add_option("--r", ta.r, "reject when the odds exceed r");
  test->add_option("--theta0", m.theta0);
  test->add_option("--seed", m.seed);
  test->add_option("--out", out);

  auto* verify = app.add_subcommand("verify", "run a Monte Carlo experiment from a JSON config");
  std::string config;
  int threads = -1;
  std::string csv;
  verify->add_option("--config", config)->required();
  verify->add_option("--threads", threads, "worker count (0: all cores)");
  verify->add_option("--out", out);
  verify->add_option("--csv", csv, "also write rows as CSV");

  auto* enumerate = app.add_subcommand("enumerate", "list the labellings of a family");
  int ell = 0;
  add_family(enumerate, m);
  enumerate->add_option("--ell", ell, "only this class count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (simulate->parsed()) return run_simulate(m, out, labels_out);
    if (posterior->parsed()) return run_posterior(m, pa, out);
    if (bounds->parsed()) return run_bounds(m, ba, out);
    if (credible->parsed()) return run_credible(m, pa, ca, out);
    if (test->parsed()) return run_test(m, pa, ta, out);
    if (verify->parsed()) return run_verify(config, threads, out, csv);
    if (enumerate->parsed()) return run_enumerate(m, ell);
  } catch (const AssumptionViolation& e) {
    std::cerr << "assumption violated: " << e.what() << "\n";
    return 2;
  } catch (const Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
