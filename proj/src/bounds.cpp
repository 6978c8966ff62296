#include "pmsbm/bounds.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <sstream>

#include "pmsbm/error.hpp"
#include "pmsbm/graph.hpp"
#include "pmsbm/metrics.hpp"
#include "pmsbm/posterior.hpp"
#include "pmsbm/rng.hpp"
#include "pmsbm/sbm.hpp"

namespace pmsbm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_open_prob(double p, const char* name) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidArgument(std::string(name) + " must lie in (0, 1)");
  }
}

void require_rho(double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) throw InvalidArgument("affinity must lie in (0, 1]");
}

// exponent * log(rho), with 0 * log(1) = 0 and log(rho) = 0 at rho = 1.
double log_power(double rho, double exponent) {
  if (exponent == 0.0) return 0.0;
  return exponent * std::log(rho);
}

double log_max(double a, double b) { return std::max(a, b); }

nlohmann::ordered_json number_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

}  // namespace

double BoundReport::value() const {
  if (log_value > std::log(DBL_MAX)) return std::numeric_limits<double>::infinity();
  return std::exp(log_value);
}

bool BoundReport::guaranteed() const {
  return std::all_of(assumptions.begin(), assumptions.end(),
                     [](const AssumptionCheck& a) { return a.pass; });
}

nlohmann::ordered_json BoundReport::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["inputs"] = inputs;
  j["value"] = number_or_null(value());
  j["log_value"] = number_or_null(log_value);
  j["vacuous"] = vacuous();
  auto checks = nlohmann::ordered_json::array();
  for (const auto& a : assumptions) {
    nlohmann::ordered_json c;
    c["name"] = a.name;
    c["pass"] = a.pass;
    checks.push_back(c);
  }
  j["assumptions_checked"] = checks;
  return j;
}

double hellinger_affinity(double p, double q) {
  require_open_prob(p, "p");
  require_open_prob(q, "q");
  if (p == q) return 1.0;
  return std::sqrt(p * q) + std::sqrt((1.0 - p) * (1.0 - q));
}

double test_power_bound(long long d1, long long d2, double p, double q) {
  if (d1 < 0 || d2 < 0) throw InvalidArgument("pair counts must be nonnegative");
  return std::exp(log_power(hellinger_affinity(p, q), static_cast<double>(d1 + d2)));
}

double exact_lrt_error_sum(const Labelling& theta0, const Labelling& theta, double p, double q) {
  if (theta0.n() != theta.n()) throw InvalidArgument("labellings have different vertex counts");
  if (theta0.n() > 6) throw Infeasible("exact graph enumeration is limited to n <= 6");
  const auto probs = EdgeProbs::explicit_probs(p, q);
  const std::size_t n = theta0.n();
  const std::size_t pairs = n * (n - 1) / 2;
  double total = 0.0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << pairs); ++bits) {
    const Graph g = Graph::from_pair_bits(n, bits);
    const double l0 = log_likelihood(g, theta0, probs);
    const double l1 = log_likelihood(g, theta, probs);
    total += std::exp(std::min(l0, l1));
  }
  return total;
}

BoundReport posterior_set_bound(const Prior& prior, const Labelling& theta0, double s_card,
                                double s_prior_mass, double b_exponent, double rho) {
  require_rho(rho);
  const double lp0 = prior.log_mass(theta0);
  if (std::isinf(lp0)) throw InvalidArgument("theta0 has zero prior mass");
  if (s_card < 0 || s_prior_mass < 0) throw InvalidArgument("set size and mass must be nonnegative");
  BoundReport r;
  r.name = "prop-postconvset";
  r.inputs["n"] = theta0.n();
  r.inputs["prior"] = std::string(to_string(prior.kind()));
  r.inputs["set_size"] = s_card;
  r.inputs["set_prior_mass"] = s_prior_mass;
  r.inputs["prior_mass_theta0"] = std::exp(lp0);
  r.inputs["b_exponent"] = b_exponent;
  r.inputs["rho"] = rho;
  r.check("theta0 has positive prior mass", true);
  r.check("b_exponent >= 1", b_exponent >= 1.0);
  const double lratio = s_prior_mass > 0 ? std::log(s_prior_mass) - lp0 : kNegInf;
  const double lcard = s_card > 0 ? std::log(s_card) : kNegInf;
  r.log_value = std::log(2.0) + log_max(lratio, lcard) + log_power(rho, b_exponent);
  return r;
}

BoundReport model_selection_bound(const Prior& prior, const Labelling& theta0, int ell,
                                  double rho) {
  require_rho(rho);
  const ModelFamily& family = prior.family();
  const int ell0 = theta0.ell();
  if (!family.contains(theta0)) throw InvalidArgument("theta0 is not in the family");
  if (ell == ell0) throw InvalidArgument("model selection needs l != l0");
  if (!family.has_class_count(ell)) throw InvalidArgument("class count not in the family");
  family.require_ordering();
  const double exponent = cross_model_d_lower_bound(family, ell0, ell);
  const double lp0 = prior.log_mass(theta0);
  const double lcard = family.log_cardinality(ell);
  const double lmodel = prior.log_mass_of_model(ell);
  BoundReport r;
  r.name = "prop-model-select";
  r.inputs["n"] = family.n();
  r.inputs["ell0"] = ell0;
  r.inputs["ell"] = ell;
  r.inputs["prior"] = std::string(to_string(prior.kind()));
  r.inputs["model_size"] = std::exp(lcard);
  r.inputs["model_prior_mass"] = std::exp(lmodel);
  r.inputs["prior_mass_theta0"] = std::exp(lp0);
  r.inputs["b_exponent"] = exponent;
  r.inputs["rho"] = rho;
  r.check("class-size ordering across class counts", true);
  r.log_value = std::log(2.0) + log_max(lmodel - lp0, lcard) + log_power(rho, exponent);
  return r;
}

namespace {

struct RingTerm {
  double log_card;
  double log_prior_ratio;
  bool enumerated;
};

RingTerm ring_term(const Prior& prior, const Labelling& theta0, int k,
                   const EnumerationLimits& limits) {
  const ModelFamily& family = prior.family();
  const double lp0 = prior.log_mass(theta0);
  try {
    const auto members = ring_members(RingSpec{theta0, k}, family, limits);
    std::vector<double> lps;
    for (const auto& t : members) lps.push_back(prior.log_mass(t));
    const double lcard = members.empty() ? kNegInf : std::log(static_cast<double>(members.size()));
    return {lcard, log_sum_exp(lps) - lp0, true};
  } catch (const Infeasible&) {
    if (prior.kind() == PriorKind::ExplicitMass) throw;
    const int ell0 = theta0.ell();
    if (k > family.m_min(ell0)) {
      throw Infeasible("ring too large to enumerate and outside the range of the counting bound");
    }
    // Within one class count both uniform priors are flat, so the mass
    // ratio equals the cardinality.
    const double lb = log_ring_cardinality_bound(family.n(), ell0, k);
    return {lb, lb, false};
  }
}

void check_ring_inputs(const Prior& prior, const Labelling& theta0) {
  if (!prior.family().contains(theta0)) throw InvalidArgument("theta0 is not in the family");
  if (theta0.ell() < 2) throw InvalidArgument("ring bounds need l0 > 1");
}

}  // namespace

BoundReport ring_bound(const Prior& prior, const Labelling& theta0, int k, double rho,
                       const EnumerationLimits& limits) {
  require_rho(rho);
  check_ring_inputs(prior, theta0);
  const ModelFamily& family = prior.family();
  const int ell0 = theta0.ell();
  const int m_min = family.m_min(ell0), m_max = family.m_max(ell0);
  if (k < 0 || k > m_max / 2) throw InvalidArgument("ring radius must lie in [0, m_max/2]");
  const RingTerm t = ring_term(prior, theta0, k, limits);
  const double exponent = static_cast<double>(ring_d_lower_bound(m_min, k));
  BoundReport r;
  r.name = "prop-ring";
  r.inputs["n"] = family.n();
  r.inputs["ell0"] = ell0;
  r.inputs["k"] = k;
  r.inputs["prior"] = std::string(to_string(prior.kind()));
  r.inputs["ring_size"] = std::exp(t.log_card);
  r.inputs["ring_size_exact"] = t.enumerated;
  r.inputs["b_exponent"] = exponent;
  r.inputs["rho"] = rho;
  r.check("l0 > 1", true);
  r.log_value = std::log(2.0) + log_max(t.log_card, t.log_prior_ratio) + log_power(rho, exponent);
  return r;
}

BoundReport ring_sum_bound(const Prior& prior, const Labelling& theta0, int k_from, double rho,
                           const EnumerationLimits& limits) {
  require_rho(rho);
  check_ring_inputs(prior, theta0);
  const int ell0 = theta0.ell();
  const int top = prior.family().m_max(ell0) / 2;
  if (k_from < 0) throw InvalidArgument("ring radius must be nonnegative");
  std::vector<double> terms;
  bool exact = true;
  for (int k = k_from; k <= top; ++k) {
    const BoundReport one = ring_bound(prior, theta0, k, rho, limits);
    terms.push_back(one.log_value);
    exact = exact && one.inputs["ring_size_exact"].get<bool>();
  }
  BoundReport r;
  r.name = "prop-ring-sum";
  r.inputs["n"] = prior.family().n();
  r.inputs["ell0"] = ell0;
  r.inputs["k_from"] = k_from;
  r.inputs["k_to"] = top;
  r.inputs["prior"] = std::string(to_string(prior.kind()));
  r.inputs["ring_sizes_exact"] = exact;
  r.inputs["rho"] = rho;
  r.check("l0 > 1", true);
  r.log_value = log_sum_exp(terms);
  return r;
}

BoundReport point_bound(const Prior& prior, const Labelling& theta0, double rho) {
  require_rho(rho);
  const ModelFamily& family = prior.family();
  if (!family.contains(theta0)) throw InvalidArgument("theta0 is not in the family");
  const int ell0 = theta0.ell();
  BoundReport r;
  r.name = "cor-point";
  r.inputs["n"] = family.n();
  r.inputs["ell0"] = ell0;
  r.inputs["prior"] = std::string(to_string(prior.kind()));
  r.inputs["rho"] = rho;
  if (ell0 == 1) {
    // Theta_1 is the single labelling theta0; nothing else to put mass on.
    r.inputs["b_n"] = 0.0;
    r.log_value = kNegInf;
    return r;
  }
  const int m_min = family.m_min(ell0), m_max = family.m_max(ell0);
  const bool balanced = family.satisfies_balance(ell0);
  if (!balanced) {
    throw AssumptionViolation("point bound needs m_min >= m_max/2 for l0 = " +
                              std::to_string(ell0));
  }
  const double pairs = static_cast<double>(ell0) * (ell0 - 1);
  const double k_ratio = prior.max_ratio_within(ell0);
  const double log_b = std::log(2.0 * family.n()) + log_power(rho, (2.0 * m_min - m_max) / pairs);
  const double b = std::exp(log_b);
  r.inputs["m_min"] = m_min;
  r.inputs["m_max"] = m_max;
  r.inputs["prior_ratio_bound"] = k_ratio;
  r.inputs["b_n"] = b;
  r.check("m_min >= m_max/2", true);
  r.check("positive prior mass on Theta_l0", true);
  r.log_value = std::log(2.0 * k_ratio) + pairs * log_b + (ell0 - 1) * b;
  return r;
}

std::vector<BoundReport> phase_example_bounds(Phase phase, int n, int max_classes, double s1,
                                              double s2) {
  if (n < 2) throw InvalidArgument("phase examples need n >= 2");
  if (max_classes < 2) throw InvalidArgument("phase examples need L >= 2");
  const double L = max_classes;
  const double logL = std::log(L);
  const double dn = n;
  std::vector<BoundReport> out;
  auto base = [&](const char* name) {
    BoundReport r;
    r.name = name;
    r.inputs["phase"] = std::string(to_string(phase));
    r.inputs["n"] = n;
    r.inputs["L"] = max_classes;
    return r;
  };
  switch (phase) {
    case Phase::Dense:
    case Phase::Explicit: {
      const double p = s1, q = s2;
      const double b = -std::log(hellinger_affinity(p, q));
      BoundReport sel = base("example-dense");
      sel.inputs["p"] = p;
      sel.inputs["q"] = q;
      sel.inputs["b"] = b;
      sel.check("n b / (L^2 log L) >= 12", dn * b / (L * L * logL) >= 12.0);
      sel.log_value = logL - b * dn * dn / (12.0 * L * L);
      out.push_back(sel);
      BoundReport pt = base("example-dense-point");
      pt.inputs["p"] = p;
      pt.inputs["q"] = q;
      pt.inputs["b"] = b;
      pt.check("n b >= 8 L^2 (L-1) log(2n)", dn * b >= 8.0 * L * L * (L - 1) * std::log(2.0 * dn));
      pt.log_value = std::log(2.0) + 0.5 - dn * b / (8.0 * L);
      out.push_back(pt);
      break;
    }
    case Phase::ChernoffHellinger: {
      const double a = s1, b = s2;
      const double gap = std::pow(std::sqrt(a) - std::sqrt(b), 2);
      const double logn = std::log(dn);
      BoundReport sel = base("example-ch");
      sel.inputs["a"] = a;
      sel.inputs["b"] = b;
      sel.inputs["gap"] = gap;
      sel.check("48 L^2 log L <= (sqrt a - sqrt b)^2 log n", 48.0 * L * L * logL <= gap * logn);
      sel.check("a b log n / (4n) <= (sqrt a - sqrt b)^2 / 4", a * b * logn / (4.0 * dn) <= gap / 4.0);
      sel.log_value = logL - gap * dn * logn / (48.0 * L * L);
      out.push_back(sel);
      BoundReport pt = base("example-ch-point");
      pt.inputs["a"] = a;
      pt.inputs["b"] = b;
      pt.inputs["gap"] = gap;
      pt.check("(sqrt a - sqrt b)^2 >= 32 L^2 (L-1) log(2n) / log n",
               gap >= 32.0 * L * L * (L - 1) * std::log(2.0 * dn) / logn);
      pt.check("a b log n / (4n) <= (sqrt a - sqrt b)^2 / 4", a * b * logn / (4.0 * dn) <= gap / 4.0);
      pt.log_value = std::log(2.0) + 0.5 - gap / (32.0 * L) * logn;
      out.push_back(pt);
      break;
    }
    case Phase::KestenStigum: {
      const double c = s1, d = s2;
      const double gap = std::pow(std::sqrt(c) - std::sqrt(d), 2);
      BoundReport sel = base("example-ks");
      sel.inputs["c"] = c;
      sel.inputs["d"] = d;
      sel.inputs["gap"] = gap;
      sel.check("(sqrt c - sqrt d)^2 >= 48 L^2 log L", gap >= 48.0 * L * L * logL);
      sel.log_value = logL - gap * dn / (48.0 * L * L);
      out.push_back(sel);
      BoundReport ball = base("example-ks-ball");
      const double delta = 2.0 * (L - 1) * std::exp(2.0 - gap / (16.0 * L * L * (L - 1)));
      ball.inputs["c"] = c;
      ball.inputs["d"] = d;
      ball.inputs["gap"] = gap;
      ball.inputs["delta"] = delta;
      ball.check("0 < delta < 1", delta > 0.0 && delta < 1.0);
      ball.check("delta n / (L (L-1)) >= 2", delta * dn / (L * (L - 1)) >= 2.0);
      const double lhs = -1.0 - std::log(2.0) + std::log(delta) - std::log(L - 1) +
                         gap / (16.0 * L * L * (L - 1));
      ball.check("-1 - log 2 + log delta - log(L-1) + (sqrt c - sqrt d)^2/(16 L^2 (L-1)) >= "
                 "sqrt(2 L (L-1) / (delta n))",
                 lhs >= std::sqrt(2.0 * L * (L - 1) / (delta * dn)));
      ball.check("(sqrt c - sqrt d)^2 >= 48 L^2 log L", gap >= 48.0 * L * L * logL);
      ball.log_value = std::log(2.0) - delta * dn / 4.0;
      out.push_back(ball);
      break;
    }
  }
  return out;
}

std::vector<BoundReport> phase_example_bounds(const EdgeProbs& probs, int n, int max_classes) {
  if (probs.phase_params &&
      (probs.phase == Phase::ChernoffHellinger || probs.phase == Phase::KestenStigum)) {
    return phase_example_bounds(probs.phase, n, max_classes, probs.phase_params->first,
                                probs.phase_params->second);
  }
  return phase_example_bounds(Phase::Dense, n, max_classes, probs.p, probs.q);
}

bool AuxReport::pass() const {
  return std::all_of(lemmas.begin(), lemmas.end(),
                     [](const AuxLemmaResult& l) { return l.counterexamples == 0; });
}

nlohmann::ordered_json AuxReport::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& l : lemmas) {
    nlohmann::ordered_json e;
    e["name"] = l.name;
    e["samples"] = l.samples;
    e["counterexamples"] = l.counterexamples;
    e["first_counterexample"] = l.first_counterexample.empty()
                                    ? nlohmann::ordered_json(nullptr)
                                    : nlohmann::ordered_json(l.first_counterexample);
    j.push_back(e);
  }
  return j;
}

namespace {

// a <= b up to a few ulps of the larger magnitude.
bool leq(double a, double b) {
  return a <= b + 8.0 * DBL_EPSILON * std::max({1.0, std::fabs(a), std::fabs(b)});
}

void record(AuxLemmaResult& res, bool ok, const std::string& where) {
  ++res.samples;
  if (ok) return;
  if (res.counterexamples++ == 0) res.first_counterexample = where;
}

std::string point(std::initializer_list<std::pair<const char*, double>> xs) {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (auto [k, v] : xs) {
    if (!first) os << ", ";
    first = false;
    os << k << '=' << v;
  }
  return os.str();
}

}  // namespace

AuxReport aux_inequalities_check(long long samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("need at least one sample");
  Rng rng(seed);
  AuxReport rep;

  AuxLemmaResult ratio{"exp-ratio", 0, 0, {}};
  for (long long s = 0; s < samples; ++s) {
    // C log-uniform on [2, 1e4]; x = sqrt(2/C) times a log-uniform factor in [1, 1e3].
    const double c = s == 0 ? 2.0 : 2.0 * std::exp(rng.uniform() * std::log(5e3));
    const double x0 = std::sqrt(2.0 / c);
    const double x = s == 0 ? x0 : x0 * std::exp(rng.uniform() * std::log(1e3));
    // log of both sides; log(1 - e^-x) = log(-expm1(-x)).
    const double lhs = -c * x - std::log(-std::expm1(-x));
    const double rhs = -c * x / 4.0;
    record(ratio, leq(lhs, rhs), point({{"C", c}, {"x", x}}));
  }
  rep.lemmas.push_back(ratio);

  AuxLemmaResult root{"sqrt-one-minus", 0, 0, {}};
  for (long long s = 0; s < samples; ++s) {
    const double x = s == 0 ? 0.0 : (s == 1 ? 1.0 : rng.uniform());
    record(root, leq(std::sqrt(1.0 - x), 1.0 - x / 2.0), point({{"x", x}}));
  }
  rep.lemmas.push_back(root);

  AuxLemmaResult power{"one-plus-x-over-r", 0, 0, {}};
  for (long long s = 0; s < samples; ++s) {
    double r, x;
    if (s == 0) {
      r = 1.0;
      x = 1.0;
    } else {
      r = static_cast<double>(1 + rng.below(1000));
      // x in (-r, 10 r], the left end approached closely.
      const double u = rng.uniform_open();
      x = rng.bernoulli(0.5) ? -r * u : 10.0 * r * u;
    }
    const double lhs = r * std::log1p(x / r);
    record(power, leq(lhs, x), point({{"r", r}, {"x", x}}));
  }
  rep.lemmas.push_back(power);
  return rep;
}

}  // namespace pmsbm
