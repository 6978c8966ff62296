#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmsbm/edge_probs.hpp"
#include "pmsbm/enumerate.hpp"
#include "pmsbm/labelling.hpp"
#include "pmsbm/model_family.hpp"
#include "pmsbm/prior.hpp"

namespace pmsbm {

struct AssumptionCheck {
  std::string name;
  bool pass = false;
};

// A theoretical bound evaluated at concrete inputs. Values are carried in the
// log domain; value() reconstructs them and saturates at +inf.
struct BoundReport {
  std::string name;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  double log_value = 0.0;
  std::vector<AssumptionCheck> assumptions;

  double value() const;
  bool vacuous() const { return log_value >= 0.0; }
  // Every recorded premise holds.
  bool guaranteed() const;
  void check(std::string assumption, bool pass) { assumptions.push_back({std::move(assumption), pass}); }
  nlohmann::ordered_json to_json() const;
};

// sqrt(pq) + sqrt((1-p)(1-q)); p, q in (0, 1).
double hellinger_affinity(double p, double q);

// rho^(d1 + d2).
double test_power_bound(long long d1, long long d2, double p, double q);

// Type I + type II error of the likelihood-ratio test between theta0 and
// theta, summed over every graph on n <= 6 vertices. The test rejects theta0
// when p_theta(x) > p_theta0(x), so the sum equals sum_x min(p0(x), p1(x)).
double exact_lrt_error_sum(const Labelling& theta0, const Labelling& theta, double p, double q);

// 2 max(pi(S)/pi(theta0), |S|) rho^B.
BoundReport posterior_set_bound(const Prior& prior, const Labelling& theta0, double s_card,
                                double s_prior_mass, double b_exponent, double rho);

// Mass of a wrong class count: 2 max(pi(Theta_l)/pi(theta0), |Theta_l|)
// rho^(n (m_min(l0 ^ l) - m_max(l0 v l)) / 2). Cardinalities are exact
// closed-form counts.
BoundReport model_selection_bound(const Prior& prior, const Labelling& theta0, int ell,
                                  double rho);

// Mass of the r-ring of radius k around theta0:
// 2 max(|V|, pi(V)/pi(theta0)) rho^(2k (m_min - k)^+). |V| is enumerated
// when feasible, otherwise replaced by its binomial upper bound (uniform
// priors only).
BoundReport ring_bound(const Prior& prior, const Labelling& theta0, int k, double rho,
                       const EnumerationLimits& limits = {});

// Sum of ring bounds over k >= k_from, i.e. a bound on W_{l0, k_from}.
BoundReport ring_sum_bound(const Prior& prior, const Labelling& theta0, int k_from, double rho,
                           const EnumerationLimits& limits = {});

// Mass of Theta_l0 minus theta0: 2 K B^(l0 (l0-1)) e^((l0-1) B) with
// B = 2n rho^((2 m_min - m_max) / (l0 (l0-1))). Zero when l0 = 1.
BoundReport point_bound(const Prior& prior, const Labelling& theta0, double rho);

// The aggregate bounds worked out for window families in each sparsity
// phase. Premises are recorded, never enforced.
std::vector<BoundReport> phase_example_bounds(Phase phase, int n, int max_classes,
                                              double s1, double s2);
std::vector<BoundReport> phase_example_bounds(const EdgeProbs& probs, int n, int max_classes);

struct AuxLemmaResult {
  std::string name;
  long long samples = 0;
  long long counterexamples = 0;
  std::string first_counterexample;
};
struct AuxReport {
  std::vector<AuxLemmaResult> lemmas;
  bool pass() const;
  nlohmann::ordered_json to_json() const;
};

// Randomized checks of three elementary inequalities on their domains:
// e^(-Cx)/(1-e^(-x)) <= e^(-Cx/4) for C >= 2, x >= sqrt(2/C);
// sqrt(1-x) <= 1 - x/2 on [0, 1]; (1 + x/r)^r <= e^x for integer r >= 1, x > -r.
AuxReport aux_inequalities_check(long long samples, std::uint64_t seed);

}  // namespace pmsbm
