#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmsbm/bounds.hpp"
#include "pmsbm/label_sets.hpp"
#include "pmsbm/posterior.hpp"

namespace pmsbm {

enum class CredibleConstruction { Hpd, Custom };

struct CredibleSet {
  std::vector<Labelling> members;  // in order of inclusion
  double level = 0.0;              // 1 - alpha
  double attained_mass = 0.0;
  CredibleConstruction construction = CredibleConstruction::Hpd;

  bool contains(const Labelling& theta) const;
  nlohmann::ordered_json to_json() const;
};

// Shortest prefix of the mass-descending order (ties by canonical labels)
// whose mass reaches 1 - alpha; the whole support if rounding never gets there.
CredibleSet hpd_credible_set(const PosteriorTable& table, double alpha);

// A caller-chosen set; checked to carry at least 1 - alpha mass.
CredibleSet custom_credible_set(const PosteriorTable& table, std::vector<Labelling> members,
                                double alpha);

// Every labelling of the family within Hamming distance k (modulo label
// permutation) of some member, in canonical order.
std::vector<Labelling> enlarge(const std::vector<Labelling>& members, int k,
                               const ModelFamily& family, const EnumerationLimits& limits = {});

struct ConfidenceStatement {
  double level = 0.0;  // 1 - x / (1 - alpha)
  double alpha = 0.0;
  double x_n = 0.0;
  int k_n = 0;
  std::size_t set_size = 0;
  bool informative() const { return level > 0.0; }
  nlohmann::ordered_json to_json() const;
};

ConfidenceStatement confidence_from_credible(double alpha, double x_n, int k_n,
                                             std::size_t set_size = 0);

enum class Decision { AcceptH0, RejectH0 };
std::string_view to_string(Decision d);

struct OddsTestResult {
  double odds = 0.0;  // F = Pi(B|X) / Pi(A|X)
  double r = 1.0;
  Decision decision = Decision::AcceptH0;
  std::optional<double> first_kind_bound;    // 2a(1 + 1/r)
  std::optional<double> first_kind_bound_b;  // 2a + 2b/r
  std::optional<double> power_lower_bound;   // 1 - 2(1 + r) b'
  nlohmann::ordered_json to_json() const;
};

// Contraction inputs for the error guarantees; any may be absent.
struct OddsInputs {
  std::optional<double> a;             // E Pi(A^c | X) under theta0 in A
  std::optional<double> b;             // E Pi(B | X) under theta0 in A
  std::optional<double> second_kind;   // E Pi(B^c | X) under theta0 in B
};

// Rejects H0: theta0 in A iff F > r.
OddsTestResult odds_test(const PosteriorTable& table, const LabelSet& a, const LabelSet& b, double r,
                         const OddsInputs& inputs = {});
// The guarantees alone, as a bound report named thm-odds.
BoundReport odds_error_bound(double a, std::optional<double> b, double r);
double odds_power_lower_bound(double second_kind, double r);

// 1 - a/r: probability that Pi(B|X) >= 1 - r given E Pi(B|X) >= 1 - a.
double lemma1_event_bound(double a, double r);

}  // namespace pmsbm
