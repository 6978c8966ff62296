#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "pmsbm/labelling.hpp"
#include "pmsbm/model_family.hpp"

namespace pmsbm {

enum class PriorKind { HierarchicalUniform, FlatUniform, ExplicitMass };

std::string_view to_string(PriorKind kind);
PriorKind parse_prior_kind(std::string_view text);

// Prior mass function on the labelling space of a family. Uniform kinds use
// closed-form counts and need no enumeration.
class Prior {
 public:
  // Uniform over class counts, then uniform within the chosen class count.
  static Prior hierarchical_uniform(ModelFamily family);
  // Uniform over all labellings of the family.
  static Prior flat_uniform(ModelFamily family);
  // Unnormalized positive weights, one per labelling of the family. Every
  // labelling of the family must be listed.
  static Prior explicit_mass(ModelFamily family,
                             const std::unordered_map<Labelling, double, LabellingHash>& weights);

  PriorKind kind() const noexcept { return kind_; }
  const ModelFamily& family() const noexcept { return family_; }

  // log pi(theta); -inf outside the family.
  double log_mass(const Labelling& theta) const;
  double mass(const Labelling& theta) const;
  // log pi(Theta_l).
  double log_mass_of_model(int ell) const;
  // K_l: largest ratio pi(theta)/pi(eta) over theta, eta with l classes.
  double max_ratio_within(int ell) const;
  // log pi of any labelling with these sizes; only for the uniform kinds,
  // whose mass depends on the size vector alone. nullopt otherwise.
  std::optional<double> log_mass_by_sizes(const SizeVector& sizes) const;

 private:
  PriorKind kind_ = PriorKind::FlatUniform;
  ModelFamily family_;
  double log_total_ = 0.0;  // log |Theta_n| for the flat kind
  std::map<int, double> log_point_mass_;  // per class count, uniform kinds
  std::shared_ptr<const std::unordered_map<Labelling, double, LabellingHash>> explicit_log_;
};

}  // namespace pmsbm
