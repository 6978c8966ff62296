#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pmsbm/labelling.hpp"
#include "pmsbm/model_family.hpp"
#include "pmsbm/rng.hpp"

namespace pmsbm {

// Size caps for exhaustive computations. Defaults suit desk-scale runs.
struct EnumerationLimits {
  int max_n = 14;
  int max_perm_classes = 8;
};

// Calls `visit` once per labelling of the family (restricted to class count
// `ell` when given), in lexicographic order of the canonical labels.
// Throws Infeasible when n exceeds limits.max_n.
void for_each_labelling(const ModelFamily& family, std::optional<int> ell,
                        const std::function<void(const Labelling&)>& visit,
                        const EnumerationLimits& limits = {});

std::vector<Labelling> enumerate_space(const ModelFamily& family, std::optional<int> ell = {},
                                       const EnumerationLimits& limits = {});

// Uniform labelling among those with the given class sizes.
Labelling sample_labelling_with_sizes(const SizeVector& sizes, Rng& rng);
// Uniform labelling over the whole family.
Labelling sample_labelling_from_family(const ModelFamily& family, Rng& rng);

}  // namespace pmsbm
