#pragma once

#include <functional>
#include <string>

#include "pmsbm/labelling.hpp"
#include "pmsbm/metrics.hpp"

namespace pmsbm {

// A named membership predicate over labellings. Set masses, rings, balls and
// hypotheses all go through this one type.
struct LabelSet {
  std::string name;
  std::function<bool(const Labelling&)> contains;

  bool operator()(const Labelling& theta) const { return contains(theta); }
};

namespace sets {

LabelSet everything();
// Theta_l.
LabelSet in_model(int ell);
LabelSet equals(const Labelling& theta);
LabelSet complement(const LabelSet& s);
LabelSet intersect(const LabelSet& a, const LabelSet& b);
// V_{l0,k}: class count of the center and r-distance exactly k.
LabelSet ring(const Labelling& center, int k);
// W_{l0,k}: class count of the center and r-distance at least k.
LabelSet w(const Labelling& center, int k);
LabelSet ball(const Labelling& center, int k, BallMetric metric = BallMetric::Hamming);

}  // namespace sets

}  // namespace pmsbm
