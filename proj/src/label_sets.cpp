#include "pmsbm/label_sets.hpp"

namespace pmsbm::sets {

LabelSet everything() {
  return {"all", [](const Labelling&) { return true; }};
}

LabelSet in_model(int ell) {
  return {"model[" + std::to_string(ell) + "]",
          [ell](const Labelling& t) { return t.ell() == ell; }};
}

LabelSet equals(const Labelling& theta) {
  return {"point[" + theta.to_string() + "]", [theta](const Labelling& t) { return t == theta; }};
}

LabelSet complement(const LabelSet& s) {
  return {"not(" + s.name + ")", [f = s.contains](const Labelling& t) { return !f(t); }};
}

LabelSet intersect(const LabelSet& a, const LabelSet& b) {
  return {"(" + a.name + " & " + b.name + ")",
          [f = a.contains, g = b.contains](const Labelling& t) { return f(t) && g(t); }};
}

LabelSet ring(const Labelling& center, int k) {
  return {"ring[" + std::to_string(k) + "]", [center, k](const Labelling& t) {
            return t.ell() == center.ell() && r_distance(center, t) == k;
          }};
}

LabelSet w(const Labelling& center, int k) {
  return {"w[" + std::to_string(k) + "]", [center, k](const Labelling& t) {
            return t.ell() == center.ell() && r_distance(center, t) >= k;
          }};
}

LabelSet ball(const Labelling& center, int k, BallMetric metric) {
  BallSpec spec{center, k, metric};
  const std::string tag = metric == BallMetric::Hamming ? "ball[" : "rball[";
  return {tag + std::to_string(k) + "]", [spec](const Labelling& t) { return in_ball(spec, t); }};
}

}  // namespace pmsbm::sets
