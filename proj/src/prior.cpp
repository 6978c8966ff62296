#include "pmsbm/prior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pmsbm/enumerate.hpp"
#include "pmsbm/error.hpp"

namespace pmsbm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lse(const std::vector<double>& xs) {
  if (xs.empty()) return kNegInf;
  const double m = *std::max_element(xs.begin(), xs.end());
  if (std::isinf(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

std::string_view to_string(PriorKind kind) {
  switch (kind) {
    case PriorKind::HierarchicalUniform: return "hierarchical-uniform";
    case PriorKind::FlatUniform: return "flat-uniform";
    case PriorKind::ExplicitMass: return "explicit-mass";
  }
  return "unknown";
}

PriorKind parse_prior_kind(std::string_view text) {
  if (text == "hierarchical-uniform" || text == "hierarchical") return PriorKind::HierarchicalUniform;
  if (text == "flat-uniform" || text == "flat" || text == "uniform") return PriorKind::FlatUniform;
  if (text == "explicit-mass" || text == "explicit") return PriorKind::ExplicitMass;
  throw ParseError("unknown prior kind '" + std::string(text) + "'");
}

Prior Prior::hierarchical_uniform(ModelFamily family) {
  Prior p;
  p.kind_ = PriorKind::HierarchicalUniform;
  const double log_models = std::log(static_cast<double>(family.class_counts().size()));
  for (int ell : family.class_counts()) {
    p.log_point_mass_[ell] = -log_models - family.log_cardinality(ell);
  }
  p.family_ = std::move(family);
  return p;
}

Prior Prior::flat_uniform(ModelFamily family) {
  Prior p;
  p.kind_ = PriorKind::FlatUniform;
  p.log_total_ = family.log_cardinality();
  for (int ell : family.class_counts()) p.log_point_mass_[ell] = -p.log_total_;
  p.family_ = std::move(family);
  return p;
}

Prior Prior::explicit_mass(ModelFamily family,
                           const std::unordered_map<Labelling, double, LabellingHash>& weights) {
  auto logs = std::make_shared<std::unordered_map<Labelling, double, LabellingHash>>();
  std::vector<double> all;
  for_each_labelling(family, std::nullopt, [&](const Labelling& t) {
    auto it = weights.find(t);
    if (it == weights.end() || !(it->second > 0.0) || !std::isfinite(it->second)) {
      throw InvalidArgument("explicit prior must give positive finite mass to " + t.to_string());
    }
    const double lw = std::log(it->second);
    logs->emplace(t, lw);
    all.push_back(lw);
  });
  if (weights.size() != logs->size()) {
    throw InvalidArgument("explicit prior lists labellings outside the family");
  }
  const double z = lse(all);
  for (auto& [t, lw] : *logs) lw -= z;
  Prior p;
  p.kind_ = PriorKind::ExplicitMass;
  p.family_ = std::move(family);
  p.explicit_log_ = std::move(logs);
  return p;
}

double Prior::log_mass(const Labelling& theta) const {
  if (!family_.contains(theta)) return kNegInf;
  switch (kind_) {
    case PriorKind::HierarchicalUniform:
    case PriorKind::FlatUniform:
      return log_point_mass_.at(theta.ell());
    case PriorKind::ExplicitMass:
      return explicit_log_->at(theta);
  }
  return kNegInf;
}

std::optional<double> Prior::log_mass_by_sizes(const SizeVector& sizes) const {
  if (kind_ == PriorKind::ExplicitMass) return std::nullopt;
  if (!family_.contains_sizes(sizes)) return kNegInf;
  return log_point_mass_.at(static_cast<int>(sizes.size()));
}

double Prior::mass(const Labelling& theta) const { return std::exp(log_mass(theta)); }

double Prior::log_mass_of_model(int ell) const {
  if (!family_.has_class_count(ell)) return kNegInf;
  switch (kind_) {
    case PriorKind::HierarchicalUniform:
      return -std::log(static_cast<double>(family_.class_counts().size()));
    case PriorKind::FlatUniform:
      return family_.log_cardinality(ell) - log_total_;
    case PriorKind::ExplicitMass: {
      std::vector<double> xs;
      for (const auto& [t, lw] : *explicit_log_)
        if (t.ell() == ell) xs.push_back(lw);
      return lse(xs);
    }
  }
  return kNegInf;
}

double Prior::max_ratio_within(int ell) const {
  if (!family_.has_class_count(ell)) throw InvalidArgument("class count not in family");
  if (kind_ != PriorKind::ExplicitMass) return 1.0;
  double lo = std::numeric_limits<double>::infinity(), hi = kNegInf;
  for (const auto& [t, lw] : *explicit_log_) {
    if (t.ell() != ell) continue;
    lo = std::min(lo, lw);
    hi = std::max(hi, lw);
  }
  return std::exp(hi - lo);
}

}  // namespace pmsbm
