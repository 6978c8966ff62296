#pragma once

#include <iosfwd>
#include <memory>
#include <unordered_map>
#include <vector>

#include "pmsbm/edge_probs.hpp"
#include "pmsbm/enumerate.hpp"
#include "pmsbm/graph.hpp"
#include "pmsbm/label_sets.hpp"
#include "pmsbm/prior.hpp"
#include "pmsbm/sbm.hpp"

namespace pmsbm {

// The enumerated labelling space of a prior's family with everything that
// does not depend on the graph precomputed. Built once, shared by every
// replicate of an experiment.
class PosteriorSpace {
 public:
  PosteriorSpace(Prior prior, const EnumerationLimits& limits = {});
  // A space over an explicit list of labellings (used for sampled supports).
  PosteriorSpace(Prior prior, std::vector<Labelling> labellings);

  const Prior& prior() const noexcept { return prior_; }
  std::size_t size() const noexcept { return labellings_.size(); }
  const std::vector<Labelling>& labellings() const noexcept { return labellings_; }
  const Labelling& labelling(std::size_t i) const { return labellings_[i]; }
  double log_prior(std::size_t i) const { return log_prior_[i]; }
  const PairMask& pair_mask(std::size_t i) const { return masks_[i]; }
  // Index of a labelling, or size() when absent.
  std::size_t index_of(const Labelling& theta) const;
  std::vector<char> mask(const LabelSet& set) const;

 private:
  void build_index();

  Prior prior_;
  std::vector<Labelling> labellings_;
  std::vector<double> log_prior_;
  std::vector<PairMask> masks_;
  std::unordered_map<Labelling, std::size_t, LabellingHash> index_;
};

// Normalized posterior masses over a PosteriorSpace for one graph.
class PosteriorTable {
 public:
  PosteriorTable(std::shared_ptr<const PosteriorSpace> space, std::vector<double> log_mass,
                 double log_normalizer);

  const PosteriorSpace& space() const noexcept { return *space_; }
  std::shared_ptr<const PosteriorSpace> space_ptr() const noexcept { return space_; }
  std::size_t size() const noexcept { return log_mass_.size(); }
  const Labelling& labelling(std::size_t i) const { return space_->labelling(i); }
  double log_mass(std::size_t i) const { return log_mass_[i]; }
  double mass(std::size_t i) const { return mass_[i]; }
  double mass_of(const Labelling& theta) const;
  // log of the prior predictive density of the conditioning graph.
  double log_normalizer() const noexcept { return log_normalizer_; }

  // Indices by mass descending, ties by canonical labels ascending.
  std::vector<std::size_t> order_by_mass() const;
  void write_csv(std::ostream& out) const;

 private:
  std::shared_ptr<const PosteriorSpace> space_;
  std::vector<double> log_mass_;
  std::vector<double> mass_;
  double log_normalizer_;
};

// Log-likelihood of every labelling of the space for one graph.
std::vector<double> log_likelihoods(const PosteriorSpace& space, const Graph& graph,
                                    const EdgeProbs& probs);

PosteriorTable exact_posterior(std::shared_ptr<const PosteriorSpace> space, const Graph& graph,
                               const EdgeProbs& probs);
PosteriorTable exact_posterior(const Graph& graph, const Prior& prior, const EdgeProbs& probs,
                               const EnumerationLimits& limits = {});

double set_mass(const PosteriorTable& table, const LabelSet& set);
double set_mass(const PosteriorTable& table, const std::vector<char>& mask);
double log_set_mass(const PosteriorTable& table, const std::vector<char>& mask);

// F = Pi(B | X) / Pi(A | X). +inf when only A has zero mass; UndefinedOdds
// when both do; NotDisjoint when A and B share a labelling of the space.
double posterior_odds(const PosteriorTable& table, const LabelSet& a, const LabelSet& b);
double posterior_odds(const PosteriorTable& table, const std::vector<char>& a,
                      const std::vector<char>& b);

double log_sum_exp(const std::vector<double>& xs);

}  // namespace pmsbm
