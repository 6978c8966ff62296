#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pmsbm/edge_probs.hpp"
#include "pmsbm/graph.hpp"
#include "pmsbm/label_sets.hpp"
#include "pmsbm/posterior.hpp"
#include "pmsbm/prior.hpp"
#include "pmsbm/rng.hpp"

namespace pmsbm {

enum class MoveKind { Swap = 0, Relabel = 1, Jump = 2 };

// Move weights are normalized internally. The jump move (fresh size vector
// from the family, then a uniform labelling with those sizes) keeps the chain
// irreducible on families whose size vectors are not linked by single-vertex
// moves, e.g. {(8), (4,4)}.
struct McmcOptions {
  long long steps = 100000;
  double burn_in_fraction = 0.1;
  double swap_weight = 0.45;
  double relabel_weight = 0.45;
  double jump_weight = 0.1;
  int batches = 50;
  std::optional<Labelling> initial;
};

struct MoveStats {
  long long proposed = 0;
  long long accepted = 0;
  double rate() const { return proposed ? static_cast<double>(accepted) / proposed : 0.0; }
};

// Metropolis-Hastings over the labelling space of a prior's family,
// targeting prior x likelihood.
class McmcSampler {
 public:
  McmcSampler(const Graph& graph, const Prior& prior, const EdgeProbs& probs,
              const McmcOptions& options, std::uint64_t seed);

  void step();
  void reset(const Labelling& theta);
  Labelling state() const;
  double log_target() const noexcept { return log_target_; }
  const MoveStats& stats(MoveKind kind) const { return stats_[static_cast<int>(kind)]; }

  // Transition probabilities out of the current state, by exact enumeration
  // of every proposal. Canonical labelling -> probability, self loop included.
  std::unordered_map<Labelling, double, LabellingHash> kernel_row() const;

 private:
  struct Weighted {
    std::vector<int> labels;
    double prob = 0.0;          // proposal probability
    double log_hastings = 0.0;  // log q(back) - log q(forth)
  };

  void set_state(std::vector<int> labels);
  double log_target_of(const std::vector<int>& labels) const;
  double log_prior_of(const std::vector<int>& labels) const;
  double log_count_of(const std::vector<int>& labels) const;
  void accept_or_reject(MoveKind kind, std::vector<int> labels, double log_hastings);
  // Every proposal out of the current state (without the jump move).
  std::vector<Weighted> local_proposals() const;

  const Graph& graph_;
  const Prior& prior_;
  std::size_t n_;
  double lp_, l1p_, lq_, l1q_;
  long long pairs_, edges_;
  std::vector<std::vector<char>> adj_;
  double w_swap_, w_relabel_, w_jump_;
  std::vector<SizeVector> family_vectors_;
  std::vector<double> log_counts_;
  Rng rng_;
  std::vector<int> labels_;  // class ids 0..K-1, not necessarily canonical
  std::vector<int> sizes_;
  double log_target_ = 0.0;
  MoveStats stats_[3];
};

struct Estimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

struct McmcResult {
  std::vector<Labelling> states;        // distinct visited states, first-visit order
  std::vector<std::uint32_t> trace;     // post burn-in state ids
  std::vector<long long> visits;        // per state id
  MoveStats swap, relabel, jump;
  std::vector<std::string> warnings;
  int batches = 50;

  // Frequency of the set over the trace with a batch-means standard error.
  Estimate estimate(const LabelSet& set) const;
  Estimate estimate(const std::vector<char>& state_mask) const;
  // Empirical distribution over visited states.
  std::unordered_map<Labelling, double, LabellingHash> distribution() const;
};

McmcResult mcmc_posterior(const Graph& graph, const Prior& prior, const EdgeProbs& probs,
                          const McmcOptions& options, std::uint64_t seed);

// Visit frequencies as a table over the visited states.
PosteriorTable empirical_posterior(const McmcResult& result, const Prior& prior);

// True when every size vector of the family can reach every other through
// single-vertex relabels that stay in the family.
bool size_vectors_connected(const ModelFamily& family);

}  // namespace pmsbm
