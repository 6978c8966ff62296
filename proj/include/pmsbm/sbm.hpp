#pragma once

#include <cstdint>
#include <vector>

#include "pmsbm/edge_probs.hpp"
#include "pmsbm/graph.hpp"
#include "pmsbm/labelling.hpp"
#include "pmsbm/rng.hpp"

namespace pmsbm {

// Draws X_ij ~ Bernoulli(p) for same-class pairs and Bernoulli(q) otherwise,
// pairs visited in (i, j) lexicographic order. Accepts p, q in [0, 1].
Graph sample_graph(const Labelling& theta, const EdgeProbs& probs, Rng& rng);
Graph sample_graph(const Labelling& theta, const EdgeProbs& probs, std::uint64_t seed);

// sum_{i<j} X_ij log Q_ij + (1 - X_ij) log(1 - Q_ij). Needs p, q in (0, 1).
double log_likelihood(const Graph& graph, const Labelling& theta, const EdgeProbs& probs);

struct LikelihoodRatioStats {
  long long d1 = 0;  // same under theta0, different under theta
  long long d2 = 0;  // different under theta0, same under theta
  long long s = 0;   // edges among the D1 pairs
  long long t = 0;   // edges among the D2 pairs
};

LikelihoodRatioStats likelihood_ratio_stats(const Graph& graph, const Labelling& theta0,
                                            const Labelling& theta);

// log p_theta(X) - log p_theta0(X) via the two binomial statistics:
// (S - T) log[(1-p) q / (p (1-q))] + (D1 - D2) log[(1-q)/(1-p)].
double log_likelihood_ratio(const Graph& graph, const Labelling& theta0, const Labelling& theta,
                            const EdgeProbs& probs);

// Bit mask over the upper-triangle pairs, bit set iff the pair is within a
// class. Same layout as Graph::words().
class PairMask {
 public:
  explicit PairMask(const Labelling& theta);
  std::size_t n() const noexcept { return n_; }
  const std::vector<std::uint64_t>& words() const noexcept { return words_; }
  std::size_t count() const noexcept;
  // Pairs set in both this mask and the graph.
  std::size_t count_edges(const Graph& graph) const;
  // |D1 u D2|: pairs on which the two masks disagree.
  std::size_t count_disagreements(const PairMask& other) const;

 private:
  std::size_t n_;
  std::vector<std::uint64_t> words_;
};

// |D1| and |D2| without a graph.
struct SeparatingPairs {
  long long d1 = 0;
  long long d2 = 0;
  long long total() const noexcept { return d1 + d2; }
};
SeparatingPairs separating_pairs(const Labelling& theta0, const Labelling& theta);

}  // namespace pmsbm
