#include "pmsbm/sbm.hpp"

#include <bit>
#include <cmath>

#include "pmsbm/error.hpp"

namespace pmsbm {

namespace {

void require_same_n(std::size_t a, std::size_t b) {
  if (a != b) throw InvalidArgument("vertex counts differ");
}

}  // namespace

Graph sample_graph(const Labelling& theta, const EdgeProbs& probs, Rng& rng) {
  if (theta.n() < 2) throw InvalidArgument("sample_graph needs n >= 2");
  probs.validate_for_sampling();
  Graph g(theta.n());
  for (std::size_t i = 0; i < theta.n(); ++i) {
    for (std::size_t j = i + 1; j < theta.n(); ++j) {
      const double pr = theta.same_class(i, j) ? probs.p : probs.q;
      if (rng.bernoulli(pr)) g.set_edge(i, j);
    }
  }
  return g;
}

Graph sample_graph(const Labelling& theta, const EdgeProbs& probs, std::uint64_t seed) {
  Rng rng(seed);
  return sample_graph(theta, probs, rng);
}

PairMask::PairMask(const Labelling& theta)
    : n_(theta.n()), words_((n_ * (n_ - 1) / 2 + 63) / 64, 0) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j, ++k) {
      if (theta.same_class(i, j)) words_[k / 64] |= std::uint64_t{1} << (k % 64);
    }
  }
}

std::size_t PairMask::count() const noexcept {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::size_t PairMask::count_edges(const Graph& graph) const {
  require_same_n(n_, graph.n());
  std::size_t c = 0;
  const auto& g = graph.words();
  for (std::size_t w = 0; w < words_.size(); ++w) {
    c += static_cast<std::size_t>(std::popcount(words_[w] & g[w]));
  }
  return c;
}

std::size_t PairMask::count_disagreements(const PairMask& other) const {
  require_same_n(n_, other.n_);
  std::size_t c = 0;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    c += static_cast<std::size_t>(std::popcount(words_[w] ^ other.words_[w]));
  }
  return c;
}

double log_likelihood(const Graph& graph, const Labelling& theta, const EdgeProbs& probs) {
  require_same_n(graph.n(), theta.n());
  probs.validate_open();
  const double lp = std::log(probs.p), l1p = std::log1p(-probs.p);
  const double lq = std::log(probs.q), l1q = std::log1p(-probs.q);
  // Split the pair sum into within-class and between-class pairs; only the
  // counts of pairs and edges in each group matter.
  long long within_pairs = 0, within_edges = 0, total_edges = 0;
  for (std::size_t i = 0; i < theta.n(); ++i) {
    for (std::size_t j = i + 1; j < theta.n(); ++j) {
      const bool edge = graph.has_edge(i, j);
      total_edges += edge;
      if (theta.same_class(i, j)) {
        ++within_pairs;
        within_edges += edge;
      }
    }
  }
  const long long pairs = static_cast<long long>(graph.pair_count());
  const long long between_pairs = pairs - within_pairs;
  const long long between_edges = total_edges - within_edges;
  return within_edges * lp + (within_pairs - within_edges) * l1p + between_edges * lq +
         (between_pairs - between_edges) * l1q;
}

LikelihoodRatioStats likelihood_ratio_stats(const Graph& graph, const Labelling& theta0,
                                            const Labelling& theta) {
  require_same_n(graph.n(), theta0.n());
  require_same_n(graph.n(), theta.n());
  LikelihoodRatioStats st;
  for (std::size_t i = 0; i < theta.n(); ++i) {
    for (std::size_t j = i + 1; j < theta.n(); ++j) {
      const bool same0 = theta0.same_class(i, j);
      const bool same = theta.same_class(i, j);
      if (same0 == same) continue;
      const bool edge = graph.has_edge(i, j);
      if (same0) {
        ++st.d1;
        st.s += edge;
      } else {
        ++st.d2;
        st.t += edge;
      }
    }
  }
  return st;
}

double log_likelihood_ratio(const Graph& graph, const Labelling& theta0, const Labelling& theta,
                            const EdgeProbs& probs) {
  probs.validate_open();
  const auto st = likelihood_ratio_stats(graph, theta0, theta);
  const double p = probs.p, q = probs.q;
  const double edge_term = std::log1p(-p) + std::log(q) - std::log(p) - std::log1p(-q);
  const double pair_term = std::log1p(-q) - std::log1p(-p);
  return static_cast<double>(st.s - st.t) * edge_term +
         static_cast<double>(st.d1 - st.d2) * pair_term;
}

SeparatingPairs separating_pairs(const Labelling& theta0, const Labelling& theta) {
  require_same_n(theta0.n(), theta.n());
  SeparatingPairs sp;
  for (std::size_t i = 0; i < theta.n(); ++i) {
    for (std::size_t j = i + 1; j < theta.n(); ++j) {
      const bool same0 = theta0.same_class(i, j);
      const bool same = theta.same_class(i, j);
      if (same0 && !same) ++sp.d1;
      if (!same0 && same) ++sp.d2;
    }
  }
  return sp;
}

}  // namespace pmsbm
