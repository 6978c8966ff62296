#pragma once

// Independent reference implementations used as test oracles. They follow
// the definitions literally and make no attempt at speed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "pmsbm/enumerate.hpp"
#include "pmsbm/graph.hpp"
#include "pmsbm/labelling.hpp"
#include "pmsbm/model_family.hpp"
#include "pmsbm/rng.hpp"

namespace oracle {

using pmsbm::Graph;
using pmsbm::Labelling;

// Sum over all pairs of the Bernoulli log mass.
inline double log_likelihood(const Graph& g, const std::vector<int>& labels, double p, double q) {
  double s = 0.0;
  const std::size_t n = labels.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double pr = labels[i] == labels[j] ? p : q;
      s += g.has_edge(i, j) ? std::log(pr) : std::log1p(-pr);
    }
  }
  return s;
}

// Probability of an exact graph under the model.
inline double graph_prob(const Graph& g, const Labelling& theta, double p, double q) {
  return std::exp(log_likelihood(g, theta.labels(), p, q));
}

// Minimum over relabellings of eta of the largest misplaced block count (r)
// and of the Hamming distance (m).
struct Distances {
  int r = 0;
  int m = 0;
};

inline Distances distances(const Labelling& theta, const Labelling& eta) {
  const int k = std::max(theta.ell(), eta.ell());
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  Distances best{1 << 30, 1 << 30};
  do {
    std::vector<std::vector<int>> c(k, std::vector<int>(k, 0));
    int ham = 0;
    for (std::size_t v = 0; v < theta.n(); ++v) {
      const int a = theta[v];
      const int b = perm[static_cast<std::size_t>(eta[v])];
      ++c[a][b];
      if (a != b) ++ham;
    }
    int off = 0;
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        if (a != b) off = std::max(off, c[a][b]);
    best.r = std::min(best.r, off);
    best.m = std::min(best.m, ham);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Number of set partitions of n items into exactly ell blocks, by
// enumerating every label assignment and keeping the canonical ones.
inline long long partitions_brute(int n, int ell) {
  long long count = 0;
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  for (;;) {
    int mx = -1;
    bool canonical = true;
    for (int x : a) {
      if (x > mx + 1) {
        canonical = false;
        break;
      }
      mx = std::max(mx, x);
    }
    if (canonical && mx + 1 == ell) ++count;
    int i = n - 1;
    while (i >= 0 && a[static_cast<std::size_t>(i)] == ell - 1) a[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
    ++a[static_cast<std::size_t>(i)];
  }
  return count;
}

// Pairs in the same class under one labelling and different under the other.
inline std::pair<long long, long long> d1_d2(const Labelling& t0, const Labelling& t) {
  long long d1 = 0, d2 = 0;
  for (std::size_t i = 0; i < t0.n(); ++i)
    for (std::size_t j = i + 1; j < t0.n(); ++j) {
      const bool s0 = t0[i] == t0[j], s1 = t[i] == t[j];
      if (s0 && !s1) ++d1;
      if (!s0 && s1) ++d2;
    }
  return {d1, d2};
}

inline Labelling random_labelling(std::size_t n, int max_classes, pmsbm::Rng& rng) {
  std::vector<int> labels(n);
  for (auto& l : labels) l = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_classes)));
  return Labelling::from_labels(labels);
}

inline Graph random_graph(std::size_t n, double density, pmsbm::Rng& rng) {
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(density)) g.set_edge(i, j);
  return g;
}

// Relabels vertices: vertex v of the result plays the role of perm[v].
inline Labelling permute_vertices(const Labelling& t, const std::vector<std::size_t>& perm) {
  std::vector<int> labels(t.n());
  for (std::size_t v = 0; v < t.n(); ++v) labels[v] = t[perm[v]];
  return Labelling::from_labels(labels);
}

inline Graph permute_vertices(const Graph& g, const std::vector<std::size_t>& perm) {
  Graph out(g.n());
  for (std::size_t i = 0; i < g.n(); ++i)
    for (std::size_t j = i + 1; j < g.n(); ++j)
      if (g.has_edge(perm[i], perm[j])) out.set_edge(i, j);
  return out;
}

}  // namespace oracle
