#include <doctest.h>

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "pmsbm/error.hpp"
#include "pmsbm/label_sets.hpp"
#include "pmsbm/mcmc.hpp"
#include "pmsbm/posterior.hpp"
#include "pmsbm/prior.hpp"
#include "pmsbm/sbm.hpp"

using namespace pmsbm;

namespace {

const ModelFamily& fam4() {
  static const ModelFamily f = ModelFamily::from_size_vectors(4, {{4}, {2, 2}});
  return f;
}

Graph two_edges() {
  Graph g(4);
  g.set_edge(0, 1);
  g.set_edge(2, 3);
  return g;
}

}  // namespace

TEST_CASE("uniform priors") {
  const auto flat = Prior::flat_uniform(fam4());
  const auto hier = Prior::hierarchical_uniform(fam4());
  for (const auto& t : enumerate_space(fam4())) CHECK(flat.mass(t) == doctest::Approx(0.25));
  CHECK(hier.mass(Labelling::from_labels({1, 1, 1, 1})) == doctest::Approx(0.5));
  CHECK(hier.mass(Labelling::from_labels({1, 2, 2, 1})) == doctest::Approx(1.0 / 6.0));
  CHECK(hier.max_ratio_within(2) == 1.0);
  CHECK(flat.max_ratio_within(1) == 1.0);
  CHECK(std::isinf(flat.log_mass(Labelling::from_labels({1, 2, 2, 2}))));
}

TEST_CASE("explicit priors normalize their weights") {
  std::unordered_map<Labelling, double, LabellingHash> w;
  double k = 1.0;
  for (const auto& t : enumerate_space(fam4())) w[t] = k++;
  const auto prior = Prior::explicit_mass(fam4(), w);
  CHECK(prior.mass(Labelling::from_labels({1, 1, 1, 1})) == doctest::Approx(0.1));
  CHECK(prior.max_ratio_within(2) == doctest::Approx(4.0 / 2.0));
  w.erase(w.begin());
  CHECK_THROWS(Prior::explicit_mass(fam4(), w));
}

TEST_CASE("exact posterior picks the planted partition") {
  const auto t = exact_posterior(two_edges(), Prior::flat_uniform(fam4()), EdgeProbs::explicit_probs(0.9, 0.05));
  const auto order = t.order_by_mass();
  CHECK(t.labelling(order[0]) == Labelling::from_labels({1, 1, 2, 2}));
}

TEST_CASE("posterior masses sum to one and match the oracle") {
  Rng rng(31);
  for (int it = 0; it < 100; ++it) {
    const int n = 3 + static_cast<int>(rng.below(5));
    const auto fam = ModelFamily::all_partitions(n, 3);
    const auto prior = it % 2 ? Prior::flat_uniform(fam) : Prior::hierarchical_uniform(fam);
    const double p = 0.05 + 0.9 * rng.uniform(), q = 0.05 + 0.9 * rng.uniform();
    const Graph g = oracle::random_graph(static_cast<std::size_t>(n), rng.uniform(), rng);
    const auto t = exact_posterior(g, prior, EdgeProbs::explicit_probs(p, q));
    double total = 0.0;
    std::vector<double> joint;
    for (std::size_t i = 0; i < t.size(); ++i) {
      total += t.mass(i);
      joint.push_back(prior.log_mass(t.labelling(i)) + oracle::log_likelihood(g, t.labelling(i).labels(), p, q));
    }
    CHECK(std::abs(total - 1.0) < 1e-10);
    const double lz = log_sum_exp(joint);
    CHECK(t.log_normalizer() == doctest::Approx(lz).epsilon(1e-12));
    for (std::size_t i = 0; i < t.size(); ++i)
      CHECK(t.mass(i) == doctest::Approx(std::exp(joint[i] - lz)).epsilon(1e-10));
  }
}

TEST_CASE("equal edge probabilities return the prior exactly") {
  const auto fam = ModelFamily::all_partitions(6, 3);
  const auto prior = Prior::hierarchical_uniform(fam);
  Rng rng(4);
  const auto t = exact_posterior(oracle::random_graph(6, 0.5, rng), prior, EdgeProbs::explicit_probs(0.3, 0.3));
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(t.log_mass(i) == prior.log_mass(t.labelling(i)));
}

TEST_CASE("prior predictive masses sum to one over all graphs") {
  for (int n = 2; n <= 5; ++n) {
    const auto fam = ModelFamily::all_partitions(n, n);
    const auto space = std::make_shared<const PosteriorSpace>(Prior::hierarchical_uniform(fam));
    const auto probs = EdgeProbs::explicit_probs(0.7, 0.2);
    const std::size_t pairs = static_cast<std::size_t>(n * (n - 1) / 2);
    double total = 0.0;
    for (std::uint64_t bits = 0; bits < (1ULL << pairs); ++bits) {
      total += std::exp(exact_posterior(space, Graph::from_pair_bits(static_cast<std::size_t>(n), bits), probs)
                            .log_normalizer());
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("posterior is equivariant under vertex permutations") {
  const auto fam = ModelFamily::from_size_vectors(7, {{7}, {3, 4}, {1, 3, 3}});
  const auto prior = Prior::flat_uniform(fam);
  const auto probs = EdgeProbs::explicit_probs(0.8, 0.25);
  Rng rng(12);
  for (int it = 0; it < 10; ++it) {
    const Graph g = oracle::random_graph(7, 0.4, rng);
    std::vector<std::size_t> perm{0, 1, 2, 3, 4, 5, 6};
    for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    const auto a = exact_posterior(g, prior, probs);
    const auto b = exact_posterior(oracle::permute_vertices(g, perm), prior, probs);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(b.mass_of(oracle::permute_vertices(a.labelling(i), perm)) ==
            doctest::Approx(a.mass(i)).epsilon(1e-12));
    }
  }
}

TEST_CASE("set masses and posterior odds") {
  const auto flat = Prior::flat_uniform(fam4());
  const auto t = exact_posterior(two_edges(), flat, EdgeProbs::explicit_probs(0.4, 0.4));
  CHECK(set_mass(t, sets::everything()) == doctest::Approx(1.0));
  CHECK(set_mass(t, sets::equals(Labelling::from_labels({1, 1, 2, 2}))) == doctest::Approx(0.25));
  CHECK(posterior_odds(t, sets::in_model(1), sets::in_model(2)) == doctest::Approx(3.0));
  CHECK_THROWS_AS(posterior_odds(t, sets::in_model(2), sets::everything()), NotDisjoint);

  // A = complement of B with Pi(A) = 0.8 gives F = 0.25.
  const auto space = std::make_shared<const PosteriorSpace>(flat);
  std::vector<double> lm(space->size(), std::log(0.2 / 3.0));
  lm[space->index_of(Labelling::from_labels({1, 1, 1, 1}))] = std::log(0.8);
  const PosteriorTable fixed(space, lm, 0.0);
  CHECK(posterior_odds(fixed, sets::in_model(1), sets::in_model(2)) == doctest::Approx(0.25));

  Rng rng(3);
  const auto probs = EdgeProbs::explicit_probs(0.8, 0.3);
  for (int it = 0; it < 20; ++it) {
    const auto tt = exact_posterior(oracle::random_graph(4, 0.5, rng), flat, probs);
    const double ab = posterior_odds(tt, sets::in_model(1), sets::in_model(2));
    const double ba = posterior_odds(tt, sets::in_model(2), sets::in_model(1));
    CHECK(ab * ba == doctest::Approx(1.0));
  }
}

TEST_CASE("dense instance concentrates on the true model") {
  const auto flat = Prior::flat_uniform(fam4());
  const auto space = std::make_shared<const PosteriorSpace>(flat);
  const auto probs = EdgeProbs::dense(0.95, 0.01);
  const auto truth = Labelling::from_labels({1, 1, 2, 2});
  Rng rng(17);
  double mean = 0.0, f_below = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto t = exact_posterior(space, sample_graph(truth, probs, rng), probs);
    mean += set_mass(t, sets::in_model(2)) / 100.0;
    f_below += posterior_odds(t, sets::equals(truth), sets::complement(sets::equals(truth))) < 1.0;
  }
  CHECK(mean >= 0.99);
  CHECK(f_below >= 95);
}

namespace {

// Checks pi(a) K(a, b) = pi(b) K(b, a) for every pair and that rows sum to one.
void check_detailed_balance(const ModelFamily& fam, const McmcOptions& opts, double p, double q) {
  Rng rng(7);
  const Graph g = oracle::random_graph(static_cast<std::size_t>(fam.n()), 0.5, rng);
  const auto prior = Prior::hierarchical_uniform(fam);
  const auto probs = EdgeProbs::explicit_probs(p, q);
  McmcSampler sampler(g, prior, probs, opts, 1);
  const auto exact = exact_posterior(g, prior, probs);
  std::map<Labelling, std::unordered_map<Labelling, double, LabellingHash>> rows;
  std::map<Labelling, double> target;
  for (const auto& t : enumerate_space(fam)) {
    sampler.reset(t);
    rows[t] = sampler.kernel_row();
    target[t] = sampler.log_target();
    double sum = 0.0;
    for (const auto& [e, pr] : rows[t]) sum += pr;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  // The sampler's target is the unnormalized posterior.
  for (const auto& [t, lt] : target)
    CHECK(std::exp(lt - exact.log_normalizer()) == doctest::Approx(exact.mass_of(t)).epsilon(1e-9));
  for (const auto& [a, row] : rows) {
    for (const auto& [b, kab] : row) {
      const auto it = rows[b].find(a);
      const double kba = it == rows[b].end() ? 0.0 : it->second;
      CHECK(std::exp(target[a]) * kab == doctest::Approx(std::exp(target[b]) * kba).epsilon(1e-9));
    }
  }
}

}  // namespace

TEST_CASE("each move kind satisfies detailed balance") {
  const auto three = ModelFamily::from_size_vectors(3, {{1, 2}});
  const auto mixed = ModelFamily::from_size_vectors(3, {{3}, {1, 2}});
  const auto five = ModelFamily::from_size_vectors(5, {{5}, {2, 3}, {1, 1, 3}, {1, 2, 2}});
  for (const auto& [s, r, j] : std::vector<std::tuple<double, double, double>>{
           {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0.45, 0.45, 0.1}}) {
    McmcOptions o;
    o.swap_weight = s;
    o.relabel_weight = r;
    o.jump_weight = j;
    check_detailed_balance(three, o, 0.8, 0.3);
    check_detailed_balance(mixed, o, 0.8, 0.3);
    check_detailed_balance(five, o, 0.7, 0.2);
  }
}

TEST_CASE("single steps follow the kernel row") {
  const auto fam = ModelFamily::from_size_vectors(4, {{4}, {2, 2}, {1, 3}});
  Rng rng(9);
  const Graph g = oracle::random_graph(4, 0.5, rng);
  const auto prior = Prior::flat_uniform(fam);
  McmcSampler sampler(g, prior, EdgeProbs::explicit_probs(0.75, 0.3), McmcOptions{}, 5);
  const auto start = Labelling::from_labels({1, 1, 2, 2});
  sampler.reset(start);
  const auto row = sampler.kernel_row();
  std::unordered_map<Labelling, double, LabellingHash> freq;
  const int draws = 40000;
  for (int i = 0; i < draws; ++i) {
    sampler.reset(start);
    sampler.step();
    freq[sampler.state()] += 1.0 / draws;
  }
  for (const auto& [t, f] : freq) CHECK(row.count(t) == 1);
  for (const auto& [t, pr] : row) {
    const double se = std::sqrt(pr * (1 - pr) / draws);
    CHECK(std::abs(freq[t] - pr) <= 4 * se + 1e-12);
  }
}

TEST_CASE("MCMC matches the exact posterior") {
  const auto fam = ModelFamily::from_size_vectors(8, {{8}, {4, 4}});
  const auto prior = Prior::flat_uniform(fam);
  const auto probs = EdgeProbs::explicit_probs(0.75, 0.35);
  const Graph g = sample_graph(Labelling::blocks(std::vector<int>{4, 4}), probs, 123);
  const auto exact = exact_posterior(g, prior, probs);
  const auto res = mcmc_posterior(g, prior, probs, McmcOptions{}, 77);
  const auto emp = res.distribution();
  double tv = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    const auto it = emp.find(exact.labelling(i));
    tv += std::abs(exact.mass(i) - (it == emp.end() ? 0.0 : it->second));
  }
  CHECK(tv / 2 <= 0.05);
  CHECK(res.warnings.empty());
}

TEST_CASE("equal edge probabilities: chain samples the prior") {
  const auto fam = ModelFamily::from_size_vectors(6, {{6}, {3, 3}, {2, 4}});
  const auto prior = Prior::hierarchical_uniform(fam);
  Rng rng(1);
  const Graph g = oracle::random_graph(6, 0.5, rng);
  const auto res = mcmc_posterior(g, prior, EdgeProbs::explicit_probs(0.4, 0.4), McmcOptions{}, 3);
  const auto est = res.estimate(sets::in_model(1));
  CHECK(std::abs(est.mean - 0.5) <= 3 * est.standard_error + 1e-3);

  McmcOptions swaps;
  swaps.swap_weight = 1;
  swaps.relabel_weight = 0;
  swaps.jump_weight = 0;
  swaps.initial = Labelling::blocks(std::vector<int>{3, 3});
  swaps.steps = 2000;
  const auto sw = mcmc_posterior(g, Prior::flat_uniform(fam), EdgeProbs::explicit_probs(0.4, 0.4), swaps, 3);
  CHECK(sw.swap.proposed > 0);
  CHECK(sw.swap.rate() == 1.0);
}

TEST_CASE("reducibility warning without the jump move") {
  const auto fam = ModelFamily::from_size_vectors(8, {{8}, {4, 4}});
  CHECK_FALSE(size_vectors_connected(fam));
  CHECK(size_vectors_connected(ModelFamily::all_partitions(5, 3)));
  McmcOptions o;
  o.jump_weight = 0;
  o.swap_weight = o.relabel_weight = 0.5;
  o.steps = 1000;
  Rng rng(2);
  const auto res = mcmc_posterior(oracle::random_graph(8, 0.5, rng), Prior::flat_uniform(fam),
                                  EdgeProbs::explicit_probs(0.7, 0.3), o, 1);
  CHECK_FALSE(res.warnings.empty());
}

TEST_CASE("MCMC runs are reproducible") {
  const auto fam = ModelFamily::all_partitions(6, 3);
  Rng rng(5);
  const Graph g = oracle::random_graph(6, 0.5, rng);
  McmcOptions o;
  o.steps = 5000;
  const auto a = mcmc_posterior(g, Prior::flat_uniform(fam), EdgeProbs::explicit_probs(0.7, 0.3), o, 9);
  const auto b = mcmc_posterior(g, Prior::flat_uniform(fam), EdgeProbs::explicit_probs(0.7, 0.3), o, 9);
  CHECK(a.trace == b.trace);
  CHECK(a.states == b.states);
}
