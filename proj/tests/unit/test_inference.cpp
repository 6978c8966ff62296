#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "pmsbm/inference.hpp"
#include "pmsbm/metrics.hpp"
#include "pmsbm/posterior.hpp"
#include "pmsbm/sbm.hpp"

using namespace pmsbm;

namespace {

const ModelFamily& fam4() {
  static const ModelFamily f = ModelFamily::from_size_vectors(4, {{4}, {2, 2}});
  return f;
}

PosteriorTable table_with(const ModelFamily& fam, const std::vector<double>& masses) {
  auto space = std::make_shared<const PosteriorSpace>(Prior::flat_uniform(fam));
  std::vector<double> lm;
  for (double m : masses) lm.push_back(std::log(m));
  return PosteriorTable(space, lm, 0.0);
}

}  // namespace

TEST_CASE("HPD credible set examples") {
  const auto flat = exact_posterior(Graph(4), Prior::flat_uniform(fam4()), EdgeProbs::explicit_probs(0.3, 0.3));
  CHECK(hpd_credible_set(flat, 0.2).members.size() == 4);
  CHECK(hpd_credible_set(flat, 1e-15).members.size() == 4);
  const auto conc = table_with(fam4(), {0.01, 0.97, 0.01, 0.01});
  const auto cs = hpd_credible_set(conc, 0.05);
  REQUIRE(cs.members.size() == 1);
  CHECK(cs.members[0] == conc.labelling(1));
  CHECK(cs.attained_mass == doctest::Approx(0.97));
}

TEST_CASE("HPD sets are minimal and reach their level") {
  Rng rng(8);
  const auto fam = ModelFamily::all_partitions(5, 3);
  const auto prior = Prior::flat_uniform(fam);
  for (int it = 0; it < 100; ++it) {
    const auto t = exact_posterior(oracle::random_graph(5, 0.5, rng), prior,
                                   EdgeProbs::explicit_probs(0.1 + 0.8 * rng.uniform(), 0.1 + 0.8 * rng.uniform()));
    const double alpha = 0.01 + 0.5 * rng.uniform();
    const auto cs = hpd_credible_set(t, alpha);
    double mass = 0.0, smallest = 1.0;
    for (const auto& m : cs.members) {
      mass += t.mass_of(m);
      smallest = std::min(smallest, t.mass_of(m));
      CHECK(cs.contains(m));
    }
    CHECK(cs.attained_mass >= 1 - alpha - 1e-12);
    CHECK(mass == doctest::Approx(cs.attained_mass));
    CHECK(mass - smallest < 1 - alpha);
    // Every member outweighs every non-member.
    for (std::size_t i = 0; i < t.size(); ++i)
      if (!cs.contains(t.labelling(i))) CHECK(t.mass(i) <= smallest);
  }
}

TEST_CASE("enlargement matches a brute-force scan") {
  const auto fam = ModelFamily::all_partitions(4, 2);
  const std::vector<Labelling> seed{Labelling::from_labels({1, 1, 2, 2})};
  const auto all = enumerate_space(fam);
  CHECK(all.size() == 8);
  for (int k = 0; k <= 5; ++k) {
    const auto big = enlarge(seed, k, fam);
    std::vector<Labelling> want;
    for (const auto& t : all)
      if (oracle::distances(seed[0], t).m <= k) want.push_back(t);
    std::sort(want.begin(), want.end());
    CHECK(big == want);
  }
  CHECK(enlarge(seed, 0, fam) == seed);
  const auto one = enlarge(seed, 1, fam);
  CHECK(std::find(one.begin(), one.end(), Labelling::from_labels({1, 1, 1, 2})) != one.end());
  CHECK(std::find(one.begin(), one.end(), Labelling::from_labels({1, 1, 2, 1})) != one.end());
  CHECK(enlarge(seed, 4, fam).size() == all.size());
}

TEST_CASE("enlargement is monotone") {
  const auto fam = ModelFamily::all_partitions(6, 3);
  Rng rng(6);
  for (int it = 0; it < 10; ++it) {
    std::vector<Labelling> s{sample_labelling_from_family(fam, rng)};
    std::vector<Labelling> bigger = s;
    bigger.push_back(sample_labelling_from_family(fam, rng));
    for (int k1 = 0; k1 <= 2; ++k1) {
      const auto a = enlarge(s, k1, fam);
      const auto b = enlarge(s, k1 + 1, fam);
      const auto c = enlarge(bigger, k1, fam);
      for (const auto& x : a) {
        CHECK(std::binary_search(b.begin(), b.end(), x));
        CHECK(std::binary_search(c.begin(), c.end(), x));
      }
    }
  }
}

TEST_CASE("confidence statements") {
  const auto c = confidence_from_credible(0.05, 0.01, 0);
  CHECK(c.level == doctest::Approx(0.98947).epsilon(1e-5));
  CHECK(c.informative());
  CHECK(confidence_from_credible(0.05, 0.0, 0).level == 1.0);
  const auto z = confidence_from_credible(0.5, 0.5, 0);
  CHECK(z.level == doctest::Approx(0.0));
  CHECK_FALSE(z.informative());
}

TEST_CASE("odds tests") {
  const auto half = table_with(fam4(), {1.0 / 1.5, 0.5 / 4.5, 0.5 / 4.5, 0.5 / 4.5});
  const auto res = odds_test(half, sets::in_model(1), sets::in_model(2), 1.0);
  CHECK(res.odds == doctest::Approx(0.5));
  CHECK(res.decision == Decision::AcceptH0);
  CHECK(to_string(res.decision) == "accept-H0");

  const auto flat = exact_posterior(Graph(4), Prior::flat_uniform(fam4()), EdgeProbs::explicit_probs(0.3, 0.3));
  CHECK(odds_test(flat, sets::in_model(1), sets::in_model(2), 1.0).odds == doctest::Approx(3.0));

  Rng rng(10);
  const auto fam = ModelFamily::all_partitions(5, 3);
  for (int it = 0; it < 50; ++it) {
    const auto t = exact_posterior(oracle::random_graph(5, 0.5, rng), Prior::flat_uniform(fam),
                                   EdgeProbs::explicit_probs(0.7, 0.3));
    const double r = 0.2 + 3 * rng.uniform();
    const auto ab = odds_test(t, sets::in_model(2), sets::complement(sets::in_model(2)), r);
    const auto ba = odds_test(t, sets::complement(sets::in_model(2)), sets::in_model(2), 1.0 / r);
    CHECK((ab.decision == Decision::RejectH0) == (ba.decision == Decision::AcceptH0));
  }
}
