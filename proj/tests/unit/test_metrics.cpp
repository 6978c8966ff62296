#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pmsbm/enumerate.hpp"
#include "pmsbm/error.hpp"
#include "pmsbm/metrics.hpp"
#include "pmsbm/sbm.hpp"

using namespace pmsbm;

TEST_CASE("distance examples") {
  const auto a = Labelling::from_labels({1, 1, 2, 2});
  const auto b = Labelling::from_labels({1, 2, 1, 2});
  CHECK(r_distance(a, a) == 0);
  CHECK(r_distance(a, b) == 1);
  CHECK(m_distance(a, Labelling::from_labels({2, 2, 1, 1})) == 0);
  CHECK(m_distance(a, b) == 2);
}

TEST_CASE("closed-form distances agree with brute force over relabellings") {
  Rng rng(21);
  for (int it = 0; it < 3000; ++it) {
    const std::size_t n = 1 + rng.below(10);
    const auto t = oracle::random_labelling(n, 1 + static_cast<int>(rng.below(5)), rng);
    const auto e = oracle::random_labelling(n, 1 + static_cast<int>(rng.below(5)), rng);
    const auto want = oracle::distances(t, e);
    CHECK(r_distance(t, e) == want.r);
    CHECK(m_distance(t, e) == want.m);
    CHECK(r_distance_exhaustive(t, e) == want.r);
    CHECK(m_distance_exhaustive(t, e) == want.m);
    // Symmetry, and zero exactly on equal partitions.
    CHECK(r_distance(e, t) == want.r);
    CHECK(m_distance(e, t) == want.m);
    CHECK((want.m == 0) == (t == e));
  }
}

TEST_CASE("exhaustive distance refuses too many classes") {
  std::vector<int> many(10);
  for (int i = 0; i < 10; ++i) many[static_cast<std::size_t>(i)] = i;
  const auto t = Labelling::from_labels(many);
  CHECK_THROWS_AS(r_distance_exhaustive(t, t), Infeasible);
}

TEST_CASE("r <= m <= l(l-1) r within a model, and r <= m_max / 2") {
  const auto fam = ModelFamily::from_size_vectors(8, {{4, 4}, {3, 5}, {2, 6}});
  Rng rng(2);
  for (int it = 0; it < 200; ++it) {
    const auto t = sample_labelling_from_family(fam, rng);
    const auto e = sample_labelling_from_family(fam, rng);
    const int r = r_distance(t, e), m = m_distance(t, e);
    CHECK(r <= m);
    CHECK(m <= 2 * r);
    CHECK(r <= fam.m_max(2) / 2);
  }
}

TEST_CASE("rings") {
  const auto fam = ModelFamily::from_size_vectors(4, {{2, 2}});
  const auto c = Labelling::from_labels({1, 1, 2, 2});
  const auto r0 = ring_members({c, 0}, fam);
  REQUIRE(r0.size() == 1);
  CHECK(r0[0] == c);
  const auto r1 = ring_members({c, 1}, fam);
  CHECK(r1.size() == 2);
  for (const auto& e : r1) CHECK(e != c);
}

TEST_CASE("rings partition the true model and sit inside Hamming balls") {
  for (int n = 4; n <= 9; ++n) {
    for (int ell0 = 2; ell0 <= 3 && ell0 <= n; ++ell0) {
      const auto fam = ModelFamily::all_partitions(n, ell0);
      const auto members = enumerate_space(fam, ell0);
      const auto& c = members[members.size() / 2];
      std::size_t total = 0;
      for (int k = 0; k <= fam.m_max(ell0) / 2; ++k) {
        const auto ring = ring_members({c, k}, fam);
        total += ring.size();
        for (const auto& e : ring) {
          CHECK(r_distance(c, e) == k);
          CHECK(m_distance(c, e) <= ell0 * (ell0 - 1) * k);
        }
        if (k >= 1 && k <= c.sizes().front() && !ring.empty()) {
          CHECK(std::log(static_cast<double>(ring.size())) <=
                log_ring_cardinality_bound(n, ell0, k) + 1e-9);
          CHECK(log_ring_cardinality_bound(n, ell0, k) <=
                log_ring_cardinality_bound_loose(n, ell0, k) + 1e-9);
        }
      }
      CHECK(total == members.size());
    }
  }
}

TEST_CASE("Stirling numbers and their upper bound") {
  for (int n = 1; n <= 10; ++n)
    for (int ell = 1; ell <= n; ++ell)
      CHECK(stirling_second_kind(n, ell) == static_cast<double>(oracle::partitions_brute(n, ell)));
  CHECK(stirling_second_kind(4, 2) == 7.0);
  CHECK(stirling_upper_bound(4, 2).value() == doctest::Approx(12.0));
  CHECK(stirling_second_kind(10, 3) == 9330.0);
  CHECK(stirling_upper_bound(10, 3).value() == doctest::Approx(131220.0));
  const auto one = stirling_upper_bound(6, 1);
  CHECK(one.degenerate);
  CHECK(one.value() == doctest::Approx(3.0));
  CHECK(stirling_upper_bound(6, 6).degenerate);
  for (int n = 3; n <= 12; ++n)
    for (int ell = 2; ell < n; ++ell)
      CHECK(stirling_second_kind(n, ell) <= stirling_upper_bound(n, ell).value() * (1 + 1e-12));
}

TEST_CASE("separating pair lower bounds") {
  CHECK(cross_model_d_lower_bound(ModelFamily::from_size_vectors(6, {{6}, {3, 3}}), 2, 1) ==
        doctest::Approx(9.0));
  CHECK(ring_d_lower_bound(4, 0) == 0);
  CHECK(ring_d_lower_bound(4, 1) == 6);
  const auto fam = ModelFamily::from_size_vectors(8, {{4, 4}});
  const auto all = enumerate_space(fam);
  long long least = 1 << 30;
  for (const auto& a : all)
    for (const auto& b : all)
      if (r_distance(a, b) == 1) least = std::min(least, separating_pairs(a, b).total());
  CHECK(least >= 6);
}

TEST_CASE("window families leave a class-size gap of n / (2 L^2)") {
  for (int n = 6; n <= 40; ++n) {
    for (int L = 2; L <= 4; ++L) {
      if (L > n) continue;
      ModelFamily fam = [&] {
        try {
          return ModelFamily::from_window(n, L);
        } catch (const InvalidArgument&) {
          return ModelFamily::all_partitions(1, 1);
        }
      }();
      if (fam.n() != n) continue;
      const auto ells = fam.class_counts();
      for (std::size_t a = 0; a < ells.size(); ++a)
        for (std::size_t b = a + 1; b < ells.size(); ++b)
          CHECK(fam.m_min(ells[a]) - fam.m_max(ells[b]) >= 0.5 * n / (L * L));
    }
  }
}

TEST_CASE("Hamming balls") {
  const auto fam = ModelFamily::all_partitions(4, 2);
  const auto c = Labelling::from_labels({1, 1, 2, 2});
  CHECK(ball_members({c, 0}, fam).size() == 1);
  CHECK(ball_members({c, 4}, fam).size() == enumerate_space(fam).size());
  for (const auto& e : ball_members({c, 1}, fam)) CHECK(m_distance(c, e) <= 1);
}

TEST_CASE("r bound across size vectors needs both largest classes") {
  const auto a = Labelling::from_labels({1, 1, 1, 2, 2});
  const auto b = Labelling::from_labels({1, 1, 2, 1, 1});
  CHECK(a.ell() == b.ell());
  CHECK(r_distance(a, b) == 2);
  CHECK(oracle::distances(a, b).r == 2);
  CHECK(2 * r_distance(a, b) > a.sizes().back());
  CHECK(2 * r_distance(a, b) <= std::max(a.sizes().back(), b.sizes().back()));
  CHECK(2 * r_distance(a, b) <= ModelFamily::all_partitions(5, 2).m_max(2));
}
