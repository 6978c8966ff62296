#include <doctest.h>

#include <cmath>

#include "pmsbm/error.hpp"
#include "pmsbm/experiment.hpp"

using namespace pmsbm;
using nlohmann::json;

namespace {

json dense8() {
  return json::parse(R"({
    "n": 8, "family": {"kind": "sizes", "sizes": [[8], [4, 4]]},
    "phase": "dense", "p": 0.9, "q": 0.1, "prior": "flat-uniform",
    "theta0": {"sizes": [4, 4]}, "replicates": 200, "seed": 7, "engine": "exact"
  })");
}

const ReportRow& row(const MonteCarloReport& r, const std::string& target) {
  for (const auto& x : r.rows)
    if (x.target == target) return x;
  FAIL("missing row " << target);
  return r.rows.front();
}

}  // namespace

TEST_CASE("config defaults are echoed back") {
  const auto cfg = ExperimentConfig::from_json(dense8());
  const auto j = cfg.to_json();
  CHECK(j["alpha"].get<double>() == 0.1);
  CHECK(j["engine"] == "exact");
  CHECK(j["mcmc"]["steps"].get<long long>() == 100000);
  CHECK(j["theta0_resolved"] == "1 1 1 1 2 2 2 2");
  CHECK(ExperimentConfig::from_json(json::parse(j.dump())).to_json() == j);
}

TEST_CASE("invalid configs are rejected") {
  auto bad = dense8();
  bad["replicates"] = 0;
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), InvalidArgument);
  bad = dense8();
  bad["engine"] = "magic";
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ParseError);
  bad = dense8();
  bad["n"] = 20;
  bad["family"] = {{"kind", "window"}, {"L", 2}};
  bad["theta0"] = {{"sizes", {10, 10}}};
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), Infeasible);
  bad = dense8();
  bad["targets"] = {"nonsense"};
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ParseError);
  bad = dense8();
  bad["theta0"] = "1 2 3 4 5 6 7 8";
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), InvalidArgument);
}

TEST_CASE("set specs") {
  const auto t0 = Labelling::blocks(std::vector<int>{4, 4});
  CHECK(parse_set_spec("model", t0)(t0));
  CHECK_FALSE(parse_set_spec("not-model", t0)(t0));
  CHECK(parse_set_spec("model:1", t0)(Labelling::blocks(std::vector<int>{8})));
  CHECK_FALSE(parse_set_spec("point-complement", t0)(t0));
  CHECK(parse_set_spec("ring:0", t0)(t0));
  CHECK(parse_set_spec("ball:0", t0)(t0));
  CHECK_THROWS_AS(parse_set_spec("ring", t0), ParseError);
  CHECK_THROWS_AS(parse_set_spec("ring:x", t0), ParseError);
}

TEST_CASE("contraction rows are named and pass on the dense instance") {
  auto j = dense8();
  j["targets"] = {"model:1", "point-complement", "theta0-complement", "ring:1", "w:1", "ball-complement:2"};
  const auto rep = run_experiment(ExperimentConfig::from_json(j));
  CHECK(rep.rows.size() == 6);
  for (const auto& r : rep.rows) {
    CHECK_FALSE(r.bound_name.empty());
    CHECK(r.pass == (r.empirical_mean <= r.bound + 3 * r.standard_error));
  }
  CHECK(row(rep, "model:1").bound == doctest::Approx(2 * std::pow(0.6, 16)));
  CHECK(rep.all_pass());
  CHECK_FALSE(rep.to_json().contains("runtime_seconds"));
}

TEST_CASE("equal edge probabilities: mean mass of theta0 is its prior mass") {
  auto j = dense8();
  j["p"] = 0.4;
  j["q"] = 0.4;
  j["targets"] = {"theta0-complement"};
  const auto rep = run_experiment(ExperimentConfig::from_json(j));
  // Flat prior over 36 labellings.
  CHECK(rep.rows[0].empirical_mean == doctest::Approx(35.0 / 36.0));
  CHECK(rep.rows[0].standard_error < 1e-12);
}

TEST_CASE("coverage: full enlargement always covers") {
  auto j = dense8();
  j["experiment"] = "coverage";
  j["k"] = {0, 1, 8};
  const auto rep = run_experiment(ExperimentConfig::from_json(j));
  CHECK(rep.rows.size() == 3);
  CHECK(row(rep, "enlarged-miss:8").empirical_mean == 0.0);
  CHECK(row(rep, "enlarged-miss:8").detail["coverage"].get<double>() == 1.0);
  CHECK(rep.all_pass());
}

TEST_CASE("testing runs") {
  auto j = dense8();
  j["experiment"] = "testing";
  j["A"] = "model";
  j["B"] = "not-model";
  const auto first = run_experiment(ExperimentConfig::from_json(j));
  CHECK(row(first, "first-kind").pass);
  CHECK(row(first, "first-kind-with-b").pass);

  j["theta0"] = {{"sizes", {8}}};
  j["A"] = "model:2";
  j["B"] = "model:1";
  const auto power = run_experiment(ExperimentConfig::from_json(j));
  CHECK(row(power, "second-kind").pass);

  // Equal probabilities: F is the constant prior ratio 1/35, so H0 is never rejected.
  j["p"] = 0.3;
  j["q"] = 0.3;
  j["theta0"] = {{"sizes", {4, 4}}};
  j["A"] = "model:2";
  j["B"] = "model:1";
  const auto flat = run_experiment(ExperimentConfig::from_json(j));
  CHECK(row(flat, "first-kind").empirical_mean == 0.0);
}

TEST_CASE("reports are identical across thread counts and reruns") {
  auto j = dense8();
  j["targets"] = {"model:1", "point-complement"};
  j["threads"] = 1;
  const auto a = run_experiment(ExperimentConfig::from_json(j)).to_json().dump();
  j["threads"] = 4;
  const auto b = run_experiment(ExperimentConfig::from_json(j)).to_json().dump();
  const auto c = run_experiment(ExperimentConfig::from_json(j)).to_json().dump();
  CHECK(a == b);
  CHECK(b == c);
}

TEST_CASE("exact and MCMC engines agree") {
  auto j = dense8();
  j["p"] = 0.7;
  j["q"] = 0.3;
  j["replicates"] = 40;
  j["targets"] = {"model:1", "point-complement"};
  j["mcmc"] = {{"steps", 20000}};
  const auto exact = run_experiment(ExperimentConfig::from_json(j));
  j["engine"] = "mcmc";
  const auto mcmc = run_experiment(ExperimentConfig::from_json(j));
  for (std::size_t i = 0; i < exact.rows.size(); ++i) {
    const auto& e = exact.rows[i];
    const auto& m = mcmc.rows[i];
    const double se = std::hypot(e.standard_error, m.standard_error);
    CHECK(std::abs(e.empirical_mean - m.empirical_mean) <= 3 * se);
  }
}

TEST_CASE("timing is reported only on request") {
  auto j = dense8();
  j["replicates"] = 5;
  j["timing"] = true;
  CHECK(run_experiment(ExperimentConfig::from_json(j)).to_json().contains("runtime_seconds"));
}
