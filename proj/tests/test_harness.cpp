#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cmawm/cma_wm.hpp"
#include "cmawm/harness.hpp"
#include "oracles.hpp"

using namespace cmawm;

namespace {

TrialRecord rec(std::string algo, int dim, bool success, long evals, int trial = 0) {
  TrialRecord r;
  r.algorithm = std::move(algo);
  r.problem = "one-max";
  r.dim = dim;
  r.trial = trial;
  r.seed = 100 + trial;
  r.success = success;
  r.evaluations = evals;
  r.best_f = success ? dim : dim - 1;
  r.reason = success ? Termination::kTarget : Termination::kBudget;
  return r;
}

RunConfig config(std::string algo, std::string problem, int dim) {
  RunConfig c;
  c.algorithm = std::move(algo);
  c.problem = std::move(problem);
  c.dim = dim;
  return c;
}

}  // namespace

TEST_CASE("percentile is type 7") {
  const std::vector<double> one{7.0};
  CHECK(percentile(one, 0.25) == 7.0);
  const std::vector<double> v{1, 2, 3, 4};
  CHECK(percentile(v, 0.5) == doctest::Approx(2.5));
  CHECK(percentile(v, 0.25) == doctest::Approx(1.75));
  CHECK(percentile(v, 1.0) == 4.0);
  CHECK(percentile(v, 0.0) == 1.0);
  CHECK_THROWS_AS(percentile(std::vector<double>{}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(percentile(v, 1.5), std::invalid_argument);
}

TEST_CASE("aggregate examples") {
  std::vector<TrialRecord> r{rec("ea", 10, true, 3, 0), rec("ea", 10, true, 1, 1),
                             rec("ea", 10, true, 2, 2)};
  auto rows = aggregate(r);
  REQUIRE(rows.size() == 1);
  CHECK(*rows[0].median == 2.0);
  CHECK(rows[0].success_rate == 1.0);

  std::vector<TrialRecord> fifty;
  for (int i = 0; i < 50; ++i) fifty.push_back(rec("ea", 10, i >= 5, 100 + i, i));
  rows = aggregate(fifty);
  CHECK(rows[0].success_rate == doctest::Approx(0.9));
  CHECK(*rows[0].median == doctest::Approx(127.0));
  CHECK(*rows[0].adjusted_median == doctest::Approx(127.0 / 0.9));

  rows = aggregate(std::vector<TrialRecord>{rec("ea", 10, true, 42)});
  CHECK(*rows[0].median == 42.0);
  CHECK(*rows[0].q25 == 42.0);
  CHECK(*rows[0].q75 == 42.0);

  rows = aggregate(std::vector<TrialRecord>{rec("ea", 10, false, 42)});
  CHECK(rows[0].success_rate == 0.0);
  CHECK_FALSE(rows[0].median.has_value());
  CHECK_FALSE(rows[0].adjusted_median.has_value());
}

TEST_CASE("aggregate splits and sorts cells") {
  std::vector<TrialRecord> r{rec("pbil", 10, true, 5), rec("ea", 20, true, 6),
                             rec("ea", 10, true, 7)};
  const auto rows = aggregate(r);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].algorithm == "ea");
  CHECK(rows[0].dim == 10);
  CHECK(rows[1].dim == 20);
  CHECK(rows[2].algorithm == "pbil");
}

TEST_CASE("aggregate is permutation invariant") {
  oracle::Lcg g(5);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<TrialRecord> r;
    const int n = g.integer(1, 30);
    for (int i = 0; i < n; ++i) {
      r.push_back(rec(g.integer(0, 1) ? "ea" : "cga", 10, g.integer(0, 3) > 0, g.integer(1, 1000), i));
    }
    const auto before = aggregate(r);
    for (int i = n - 1; i > 0; --i) std::swap(r[i], r[g.integer(0, i)]);
    const auto after = aggregate(r);
    REQUIRE(before.size() == after.size());
    for (std::size_t k = 0; k < before.size(); ++k) {
      CHECK(before[k].successes == after[k].successes);
      CHECK(before[k].median == after[k].median);
      CHECK(before[k].q25 == after[k].q25);
      CHECK(before[k].q75 == after[k].q75);
    }
  }
}

TEST_CASE("records CSV round trip") {
  RunConfig c = config("elitist-wm", "sphere-int", 4);
  c.trials = 3;
  auto records = run_trials(c);
  records.push_back(rec("cga", 10, false, 17));
  records.back().best_f = 0.1 + 0.2;
  std::stringstream ss;
  write_records_csv(ss, records);
  CHECK(ss.str().rfind("algo,problem,dim,trial,seed,success,evaluations,best_f,reason\n", 0) == 0);
  const auto back = read_records_csv(ss);
  CHECK(back == records);

  std::istringstream bad("h\nea,one-max,10,0,0,1,5,1\n");
  CHECK_THROWS_AS(read_records_csv(bad), std::invalid_argument);
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(config("elitist-wm", "one-max", 10).validate());
  CHECK_THROWS_AS(config("cga", "sphere-int", 10).validate(), std::invalid_argument);
  CHECK_THROWS_AS(config("ea", "sphere-one-max", 10).validate(), std::invalid_argument);
  CHECK_THROWS_AS(config("nelder-mead", "one-max", 10).validate(), std::invalid_argument);
  RunConfig c = config("ea", "one-max", 10);
  c.budget_multiplier = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = config("ea", "one-max", 10);
  c.trials = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK_THROWS_AS(run_trials(config("pbil", "ellipsoid-int", 10)), std::invalid_argument);
}

TEST_CASE("config matrix") {
  std::istringstream js(R"({"algo": ["ea", "cga"], "problem": "one-max", "dim": [10, 20, 30],
                            "trials": 7, "seed": 9, "postprocess": false})");
  const auto m = load_config_matrix(js);
  REQUIRE(m.size() == 6);
  CHECK(m[0].algorithm == "ea");
  CHECK(m[2].dim == 30);
  CHECK(m[5].algorithm == "cga");
  for (const auto& c : m) {
    CHECK(c.trials == 7);
    CHECK(c.seed == 9);
    CHECK_FALSE(c.postprocess);
  }
  std::istringstream unknown(R"({"algo": "ea", "lambda": 4})");
  CHECK_THROWS_AS(load_config_matrix(unknown), std::invalid_argument);
}

TEST_CASE("initial mean") {
  const auto p = make_problem("sphere-one-max", 10);
  RandomStream rng(1);
  const Vector m = initial_mean(p.space(), rng);
  for (int j = 0; j < 5; ++j) {
    CHECK(m(j) >= 1.0);
    CHECK(m(j) <= 3.0);
  }
  CHECK(m.tail(5) == Vector::Constant(5, 0.5));
}

TEST_CASE("one-max N=10 is solved") {
  RunConfig c = config("elitist-wm", "one-max", 10);
  c.trials = 5;
  for (const auto& r : run_trials(c)) {
    CHECK(r.success);
    CHECK(r.reason == Termination::kTarget);
    CHECK(r.best_f == 10.0);
    CHECK(r.evaluations <= c.budget());
  }
}

TEST_CASE("same seed, same record") {
  for (const auto& algo : algorithm_names()) {
    RunConfig c = config(algo, "one-max", 12);
    c.seed = 77;
    c.trials = 3;
    c.trace = true;
    const auto a = run_trials(c);
    const auto b = run_trial(c, 2);
    CHECK(a[2] == b);
    c.jobs = 3;
    CHECK(run_trials(c) == a);
  }
}

TEST_CASE("budget and evaluation accounting") {
  for (const auto& algo : algorithm_names()) {
    RunConfig c = config(algo, "leading-ones", 20);
    c.budget_multiplier = 3.7;
    c.trials = 4;
    c.trace = true;
    for (const auto& r : run_trials(c)) {
      CHECK(r.evaluations <= c.budget());
      if (r.success) CHECK(r.reason == Termination::kTarget);
      if (algo == "cga") CHECK(r.evaluations % 2 == 0);
      if (algo == "cma-wm") {
        const long lambda = default_population_hyperparams(20).lambda;
        CHECK(r.evaluations % lambda == 0);
        for (const auto& row : r.trace) CHECK(row.evaluations == row.iteration * lambda);
      }
      if (algo == "elitist-wm") {
        // The initial mean is its own one-point round.
        for (const auto& row : r.trace) CHECK(row.evaluations == row.iteration);
      }
    }
  }
}

TEST_CASE("trace rows") {
  RunConfig c = config("cma-wm", "sphere-int", 6);
  c.trace = true;
  const auto r = run_trial(c, 0);
  REQUIRE_FALSE(r.trace.empty());
  for (const auto& row : r.trace) {
    CHECK(row.abs_mean.size() == 6);
    CHECK(row.marginal_std.size() == 6);
    CHECK(row.abs_mean.minCoeff() >= 0.0);
    CHECK(row.sigma > 0.0);
  }
  std::stringstream ss;
  write_trace_csv(ss, std::vector<TrialRecord>{r});
  const auto text = ss.str();
  CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) ==
        1 + 6 * r.trace.size());
}

TEST_CASE("eigenvalue floor terminates") {
  RunConfig c = config("elitist-wm", "sphere-int", 4);
  c.eig_floor = 1e300;
  const auto r = run_trial(c, 0);
  CHECK(r.reason == Termination::kEigenvalueFloor);
  CHECK(r.evaluations == 0);
}

TEST_CASE("termination names") {
  for (auto t : {Termination::kTarget, Termination::kBudget, Termination::kEigenvalueFloor,
                 Termination::kNumericalError}) {
    CHECK(termination_from_string(to_string(t)) == t);
  }
  CHECK_THROWS_AS(termination_from_string("bored"), std::invalid_argument);
}
