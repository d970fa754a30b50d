#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "mnarcor/errors.hpp"
#include "mnarcor/simulation.hpp"

using namespace mnarcor;

TEST_CASE("analytic partial correlation of the default design") {
  SimulationDesign d;
  // 0.01 / sqrt(0.01^2 + 0.028^2 / 1.16), checked externally
  CHECK(true_rho(d) == doctest::Approx(0.35901098714230027).epsilon(1e-14));

  d.target_coef[1] = 0.0;
  CHECK(true_rho(d) == 0.0);
  d.target_coef[1] = -0.01;
  CHECK(true_rho(d) == doctest::Approx(-0.35901098714230027).epsilon(1e-14));
}

TEST_CASE("generated datasets are deterministic in the seed") {
  SimulationDesign d;
  d.N = 300;
  d.seed = 9001;
  const Dataset a = generate_dataset(d);
  const Dataset b = generate_dataset(d);
  REQUIRE((a.observed == b.observed).all());
  for (int i = 0; i < a.n_rows(); ++i)
    for (int j = 0; j < a.p(); ++j)
      if (a.observed(i, j)) CHECK(a.values(i, j) == b.values(i, j));
  d.seed = 9002;
  const Dataset c = generate_dataset(d);
  CHECK(!(a.observed == c.observed).all());
}

TEST_CASE("generated values respect the covariate model and roles") {
  SimulationDesign d;
  d.N = 2000;
  d.seed = 17;
  const Dataset ds = generate_dataset(d);
  CHECK(ds.pattern_matches(Mechanism::A));
  for (int i = 0; i < ds.n_rows(); ++i) {
    CHECK(ds.values(i, 2) >= d.covariates.age_lo);
    CHECK(ds.values(i, 2) <= d.covariates.age_hi);
    CHECK((ds.values(i, 3) == 0.0 || ds.values(i, 3) == 1.0));
    if (!ds.observed(i, 0)) CHECK(std::isnan(ds.values(i, 0)));
  }

  d.mechanism = Mechanism::B;
  CHECK(generate_dataset(d).pattern_matches(Mechanism::B));
  d.mechanism = Mechanism::C;
  d.gamma20 = 0.3;
  const Dataset dc = generate_dataset(d);
  bool partner_hole = false, target_only = false;
  for (int i = 0; i < dc.n_rows(); ++i) {
    partner_hole = partner_hole || !dc.observed(i, 1);
    target_only = target_only || (!dc.observed(i, 0) && dc.observed(i, 1));
  }
  CHECK(partner_hole);
  CHECK(target_only);
}

TEST_CASE("missing fraction matches the analytic selection rate") {
  std::ifstream f(std::string(MNARCOR_TEST_DATA_DIR) + "/selection_rate_oracle.json");
  REQUIRE(f.good());
  nlohmann::json oracle;
  f >> oracle;
  const double p_missing = oracle["p_missing"].get<double>();
  CHECK(p_missing == doctest::Approx(0.5).epsilon(0.05));  // around half missing

  SimulationDesign d;
  d.N = 100000;
  d.seed = 4242;
  const Dataset ds = generate_dataset(d);
  int missing = 0;
  for (int i = 0; i < ds.n_rows(); ++i) missing += !ds.observed(i, 0);
  const double frac = static_cast<double>(missing) / ds.n_rows();
  CHECK(frac > 0.45);
  CHECK(frac < 0.55);
  // 0.01 is ~6 binomial standard errors at this N
  CHECK(frac == doctest::Approx(p_missing).scale(1.0).epsilon(0.01));
}

TEST_CASE("design validation") {
  SimulationDesign d;
  d.N = 3;
  CHECK_THROWS_AS(generate_dataset(d), error);
  d.N = 250;
  d.gamma10 = 1.2;
  CHECK_THROWS_AS(generate_dataset(d), error);
  d.gamma10 = 0.5;
  d.sigma_base = 0.0;
  CHECK_THROWS_AS(true_rho(d), error);
}

TEST_CASE("coverage experiment bookkeeping and reproducibility") {
  SimulationDesign d;
  d.N = 250;
  d.seed = 55;
  d.gamma10 = 0.5;
  const GammaBox box(0.0, 0.5);

  setenv("MNARCOR_THREADS", "1", 1);
  const CoverageReport serial = run_coverage_experiment(d, 40, 0.05, box, 21);
  setenv("MNARCOR_THREADS", "4", 1);
  const CoverageReport parallel = run_coverage_experiment(d, 40, 0.05, box, 21);
  unsetenv("MNARCOR_THREADS");

  CHECK(serial.replicates == 40);
  CHECK(serial.failed == 0);
  CHECK(serial.true_rho_value == true_rho(d));
  REQUIRE(serial.records.size() == 40);
  REQUIRE(parallel.records.size() == 40);

  // replicate-local streams: results identical whatever the thread count
  for (int r = 0; r < 40; ++r) {
    const ReplicateRecord& a = serial.records[r];
    const ReplicateRecord& b = parallel.records[r];
    CHECK(a.ok);
    CHECK(a.cc_ci.lower == b.cc_ci.lower);
    CHECK(a.oracle_ci.upper == b.oracle_ci.upper);
    CHECK(a.ur_lower == b.ur_lower);
    CHECK(a.ur_upper == b.ur_upper);
    CHECK(a.ur_covered == b.ur_covered);

    // structure: UR hull contains both of its ingredient intervals' span
    CHECK(a.ur_lower <= a.cc_ci.lower);
    CHECK(a.ur_upper >= a.cc_ci.upper);
    CHECK(a.ur_lower <= a.oracle_ci.lower);
    CHECK(a.ur_upper >= a.oracle_ci.upper);
  }

  CHECK(serial.cc.replicates == 40);
  CHECK(serial.cc.covered_count ==
        static_cast<int>(serial.cc.empirical_coverage * 40 + 0.5));
  CHECK(serial.ur.width_q1 <= serial.ur.width_median);
  CHECK(serial.ur.width_median <= serial.ur.width_q3);
  // the UR is a union of intervals, so it is never narrower than the CI
  CHECK(serial.ur.width_median >= serial.oracle.width_median);
}
