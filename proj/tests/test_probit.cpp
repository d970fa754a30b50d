#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <vector>

#include <json.hpp>

#include "mnarcor/csv.hpp"
#include "mnarcor/errors.hpp"
#include "mnarcor/normal.hpp"
#include "mnarcor/probit.hpp"

using namespace mnarcor;

namespace {

nlohmann::json load_json(const std::string& name) {
  std::ifstream f(std::string(MNARCOR_TEST_DATA_DIR) + "/" + name);
  REQUIRE(f.good());
  nlohmann::json j;
  f >> j;
  return j;
}

}  // namespace

TEST_CASE("normal cdf and quantile reference values") {
  CHECK(norm_cdf(0.0) == 0.5);
  CHECK(norm_cdf(1.96) == doctest::Approx(0.97500210485177957).epsilon(1e-15));
  CHECK(norm_cdf(-1.96) == doctest::Approx(1.0 - 0.97500210485177957).epsilon(1e-12));

  CHECK(norm_quantile(0.5) == 0.0);
  CHECK(norm_quantile(0.975) == doctest::Approx(1.9599639845400542).epsilon(1e-15));
  CHECK(norm_quantile(0.025) == doctest::Approx(-1.9599639845400542).epsilon(1e-15));

  // round trip where it is well posed in double precision; past |x| ~ 6
  // the cdf saturates and the inverse cannot recover x
  for (double x = -5.0; x <= 5.0; x += 0.25)
    CHECK(norm_quantile(norm_cdf(x)) == doctest::Approx(x).epsilon(1e-9));
  CHECK_THROWS_AS(norm_quantile(0.0), error);
  CHECK_THROWS_AS(norm_quantile(1.0), error);
}

TEST_CASE("inverse Mills ratio reference values") {
  CHECK(inverse_mills(0.0) == doctest::Approx(0.79788456080286536).epsilon(1e-15));
  CHECK(inverse_mills(10.0) == doctest::Approx(10.098093233962512).epsilon(1e-13));
  CHECK(inverse_mills(-10.0) == doctest::Approx(7.6945986267064193e-23).epsilon(1e-13));
  CHECK_THROWS_AS(inverse_mills(std::nan("")), error);
}

TEST_CASE("inverse Mills ratio against the frozen extended-precision grid") {
  const auto grid = load_json("mills_oracle.json");
  REQUIRE(grid.size() > 200);
  double prev_x = -1e300, prev_lam = 0.0;
  for (const auto& entry : grid) {
    const double x = entry["x"].get<double>();
    const double expect = entry["lambda"].get<double>();
    const double got = inverse_mills(x);
    if (expect < 1e-290) {
      // deep left tail: the true value is subnormal or underflows; only
      // absolute agreement is meaningful there
      CHECK(std::fabs(got - expect) <= 1e-300);
      continue;
    }
    const double tol = std::fabs(x) <= 8.0 ? 1e-12 : 1e-9;
    CHECK(std::fabs(got - expect) <= tol * expect);

    // structural bounds: positive, at most 2|x|+2, above x, increasing
    CHECK(got > 0.0);
    CHECK(got <= 2.0 * std::fabs(x) + 2.0);
    CHECK(got > x);
    if (prev_x > -1e299 && x > prev_x) CHECK(got > prev_lam);
    prev_x = x;
    prev_lam = got;
  }
}

TEST_CASE("intercept-only probit recovers the sample proportion") {
  const int n = 1000, k_true = 841;
  Eigen::MatrixXd design = Eigen::MatrixXd::Ones(n, 1);
  std::vector<bool> z(n);
  for (int i = 0; i < n; ++i) z[i] = i < k_true;

  const ProbitFit fit = fit_probit(design, z);
  CHECK(fit.converged);
  CHECK(fit.delta_hat[0] == doctest::Approx(norm_quantile(0.841)).epsilon(1e-10));
  // balanced case: the MLE is exactly zero up to the solver tolerance
  for (int i = 0; i < n; ++i) z[i] = i % 2 == 0;
  CHECK(std::fabs(fit_probit(design, z).delta_hat[0]) < 1e-10);
}

TEST_CASE("probit maximum likelihood matches the frozen pipeline reference") {
  const auto cases = load_json("corrections_oracle.json");
  const Dataset ds = dataset_from_table(
      read_csv(std::string(MNARCOR_TEST_DATA_DIR) + "/cases/case_00.csv"), "target",
      "partner", {"age", "hypertension"});

  const int n = ds.n_rows();
  Eigen::MatrixXd design(n, 4);
  std::vector<bool> z(n);
  for (int i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = ds.values(i, 1);
    design(i, 2) = ds.values(i, 2);
    design(i, 3) = ds.values(i, 3);
    z[i] = ds.observed(i, 0);
  }
  const ProbitFit fit = fit_probit(design, z);
  CHECK(fit.converged);
  for (const auto& c : cases) {
    if (c["case"].get<int>() != 0) continue;
    for (int j = 0; j < 4; ++j)
      CHECK(fit.delta_hat[j] ==
            doctest::Approx(c["delta_hat"][j].get<double>()).epsilon(1e-10));
  }

  // u = -x'delta over observed rows, in row order
  int pos = 0;
  for (int i = 0; i < n; ++i) {
    if (!z[i]) continue;
    CHECK(fit.linear_index_u[pos] ==
          doctest::Approx(-design.row(i).dot(fit.delta_hat)).epsilon(1e-9));
    ++pos;
  }
  CHECK(pos == (int)fit.linear_index_u.size());

  const Eigen::VectorXd lam = mills_vector(fit);
  for (int i = 0; i < lam.size(); ++i)
    CHECK(lam[i] == inverse_mills(fit.linear_index_u[i]));
}

TEST_CASE("probit consistency on a large simulated sample") {
  const int n = 100000;
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> norm;
  Eigen::MatrixXd design(n, 3);
  std::vector<bool> z(n);
  const Eigen::Vector3d truth(0.4, 0.8, -0.5);
  for (int i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = norm(rng);
    design(i, 2) = norm(rng);
    z[i] = design.row(i).dot(truth) + norm(rng) > 0.0;
  }
  const ProbitFit fit = fit_probit(design, z);
  CHECK(fit.converged);
  for (int j = 0; j < 3; ++j)
    CHECK(fit.delta_hat[j] == doctest::Approx(truth[j]).epsilon(0.03));
}

TEST_CASE("probit failure modes") {
  const int n = 50;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> norm;
  Eigen::MatrixXd design(n, 2);
  std::vector<bool> z(n);
  for (int i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = norm(rng);
    z[i] = true;
  }
  CHECK_THROWS_AS(fit_probit(design, z), degenerate_error);
  for (int i = 0; i < n; ++i) z[i] = false;
  CHECK_THROWS_AS(fit_probit(design, z), degenerate_error);

  // perfect separation on the sign of the predictor
  for (int i = 0; i < n; ++i) z[i] = design(i, 1) > 0.0;
  CHECK_THROWS_AS(fit_probit(design, z), separation_error);

  // duplicated column
  Eigen::MatrixXd dup(n, 3);
  dup.leftCols(2) = design;
  dup.col(2) = design.col(1);
  for (int i = 0; i < n; ++i) z[i] = i % 3 == 0;
  CHECK_THROWS_AS(fit_probit(dup, z), design_error);

  // z length mismatch
  std::vector<bool> short_z(n - 1, true);
  CHECK_THROWS_AS(fit_probit(design, short_z), design_error);
}
