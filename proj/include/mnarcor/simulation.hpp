#ifndef MNARCOR_SIMULATION_HPP
#define MNARCOR_SIMULATION_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mnarcor/dataset.hpp"
#include "mnarcor/inference.hpp"

namespace mnarcor {

// Surrogate covariate distribution: age ~ Normal(66, 8^2) truncated to
// [55, 85], hypertension ~ Bernoulli(0.4), independent.
struct CovariateModel {
  double age_mean = 66.0;
  double age_sd = 8.0;
  double age_lo = 55.0;
  double age_hi = 85.0;
  double hypertension_prob = 0.4;
};

// Data-generating design: partner and target regressions, selection
// probit(s) and noise scales. Defaults are the simulation-study
// coefficient set; the selection designs without the partner column are
// used for mechanisms B and C.
struct SimulationDesign {
  int N = 250;
  Mechanism mechanism = Mechanism::A;
  double gamma10 = 0.5;  // correlation between xi1 and eta1
  double gamma20 = 0.0;  // mechanism C only
  std::uint64_t seed = 1;

  // partner: intercept, age, hypertension
  Eigen::Vector3d partner_coef{2.313, -0.042, -0.216};
  // target: intercept, partner, age, hypertension
  Eigen::Vector4d target_coef{1.092, 0.01, -0.002, -0.006};
  // selection with the partner in the design (mechanism A)
  Eigen::Vector4d selection_coef{2.708, 0.548, -0.036, -0.042};
  // selection without the partner (mechanism B, and Z1 under C)
  Eigen::Vector3d selection_nopartner_coef{4.0, -0.06, -0.15};
  // second selection (Z2 under C)
  Eigen::Vector3d selection2_coef{3.9, -0.058, -0.10};

  double sigma_xi2 = 1.0770329614269007;  // sqrt(1.16)
  double sigma_base = 0.028;              // sd of xi1
  CovariateModel covariates;
};

// Analytic partial correlation implied by the design coefficients:
// beta2 / sqrt(beta2^2 + sigma_base^2 / sigma_xi2^2).
double true_rho(const SimulationDesign& design);

// Draws one dataset. Deterministic given the seed. Columns are ordered
// (target, partner, age, hypertension).
Dataset generate_dataset(const SimulationDesign& design);

struct CoverageMethodStats {
  int replicates = 0;   // successful replicates
  int covered_count = 0;
  double empirical_coverage = 0.0;
  double width_q1 = 0.0, width_median = 0.0, width_q3 = 0.0;
};

struct ReplicateRecord {
  int replicate = 0;
  bool ok = false;
  std::string failure;
  Interval cc_ci;              // gamma = 0
  Interval oracle_ci;          // gamma = gamma0
  double oracle_rho = 0.0;
  double oracle_se = 0.0;
  double ur_lower = 0.0, ur_upper = 0.0;
  bool cc_covered = false, oracle_covered = false, ur_covered = false;
};

struct CoverageReport {
  SimulationDesign design;
  int replicates = 0;
  int failed = 0;
  double alpha = 0.05;
  GammaBox ur_box;
  int grid_points = 101;
  double true_rho_value = 0.0;
  CoverageMethodStats cc, oracle, ur;
  std::vector<ReplicateRecord> records;
};

// Generates `replicates` datasets (replicate-local RNG streams derived
// from the design seed, so the result is independent of evaluation
// order) and records, per replicate, the complete-case CI (gamma = 0),
// the oracle CI (gamma = gamma0) and the UR over ur_box. Replicates
// where estimation fails are excluded and counted; more than 1% failures
// aborts the experiment.
CoverageReport run_coverage_experiment(const SimulationDesign& design, int replicates,
                                       double alpha, const GammaBox& ur_box,
                                       int grid_points = 101);

}  // namespace mnarcor

#endif
