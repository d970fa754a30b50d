#include "mnarcor/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include "mnarcor/errors.hpp"
#include "mnarcor/estimators.hpp"

namespace mnarcor {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// replicate-local stream: counter-style mix of the base seed and the
// replicate index, independent of evaluation order
std::uint64_t replicate_seed(std::uint64_t base, int replicate) {
  return splitmix64(base ^ splitmix64(static_cast<std::uint64_t>(replicate) + 1));
}

double truncated_normal(std::mt19937_64& rng, std::normal_distribution<double>& normal,
                        double mean, double sd, double lo, double hi) {
  for (;;) {
    const double v = mean + sd * normal(rng);
    if (v >= lo && v <= hi) return v;
  }
}

void validate_design(const SimulationDesign& d) {
  if (d.N <= 4) throw error("simulation design: N too small");
  if (std::fabs(d.gamma10) > 1.0 || std::fabs(d.gamma20) > 1.0)
    throw error("simulation design: |gamma0| must be <= 1");
  if (!(d.sigma_base > 0.0)) throw error("simulation design: sigma_base must be positive");
  if (!(d.sigma_xi2 > 0.0)) throw error("simulation design: sigma_xi2 must be positive");
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double h = q * (static_cast<double>(sorted.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(h);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

CoverageMethodStats summarize(const std::vector<double>& widths, int covered) {
  CoverageMethodStats s;
  s.replicates = static_cast<int>(widths.size());
  s.covered_count = covered;
  s.empirical_coverage =
      s.replicates > 0 ? static_cast<double>(covered) / s.replicates : 0.0;
  std::vector<double> w = widths;
  std::sort(w.begin(), w.end());
  s.width_q1 = quantile_sorted(w, 0.25);
  s.width_median = quantile_sorted(w, 0.5);
  s.width_q3 = quantile_sorted(w, 0.75);
  return s;
}

int thread_count() {
  if (const char* env = std::getenv("MNARCOR_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1) return t;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

double true_rho(const SimulationDesign& design) {
  validate_design(design);
  const double beta2 = design.target_coef[1];
  return rho_from_components(beta2, design.sigma_base * design.sigma_base,
                             design.sigma_xi2 * design.sigma_xi2);
}

Dataset generate_dataset(const SimulationDesign& design) {
  validate_design(design);
  const int n = design.N;
  std::mt19937_64 rng(splitmix64(design.seed));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const CovariateModel& cov = design.covariates;

  Eigen::MatrixXd values(n, 4);
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> observed =
      Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, 4, true);

  const double g1 = design.gamma10;
  const double g2 = design.gamma20;
  const double eps1_sd = design.sigma_base * std::sqrt(1.0 - g1 * g1);
  const double eps2_sd = design.sigma_xi2 * std::sqrt(1.0 - g2 * g2);

  for (int i = 0; i < n; ++i) {
    const double x3 = truncated_normal(rng, normal, cov.age_mean, cov.age_sd,
                                       cov.age_lo, cov.age_hi);
    const double x4 = unif(rng) < cov.hypertension_prob ? 1.0 : 0.0;
    const double eta1 = normal(rng);

    double xi2, eta2 = 0.0;
    if (design.mechanism == Mechanism::C) {
      eta2 = normal(rng);
      xi2 = g2 * design.sigma_xi2 * eta2 + eps2_sd * normal(rng);
    } else {
      xi2 = design.sigma_xi2 * normal(rng);
    }
    const double x2 =
        design.partner_coef[0] + design.partner_coef[1] * x3 + design.partner_coef[2] * x4 +
        xi2;
    const double xi1 = g1 * design.sigma_base * eta1 + eps1_sd * normal(rng);
    const double x1 = design.target_coef[0] + design.target_coef[1] * x2 +
                      design.target_coef[2] * x3 + design.target_coef[3] * x4 + xi1;

    values(i, 0) = x1;
    values(i, 1) = x2;
    values(i, 2) = x3;
    values(i, 3) = x4;

    switch (design.mechanism) {
      case Mechanism::A: {
        const double idx = design.selection_coef[0] + design.selection_coef[1] * x2 +
                           design.selection_coef[2] * x3 + design.selection_coef[3] * x4 +
                           eta1;
        observed(i, 0) = idx > 0.0;
        break;
      }
      case Mechanism::B: {
        const double idx = design.selection_nopartner_coef[0] +
                           design.selection_nopartner_coef[1] * x3 +
                           design.selection_nopartner_coef[2] * x4 + eta1;
        observed(i, 0) = idx > 0.0;
        observed(i, 1) = idx > 0.0;
        break;
      }
      case Mechanism::C: {
        const double idx1 = design.selection_nopartner_coef[0] +
                            design.selection_nopartner_coef[1] * x3 +
                            design.selection_nopartner_coef[2] * x4 + eta1;
        const double idx2 = design.selection2_coef[0] + design.selection2_coef[1] * x3 +
                            design.selection2_coef[2] * x4 + eta2;
        observed(i, 0) = idx1 > 0.0;
        observed(i, 1) = idx2 > 0.0;
        break;
      }
    }
  }
  return Dataset::make(std::move(values), std::move(observed), 0, 1, {2, 3});
}

CoverageReport run_coverage_experiment(const SimulationDesign& design, int replicates,
                                       double alpha, const GammaBox& ur_box,
                                       int grid_points) {
  validate_design(design);
  if (replicates < 1) throw error("replicates must be >= 1");

  CoverageReport report;
  report.design = design;
  report.replicates = replicates;
  report.alpha = alpha;
  report.ur_box = ur_box;
  report.grid_points = grid_points;
  report.true_rho_value = true_rho(design);
  report.records.resize(replicates);

  const double rho0 = report.true_rho_value;
  auto run_one = [&](int r) {
    ReplicateRecord& rec = report.records[r];
    rec.replicate = r;
    try {
      SimulationDesign d = design;
      d.seed = replicate_seed(design.seed, r);
      const Dataset ds = generate_dataset(d);
      const MnarAnalysis analysis(ds, design.mechanism);
      rec.cc_ci = confidence_interval(analysis.at(0.0, 0.0), alpha);
      const CorrectedEstimates oracle = analysis.at(design.gamma10, design.gamma20);
      rec.oracle_ci = confidence_interval(oracle, alpha);
      rec.oracle_rho = oracle.rho_hat;
      rec.oracle_se = oracle.se_hat;
      const UncertaintyRegion ur = uncertainty_region(analysis, ur_box, alpha, grid_points);
      rec.ur_lower = ur.lower;
      rec.ur_upper = ur.upper;
      rec.cc_covered = rec.cc_ci.contains(rho0);
      rec.oracle_covered = rec.oracle_ci.contains(rho0);
      rec.ur_covered = ur.contains(rho0);
      rec.ok = true;
    } catch (const error& e) {
      rec.ok = false;
      rec.failure = e.what();
    }
  };

  const int threads = std::min(thread_count(), replicates);
  if (threads <= 1) {
    for (int r = 0; r < replicates; ++r) run_one(r);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (int r = t; r < replicates; r += threads) run_one(r);
      });
    for (auto& th : pool) th.join();
  }

  std::vector<double> cc_w, oracle_w, ur_w;
  int cc_cov = 0, oracle_cov = 0, ur_cov = 0;
  for (const ReplicateRecord& rec : report.records) {
    if (!rec.ok) {
      ++report.failed;
      continue;
    }
    cc_w.push_back(rec.cc_ci.width());
    oracle_w.push_back(rec.oracle_ci.width());
    ur_w.push_back(rec.ur_upper - rec.ur_lower);
    cc_cov += rec.cc_covered;
    oracle_cov += rec.oracle_covered;
    ur_cov += rec.ur_covered;
  }
  if (report.failed * 100 > replicates)
    throw error("coverage experiment: " + std::to_string(report.failed) + "/" +
                std::to_string(replicates) + " replicates failed (> 1%)");

  report.cc = summarize(cc_w, cc_cov);
  report.oracle = summarize(oracle_w, oracle_cov);
  report.ur = summarize(ur_w, ur_cov);
  return report;
}

}  // namespace mnarcor
