#include "mnarcor/inference.hpp"

#include <cmath>
#include <limits>

#include "mnarcor/errors.hpp"
#include "mnarcor/normal.hpp"

namespace mnarcor {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> uniform_grid(double lo, double hi, int points) {
  if (lo == hi) return {lo};
  if (points < 2) throw error("grid_points must be >= 2 per active gamma dimension");
  std::vector<double> g(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (int i = 0; i < points; ++i) g[i] = lo + step * i;
  g.back() = hi;  // inclusive endpoint, exactly
  return g;
}

}  // namespace

Interval confidence_interval(const CorrectedEstimates& est, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw error("alpha must be in (0, 1)");
  const double c = norm_quantile(1.0 - alpha / 2.0);
  Interval ci;
  ci.lower = est.rho_hat - c * est.se_hat;
  ci.upper = est.rho_hat + c * est.se_hat;
  ci.gamma1 = est.gamma1;
  ci.gamma2 = est.gamma2;
  ci.alpha = alpha;
  ci.exceeds_logical_range = ci.lower < -1.0 || ci.upper > 1.0;
  return ci;
}

UncertaintyRegion uncertainty_region(const MnarAnalysis& analysis, const GammaBox& box,
                                     double alpha, int grid_points) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw error("alpha must be in (0, 1)");
  if (analysis.mechanism() != Mechanism::C &&
      (box.gamma2_min != 0.0 || box.gamma2_max != 0.0))
    throw error("a gamma2 range is only meaningful under mechanism C");
  const std::vector<double> g1 = uniform_grid(box.gamma1_min, box.gamma1_max, grid_points);
  const std::vector<double> g2 =
      analysis.mechanism() == Mechanism::C
          ? uniform_grid(box.gamma2_min, box.gamma2_max, grid_points)
          : std::vector<double>{0.0};

  UncertaintyRegion ur;
  ur.box = box;
  ur.alpha = alpha;
  ur.lower = std::numeric_limits<double>::infinity();
  ur.upper = -std::numeric_limits<double>::infinity();
  ur.grid.reserve(g1.size() * g2.size());

  int ok_count = 0;
  for (double a : g1) {
    for (double b : g2) {
      GridPoint pt;
      pt.gamma1 = a;
      pt.gamma2 = b;
      const RegularityReport report = analysis.regularity(a, b);
      if (!report.all_pass()) {
        std::string failed;
        for (const auto& c : report.checks)
          if (!c.pass) failed += (failed.empty() ? "" : ", ") + c.name;
        pt.rho_hat = kNaN;
        pt.lower = pt.upper = kNaN;
        pt.status = "regularity-skip: " + failed;
      } else {
        try {
          const CorrectedEstimates est = analysis.at(a, b);
          const Interval ci = confidence_interval(est, alpha);
          pt.rho_hat = est.rho_hat;
          pt.lower = ci.lower;
          pt.upper = ci.upper;
          pt.status = "ok";
          ++ok_count;
          if (ci.lower < ur.lower) {
            ur.lower = ci.lower;
            ur.argmin_gamma1 = a;
            ur.argmin_gamma2 = b;
          }
          if (ci.upper > ur.upper) {
            ur.upper = ci.upper;
            ur.argmax_gamma1 = a;
            ur.argmax_gamma2 = b;
          }
        } catch (const error& e) {
          pt.rho_hat = kNaN;
          pt.lower = pt.upper = kNaN;
          pt.status = std::string("numerical-skip: ") + e.what();
        }
      }
      ur.grid.push_back(std::move(pt));
    }
  }

  const int total = static_cast<int>(ur.grid.size());
  ur.failures = total - ok_count;
  if (ur.failures * 10 > total || ok_count == 0) {
    std::string detail;
    for (const auto& pt : ur.grid)
      if (!pt.ok() && detail.size() < 400)
        detail += "\n  gamma=(" + std::to_string(pt.gamma1) + "," +
                  std::to_string(pt.gamma2) + "): " + pt.status;
    throw unreliable_region_error("more than 10% of gamma grid points failed (" +
                                  std::to_string(ur.failures) + "/" +
                                  std::to_string(total) + ")" + detail);
  }
  ur.exceeds_logical_range = ur.lower < -1.0 || ur.upper > 1.0;
  return ur;
}

UncertaintyRegion uncertainty_region(const Dataset& data, Mechanism mech,
                                     const GammaBox& box, double alpha, int grid_points) {
  return uncertainty_region(MnarAnalysis(data, mech), box, alpha, grid_points);
}

}  // namespace mnarcor
