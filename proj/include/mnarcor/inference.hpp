#ifndef MNARCOR_INFERENCE_HPP
#define MNARCOR_INFERENCE_HPP

#include <string>
#include <vector>

#include "mnarcor/dataset.hpp"
#include "mnarcor/estimators.hpp"

namespace mnarcor {

// Closed interval [rho_hat - c se, rho_hat + c se], c = Phi^{-1}(1 - alpha/2).
// Endpoints are never clipped to [-1, 1]; exceeds_logical_range flags a
// raw endpoint outside that range.
struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double alpha = 0.05;
  bool exceeds_logical_range = false;

  double width() const { return upper - lower; }
  bool contains(double v) const { return lower <= v && v <= upper; }
};

Interval confidence_interval(const CorrectedEstimates& est, double alpha);

// One evaluated gamma grid point; status is "ok", "regularity-skip" or
// "numerical-skip" (with the diagnostic appended after ': ').
struct GridPoint {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double rho_hat = 0.0;  // NaN when skipped
  double lower = 0.0;
  double upper = 0.0;
  std::string status;

  bool ok() const { return status == "ok"; }
};

// Hull of the per-gamma confidence intervals over a uniform inclusive
// grid, with the full trace retained for plotting.
struct UncertaintyRegion {
  double lower = 0.0;
  double upper = 0.0;
  GammaBox box;
  double alpha = 0.05;
  std::vector<GridPoint> grid;
  double argmin_gamma1 = 0.0, argmin_gamma2 = 0.0;  // gamma attaining the lower end
  double argmax_gamma1 = 0.0, argmax_gamma2 = 0.0;  // gamma attaining the upper end
  int failures = 0;
  bool exceeds_logical_range = false;

  double width() const { return upper - lower; }
  bool contains(double v) const { return lower <= v && v <= upper; }
};

// grid_points is the number of points per active gamma dimension
// (a dimension with min == max contributes the single point exactly, so
// a singleton box reproduces the plain confidence interval bit for bit).
// Grid points failing regularity or numerical checks are skipped and
// recorded; more than 10% failures raises unreliable_region_error.
UncertaintyRegion uncertainty_region(const MnarAnalysis& analysis, const GammaBox& box,
                                     double alpha, int grid_points = 101);
UncertaintyRegion uncertainty_region(const Dataset& data, Mechanism mech,
                                     const GammaBox& box, double alpha,
                                     int grid_points = 101);

}  // namespace mnarcor

#endif
