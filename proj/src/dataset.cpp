#include "mnarcor/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "mnarcor/errors.hpp"

namespace mnarcor {

const char* mechanism_name(Mechanism m) {
  switch (m) {
    case Mechanism::A: return "A";
    case Mechanism::B: return "B";
    case Mechanism::C: return "C";
  }
  return "?";
}

Mechanism mechanism_from_string(const std::string& s) {
  if (s == "A" || s == "a") return Mechanism::A;
  if (s == "B" || s == "b") return Mechanism::B;
  if (s == "C" || s == "c") return Mechanism::C;
  throw error("unknown mechanism '" + s + "' (expected A, B or C)");
}

Dataset Dataset::make(Eigen::MatrixXd values,
                      Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> observed,
                      int target, int partner, std::vector<int> adjusters) {
  const int n = static_cast<int>(values.rows());
  const int p = static_cast<int>(values.cols());
  if (observed.rows() != n || observed.cols() != p)
    throw design_error("mask shape does not match the value matrix");
  if (p < 3) throw design_error("need at least 3 variables (target, partner, one adjuster)");
  if (n <= p) throw insufficient_data_error("n_rows must exceed the number of variables");

  std::set<int> roles;
  auto check_col = [&](int c) {
    if (c < 0 || c >= p) throw design_error("role column index out of range");
    if (!roles.insert(c).second) throw design_error("role columns must be disjoint");
  };
  check_col(target);
  check_col(partner);
  for (int c : adjusters) check_col(c);
  if (adjusters.empty()) throw design_error("at least one adjuster column is required");

  int bad_adjuster_rows = 0;
  for (int i = 0; i < n; ++i) {
    bool ok = true;
    for (int c : adjusters) ok = ok && observed(i, c);
    if (!ok) ++bad_adjuster_rows;
  }
  if (bad_adjuster_rows > 0)
    throw design_error("adjuster columns must be fully observed (" +
                       std::to_string(bad_adjuster_rows) + " rows with missing adjusters)");

  // masked cells become NaN; the mask is the only carrier of missingness
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < n; ++i)
      if (!observed(i, j)) values(i, j) = std::numeric_limits<double>::quiet_NaN();

  Dataset d;
  d.values = std::move(values);
  d.observed = std::move(observed);
  d.target = target;
  d.partner = partner;
  d.adjusters = std::move(adjusters);
  return d;
}

bool Dataset::pattern_matches(Mechanism m) const {
  const int n = n_rows();
  switch (m) {
    case Mechanism::A:
      for (int i = 0; i < n; ++i)
        if (!observed(i, partner)) return false;
      return true;
    case Mechanism::B:
      for (int i = 0; i < n; ++i)
        if (observed(i, target) != observed(i, partner)) return false;
      return true;
    case Mechanism::C:
      return true;
  }
  return false;
}

GammaBox::GammaBox(double g1min, double g1max) : GammaBox(g1min, g1max, 0.0, 0.0) {}

GammaBox::GammaBox(double g1min, double g1max, double g2min, double g2max)
    : gamma1_min(g1min), gamma1_max(g1max), gamma2_min(g2min), gamma2_max(g2max) {
  auto in_range = [](double v) { return v >= -1.0 && v <= 1.0; };
  if (!in_range(g1min) || !in_range(g1max) || !in_range(g2min) || !in_range(g2max))
    throw error("gamma bounds must lie in [-1, 1]");
  if (g1min > g1max || g2min > g2max) throw error("gamma box requires min <= max");
}

bool GammaBox::contains(const GammaBox& other) const {
  return gamma1_min <= other.gamma1_min && gamma1_max >= other.gamma1_max &&
         gamma2_min <= other.gamma2_min && gamma2_max >= other.gamma2_max;
}

bool RegularityReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const RegularityCheck& c) { return c.pass; });
}

double rho_from_components(double beta2, double sigma1_sq, double sigma2_sq) {
  if (!(sigma1_sq > 0.0)) throw error("rho_from_components: sigma1_sq must be positive");
  if (!(sigma2_sq > 0.0)) throw error("rho_from_components: sigma2_sq must be positive");
  return beta2 / std::sqrt(beta2 * beta2 + sigma1_sq / sigma2_sq);
}

}  // namespace mnarcor
