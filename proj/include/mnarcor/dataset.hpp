#ifndef MNARCOR_DATASET_HPP
#define MNARCOR_DATASET_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace mnarcor {

// Missing data mechanism.
//   A: only the target variable may be missing; selection depends on the
//      partner (design includes the partner column).
//   B: target and partner share one missingness indicator; selection
//      design excludes the partner.
//   C: target and partner have independent missingness indicators.
enum class Mechanism { A, B, C };

const char* mechanism_name(Mechanism m);
Mechanism mechanism_from_string(const std::string& s);

// Column-major numeric table with an explicit missingness mask and role
// labels. Immutable after construction. Masked cells hold NaN so that
// accidental use is loud; the mask is authoritative.
struct Dataset {
  Eigen::MatrixXd values;                        // n_rows x p
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> observed;
  int target = 0;                                // column of X1
  int partner = 1;                               // column of X2
  std::vector<int> adjusters;                    // columns of X3..Xp

  int n_rows() const { return static_cast<int>(values.rows()); }
  int p() const { return static_cast<int>(values.cols()); }

  // Validates roles, mask shape, fully observed adjusters and n_rows > p.
  // Throws design_error / insufficient_data_error on violation.
  static Dataset make(Eigen::MatrixXd values,
                      Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> observed,
                      int target, int partner, std::vector<int> adjusters);

  // True if the missingness pattern is compatible with the mechanism.
  // A: partner fully observed; B: target and partner masks identical;
  // C: no constraint beyond fully observed adjusters.
  bool pattern_matches(Mechanism m) const;
};

// Assumed range for the sensitivity parameter(s). The second pair is
// used only under mechanism C.
struct GammaBox {
  double gamma1_min = 0.0;
  double gamma1_max = 0.0;
  double gamma2_min = 0.0;
  double gamma2_max = 0.0;

  GammaBox() = default;
  GammaBox(double g1min, double g1max);
  GammaBox(double g1min, double g1max, double g2min, double g2max);

  bool contains(const GammaBox& other) const;
};

// One regularity assumption: pass/fail plus the diagnostic magnitude
// that was compared against the threshold.
struct RegularityCheck {
  std::string name;
  bool pass = false;
  double diagnostic = 0.0;
};

struct RegularityReport {
  std::vector<RegularityCheck> checks;
  bool all_pass() const;
  const RegularityCheck& operator[](std::size_t i) const { return checks[i]; }
  std::size_t size() const { return checks.size(); }
};

// Partial correlation from the regression slope and the two residual
// variances: beta2 / sqrt(beta2^2 + sigma1_sq / sigma2_sq).
// Throws on nonpositive variances.
double rho_from_components(double beta2, double sigma1_sq, double sigma2_sq);

// Thresholds for the finite-precision reading of the regularity
// assumptions ("nonzero determinant", "nonzero denominator").
inline constexpr double kRcondThreshold = 1e-10;
inline constexpr double kDenominatorThreshold = 1e-8;

}  // namespace mnarcor

#endif
