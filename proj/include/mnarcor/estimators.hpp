#ifndef MNARCOR_ESTIMATORS_HPP
#define MNARCOR_ESTIMATORS_HPP

#include <Eigen/Dense>
#include <optional>

#include "mnarcor/dataset.hpp"
#include "mnarcor/ols.hpp"
#include "mnarcor/probit.hpp"

namespace mnarcor {

// Bias-corrected estimates for one (mechanism, gamma) configuration.
// se_hat is the full half-width scale: CI = rho_hat +- c * se_hat.
struct CorrectedEstimates {
  Mechanism mechanism = Mechanism::A;
  double gamma1 = 0.0;
  double gamma2 = 0.0;  // 0 unless mechanism C
  double beta2_hat = 0.0;
  double sigma1_sq_hat = 0.0;
  double sigma2_sq_hat = 0.0;
  double rho_hat = 0.0;
  double se_hat = 0.0;
  int n_complete = 0;
  int n2 = 0;  // mechanism C only (rows with the partner observed)
};

// Residual-variance bias correction:
//   sigma_sq = ols_resid_var / (1 + gamma^2 (u'lam - lam'X(X'X)^{-1}X'lam) / df)
// Shared by mechanisms A/B (with u over complete cases) and used twice
// under C (u for sigma1, w for sigma2). Throws regularity_error when the
// denominator is numerically zero.
double corrected_sigma_sq(double ols_resid_var, double gamma,
                          const Eigen::VectorXd& u_hat, const Eigen::VectorXd& mills,
                          const Eigen::MatrixXd& design, const Eigen::MatrixXd& xtx_inv,
                          int df);

// Slope bias correction:
//   beta2 = ols_coef2 - gamma * sigma1_hat * [(X'X)^{-1} X' lam]_2
// where index 2 is the partner column of the (intercept, partner,
// adjusters...) design.
double corrected_beta2(double ols_coef2, double gamma, double sigma1_hat,
                       const Eigen::MatrixXd& xtx_inv, const Eigen::MatrixXd& design,
                       const Eigen::VectorXd& mills);

// Asymptotic half-width scale of rho_hat:
//   se = sqrt[ sigma1_sq (1 + g^2 u'lam/n - g^2 lam'lam/n) (X'X)^{-1}_22
//              / (beta2^2 + sigma1_sq/sigma2_sq) ]
// (X'X)^{-1}_22 enters un-normalized, so the sqrt(n) factors cancel.
// Throws numerical_error on a negative radicand and regularity_error
// when beta2^2 + sigma1_sq/sigma2_sq is zero.
double standard_error(double sigma1_sq_hat, double gamma1, const Eigen::VectorXd& u_hat,
                      const Eigen::VectorXd& mills, double xtx_inv_22, double beta2_hat,
                      double sigma2_sq_hat, int n);

// Workspace holding everything that does not depend on gamma: probit
// fit(s), OLS pieces and the Mills-ratio cross products. Evaluating a
// gamma grid point is then O(1). Immutable after construction and safe
// to share across threads.
class MnarAnalysis {
 public:
  MnarAnalysis(const Dataset& data, Mechanism mech);

  // Corrected estimates at the given sensitivity parameter(s).
  // gamma2 must be 0 unless the mechanism is C.
  CorrectedEstimates at(double gamma1, double gamma2 = 0.0) const;

  // Per-assumption pass/fail report; never throws.
  RegularityReport regularity(double gamma1, double gamma2 = 0.0) const;

  Mechanism mechanism() const { return mech_; }
  int n_complete() const { return n_; }
  int n2() const { return n2_; }
  const ProbitFit& probit1() const { return probit1_; }
  const ProbitFit* probit2() const { return probit2_ ? &*probit2_ : nullptr; }

 private:
  Mechanism mech_;
  int n_ = 0;        // complete cases
  int n2_ = 0;       // partner-observed cases (C); otherwise n_complete
  int p_ = 0;
  ProbitFit probit1_;
  std::optional<ProbitFit> probit2_;

  // target-equation OLS pieces (complete-case design: 1, partner, adjusters)
  double beta2_ols_ = 0.0;
  double sigma1_sq_ols_ = 0.0;
  double xtx_inv22_ = 0.0;
  // u-based scalars
  double u_lam_ = 0.0;       // u' lam_u
  double lam_p_lam_ = 0.0;   // lam_u' X (X'X)^{-1} X' lam_u
  double lam_lam_ = 0.0;     // lam_u' lam_u
  double beta2_corr_coef_ = 0.0;  // [(X'X)^{-1} X' lam_u]_2
  int df1_ = 0;
  // partner-equation pieces
  double sigma2_sq_ols_ = 0.0;
  // mechanism C: w-based scalars for the sigma2 correction
  double w_lam_ = 0.0;
  double lamw_p_lamw_ = 0.0;
  int df2_ = 0;
  // rank diagnostics captured for the regularity report
  double rcond_target_design_ = 0.0;
  double rcond_selection_design_ = 0.0;

  double sigma2_sq_at(double gamma2) const;
};

// One-shot estimation entry points. Mask pattern must match the
// declared mechanism (mechanism_error otherwise); |gamma| <= 1.
CorrectedEstimates estimate_mdm_a(const Dataset& data, double gamma);
CorrectedEstimates estimate_mdm_b(const Dataset& data, double gamma);
CorrectedEstimates estimate_mdm_c(const Dataset& data, double gamma1, double gamma2);

// Regularity report for a dataset/mechanism/gamma configuration.
RegularityReport validate_regularity(const Dataset& data, Mechanism mech,
                                     double gamma1, double gamma2 = 0.0);

}  // namespace mnarcor

#endif
