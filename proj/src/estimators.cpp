#include "mnarcor/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mnarcor/errors.hpp"
#include "mnarcor/normal.hpp"

namespace mnarcor {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_gamma(double g, const char* name) {
  if (std::isnan(g) || g < -1.0 || g > 1.0)
    throw error(std::string(name) + " must lie in [-1, 1]");
}

// gamma-dependent scalar formulas, shared between the free functions and
// the cached workspace path so both reduce identically at gamma = 0
double sigma_sq_from_scalars(double ols_var, double gamma, double quad, int df) {
  const double denom = 1.0 + gamma * gamma * quad / static_cast<double>(df);
  if (std::fabs(denom) <= kDenominatorThreshold)
    throw regularity_error("variance-correction denominator is numerically zero (|" +
                           std::to_string(denom) + "| <= 1e-8)");
  return ols_var / denom;
}

double beta2_from_scalars(double ols_coef2, double gamma, double sigma1_hat,
                          double corr_coef2) {
  return ols_coef2 - gamma * sigma1_hat * corr_coef2;
}

double se_from_scalars(double sigma1_sq, double gamma, double u_lam, double lam_lam,
                       double xtx_inv_22, double beta2, double sigma2_sq, int n) {
  const double denom = beta2 * beta2 + sigma1_sq / sigma2_sq;
  if (!(denom > 0.0))
    throw regularity_error("beta2^2 + sigma1_sq/sigma2_sq must be positive");
  const double bracket =
      1.0 + gamma * gamma * u_lam / static_cast<double>(n) -
      gamma * gamma * lam_lam / static_cast<double>(n);
  const double radicand = sigma1_sq * bracket * xtx_inv_22 / denom;
  if (radicand < 0.0)
    throw numerical_error("negative se radicand (bracket = " + std::to_string(bracket) +
                          ", sigma1_sq = " + std::to_string(sigma1_sq) + ")");
  return std::sqrt(radicand);
}

double rcond_crossprod(const Eigen::MatrixXd& design) {
  const Eigen::MatrixXd xtx = design.transpose() * design;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(xtx);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  return smax > 0.0 ? smin / smax : 0.0;
}

// design rows (1, partner, adjusters...) for the given row mask
Eigen::MatrixXd target_design(const Dataset& d, const std::vector<bool>& rows, int count) {
  Eigen::MatrixXd x(count, 2 + d.adjusters.size());
  for (int i = 0, r = 0; i < d.n_rows(); ++i) {
    if (!rows[i]) continue;
    x(r, 0) = 1.0;
    x(r, 1) = d.values(i, d.partner);
    for (std::size_t j = 0; j < d.adjusters.size(); ++j)
      x(r, 2 + j) = d.values(i, d.adjusters[j]);
    ++r;
  }
  return x;
}

// design rows (1, adjusters...) for the given row mask
Eigen::MatrixXd adjuster_design(const Dataset& d, const std::vector<bool>& rows, int count) {
  Eigen::MatrixXd x(count, 1 + d.adjusters.size());
  for (int i = 0, r = 0; i < d.n_rows(); ++i) {
    if (!rows[i]) continue;
    x(r, 0) = 1.0;
    for (std::size_t j = 0; j < d.adjusters.size(); ++j)
      x(r, 1 + j) = d.values(i, d.adjusters[j]);
    ++r;
  }
  return x;
}

Eigen::VectorXd column_subset(const Dataset& d, int col, const std::vector<bool>& rows,
                              int count) {
  Eigen::VectorXd v(count);
  for (int i = 0, r = 0; i < d.n_rows(); ++i)
    if (rows[i]) v[r++] = d.values(i, col);
  return v;
}

}  // namespace

double corrected_sigma_sq(double ols_resid_var, double gamma,
                          const Eigen::VectorXd& u_hat, const Eigen::VectorXd& mills,
                          const Eigen::MatrixXd& design, const Eigen::MatrixXd& xtx_inv,
                          int df) {
  const double u_lam = u_hat.dot(mills);
  const Eigen::VectorXd xt_lam = design.transpose() * mills;
  const double lam_p_lam = xt_lam.dot(xtx_inv * xt_lam);
  return sigma_sq_from_scalars(ols_resid_var, gamma, u_lam - lam_p_lam, df);
}

double corrected_beta2(double ols_coef2, double gamma, double sigma1_hat,
                       const Eigen::MatrixXd& xtx_inv, const Eigen::MatrixXd& design,
                       const Eigen::VectorXd& mills) {
  const Eigen::VectorXd coef = xtx_inv * (design.transpose() * mills);
  return beta2_from_scalars(ols_coef2, gamma, sigma1_hat, coef[1]);
}

double standard_error(double sigma1_sq_hat, double gamma1, const Eigen::VectorXd& u_hat,
                      const Eigen::VectorXd& mills, double xtx_inv_22, double beta2_hat,
                      double sigma2_sq_hat, int n) {
  return se_from_scalars(sigma1_sq_hat, gamma1, u_hat.dot(mills), mills.squaredNorm(),
                         xtx_inv_22, beta2_hat, sigma2_sq_hat, n);
}

MnarAnalysis::MnarAnalysis(const Dataset& data, Mechanism mech) : mech_(mech) {
  if (!data.pattern_matches(mech))
    throw mechanism_error(std::string("missingness pattern does not match mechanism ") +
                          mechanism_name(mech));
  const int n_rows = data.n_rows();
  p_ = data.p();

  std::vector<bool> z1(n_rows), z2(n_rows), complete(n_rows);
  int n_complete = 0, n_partner = 0;
  for (int i = 0; i < n_rows; ++i) {
    z1[i] = data.observed(i, data.target);
    z2[i] = data.observed(i, data.partner);
    complete[i] = z1[i] && z2[i];
    n_complete += complete[i];
    n_partner += z2[i];
  }
  n_ = n_complete;
  n2_ = n_partner;
  if (n_ <= p_)
    throw insufficient_data_error("fewer complete cases than variables (n = " +
                                  std::to_string(n_) + ", p = " + std::to_string(p_) + ")");

  const std::vector<bool> all(n_rows, true);

  // selection probit(s) over all N rows
  Eigen::VectorXd u;  // -X delta over complete cases
  if (mech == Mechanism::A) {
    const Eigen::MatrixXd probit_design = target_design(data, all, n_rows);
    probit1_ = fit_probit(probit_design, z1);
    u = -(target_design(data, complete, n_) * probit1_.delta_hat);
  } else {
    const Eigen::MatrixXd probit_design = adjuster_design(data, all, n_rows);
    probit1_ = fit_probit(probit_design, z1);
    if (mech == Mechanism::C) probit2_ = fit_probit(probit_design, z2);
    u = -(adjuster_design(data, complete, n_) * probit1_.delta_hat);
  }

  Eigen::VectorXd lam_u(u.size());
  for (int i = 0; i < u.size(); ++i) lam_u[i] = inverse_mills(u[i]);

  // complete-case OLS of the target on (1, partner, adjusters)
  const Eigen::MatrixXd x_target = target_design(data, complete, n_);
  const OlsFit ols1 = ols_fit(x_target, column_subset(data, data.target, complete, n_));
  beta2_ols_ = ols1.coef[1];
  df1_ = n_ - p_;
  sigma1_sq_ols_ = ols1.rss / static_cast<double>(df1_);
  xtx_inv22_ = ols1.xtx_inv(1, 1);
  rcond_target_design_ = rcond_crossprod(x_target);

  u_lam_ = u.dot(lam_u);
  lam_lam_ = lam_u.squaredNorm();
  const Eigen::VectorXd xt_lam = x_target.transpose() * lam_u;
  lam_p_lam_ = xt_lam.dot(ols1.xtx_inv * xt_lam);
  beta2_corr_coef_ = (ols1.xtx_inv * xt_lam)[1];

  // partner-equation residual variance
  switch (mech) {
    case Mechanism::A: {
      // full-sample OLS of the partner on adjusters, df N - (p-1)
      const Eigen::MatrixXd x2d = adjuster_design(data, all, n_rows);
      const OlsFit ols2 = ols_fit(x2d, column_subset(data, data.partner, all, n_rows));
      sigma2_sq_ols_ = ols2.residual_variance;
      rcond_selection_design_ = rcond_crossprod(x2d);
      break;
    }
    case Mechanism::B: {
      // complete-case OLS of the partner on adjusters, df n - p
      const Eigen::MatrixXd x2d = adjuster_design(data, complete, n_);
      const OlsFit ols2 = ols_fit(x2d, column_subset(data, data.partner, complete, n_));
      if (n_ - p_ <= 0) throw insufficient_data_error("n - p must be positive");
      sigma2_sq_ols_ = ols2.rss / static_cast<double>(n_ - p_);
      rcond_selection_design_ = rcond_crossprod(x2d);
      break;
    }
    case Mechanism::C: {
      if (n2_ <= p_)
        throw insufficient_data_error("fewer partner-observed cases than variables (n2 = " +
                                      std::to_string(n2_) + ", p = " + std::to_string(p_) +
                                      ")");
      const Eigen::MatrixXd x2d = adjuster_design(data, z2, n2_);
      const OlsFit ols2 = ols_fit(x2d, column_subset(data, data.partner, z2, n2_));
      df2_ = n2_ - p_;
      sigma2_sq_ols_ = ols2.rss / static_cast<double>(df2_);
      rcond_selection_design_ = rcond_crossprod(x2d);

      const Eigen::VectorXd w = -(x2d * probit2_->delta_hat);
      Eigen::VectorXd lam_w(w.size());
      for (int i = 0; i < w.size(); ++i) lam_w[i] = inverse_mills(w[i]);
      w_lam_ = w.dot(lam_w);
      const Eigen::VectorXd xt_lamw = x2d.transpose() * lam_w;
      lamw_p_lamw_ = xt_lamw.dot(ols2.xtx_inv * xt_lamw);
      break;
    }
  }
}

double MnarAnalysis::sigma2_sq_at(double gamma2) const {
  if (mech_ != Mechanism::C) return sigma2_sq_ols_;
  return sigma_sq_from_scalars(sigma2_sq_ols_, gamma2, w_lam_ - lamw_p_lamw_, df2_);
}

CorrectedEstimates MnarAnalysis::at(double gamma1, double gamma2) const {
  check_gamma(gamma1, "gamma1");
  check_gamma(gamma2, "gamma2");
  if (mech_ != Mechanism::C && gamma2 != 0.0)
    throw error("gamma2 is only meaningful under mechanism C");

  CorrectedEstimates est;
  est.mechanism = mech_;
  est.gamma1 = gamma1;
  est.gamma2 = gamma2;
  est.n_complete = n_;
  est.n2 = mech_ == Mechanism::C ? n2_ : 0;

  est.sigma1_sq_hat =
      sigma_sq_from_scalars(sigma1_sq_ols_, gamma1, u_lam_ - lam_p_lam_, df1_);
  if (!(est.sigma1_sq_hat > 0.0))
    throw numerical_error("corrected sigma1_sq is nonpositive (" +
                          std::to_string(est.sigma1_sq_hat) + ")");
  est.sigma2_sq_hat = sigma2_sq_at(gamma2);
  if (!(est.sigma2_sq_hat > 0.0))
    throw numerical_error("corrected sigma2_sq is nonpositive (" +
                          std::to_string(est.sigma2_sq_hat) + ")");
  est.beta2_hat = beta2_from_scalars(beta2_ols_, gamma1, std::sqrt(est.sigma1_sq_hat),
                                     beta2_corr_coef_);
  est.rho_hat = rho_from_components(est.beta2_hat, est.sigma1_sq_hat, est.sigma2_sq_hat);
  est.se_hat = se_from_scalars(est.sigma1_sq_hat, gamma1, u_lam_, lam_lam_, xtx_inv22_,
                               est.beta2_hat, est.sigma2_sq_hat, n_);
  return est;
}

RegularityReport MnarAnalysis::regularity(double gamma1, double gamma2) const {
  RegularityReport report;
  auto add = [&](std::string name, bool pass, double diag) {
    report.checks.push_back({std::move(name), pass, diag});
  };

  const double var_floor = std::min(sigma1_sq_ols_, sigma2_sq_ols_);
  add("finite_moments", std::isfinite(var_floor) && var_floor > 0.0, var_floor);
  add("target_design_rank", rcond_target_design_ > kRcondThreshold, rcond_target_design_);
  add(mech_ == Mechanism::C ? "partner_design_rank" : "selection_design_rank",
      rcond_selection_design_ > kRcondThreshold, rcond_selection_design_);

  const double denom1 =
      1.0 + gamma1 * gamma1 * (u_lam_ - lam_p_lam_) / static_cast<double>(df1_);
  const bool pass1 = std::fabs(denom1) > kDenominatorThreshold;
  add(mech_ == Mechanism::C ? "variance_correction_denominator_u"
                            : "variance_correction_denominator",
      pass1, std::fabs(denom1));

  double sigma2_sq = sigma2_sq_ols_;
  if (mech_ == Mechanism::C) {
    const double denom2 =
        1.0 + gamma2 * gamma2 * (w_lam_ - lamw_p_lamw_) / static_cast<double>(df2_);
    const bool pass2 = std::fabs(denom2) > kDenominatorThreshold;
    add("variance_correction_denominator_w", pass2, std::fabs(denom2));
    sigma2_sq = pass2 ? sigma2_sq_ols_ / denom2 : kNaN;
  }

  const double sigma1_sq = pass1 ? sigma1_sq_ols_ / denom1 : kNaN;
  const double beta2 =
      sigma1_sq > 0.0
          ? beta2_from_scalars(beta2_ols_, gamma1, std::sqrt(sigma1_sq), beta2_corr_coef_)
          : kNaN;
  const double diag5 = std::isnan(beta2) ? kNaN : std::max(std::fabs(beta2), sigma1_sq);
  add("rho_denominator",
      sigma2_sq != 0.0 && !std::isnan(sigma2_sq) && diag5 > 0.0, diag5);
  return report;
}

CorrectedEstimates estimate_mdm_a(const Dataset& data, double gamma) {
  return MnarAnalysis(data, Mechanism::A).at(gamma);
}

CorrectedEstimates estimate_mdm_b(const Dataset& data, double gamma) {
  return MnarAnalysis(data, Mechanism::B).at(gamma);
}

CorrectedEstimates estimate_mdm_c(const Dataset& data, double gamma1, double gamma2) {
  return MnarAnalysis(data, Mechanism::C).at(gamma1, gamma2);
}

RegularityReport validate_regularity(const Dataset& data, Mechanism mech, double gamma1,
                                     double gamma2) {
  return MnarAnalysis(data, mech).regularity(gamma1, gamma2);
}

}  // namespace mnarcor
