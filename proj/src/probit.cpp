#include "mnarcor/probit.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mnarcor/errors.hpp"
#include "mnarcor/normal.hpp"

namespace mnarcor {

namespace {

constexpr double kGradTol = 1e-8;
constexpr double kSeparationThreshold = 30.0;
constexpr int kMaxIterations = 100;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// log Phi(t), stable in the far left tail via Phi(t) = phi(t)/lambda(-t).
double log_norm_cdf(double t) {
  if (t > -10.0) return std::log(norm_cdf(t));
  return -0.5 * t * t - kLogSqrt2Pi - std::log(inverse_mills(-t));
}

double loglik_at(const Eigen::VectorXd& t, const std::vector<bool>& z) {
  double ll = 0.0;
  for (int i = 0; i < t.size(); ++i)
    ll += z[i] ? log_norm_cdf(t[i]) : log_norm_cdf(-t[i]);
  return ll;
}

}  // namespace

ProbitFit fit_probit(const Eigen::MatrixXd& design, const std::vector<bool>& z) {
  const int n = static_cast<int>(design.rows());
  const int k = static_cast<int>(design.cols());
  if (static_cast<int>(z.size()) != n)
    throw design_error("fit_probit: z length does not match design rows");

  int n_true = 0;
  for (bool b : z) n_true += b;
  if (n_true == 0 || n_true == n)
    throw degenerate_error("fit_probit: z is all-" + std::string(n_true ? "true" : "false"));

  // center and scale non-constant columns for the solve (the raw design
  // can be badly conditioned, e.g. an intercept next to an age column);
  // coefficients are mapped back afterwards
  Eigen::VectorXd mean(k), sd(k);
  int const_col = -1;
  for (int j = 0; j < k; ++j) {
    mean[j] = design.col(j).mean();
    sd[j] = std::sqrt((design.col(j).array() - mean[j]).square().sum() /
                      static_cast<double>(n > 1 ? n - 1 : 1));
    if (sd[j] == 0.0 && const_col < 0 && design(0, j) != 0.0) const_col = j;
  }
  Eigen::MatrixXd x = design;
  for (int j = 0; j < k; ++j) {
    if (sd[j] > 0.0) {
      if (const_col >= 0) x.col(j).array() -= mean[j];
      x.col(j) /= sd[j];
    }
  }

  {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    const double rmax = std::fabs(qr.matrixR()(0, 0));
    const double rmin = std::fabs(qr.matrixR()(k - 1, k - 1));
    if (rmax == 0.0 || rmin / rmax < 1e-12)
      throw design_error("fit_probit: design matrix is rank deficient");
  }

  Eigen::VectorXd delta = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd t = x * delta;
  double ll = loglik_at(t, z);

  ProbitFit fit;
  double last_step = std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= kMaxIterations; ++iter) {
    Eigen::VectorXd score(n), weight(n);
    for (int i = 0; i < n; ++i) {
      if (z[i]) {
        const double lam = inverse_mills(-t[i]);  // phi(t)/Phi(t)
        score[i] = lam;
        weight[i] = lam * (lam + t[i]);
      } else {
        const double lam = inverse_mills(t[i]);   // phi(t)/Phi(-t)
        score[i] = -lam;
        weight[i] = lam * (lam - t[i]);
      }
    }
    const Eigen::VectorXd grad = x.transpose() * score;
    fit.iterations = iter;
    const bool small_grad = grad.lpNorm<Eigen::Infinity>() < kGradTol;
    // once the gradient is small keep polishing until the Newton step
    // itself is negligible, so delta_hat is at fixed-point accuracy
    if (small_grad &&
        last_step < 1e-12 * (1.0 + delta.lpNorm<Eigen::Infinity>()))
      break;

    const Eigen::MatrixXd hess =
        x.transpose() * weight.asDiagonal() * x;  // negated Hessian
    const Eigen::VectorXd step = hess.ldlt().solve(grad);

    // step halving keeps every accepted step an improvement; the slack
    // term lets full Newton steps through once changes in the
    // log-likelihood fall below its summation rounding noise
    const double ll_slack = 1e-12 * (1.0 + std::fabs(ll));
    double scale = 1.0;
    double ll_new = ll;
    Eigen::VectorXd delta_new = delta;
    for (int half = 0; half < 50; ++half) {
      delta_new = delta + scale * step;
      ll_new = loglik_at(x * delta_new, z);
      if (ll_new >= ll - ll_slack || small_grad) break;
      scale *= 0.5;
    }
    delta = delta_new;
    t = x * delta;
    ll = ll_new;
    last_step = (scale * step).lpNorm<Eigen::Infinity>();
  }

  // separation check: delta is on standardized predictors here
  for (int j = 0; j < k; ++j) {
    if (sd[j] > 0.0 && std::fabs(delta[j]) > kSeparationThreshold)
      throw separation_error("fit_probit: quasi-complete separation (coefficient " +
                             std::to_string(j) + " diverges)");
  }

  // map coefficients back to the original column scales
  Eigen::VectorXd delta_raw = delta;
  double shift = 0.0;
  for (int j = 0; j < k; ++j) {
    if (sd[j] > 0.0) {
      delta_raw[j] = delta[j] / sd[j];
      if (const_col >= 0) shift += delta[j] * mean[j] / sd[j];
    }
  }
  if (const_col >= 0) delta_raw[const_col] -= shift / design(0, const_col);

  fit.delta_hat = std::move(delta_raw);
  fit.loglik = ll;
  {
    Eigen::VectorXd score_final(n);
    for (int i = 0; i < n; ++i)
      score_final[i] = z[i] ? inverse_mills(-t[i]) : -inverse_mills(t[i]);
    fit.converged =
        (x.transpose() * score_final).lpNorm<Eigen::Infinity>() < kGradTol;
  }

  fit.linear_index_u.resize(n_true);
  for (int i = 0, j = 0; i < n; ++i)
    if (z[i]) fit.linear_index_u[j++] = -t[i];
  return fit;
}

Eigen::VectorXd mills_vector(const ProbitFit& fit) {
  if (!fit.converged) throw error("mills_vector: probit fit did not converge");
  Eigen::VectorXd out(fit.linear_index_u.size());
  for (int i = 0; i < out.size(); ++i) out[i] = inverse_mills(fit.linear_index_u[i]);
  return out;
}

}  // namespace mnarcor
