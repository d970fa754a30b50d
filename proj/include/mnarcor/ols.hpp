#ifndef MNARCOR_OLS_HPP
#define MNARCOR_OLS_HPP

#include <Eigen/Dense>

namespace mnarcor {

struct OlsFit {
  Eigen::VectorXd coef;       // length k
  double residual_variance;   // rss / (n - k)
  double rss;                 // residual sum of squares
  int n;
  int k;
  Eigen::MatrixXd xtx_inv;    // (X'X)^{-1}, for the correction formulas
};

// Least squares via Householder QR; (X'X)^{-1} is recovered from the
// triangular factor so the fit never squares the condition number.
// Throws design_error on rank deficiency and insufficient_data_error
// when n <= k.
OlsFit ols_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& y);

}  // namespace mnarcor

#endif
