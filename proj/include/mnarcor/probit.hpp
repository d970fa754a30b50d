#ifndef MNARCOR_PROBIT_HPP
#define MNARCOR_PROBIT_HPP

#include <Eigen/Dense>
#include <vector>

namespace mnarcor {

struct ProbitFit {
  Eigen::VectorXd delta_hat;       // ML coefficients
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  // u_i = -x_i' delta_hat over rows with z = true, in row order
  Eigen::VectorXd linear_index_u;
};

// Maximum likelihood probit of z on the design via Newton-Raphson with
// step halving (the log-likelihood is globally concave). Converges when
// the gradient max-norm drops below 1e-8, then keeps polishing until the
// Newton step itself is negligible so the returned coefficients are at
// fixed point accuracy. The solve runs on internally standardized
// columns; coefficients are mapped back to the original scales.
//
// Throws degenerate_error when z is all-true or all-false, design_error
// on rank deficiency and separation_error when a standardized
// coefficient exceeds 30 in magnitude.
ProbitFit fit_probit(const Eigen::MatrixXd& design, const std::vector<bool>& z);

// Elementwise inverse Mills ratio over fit.linear_index_u.
// Requires fit.converged.
Eigen::VectorXd mills_vector(const ProbitFit& fit);

}  // namespace mnarcor

#endif
