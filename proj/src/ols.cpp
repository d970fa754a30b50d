#include "mnarcor/ols.hpp"

#include <cmath>

#include "mnarcor/errors.hpp"

namespace mnarcor {

OlsFit ols_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
  const int n = static_cast<int>(design.rows());
  const int k = static_cast<int>(design.cols());
  if (y.size() != n) throw design_error("ols_fit: y length does not match design rows");
  if (n <= k) throw insufficient_data_error("ols_fit: need more rows than columns");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  // column-pivoted QR exposes rank through the diagonal of R
  const double rmax = std::fabs(qr.matrixR()(0, 0));
  const double rmin = std::fabs(qr.matrixR()(k - 1, k - 1));
  if (rmax == 0.0 || rmin / rmax < 1e-12)
    throw design_error("ols_fit: design matrix is rank deficient");

  OlsFit fit;
  fit.n = n;
  fit.k = k;
  fit.coef = qr.solve(y);
  const Eigen::VectorXd resid = y - design * fit.coef;
  fit.rss = resid.squaredNorm();
  fit.residual_variance = fit.rss / static_cast<double>(n - k);

  // (X'X)^{-1} = P R^{-1} R^{-T} P^T from the pivoted factorization
  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd rinv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  const Eigen::MatrixXd perm = qr.colsPermutation();
  fit.xtx_inv = perm * (rinv * rinv.transpose()) * perm.transpose();
  return fit;
}

}  // namespace mnarcor
