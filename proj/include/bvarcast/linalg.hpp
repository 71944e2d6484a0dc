#ifndef BVARCAST_LINALG_HPP
#define BVARCAST_LINALG_HPP

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "bvarcast/common.hpp"

namespace bvarcast {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Lower Cholesky factor of a symmetric positive-definite matrix.
// Hand-rolled so a non-PD input can report the failing pivot.
inline MatrixXd cholesky_lower(const MatrixXd& m, double sym_tol = 1e-10) {
  const auto n = m.rows();
  require(n > 0 && m.cols() == n, "cholesky_lower: matrix must be square");
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(m(i, j) - m(j, i)) > sym_tol * scale)
        fail("cholesky_lower: matrix not symmetric at (" + std::to_string(i) +
             "," + std::to_string(j) + ")");
  MatrixXd l = MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = m(j, j) - l.row(j).head(j).squaredNorm();
    if (!(d > 0.0) || !std::isfinite(d))
      fail("cholesky_lower: not positive definite (pivot " + std::to_string(j) + ")");
    l(j, j) = std::sqrt(d);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = m(i, j) - l.row(i).head(j).dot(l.row(j).head(j));
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

// 0.5 * (M + M'), applied before factoring accumulated quadratic forms
inline MatrixXd symmetrized(const MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

// Solve A x = b for SPD A via its lower Cholesky factor.
inline VectorXd spd_solve(const MatrixXd& chol_l, const VectorXd& b) {
  VectorXd y = chol_l.triangularView<Eigen::Lower>().solve(b);
  return chol_l.transpose().triangularView<Eigen::Upper>().solve(y);
}

inline MatrixXd spd_inverse(const MatrixXd& chol_l) {
  const auto n = chol_l.rows();
  MatrixXd linv = chol_l.triangularView<Eigen::Lower>().solve(MatrixXd::Identity(n, n));
  return linv.transpose() * linv;
}

inline double log_det_from_chol(const MatrixXd& chol_l) {
  return 2.0 * chol_l.diagonal().array().log().sum();
}

} // namespace bvarcast

#endif
