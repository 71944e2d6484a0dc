#ifndef BVARCAST_DISTRIBUTIONS_HPP
#define BVARCAST_DISTRIBUTIONS_HPP

#include <Eigen/Dense>

#include "bvarcast/linalg.hpp"
#include "bvarcast/rng.hpp"

namespace bvarcast {

inline VectorXd sample_standard_normal(Rng& rng, Eigen::Index n) {
  VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = rng.normal();
  return z;
}

// N(mean, cov) draw; cov must be SPD.
inline VectorXd sample_mvn(Rng& rng, const VectorXd& mean, const MatrixXd& cov) {
  require(mean.size() == cov.rows(), "sample_mvn: dimension mismatch");
  MatrixXd l = cholesky_lower(cov);
  return mean + l * sample_standard_normal(rng, mean.size());
}

// draw given a precomputed lower Cholesky factor of the covariance
inline VectorXd sample_mvn_chol(Rng& rng, const VectorXd& mean, const MatrixXd& cov_chol_l) {
  return mean + cov_chol_l * sample_standard_normal(rng, mean.size());
}

// Wishart(dof, scale) via Bartlett decomposition; E[W] = dof * scale.
inline MatrixXd sample_wishart(Rng& rng, const MatrixXd& scale, double dof) {
  const auto n = scale.rows();
  require(dof > static_cast<double>(n) - 1.0, "sample_wishart: dof too small");
  MatrixXd l = cholesky_lower(scale);
  MatrixXd a = MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = std::sqrt(sample_chi_squared(rng, dof - static_cast<double>(i)));
    for (Eigen::Index j = 0; j < i; ++j) a(i, j) = rng.normal();
  }
  MatrixXd la = l * a;
  return la * la.transpose();
}

// Inverse-Wishart(scale, dof); E[X] = scale / (dof - dim - 1) for dof > dim + 1.
inline MatrixXd sample_inverse_wishart(Rng& rng, const MatrixXd& scale, double dof) {
  const auto n = scale.rows();
  require(dof > static_cast<double>(n) - 1.0, "sample_inverse_wishart: dof must exceed dim - 1");
  MatrixXd scale_chol = cholesky_lower(scale);
  MatrixXd w = sample_wishart(rng, spd_inverse(scale_chol), dof);
  MatrixXd w_chol = cholesky_lower(symmetrized(w));
  return symmetrized(spd_inverse(w_chol));
}

} // namespace bvarcast

#endif
