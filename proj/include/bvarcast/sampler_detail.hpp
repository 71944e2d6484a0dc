#ifndef BVARCAST_SAMPLER_DETAIL_HPP
#define BVARCAST_SAMPLER_DETAIL_HPP

#include <Eigen/Dense>

#include "bvarcast/design.hpp"
#include "bvarcast/distributions.hpp"
#include "bvarcast/model_spec.hpp"

namespace bvarcast {
namespace detail {

inline void add_kronecker(MatrixXd& target, const MatrixXd& a, const MatrixXd& b) {
  const Eigen::Index n = a.rows(), k = b.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      target.block(i * k, j * k, k, k).noalias() += a(i, j) * b;
}

// Draw the stacked coefficient vector from N(mean, P^{-1}) where
// P = prior precision + likelihood precision, rhs = P * mean.
inline VectorXd draw_beta_from_precision(Rng& rng, MatrixXd& precision, const VectorXd& rhs) {
  MatrixXd l;
  try {
    l = cholesky_lower(symmetrized(precision), 1e-6);
  } catch (const Error&) {
    fail("sampler: singular posterior precision for beta");
  }
  VectorXd mean = spd_solve(l, rhs);
  VectorXd z = sample_standard_normal(rng, rhs.size());
  return mean + l.transpose().triangularView<Eigen::Upper>().solve(z);
}

// beta | Sigma for constant volatility: likelihood precision is
// Sigma^{-1} (x) X'X under the equation-major stacking.
inline VectorXd draw_beta_const(Rng& rng, const PriorMoments& prior, const MatrixXd& xtx,
                                const MatrixXd& xty, const MatrixXd& sigma_inv) {
  const Eigen::Index n = sigma_inv.rows(), k = xtx.rows();
  MatrixXd precision = MatrixXd::Zero(n * k, n * k);
  precision.diagonal() = prior.variance.cwiseInverse();
  add_kronecker(precision, sigma_inv, xtx);
  VectorXd rhs = prior.mean.cwiseQuotient(prior.variance);
  MatrixXd xty_w = xty * sigma_inv; // column i belongs to equation i
  for (Eigen::Index i = 0; i < n; ++i) rhs.segment(i * k, k) += xty_w.col(i);
  return draw_beta_from_precision(rng, precision, rhs);
}

// beta | {Sigma_t} for time-varying volatility; sigma_inv_at(t) supplies
// the per-period innovation precision.
template <typename SigmaInvFn>
inline VectorXd draw_beta_timevarying(Rng& rng, const PriorMoments& prior, const MatrixXd& y,
                                      const MatrixXd& x, SigmaInvFn&& sigma_inv_at) {
  const Eigen::Index t_len = y.rows(), n = y.cols(), k = x.cols();
  MatrixXd precision = MatrixXd::Zero(n * k, n * k);
  precision.diagonal() = prior.variance.cwiseInverse();
  VectorXd rhs = prior.mean.cwiseQuotient(prior.variance);

  MatrixXd xxt(k, k);
  for (Eigen::Index t = 0; t < t_len; ++t) {
    const MatrixXd s_inv = sigma_inv_at(t);
    xxt.noalias() = x.row(t).transpose() * x.row(t);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i; j < n; ++j)
        precision.block(i * k, j * k, k, k).noalias() += s_inv(i, j) * xxt;
    VectorXd v = s_inv * y.row(t).transpose();
    for (Eigen::Index i = 0; i < n; ++i)
      rhs.segment(i * k, k).noalias() += v(i) * x.row(t).transpose();
  }
  for (Eigen::Index i = 1; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      precision.block(i * k, j * k, k, k) = precision.block(j * k, i * k, k, k).transpose();
  return draw_beta_from_precision(rng, precision, rhs);
}

inline MatrixXd residuals(const MatrixXd& y, const MatrixXd& x, const VectorXd& beta) {
  const Eigen::Index n = y.cols(), k = x.cols();
  MatrixXd pi(n, k);
  for (Eigen::Index i = 0; i < n; ++i) pi.row(i) = beta.segment(i * k, k);
  return y - x * pi.transpose();
}

inline VectorXd ols_stacked(const MatrixXd& y, const MatrixXd& x, double ridge = 1e-8) {
  const Eigen::Index n = y.cols(), k = x.cols();
  MatrixXd xtx = x.transpose() * x + ridge * MatrixXd::Identity(k, k);
  MatrixXd coef = xtx.ldlt().solve(x.transpose() * y); // k x n
  VectorXd beta(n * k);
  for (Eigen::Index i = 0; i < n; ++i) beta.segment(i * k, k) = coef.col(i);
  return beta;
}

} // namespace detail
} // namespace bvarcast

#endif
