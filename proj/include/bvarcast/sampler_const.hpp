#ifndef BVARCAST_SAMPLER_CONST_HPP
#define BVARCAST_SAMPLER_CONST_HPP

#include "bvarcast/sampler_detail.hpp"

namespace bvarcast {

// Gibbs sampler for the constant-volatility model: beta | Sigma from the
// conditional normal blending GLS moments with the shrinkage prior, then
// Sigma | beta from an inverse-Wishart with prior (I_N, N + 2).
inline PosteriorDrawSet sample_bvar_const(const ModelSpec& spec, const MatrixXd& y,
                                          const MatrixXd& x, const PriorMoments& prior,
                                          Rng& rng) {
  spec.validate();
  const Eigen::Index t_len = y.rows(), n = y.cols(), k = x.cols();
  require(t_len == x.rows(), "sample_bvar_const: Y/X row mismatch");
  require(prior.mean.size() == n * k, "sample_bvar_const: prior size mismatch");

  const MatrixXd xtx = x.transpose() * x;
  const MatrixXd xty = x.transpose() * y;

  PosteriorDrawSet out;
  out.family = spec.family;
  out.volatility = VolatilityScheme::CONST;
  out.n_series = static_cast<int>(n);
  out.n_regressors = static_cast<int>(k);
  out.lags = spec.lags;
  out.beta.resize(spec.retained(), n * k);
  out.sigma.reserve(spec.retained());

  const MatrixXd sigma_prior_scale = MatrixXd::Identity(n, n);
  const double sigma_prior_dof = static_cast<double>(n) + 2.0;

  VectorXd beta = detail::ols_stacked(y, x);
  MatrixXd resid = detail::residuals(y, x, beta);
  MatrixXd sigma = symmetrized(resid.transpose() * resid / static_cast<double>(t_len)) +
                   1e-8 * MatrixXd::Identity(n, n);

  for (int iter = 0; iter < spec.n_iter; ++iter) {
    MatrixXd sigma_inv = spd_inverse(cholesky_lower(sigma));
    beta = detail::draw_beta_const(rng, prior, xtx, xty, sigma_inv);

    resid = detail::residuals(y, x, beta);
    MatrixXd scale = symmetrized(sigma_prior_scale + resid.transpose() * resid);
    sigma = sample_inverse_wishart(rng, scale, sigma_prior_dof + static_cast<double>(t_len));

    if (iter >= spec.n_burn) {
      int d = iter - spec.n_burn;
      out.beta.row(d) = beta;
      out.sigma.push_back(sigma);
    }
  }
  return out;
}

// Univariate Bayesian AR(p): scalar specialization with a normal /
// inverse-gamma Gibbs chain. Kept independent of the multivariate code
// path so the two can cross-check each other at N = 1.
inline PosteriorDrawSet sample_ar(const VectorXd& series, int lags, const ModelSpec& spec,
                                  Rng& rng) {
  spec.validate();
  const Eigen::Index t_len = series.size();
  require(t_len > 2 * lags + 2, "sample_ar: series too short");

  const Eigen::Index rows = t_len - lags;
  MatrixXd x(rows, lags);
  VectorXd y(rows);
  for (Eigen::Index t = lags; t < t_len; ++t) {
    y(t - lags) = series(t);
    for (int l = 1; l <= lags; ++l) x(t - lags, l - 1) = series(t - l);
  }

  // own-lag shrinkage only; same inverse-gamma prior the multivariate
  // sampler implies at N = 1 (IW(I_1, 3) == IG(3/2, 1/2))
  VectorXd prior_var(lags), prior_mean = VectorXd::Zero(lags);
  for (int l = 1; l <= lags; ++l) {
    double sd = spec.prior.lambda1 / std::pow(static_cast<double>(l), spec.prior.lambda3);
    prior_var(l - 1) = sd * sd;
  }
  prior_mean(0) = spec.prior.own_first_lag_mean;
  const double ig_shape0 = 1.5, ig_rate0 = 0.5;

  const MatrixXd xtx = x.transpose() * x;
  const VectorXd xty = x.transpose() * y;

  PosteriorDrawSet out;
  out.family = ModelFamily::AR;
  out.volatility = VolatilityScheme::CONST;
  out.n_series = 1;
  out.n_regressors = lags;
  out.lags = lags;
  out.beta.resize(spec.retained(), lags);
  out.sigma.reserve(spec.retained());

  VectorXd coef = (xtx + 1e-8 * MatrixXd::Identity(lags, lags)).ldlt().solve(xty);
  double sig2 = (y - x * coef).squaredNorm() / static_cast<double>(rows);
  if (!(sig2 > 0.0)) fail("sample_ar: zero residual variance");

  for (int iter = 0; iter < spec.n_iter; ++iter) {
    MatrixXd precision = xtx / sig2;
    precision.diagonal() += prior_var.cwiseInverse();
    VectorXd rhs = xty / sig2 + prior_mean.cwiseQuotient(prior_var);
    coef = detail::draw_beta_from_precision(rng, precision, rhs);

    double rss = (y - x * coef).squaredNorm();
    double shape = ig_shape0 + 0.5 * static_cast<double>(rows);
    double rate = ig_rate0 + 0.5 * rss;
    sig2 = 1.0 / sample_gamma(rng, shape, rate);

    if (iter >= spec.n_burn) {
      int d = iter - spec.n_burn;
      out.beta.row(d) = coef;
      out.sigma.push_back(MatrixXd::Constant(1, 1, sig2));
    }
  }
  return out;
}

} // namespace bvarcast

#endif
