#ifndef BVARCAST_SAMPLER_SV_HPP
#define BVARCAST_SAMPLER_SV_HPP

#include "bvarcast/ffbs.hpp"
#include "bvarcast/sampler_detail.hpp"

namespace bvarcast {

namespace detail {

// grid sampler for the t degrees of freedom given the latent scales
inline double sample_dof_grid(Rng& rng, const VectorXd& w, int lo = 3, int hi = 40) {
  const double t_len = static_cast<double>(w.size());
  const double sum_log_w = w.array().log().sum();
  const double sum_w = w.sum();
  std::vector<double> logp(static_cast<size_t>(hi - lo + 1));
  double best = -std::numeric_limits<double>::infinity();
  for (int eta = lo; eta <= hi; ++eta) {
    double half = 0.5 * static_cast<double>(eta);
    double lp = t_len * (half * std::log(half) - std::lgamma(half)) +
                (half - 1.0) * sum_log_w - half * sum_w;
    logp[static_cast<size_t>(eta - lo)] = lp;
    best = std::max(best, lp);
  }
  double total = 0.0;
  for (auto& lp : logp) {
    lp = std::exp(lp - best);
    total += lp;
  }
  double u = rng.uniform() * total;
  for (size_t j = 0; j < logp.size(); ++j) {
    u -= logp[j];
    if (u <= 0.0) return static_cast<double>(lo + static_cast<int>(j));
  }
  return static_cast<double>(hi);
}

} // namespace detail

// Gibbs sampler for the stochastic-volatility model with triangular
// factorization A eps_t = Lambda_t^{1/2} z_t and random-walk log-variances.
// With `student_t` the shocks carry a per-period latent scale w_t that turns
// the Gaussian innovations into t(eta) ones.
inline PosteriorDrawSet sample_bvar_sv_impl(const ModelSpec& spec, const MatrixXd& y,
                                            const MatrixXd& x, const PriorMoments& prior,
                                            Rng& rng, bool student_t) {
  spec.validate();
  const Eigen::Index t_len = y.rows(), n = y.cols(), k = x.cols();
  require(t_len == x.rows(), "sample_bvar_sv: Y/X row mismatch");
  require(prior.mean.size() == n * k, "sample_bvar_sv: prior size mismatch");

  const MixtureTable& mixture = MixtureTable::log_chi_squared_1();
  const double log_offset = 1e-6;
  const double a_prior_var = 100.0; // free elements of A ~ N(0, 10^2)
  const MatrixXd phi_prior_scale = 0.01 * MatrixXd::Identity(n, n);
  const double phi_prior_dof = static_cast<double>(n) + 3.0;

  // initial state priors: scale-aware, variance 4
  std::vector<GaussianPrior> state_prior(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    double var_i = (y.col(i).array() - y.col(i).mean()).square().sum() /
                   static_cast<double>(t_len - 1);
    state_prior[static_cast<size_t>(i)] = {std::log(std::max(var_i, 1e-8)), 4.0};
  }

  VectorXd beta = detail::ols_stacked(y, x);
  MatrixXd resid = detail::residuals(y, x, beta);
  MatrixXd log_lambda(t_len, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double var_i = resid.col(i).squaredNorm() / static_cast<double>(t_len);
    log_lambda.col(i).setConstant(std::log(std::max(var_i, 1e-8)));
  }
  MatrixXd a = MatrixXd::Identity(n, n);
  MatrixXd phi = 0.01 * MatrixXd::Identity(n, n);
  VectorXd w = VectorXd::Ones(t_len);
  double eta = 10.0;

  PosteriorDrawSet out;
  out.family = spec.family;
  out.volatility = student_t ? VolatilityScheme::SVT : VolatilityScheme::SV;
  out.n_series = static_cast<int>(n);
  out.n_regressors = static_cast<int>(k);
  out.lags = spec.lags;
  out.beta.resize(spec.retained(), n * k);
  out.a_mat.reserve(spec.retained());
  out.phi.reserve(spec.retained());
  out.log_lambda_last.resize(spec.retained(), n);
  out.log_lambda_path_mean = MatrixXd::Zero(t_len, n);
  if (student_t) {
    out.eta.resize(spec.retained());
    out.w_scale_mean = MatrixXd::Zero(t_len, 1);
  }

  MatrixXd lam_inv(t_len, n);
  for (int iter = 0; iter < spec.n_iter; ++iter) {
    // (i) coefficients given volatility states
    lam_inv = (-log_lambda).array().exp();
    beta = detail::draw_beta_timevarying(rng, prior, y, x, [&](Eigen::Index t) {
      MatrixXd s_inv = a.transpose() * lam_inv.row(t).asDiagonal() * a;
      if (student_t) s_inv *= w(t);
      return s_inv;
    });
    resid = detail::residuals(y, x, beta);

    // (ii) free elements of A, equation by equation
    for (Eigen::Index i = 1; i < n; ++i) {
      MatrixXd z = -resid.leftCols(i); // e_it = z_t' a_i + u_it
      MatrixXd precision = MatrixXd::Identity(i, i) / a_prior_var;
      VectorXd rhs = VectorXd::Zero(i);
      for (Eigen::Index t = 0; t < t_len; ++t) {
        double weight = lam_inv(t, i) * (student_t ? w(t) : 1.0);
        precision.noalias() += weight * z.row(t).transpose() * z.row(t);
        rhs.noalias() += weight * resid(t, i) * z.row(t).transpose();
      }
      a.row(i).head(i) = detail::draw_beta_from_precision(rng, precision, rhs);
    }
    MatrixXd u = resid * a.transpose(); // orthogonalized shocks, u_it ~ N(0, lambda_it / w_t)

    // (iii) latent t scales and degrees of freedom
    if (student_t) {
      for (Eigen::Index t = 0; t < t_len; ++t) {
        double quad = (u.row(t).transpose().array().square() *
                       lam_inv.row(t).transpose().array()).sum();
        w(t) = sample_gamma(rng, 0.5 * (eta + static_cast<double>(n)), 0.5 * (eta + quad));
      }
      eta = detail::sample_dof_grid(rng, w);
    }

    // (iv) log-variance paths, one series at a time
    for (Eigen::Index i = 0; i < n; ++i) {
      VectorXd ystar(t_len);
      for (Eigen::Index t = 0; t < t_len; ++t) {
        double u2 = u(t, i) * u(t, i);
        if (student_t) u2 *= w(t);
        ystar(t) = std::log(u2 + log_offset);
      }
      log_lambda.col(i) = ffbs_log_volatility(rng, ystar, log_lambda.col(i), phi(i, i),
                                              mixture, state_prior[static_cast<size_t>(i)]);
    }

    // (v) innovation covariance of the log-variance walk
    MatrixXd incr = log_lambda.bottomRows(t_len - 1) - log_lambda.topRows(t_len - 1);
    MatrixXd scale = symmetrized(phi_prior_scale + incr.transpose() * incr);
    phi = sample_inverse_wishart(rng, scale, phi_prior_dof + static_cast<double>(t_len - 1));

    if (iter >= spec.n_burn) {
      int d = iter - spec.n_burn;
      out.beta.row(d) = beta;
      out.a_mat.push_back(a);
      out.phi.push_back(phi);
      out.log_lambda_last.row(d) = log_lambda.row(t_len - 1);
      out.log_lambda_path_mean += log_lambda;
      if (student_t) {
        out.eta(d) = eta;
        out.w_scale_mean += w;
      }
      if (spec.keep_volatility_paths) {
        out.log_lambda_paths.push_back(log_lambda);
        if (student_t) out.w_scale_paths.push_back(w);
      }
    }
  }
  out.log_lambda_path_mean /= static_cast<double>(spec.retained());
  if (student_t) out.w_scale_mean /= static_cast<double>(spec.retained());
  return out;
}

inline PosteriorDrawSet sample_bvar_sv(const ModelSpec& spec, const MatrixXd& y,
                                       const MatrixXd& x, const PriorMoments& prior, Rng& rng) {
  return sample_bvar_sv_impl(spec, y, x, prior, rng, false);
}

inline PosteriorDrawSet sample_bvar_svt(const ModelSpec& spec, const MatrixXd& y,
                                        const MatrixXd& x, const PriorMoments& prior, Rng& rng) {
  return sample_bvar_sv_impl(spec, y, x, prior, rng, true);
}

} // namespace bvarcast

#endif
