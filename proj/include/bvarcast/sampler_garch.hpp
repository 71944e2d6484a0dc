#ifndef BVARCAST_SAMPLER_GARCH_HPP
#define BVARCAST_SAMPLER_GARCH_HPP

#include "bvarcast/sampler_detail.hpp"

namespace bvarcast {

namespace detail {

struct GarchParams {
  double omega, b, g;
  bool valid() const { return omega > 0.0 && b >= 0.0 && g >= 0.0 && b + g < 1.0; }
};

// Prior over one series' GARCH parameters: flat in omega > 0, exponential
// shrinkage exp(-rate * (b + g)) on the stationarity region. Without the
// shrinkage the likelihood is flat along omega / (1 - g) = const when the
// data carry no ARCH effect, and g would wander.
constexpr double kGarchPersistencePriorRate = 8.0;

inline double garch_log_prior(const GarchParams& p) {
  return -kGarchPersistencePriorRate * (p.b + p.g);
}

// conditional variance recursion, seeded with the sample variance
inline VectorXd garch_path(const VectorXd& eps, const GarchParams& p) {
  const Eigen::Index t_len = eps.size();
  VectorXd h(t_len);
  h(0) = (eps.array() - eps.mean()).square().sum() / static_cast<double>(t_len - 1);
  for (Eigen::Index t = 1; t < t_len; ++t)
    h(t) = p.omega + p.b * eps(t - 1) * eps(t - 1) + p.g * h(t - 1);
  return h;
}

// joint Gaussian log likelihood under Sigma_t = D_t R D_t (constant R)
inline double garch_loglik(const MatrixXd& resid, const MatrixXd& h, const MatrixXd& r_inv,
                           double log_det_r) {
  const Eigen::Index t_len = resid.rows();
  MatrixXd etilde = resid.array() / h.array().sqrt();
  double quad = (etilde * r_inv).cwiseProduct(etilde).sum();
  double log_h = h.array().log().sum();
  return -0.5 * (log_h + quad + static_cast<double>(t_len) * log_det_r);
}

struct MhScale {
  double value;
  int accepted = 0, proposed = 0;
  // target 25-40% acceptance while adapting
  void adapt() {
    if (proposed < 40) return;
    double rate = static_cast<double>(accepted) / proposed;
    if (rate < 0.25) value *= 0.8;
    else if (rate > 0.40) value *= 1.25;
    accepted = proposed = 0;
  }
};

} // namespace detail

// Metropolis-within-Gibbs sampler for the constant-conditional-correlation
// GARCH(1,1) model. Coefficients move by GLS given the h paths; each
// series' (omega, b, g) and the correlation matrix R move by random-walk
// Metropolis, with proposal scales adapted during burn-in and frozen after.
inline PosteriorDrawSet sample_bvar_garch(const ModelSpec& spec, const MatrixXd& y,
                                          const MatrixXd& x, const PriorMoments& prior,
                                          Rng& rng) {
  spec.validate();
  const Eigen::Index t_len = y.rows(), n = y.cols(), k = x.cols();
  require(t_len == x.rows(), "sample_bvar_garch: Y/X row mismatch");
  require(prior.mean.size() == n * k, "sample_bvar_garch: prior size mismatch");

  VectorXd beta = detail::ols_stacked(y, x);
  MatrixXd resid = detail::residuals(y, x, beta);

  std::vector<detail::GarchParams> params(static_cast<size_t>(n));
  MatrixXd h(t_len, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double var_i = (resid.col(i).array() - resid.col(i).mean()).square().sum() /
                   static_cast<double>(t_len - 1);
    params[static_cast<size_t>(i)] = {0.10 * var_i, 0.05, 0.85};
    h.col(i) = detail::garch_path(resid.col(i), params[static_cast<size_t>(i)]);
  }

  // start R at the residual correlation matrix
  MatrixXd corr(n, n);
  {
    MatrixXd c = resid.transpose() * resid / static_cast<double>(t_len);
    VectorXd d = c.diagonal().array().sqrt();
    corr = c.array() / (d * d.transpose()).array();
    corr = symmetrized(corr);
    corr.diagonal().setOnes();
  }
  MatrixXd corr_chol = cholesky_lower(corr + 1e-10 * MatrixXd::Identity(n, n));
  MatrixXd r_inv = spd_inverse(corr_chol);
  double log_det_r = log_det_from_chol(corr_chol);

  // proposals live in (log unconditional variance, b, g) space, where the
  // no-ARCH likelihood ridge is axis-aligned
  std::vector<detail::MhScale> var_scale(static_cast<size_t>(n), detail::MhScale{0.10});
  std::vector<detail::MhScale> coef_scale(static_cast<size_t>(n), detail::MhScale{0.05});
  detail::MhScale corr_scale{0.02};
  long post_burn_accepted = 0, post_burn_proposed = 0;

  PosteriorDrawSet out;
  out.family = spec.family;
  out.volatility = VolatilityScheme::GARCH;
  out.n_series = static_cast<int>(n);
  out.n_regressors = static_cast<int>(k);
  out.lags = spec.lags;
  out.beta.resize(spec.retained(), n * k);
  out.garch_omega.resize(spec.retained(), n);
  out.garch_b.resize(spec.retained(), n);
  out.garch_g.resize(spec.retained(), n);
  out.garch_corr.reserve(spec.retained());
  out.garch_h_last.resize(spec.retained(), n);
  out.garch_eps_last.resize(spec.retained(), n);
  out.garch_h_path_mean = MatrixXd::Zero(t_len, n);

  double loglik = detail::garch_loglik(resid, h, r_inv, log_det_r);

  for (int iter = 0; iter < spec.n_iter; ++iter) {
    const bool adapting = iter < spec.n_burn;

    // (i) coefficients given the variance paths and R
    MatrixXd h_inv_sqrt = h.array().rsqrt();
    beta = detail::draw_beta_timevarying(rng, prior, y, x, [&](Eigen::Index t) {
      MatrixXd d_inv = h_inv_sqrt.row(t).asDiagonal();
      return MatrixXd(d_inv * r_inv * d_inv);
    });
    resid = detail::residuals(y, x, beta);
    for (Eigen::Index i = 0; i < n; ++i)
      h.col(i) = detail::garch_path(resid.col(i), params[static_cast<size_t>(i)]);
    loglik = detail::garch_loglik(resid, h, r_inv, log_det_r);

    // (ii) per-series GARCH parameters by random-walk Metropolis
    for (Eigen::Index i = 0; i < n; ++i) {
      auto& sc = param_scale[static_cast<size_t>(i)];
      auto& cur = params[static_cast<size_t>(i)];
      detail::GarchParams cand{cur.omega + sc.value * rng.normal(),
                               cur.b + 0.5 * sc.value * rng.normal(),
                               cur.g + 0.5 * sc.value * rng.normal()};
      ++sc.proposed;
      if (!adapting) ++post_burn_proposed;
      if (cand.valid()) {
        MatrixXd h_cand = h;
        h_cand.col(i) = detail::garch_path(resid.col(i), cand);
        double cand_ll = detail::garch_loglik(resid, h_cand, r_inv, log_det_r);
        double log_ratio =
            cand_ll - loglik + detail::garch_log_prior(cand) - detail::garch_log_prior(cur);
        if (std::log(rng.uniform()) < log_ratio) {
          cur = cand;
          h = std::move(h_cand);
          loglik = cand_ll;
          ++sc.accepted;
          if (!adapting) ++post_burn_accepted;
        }
      }
      if (adapting) sc.adapt();
    }

    // (iii) constant conditional correlation matrix
    {
      MatrixXd cand = corr;
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < i; ++j) {
          double v = cand(i, j) + corr_scale.value * rng.normal();
          cand(i, j) = cand(j, i) = v;
        }
      ++corr_scale.proposed;
      if (!adapting) ++post_burn_proposed;
      bool ok = cand.array().abs().maxCoeff() <= 1.0;
      if (ok) {
        try {
          MatrixXd cand_chol = cholesky_lower(cand);
          MatrixXd cand_inv = spd_inverse(cand_chol);
          double cand_logdet = log_det_from_chol(cand_chol);
          double cand_ll = detail::garch_loglik(resid, h, cand_inv, cand_logdet);
          if (std::log(rng.uniform()) < cand_ll - loglik) {
            corr = cand;
            corr_chol = std::move(cand_chol);
            r_inv = std::move(cand_inv);
            log_det_r = cand_logdet;
            loglik = cand_ll;
            ++corr_scale.accepted;
            if (!adapting) ++post_burn_accepted;
          }
        } catch (const Error&) {
          // proposal left the positive-definite region
        }
      }
      if (adapting) corr_scale.adapt();
    }

    if (iter >= spec.n_burn) {
      int d = iter - spec.n_burn;
      out.beta.row(d) = beta;
      for (Eigen::Index i = 0; i < n; ++i) {
        out.garch_omega(d, i) = params[static_cast<size_t>(i)].omega;
        out.garch_b(d, i) = params[static_cast<size_t>(i)].b;
        out.garch_g(d, i) = params[static_cast<size_t>(i)].g;
      }
      out.garch_corr.push_back(corr);
      out.garch_h_last.row(d) = h.row(t_len - 1);
      out.garch_eps_last.row(d) = resid.row(t_len - 1);
      out.garch_h_path_mean += h;
      if (spec.keep_volatility_paths) out.garch_h_paths.push_back(h);
    }
  }
  out.garch_h_path_mean /= static_cast<double>(spec.retained());
  out.garch_acceptance = post_burn_proposed > 0
                             ? static_cast<double>(post_burn_accepted) / post_burn_proposed
                             : 1.0;
  if (out.garch_acceptance < 0.01)
    out.warnings.push_back("garch: Metropolis acceptance below 1% after burn-in");
  return out;
}

} // namespace bvarcast

#endif
