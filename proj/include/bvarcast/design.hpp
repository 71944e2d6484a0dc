#ifndef BVARCAST_DESIGN_HPP
#define BVARCAST_DESIGN_HPP

#include <Eigen/Dense>

#include "bvarcast/market_data.hpp"
#include "bvarcast/model_spec.hpp"

namespace bvarcast {

struct DesignMatrices {
  MatrixXd y; // (T - p) x N responses
  MatrixXd x; // (T - p) x K regressor rows
};

// Stacked regression layout. Row t of X holds lags 1..p of every series in
// series-major order (all lags of series 1, then series 2, ...) followed by
// the 8 predictor returns at lag one when a predictor panel is supplied.
// No intercept column: the models run mean-through-lags.
inline DesignMatrices build_design(const ReturnPanel& panel, int lags,
                                   const PredictorPanel* predictors = nullptr) {
  const Eigen::Index t_len = panel.values.rows();
  const Eigen::Index n = panel.values.cols();
  require(lags >= 1, "build_design: lags must be >= 1");
  const Eigen::Index n_pred = predictors ? predictors->values.cols() : 0;
  const Eigen::Index k = n * lags + n_pred;
  require(t_len > lags + k, "build_design: sample too short for the regressor count");
  if (predictors) {
    require(predictors->dates.size() == panel.dates.size(),
            "build_design: predictor panel length differs from return panel");
    for (size_t i = 0; i < panel.dates.size(); ++i)
      if (predictors->dates[i] != panel.dates[i])
        fail("build_design: predictor dates misaligned at " + panel.dates[i].str());
  }

  DesignMatrices d;
  d.y.resize(t_len - lags, n);
  d.x.resize(t_len - lags, k);
  for (Eigen::Index t = lags; t < t_len; ++t) {
    const Eigen::Index r = t - lags;
    d.y.row(r) = panel.values.row(t);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index l = 1; l <= lags; ++l)
        d.x(r, j * lags + (l - 1)) = panel.values(t - l, j);
    if (n_pred > 0) d.x.row(r).tail(n_pred) = predictors->values.row(t - 1);
  }
  return d;
}

// the regressor row that generates the one-step-ahead response
inline VectorXd design_row_for_next(const MatrixXd& recent_rows, int lags,
                                    const VectorXd& predictor_row) {
  const Eigen::Index n = recent_rows.cols();
  require(recent_rows.rows() >= lags, "design_row_for_next: need p recent rows");
  VectorXd x(n * lags + predictor_row.size());
  const Eigen::Index last = recent_rows.rows() - 1;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index l = 1; l <= lags; ++l)
      x(j * lags + (l - 1)) = recent_rows(last - (l - 1), j);
  if (predictor_row.size() > 0) x.tail(predictor_row.size()) = predictor_row;
  return x;
}

namespace detail {

// univariate AR(p) least-squares residual variance, used for prior scaling
inline double ar_residual_variance(const VectorXd& series, int lags) {
  const Eigen::Index t_len = series.size();
  require(t_len > 2 * lags + 2, "ar_residual_variance: series too short");
  const Eigen::Index rows = t_len - lags;
  MatrixXd x(rows, lags);
  VectorXd y(rows);
  for (Eigen::Index t = lags; t < t_len; ++t) {
    y(t - lags) = series(t);
    for (int l = 1; l <= lags; ++l) x(t - lags, l - 1) = series(t - l);
  }
  VectorXd coef = (x.transpose() * x).ldlt().solve(x.transpose() * y);
  double rss = (y - x * coef).squaredNorm();
  return rss / static_cast<double>(rows - lags);
}

} // namespace detail

struct PriorMoments {
  VectorXd mean;     // N*K, equation-major
  VectorXd variance; // diagonal prior covariance
};

// Minnesota-style moments for the stacked coefficient vector.
// Scale factors sigma_i come from univariate AR(p) residual variances of
// each column (endogenous and predictor alike).
inline PriorMoments minnesota_moments(const MinnesotaHyper& hyper, const ReturnPanel& panel,
                                      const ModelSpec& spec,
                                      const PredictorPanel* predictors = nullptr) {
  hyper.validate();
  const Eigen::Index n = panel.values.cols();
  const int p = spec.lags;
  const Eigen::Index n_pred =
      (spec.family == ModelFamily::VARX && predictors) ? predictors->values.cols() : 0;
  const Eigen::Index k = n * p + n_pred;

  VectorXd sigma(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double v = detail::ar_residual_variance(panel.values.col(i), p);
    if (!(v > 0.0)) fail("minnesota_moments: zero residual variance for " + panel.names[i]);
    sigma(i) = std::sqrt(v);
  }
  VectorXd sigma_w(n_pred);
  for (Eigen::Index j = 0; j < n_pred; ++j) {
    double v = detail::ar_residual_variance(predictors->values.col(j), p);
    if (!(v > 0.0))
      fail("minnesota_moments: zero residual variance for predictor " + predictors->names[j]);
    sigma_w(j) = std::sqrt(v);
  }

  PriorMoments out;
  out.mean = VectorXd::Zero(n * k);
  out.variance.resize(n * k);
  for (Eigen::Index eq = 0; eq < n; ++eq) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (int l = 1; l <= p; ++l) {
        double sd = hyper.lambda1 / std::pow(static_cast<double>(l), hyper.lambda3);
        if (j != eq) sd *= hyper.lambda2 * sigma(eq) / sigma(j);
        out.variance(eq * k + j * p + (l - 1)) = sd * sd;
        if (j == eq && l == 1) out.mean(eq * k + j * p) = hyper.own_first_lag_mean;
      }
    }
    for (Eigen::Index j = 0; j < n_pred; ++j) {
      double sd = hyper.lambda4 * sigma(eq) / sigma_w(j);
      out.variance(eq * k + n * p + j) = sd * sd;
    }
  }
  return out;
}

// Least-squares VAR fit per lag order on the common sample, scored by
// BIC = T log det(Sigma_hat) + k log T. Selection is left to the caller.
inline VectorXd bic_lag_scan(const ReturnPanel& panel, int max_p) {
  require(max_p >= 1, "bic_lag_scan: max_p must be >= 1");
  const Eigen::Index t_len = panel.values.rows();
  const Eigen::Index n = panel.values.cols();
  require(t_len > max_p * n + max_p, "bic_lag_scan: sample too short for max_p");

  const Eigen::Index rows = t_len - max_p; // common sample across lag orders
  VectorXd bic(max_p);
  MatrixXd y(rows, n);
  for (Eigen::Index t = max_p; t < t_len; ++t) y.row(t - max_p) = panel.values.row(t);

  for (int p = 1; p <= max_p; ++p) {
    MatrixXd x(rows, n * p);
    for (Eigen::Index t = max_p; t < t_len; ++t)
      for (Eigen::Index j = 0; j < n; ++j)
        for (int l = 1; l <= p; ++l) x(t - max_p, j * p + (l - 1)) = panel.values(t - l, j);
    MatrixXd coef = (x.transpose() * x).ldlt().solve(x.transpose() * y);
    MatrixXd resid = y - x * coef;
    MatrixXd s = resid.transpose() * resid / static_cast<double>(rows);
    double log_det = cholesky_lower(symmetrized(s)).diagonal().array().log().sum() * 2.0;
    double k_params = static_cast<double>(n * n * p);
    bic(p - 1) = static_cast<double>(rows) * log_det +
                 k_params * std::log(static_cast<double>(rows));
  }
  return bic;
}

} // namespace bvarcast

#endif
