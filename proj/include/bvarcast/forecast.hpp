#ifndef BVARCAST_FORECAST_HPP
#define BVARCAST_FORECAST_HPP

#include "bvarcast/estimators.hpp"

namespace bvarcast {

struct RollingPlan {
  int window = 731; // estimation rows per fit
  int first_origin = 0;
  int n_origins = 0;
  int stride = 1;

  int origin_row(int i) const { return first_origin + i * stride; }

  void validate(Eigen::Index t_len) const {
    require(window >= 50, "RollingPlan: window must be >= 50 rows");
    require(n_origins >= 1 && stride >= 1 && first_origin >= 0, "RollingPlan: bad plan");
    int last = origin_row(n_origins - 1);
    require(last + window + 1 <= static_cast<int>(t_len),
            "RollingPlan: plan overruns the sample (need origin + window + 1 <= T)");
  }
};

// everything the one-step design row depends on
struct ForecastState {
  MatrixXd recent_rows;   // last p window rows, oldest first
  VectorXd predictor_row; // predictor values entering the t+1 design (may be empty)
};

// Predictive simulation output for one origin. `cond_var` holds the
// per-draw Gaussian variance, or the squared scale when `dof` is finite;
// dof = 0 marks a Gaussian conditional.
struct PredictiveDraws {
  MatrixXd draws;     // M x N
  MatrixXd cond_mean; // M x N
  MatrixXd cond_var;  // M x N
  VectorXd dof;       // M

  void resize(int m, int n) {
    draws.resize(m, n);
    cond_mean.resize(m, n);
    cond_var.resize(m, n);
    dof = VectorXd::Zero(m);
  }
};

// One-step-ahead predictive simulation for a single draw set.
inline PredictiveDraws one_step_predictive(const PosteriorDrawSet& draws,
                                           const ForecastState& state, Rng& rng) {
  const int m = draws.n_draws();
  const int n = draws.n_series;
  require(m > 0, "one_step_predictive: empty draw set");
  require(state.recent_rows.rows() >= draws.lags && state.recent_rows.cols() == n,
          "one_step_predictive: state lag rows do not match the model");
  VectorXd xrow = design_row_for_next(state.recent_rows, draws.lags, state.predictor_row);
  require(xrow.size() == draws.n_regressors,
          "one_step_predictive: state is missing the predictor values for this model");

  PredictiveDraws out;
  out.resize(m, n);

  switch (draws.volatility) {
    case VolatilityScheme::CONST: {
      require(static_cast<int>(draws.sigma.size()) == m,
              "one_step_predictive: draw set lacks covariance draws");
      for (int d = 0; d < m; ++d) {
        VectorXd mu = draws.coef_matrix(d) * xrow;
        MatrixXd l = cholesky_lower(symmetrized(draws.sigma[static_cast<size_t>(d)]));
        out.draws.row(d) = sample_mvn_chol(rng, mu, l);
        out.cond_mean.row(d) = mu;
        out.cond_var.row(d) = draws.sigma[static_cast<size_t>(d)].diagonal();
      }
      break;
    }
    case VolatilityScheme::SV:
    case VolatilityScheme::SVT: {
      const bool student_t = draws.volatility == VolatilityScheme::SVT;
      require(draws.log_lambda_last.rows() == m && static_cast<int>(draws.phi.size()) == m &&
                  static_cast<int>(draws.a_mat.size()) == m,
              "one_step_predictive: draw set lacks volatility state draws");
      if (student_t)
        require(draws.eta.size() == m, "one_step_predictive: draw set lacks dof draws");
      for (int d = 0; d < m; ++d) {
        VectorXd mu = draws.coef_matrix(d) * xrow;
        // propagate the random-walk log variances one step
        MatrixXd phi_chol = cholesky_lower(symmetrized(draws.phi[static_cast<size_t>(d)]));
        VectorXd log_lam = draws.log_lambda_last.row(d).transpose() +
                           phi_chol * sample_standard_normal(rng, n);
        MatrixXd a_inv = draws.a_mat[static_cast<size_t>(d)]
                             .triangularView<Eigen::Lower>()
                             .solve(MatrixXd::Identity(n, n));
        VectorXd lam_sqrt = (0.5 * log_lam.array()).exp();
        double scale = 1.0;
        if (student_t) {
          double eta = draws.eta(d);
          double w = sample_gamma(rng, 0.5 * eta, 0.5 * eta);
          scale = 1.0 / std::sqrt(w);
          out.dof(d) = eta;
        }
        VectorXd shock =
            a_inv * (lam_sqrt.asDiagonal() * sample_standard_normal(rng, n)) * scale;
        out.draws.row(d) = mu + shock;
        out.cond_mean.row(d) = mu;
        // Sigma_ii = sum_j (A^{-1})_ij^2 lambda_j; squared t scale when heavy-tailed
        VectorXd lam = log_lam.array().exp();
        out.cond_var.row(d) = a_inv.array().square().matrix() * lam;
      }
      break;
    }
    case VolatilityScheme::GARCH: {
      require(draws.garch_h_last.rows() == m && draws.garch_eps_last.rows() == m &&
                  static_cast<int>(draws.garch_corr.size()) == m,
              "one_step_predictive: draw set lacks GARCH state draws");
      for (int d = 0; d < m; ++d) {
        VectorXd mu = draws.coef_matrix(d) * xrow;
        VectorXd h(n);
        for (int i = 0; i < n; ++i)
          h(i) = draws.garch_omega(d, i) +
                 draws.garch_b(d, i) * draws.garch_eps_last(d, i) * draws.garch_eps_last(d, i) +
                 draws.garch_g(d, i) * draws.garch_h_last(d, i);
        VectorXd dsqrt = h.array().sqrt();
        MatrixXd sigma = dsqrt.asDiagonal() * draws.garch_corr[static_cast<size_t>(d)] *
                         dsqrt.asDiagonal();
        MatrixXd l = cholesky_lower(symmetrized(sigma));
        out.draws.row(d) = sample_mvn_chol(rng, mu, l);
        out.cond_mean.row(d) = mu;
        out.cond_var.row(d) = h;
      }
      break;
    }
  }
  return out;
}

// joint one-step prediction for a fitted model; AR parts forecast each
// series independently
inline PredictiveDraws predict_one_step(const ModelFit& fit, const ForecastState& state,
                                        Rng& rng) {
  require(!fit.parts.empty(), "predict_one_step: empty fit");
  if (!fit.univariate()) return one_step_predictive(fit.parts.front(), state, rng);

  const int n = static_cast<int>(fit.parts.size());
  const int m = fit.parts.front().n_draws();
  PredictiveDraws out;
  out.resize(m, n);
  for (int i = 0; i < n; ++i) {
    ForecastState s;
    s.recent_rows = state.recent_rows.col(i);
    s.predictor_row = VectorXd();
    PredictiveDraws p = one_step_predictive(fit.parts[static_cast<size_t>(i)], s, rng);
    out.draws.col(i) = p.draws;
    out.cond_mean.col(i) = p.cond_mean;
    out.cond_var.col(i) = p.cond_var;
  }
  return out;
}

struct ForecastRecord {
  int origin = 0; // absolute row index of the estimation window start
  Date date;      // date of the realized observation
  VectorXd realized;
  PredictiveDraws pred;

  VectorXd point_forecast() const { return pred.draws.colwise().mean().transpose(); }
};

struct ForecastMeta {
  std::string model;
  ModelFamily family = ModelFamily::VAR;
  VolatilityScheme volatility = VolatilityScheme::CONST;
  int lags = 3;
  RollingPlan plan;
  std::uint64_t seed = 0;
  int n_iter = 6000;
  int n_burn = 1000;
  std::vector<std::string> series;
  std::string version = version_string();
};

struct ForecastSet {
  ForecastMeta meta;
  std::vector<ForecastRecord> records; // ordered by origin
  std::vector<std::pair<int, std::string>> failures;

  bool complete() const {
    return failures.empty() && static_cast<int>(records.size()) == meta.plan.n_origins;
  }
};

} // namespace bvarcast

#endif
