#ifndef BVARCAST_MODEL_SPEC_HPP
#define BVARCAST_MODEL_SPEC_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "bvarcast/common.hpp"
#include "bvarcast/linalg.hpp"

namespace bvarcast {

enum class ModelFamily { VAR, VARX, AR };
enum class VolatilityScheme { CONST, SV, GARCH, SVT };

inline std::string to_string(ModelFamily f) {
  switch (f) {
    case ModelFamily::VAR: return "VAR";
    case ModelFamily::VARX: return "VARX";
    case ModelFamily::AR: return "AR";
  }
  return "?";
}

inline std::string to_string(VolatilityScheme v) {
  switch (v) {
    case VolatilityScheme::CONST: return "CONST";
    case VolatilityScheme::SV: return "SV";
    case VolatilityScheme::GARCH: return "GARCH";
    case VolatilityScheme::SVT: return "SVT";
  }
  return "?";
}

inline ModelFamily family_from_string(const std::string& s) {
  if (s == "VAR") return ModelFamily::VAR;
  if (s == "VARX") return ModelFamily::VARX;
  if (s == "AR") return ModelFamily::AR;
  fail("unknown model family '" + s + "'");
}

inline VolatilityScheme volatility_from_string(const std::string& s) {
  if (s == "CONST") return VolatilityScheme::CONST;
  if (s == "SV") return VolatilityScheme::SV;
  if (s == "GARCH") return VolatilityScheme::GARCH;
  if (s == "SVT") return VolatilityScheme::SVT;
  fail("unknown volatility scheme '" + s + "'");
}

// Shrinkage prior hyperparameters. Own-lag prior std at lag l is
// lambda1 / l^lambda3; cross-equation coefficients are scaled further by
// lambda2 * (sigma_i / sigma_j), exogenous ones by lambda4 * sigma_i / sigma_w.
struct MinnesotaHyper {
  double lambda1 = 0.2;  // overall tightness
  double lambda2 = 0.5;  // cross-equation tightness
  double lambda3 = 2.0;  // lag decay exponent
  double lambda4 = 0.5;  // exogenous-block tightness
  double own_first_lag_mean = 0.0;

  void validate() const {
    require(lambda1 > 0 && lambda2 > 0 && lambda4 > 0, "MinnesotaHyper: tightness must be > 0");
    require(lambda3 >= 0, "MinnesotaHyper: lag decay exponent must be >= 0");
  }
};

struct ModelSpec {
  ModelFamily family = ModelFamily::VAR;
  VolatilityScheme volatility = VolatilityScheme::CONST;
  int lags = 3;
  int n_iter = 6000;
  int n_burn = 1000;
  MinnesotaHyper prior;
  std::uint64_t seed = 0;

  // Retain full latent volatility paths in the draw set. The rolling
  // engine switches this off: it only needs the period-T states.
  bool keep_volatility_paths = true;

  int retained() const { return n_iter - n_burn; }

  void validate() const {
    require(lags >= 1, "ModelSpec: lags must be >= 1");
    require(n_burn >= 0 && n_burn < n_iter, "ModelSpec: need 0 <= n_burn < n_iter");
    prior.validate();
  }
};

// Retained MCMC output. `beta` rows are stacked equation-major: the K
// regression coefficients of equation 1, then equation 2, and so on.
// Scheme-specific members are sized only for the scheme that produced them.
struct PosteriorDrawSet {
  ModelFamily family = ModelFamily::VAR;
  VolatilityScheme volatility = VolatilityScheme::CONST;
  int n_series = 0;     // N
  int n_regressors = 0; // K per equation
  int lags = 0;

  MatrixXd beta; // n_draws x (N*K)

  // CONST
  std::vector<MatrixXd> sigma; // N x N per draw

  // SV / SVT
  std::vector<MatrixXd> a_mat;           // unit lower-triangular A per draw
  std::vector<MatrixXd> phi;             // innovation covariance per draw
  MatrixXd log_lambda_last;              // n_draws x N, log-variance at final period
  MatrixXd log_lambda_path_mean;         // T x N posterior mean path
  std::vector<MatrixXd> log_lambda_paths; // T x N per draw, optional
  VectorXd eta;                          // SVT degrees of freedom per draw
  MatrixXd w_scale_mean;                 // SVT: T x 1 posterior mean latent scale
  std::vector<VectorXd> w_scale_paths;   // SVT latent scales per draw, optional

  // GARCH
  MatrixXd garch_omega, garch_b, garch_g; // n_draws x N
  std::vector<MatrixXd> garch_corr;       // N x N per draw
  MatrixXd garch_h_last;                  // n_draws x N, h at final period
  MatrixXd garch_eps_last;                // n_draws x N, residual at final period
  MatrixXd garch_h_path_mean;             // T x N posterior mean path
  std::vector<MatrixXd> garch_h_paths;    // optional
  double garch_acceptance = 1.0;          // post-burn-in MH acceptance rate

  std::vector<std::string> warnings;

  int n_draws() const { return static_cast<int>(beta.rows()); }

  // coefficient matrix (N x K) of draw d, rows = equations
  MatrixXd coef_matrix(int d) const {
    MatrixXd pi(n_series, n_regressors);
    for (int i = 0; i < n_series; ++i)
      pi.row(i) = beta.row(d).segment(static_cast<Eigen::Index>(i) * n_regressors, n_regressors);
    return pi;
  }
};

} // namespace bvarcast

#endif
