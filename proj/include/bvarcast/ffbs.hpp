#ifndef BVARCAST_FFBS_HPP
#define BVARCAST_FFBS_HPP

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "bvarcast/rng.hpp"

namespace bvarcast {

struct GaussianPrior {
  double mean = 0.0;
  double variance = 1.0;
};

// Finite normal mixture used as the observation-noise distribution in the
// log-variance state space form.
class MixtureTable {
public:
  MixtureTable(std::vector<double> probs, std::vector<double> means,
               std::vector<double> variances)
      : prob_(std::move(probs)), mean_(std::move(means)), var_(std::move(variances)) {
    require(prob_.size() == mean_.size() && prob_.size() == var_.size() && !prob_.empty(),
            "MixtureTable: component vectors must have equal nonzero length");
    double s = 0.0;
    for (size_t j = 0; j < prob_.size(); ++j) {
      require(prob_[j] >= 0.0, "MixtureTable: negative probability");
      require(var_[j] > 0.0, "MixtureTable: nonpositive variance");
      s += prob_[j];
    }
    require(std::abs(s - 1.0) <= 1e-12, "MixtureTable: probabilities must sum to 1");
  }

  size_t size() const { return prob_.size(); }
  double prob(size_t j) const { return prob_[j]; }
  double mean(size_t j) const { return mean_[j]; }
  double variance(size_t j) const { return var_[j]; }

  double moment_mean() const {
    double m = 0.0;
    for (size_t j = 0; j < size(); ++j) m += prob_[j] * mean_[j];
    return m;
  }
  double moment_variance() const {
    double m = moment_mean(), v = 0.0;
    for (size_t j = 0; j < size(); ++j)
      v += prob_[j] * (var_[j] + mean_[j] * mean_[j]);
    return v - m * m;
  }

  // 10-component approximation of the log chi-squared(1) distribution
  // (Omori, Chib, Shephard, Nakajima 2007, Table 1).
  static const MixtureTable& log_chi_squared_1() {
    static const MixtureTable table(
        {0.00609, 0.04775, 0.13057, 0.20674, 0.22715,
         0.18842, 0.12047, 0.05591, 0.01575, 0.00115},
        {1.92677, 1.34744, 0.73504, 0.02266, -0.85173,
         -1.97278, -3.46788, -5.55246, -8.68384, -14.65000},
        {0.11265, 0.17788, 0.26768, 0.40611, 0.62699,
         0.98583, 1.57469, 2.54498, 4.16591, 7.33342});
    return table;
  }

private:
  std::vector<double> prob_, mean_, var_;
};

// One joint draw of a random-walk log-variance path.
//
// Observation: y*_t = log(eps_t^2 + offset) = h_t + noise, with the noise
// mixture-approximated; h_t = h_{t-1} + w_t, w_t ~ N(0, innovation_variance).
// Mixture indicators are refreshed against `current_path`, then the state
// path is drawn by a forward Kalman filter and backward sampling pass.
inline VectorXd ffbs_log_volatility(Rng& rng, const VectorXd& log_squared_residuals,
                                    const VectorXd& current_path,
                                    double innovation_variance,
                                    const MixtureTable& mixture,
                                    const GaussianPrior& initial_state_prior) {
  const Eigen::Index t_len = log_squared_residuals.size();
  require(t_len > 0, "ffbs_log_volatility: empty observation vector");
  require(current_path.size() == t_len, "ffbs_log_volatility: path length mismatch");
  require(innovation_variance >= 0.0, "ffbs_log_volatility: negative innovation variance");
  require(log_squared_residuals.allFinite(), "ffbs_log_volatility: non-finite observation");

  const size_t n_comp = mixture.size();
  std::vector<double> logp(n_comp);

  // mixture indicators given the current path
  VectorXd obs_adj(t_len), obs_var(t_len);
  for (Eigen::Index t = 0; t < t_len; ++t) {
    double best = -std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < n_comp; ++j) {
      double r = log_squared_residuals(t) - current_path(t) - mixture.mean(j);
      logp[j] = std::log(mixture.prob(j)) -
                0.5 * (std::log(mixture.variance(j)) + r * r / mixture.variance(j));
      best = std::max(best, logp[j]);
    }
    double total = 0.0;
    for (size_t j = 0; j < n_comp; ++j) {
      logp[j] = std::exp(logp[j] - best);
      total += logp[j];
    }
    double u = rng.uniform() * total;
    size_t pick = n_comp - 1;
    for (size_t j = 0; j < n_comp; ++j) {
      u -= logp[j];
      if (u <= 0.0) { pick = j; break; }
    }
    obs_adj(t) = log_squared_residuals(t) - mixture.mean(pick);
    obs_var(t) = mixture.variance(pick);
  }

  // forward filter
  VectorXd filt_mean(t_len), filt_var(t_len);
  double m = initial_state_prior.mean;
  double p = initial_state_prior.variance;
  for (Eigen::Index t = 0; t < t_len; ++t) {
    if (t > 0) p += innovation_variance;
    double gain = p / (p + obs_var(t));
    m += gain * (obs_adj(t) - m);
    p *= (1.0 - gain);
    if (!std::isfinite(m) || !std::isfinite(p))
      fail("ffbs_log_volatility: filter diverged at t=" + std::to_string(t));
    filt_mean(t) = m;
    filt_var(t) = p;
  }

  // backward sampling
  VectorXd path(t_len);
  path(t_len - 1) = rng.normal(filt_mean(t_len - 1), std::sqrt(filt_var(t_len - 1)));
  for (Eigen::Index t = t_len - 2; t >= 0; --t) {
    double denom = filt_var(t) + innovation_variance;
    double gain = denom > 0.0 ? filt_var(t) / denom : 1.0;
    double mean = filt_mean(t) + gain * (path(t + 1) - filt_mean(t));
    double var = filt_var(t) * (1.0 - gain);
    path(t) = rng.normal(mean, std::sqrt(std::max(var, 0.0)));
  }
  return path;
}

} // namespace bvarcast

#endif
