#ifndef BVARCAST_MODEL_COMPARE_HPP
#define BVARCAST_MODEL_COMPARE_HPP

#include <boost/math/distributions/students_t.hpp>

#include "bvarcast/metrics.hpp"
#include "bvarcast/rng.hpp"

namespace bvarcast {

struct DmResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Diebold-Mariano equal-accuracy test on a loss differential, with the
// Harvey-Leybourne-Newbold small-sample correction and Student-t(n-1)
// reference distribution. The long-run variance is the sample variance at
// horizon 1 and a rectangular HAC sum with h-1 lags otherwise.
inline DmResult dm_test(const LossSeries& loss_a, const LossSeries& loss_b, int horizon = 1) {
  const Eigen::Index n = loss_a.values.size();
  require(n >= 10, "dm_test: need at least 10 observations");
  require(loss_b.values.size() == n, "dm_test: loss series lengths differ");
  require(horizon >= 1, "dm_test: horizon must be >= 1");
  require(loss_a.values.allFinite() && loss_b.values.allFinite(), "dm_test: non-finite loss");

  VectorXd d = loss_a.values - loss_b.values;
  const double nd = static_cast<double>(n);
  const double dbar = d.mean();
  VectorXd centered = d.array() - dbar;

  double lrv = centered.squaredNorm() / nd;
  for (int k = 1; k < horizon; ++k) {
    double gamma = 0.0;
    for (Eigen::Index t = k; t < n; ++t) gamma += centered(t) * centered(t - k);
    lrv += 2.0 * gamma / nd;
  }
  if (!(lrv > 0.0)) fail("dm_test: zero-variance loss differential");

  const double h = static_cast<double>(horizon);
  double hln = std::sqrt((nd + 1.0 - 2.0 * h + h * (h - 1.0) / nd) / nd);
  DmResult res;
  res.statistic = hln * dbar / std::sqrt(lrv / nd);
  boost::math::students_t dist(nd - 1.0);
  res.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(res.statistic)));
  return res;
}

struct McsResult {
  std::vector<int> survivors;            // indices into the input model list
  std::vector<double> model_p_values;    // per input model, monotonized
  std::vector<int> elimination_order;    // eliminated model indices, worst first
  std::vector<double> elimination_p_values;
};

// Model confidence set, T_max statistic with iterative elimination and a
// moving-block bootstrap null (Hansen-Lunde-Nason). Block indices are
// drawn once and shared across elimination rounds.
inline McsResult model_confidence_set(const std::vector<LossSeries>& losses, double alpha = 0.10,
                                      int bootstrap_reps = 5000, int block_length = 0,
                                      std::uint64_t seed = 0) {
  const int n_models = static_cast<int>(losses.size());
  require(n_models >= 2, "model_confidence_set: need at least 2 models");
  const Eigen::Index n = losses.front().values.size();
  require(n >= 10, "model_confidence_set: need at least 10 origins");
  for (const auto& l : losses)
    require(l.values.size() == n, "model_confidence_set: loss lengths differ");
  require(bootstrap_reps >= 100, "model_confidence_set: too few bootstrap replications");

  if (block_length <= 0)
    block_length = static_cast<int>(std::ceil(std::cbrt(static_cast<double>(n))));
  block_length = std::min<int>(block_length, static_cast<int>(n));

  MatrixXd loss(n, n_models);
  for (int j = 0; j < n_models; ++j) loss.col(j) = losses[static_cast<size_t>(j)].values;

  // bootstrap resampled means per model, computed once
  Rng rng(seed);
  const int n_blocks = static_cast<int>((n + block_length - 1) / block_length);
  MatrixXd boot_means(bootstrap_reps, n_models);
  std::vector<Eigen::Index> idx(static_cast<size_t>(n));
  for (int b = 0; b < bootstrap_reps; ++b) {
    size_t pos = 0;
    for (int blk = 0; blk < n_blocks && pos < static_cast<size_t>(n); ++blk) {
      Eigen::Index start = static_cast<Eigen::Index>(
          rng.uniform_index(static_cast<std::uint64_t>(n - block_length + 1)));
      for (int t = 0; t < block_length && pos < static_cast<size_t>(n); ++t)
        idx[pos++] = start + t;
    }
    VectorXd mean = VectorXd::Zero(n_models);
    for (Eigen::Index t = 0; t < n; ++t)
      mean += loss.row(idx[static_cast<size_t>(t)]).transpose();
    boot_means.row(b) = mean / static_cast<double>(n);
  }
  VectorXd sample_means = loss.colwise().mean();
  {
    double spread = (loss.rowwise() - loss.row(0)).cwiseAbs().maxCoeff();
    if (!(spread > 0.0)) fail("model_confidence_set: degenerate losses (all models identical)");
  }

  McsResult res;
  res.model_p_values.assign(static_cast<size_t>(n_models), 1.0);
  std::vector<int> active(static_cast<size_t>(n_models));
  for (int j = 0; j < n_models; ++j) active[static_cast<size_t>(j)] = j;

  double p_monotone = 0.0;
  while (active.size() >= 2) {
    const int m = static_cast<int>(active.size());
    // deviations from the active-set average, observed and bootstrapped
    VectorXd mean_active(m);
    for (int j = 0; j < m; ++j) mean_active(j) = sample_means(active[static_cast<size_t>(j)]);
    double grand = mean_active.mean();
    VectorXd dev = mean_active.array() - grand;

    MatrixXd boot_dev(bootstrap_reps, m);
    for (int j = 0; j < m; ++j) boot_dev.col(j) = boot_means.col(active[static_cast<size_t>(j)]);
    VectorXd boot_grand = boot_dev.rowwise().mean();
    boot_dev.colwise() -= boot_grand;

    VectorXd var(m);
    for (int j = 0; j < m; ++j)
      var(j) = (boot_dev.col(j).array() - dev(j)).square().mean();
    if (!(var.minCoeff() > 0.0))
      fail("model_confidence_set: degenerate bootstrap (zero variance)");

    VectorXd tstat = dev.array() / var.array().sqrt();
    Eigen::Index worst;
    double t_max = tstat.maxCoeff(&worst);

    int exceed = 0;
    for (int b = 0; b < bootstrap_reps; ++b) {
      double tb = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < m; ++j)
        tb = std::max(tb, (boot_dev(b, j) - dev(j)) / std::sqrt(var(j)));
      if (tb >= t_max) ++exceed;
    }
    double p = static_cast<double>(exceed + 1) / static_cast<double>(bootstrap_reps + 1);
    p_monotone = std::max(p_monotone, p);

    if (p >= alpha) {
      for (int j : active) res.model_p_values[static_cast<size_t>(j)] = p_monotone;
      break;
    }
    int eliminated = active[static_cast<size_t>(worst)];
    res.model_p_values[static_cast<size_t>(eliminated)] = p_monotone;
    res.elimination_order.push_back(eliminated);
    res.elimination_p_values.push_back(p_monotone);
    active.erase(active.begin() + worst);
  }
  if (active.size() == 1)
    res.model_p_values[static_cast<size_t>(active.front())] = 1.0;
  res.survivors = active;
  return res;
}

} // namespace bvarcast

#endif
