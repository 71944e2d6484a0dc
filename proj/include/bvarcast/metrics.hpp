#ifndef BVARCAST_METRICS_HPP
#define BVARCAST_METRICS_HPP

#include <algorithm>
#include <cmath>

#include "bvarcast/forecast.hpp"

namespace bvarcast {

// loss values per origin for one (model, series) pair
struct LossSeries {
  std::string model;
  std::string series;
  VectorXd values;
};

// linear-interpolation empirical quantile (R type 7) on sorted data
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  const size_t n = sorted.size();
  require(n > 0, "quantile: empty sample");
  if (n == 1) return sorted[0];
  double h = (static_cast<double>(n) - 1.0) * p;
  size_t lo = static_cast<size_t>(std::floor(h));
  if (lo >= n - 1) return sorted[n - 1];
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

namespace detail {

inline void check_set(const ForecastSet& set, int min_origins) {
  require(static_cast<int>(set.records.size()) >= min_origins,
          "evaluation: need at least " + std::to_string(min_origins) + " origins");
  for (const auto& rec : set.records)
    require(rec.pred.draws.rows() > 0, "evaluation: origin with no draws");
}

inline double log_predictive_density(const PredictiveDraws& pred, Eigen::Index series,
                                     double y) {
  const Eigen::Index m = pred.draws.rows();
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> logf(static_cast<size_t>(m));
  for (Eigen::Index d = 0; d < m; ++d) {
    double mu = pred.cond_mean(d, series);
    double v = pred.cond_var(d, series);
    require(v > 0.0, "log_score: nonpositive conditional variance");
    double lp;
    if (pred.dof(d) > 0.0) {
      // scaled Student-t; v holds the squared scale
      double eta = pred.dof(d);
      double z2 = (y - mu) * (y - mu) / (eta * v);
      lp = std::lgamma(0.5 * (eta + 1.0)) - std::lgamma(0.5 * eta) -
           0.5 * std::log(eta * M_PI * v) - 0.5 * (eta + 1.0) * std::log1p(z2);
    } else {
      lp = -0.5 * (std::log(2.0 * M_PI * v) + (y - mu) * (y - mu) / v);
    }
    logf[static_cast<size_t>(d)] = lp;
    best = std::max(best, lp);
  }
  if (!std::isfinite(best)) fail("log_score: predictive density underflowed to zero");
  double acc = 0.0;
  for (double lp : logf) acc += std::exp(lp - best);
  return best + std::log(acc / static_cast<double>(m));
}

// empirical CRPS for one draw vector, all-pairs form via the sorting identity
inline double crps_one(std::vector<double>& draws, double y) {
  const size_t m = draws.size();
  require(m >= 2, "crps: need at least 2 draws");
  std::sort(draws.begin(), draws.end());
  double term1 = 0.0, pairs = 0.0;
  for (size_t i = 0; i < m; ++i) {
    term1 += std::abs(draws[i] - y);
    pairs += (2.0 * static_cast<double>(i) - static_cast<double>(m) + 1.0) * draws[i];
  }
  double md = static_cast<double>(m);
  return term1 / md - pairs / (md * md);
}

} // namespace detail

// sqrt of the mean squared point-forecast error, per series
inline VectorXd rmse(const ForecastSet& set) {
  detail::check_set(set, 2);
  const Eigen::Index n = set.records.front().realized.size();
  VectorXd acc = VectorXd::Zero(n);
  for (const auto& rec : set.records) {
    VectorXd err = rec.point_forecast() - rec.realized;
    acc += err.cwiseProduct(err);
  }
  return (acc / static_cast<double>(set.records.size())).cwiseSqrt();
}

// percentage of origins whose point forecast has the realized sign;
// exact-zero realizations are excluded from the denominator
inline VectorXd success_rate(const ForecastSet& set) {
  detail::check_set(set, 1);
  const Eigen::Index n = set.records.front().realized.size();
  VectorXd hits = VectorXd::Zero(n), counted = VectorXd::Zero(n);
  for (const auto& rec : set.records) {
    VectorXd point = rec.point_forecast();
    for (Eigen::Index i = 0; i < n; ++i) {
      double y = rec.realized(i);
      if (y == 0.0) continue;
      counted(i) += 1.0;
      if ((y > 0.0) == (point(i) > 0.0)) hits(i) += 1.0;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i)
    if (counted(i) == 0.0)
      fail("success_rate: every realization of series " + std::to_string(i) + " is zero");
  return 100.0 * hits.cwiseQuotient(counted);
}

struct IntervalBand {
  double lower, upper;
};

inline IntervalBand credible_band(const PredictiveDraws& pred, Eigen::Index series,
                                  double level = 0.95) {
  std::vector<double> draws(pred.draws.col(series).data(),
                            pred.draws.col(series).data() + pred.draws.rows());
  std::sort(draws.begin(), draws.end());
  double tail = 0.5 * (1.0 - level);
  return {quantile_sorted(draws, tail), quantile_sorted(draws, 1.0 - tail)};
}

// percentage of realizations strictly outside the equal-tailed credible band
inline VectorXd interval_violations(const ForecastSet& set, double level = 0.95) {
  detail::check_set(set, 1);
  require(set.records.front().pred.draws.rows() >= 100,
          "interval_violations: need at least 100 draws per origin");
  const Eigen::Index n = set.records.front().realized.size();
  VectorXd outside = VectorXd::Zero(n);
  for (const auto& rec : set.records)
    for (Eigen::Index i = 0; i < n; ++i) {
      IntervalBand band = credible_band(rec.pred, i, level);
      double y = rec.realized(i);
      if (y < band.lower || y > band.upper) outside(i) += 1.0;
    }
  return 100.0 * outside / static_cast<double>(set.records.size());
}

// per-origin log predictive density, Rao-Blackwellized over draws
inline MatrixXd log_score_per_origin(const ForecastSet& set) {
  detail::check_set(set, 1);
  const Eigen::Index n = set.records.front().realized.size();
  MatrixXd out(static_cast<Eigen::Index>(set.records.size()), n);
  for (size_t r = 0; r < set.records.size(); ++r)
    for (Eigen::Index i = 0; i < n; ++i)
      out(static_cast<Eigen::Index>(r), i) =
          detail::log_predictive_density(set.records[r].pred, i, set.records[r].realized(i));
  return out;
}

// time-average of ln f(y), per series
inline VectorXd log_score(const ForecastSet& set) {
  MatrixXd per_origin = log_score_per_origin(set);
  return per_origin.colwise().mean();
}

inline MatrixXd crps_per_origin(const ForecastSet& set) {
  detail::check_set(set, 1);
  const Eigen::Index n = set.records.front().realized.size();
  MatrixXd out(static_cast<Eigen::Index>(set.records.size()), n);
  std::vector<double> draws;
  for (size_t r = 0; r < set.records.size(); ++r) {
    const auto& rec = set.records[r];
    for (Eigen::Index i = 0; i < n; ++i) {
      draws.assign(rec.pred.draws.col(i).data(),
                   rec.pred.draws.col(i).data() + rec.pred.draws.rows());
      out(static_cast<Eigen::Index>(r), i) = detail::crps_one(draws, rec.realized(i));
    }
  }
  return out;
}

inline VectorXd crps(const ForecastSet& set) {
  return crps_per_origin(set).colwise().mean();
}

inline MatrixXd squared_errors_per_origin(const ForecastSet& set) {
  detail::check_set(set, 1);
  const Eigen::Index n = set.records.front().realized.size();
  MatrixXd out(static_cast<Eigen::Index>(set.records.size()), n);
  for (size_t r = 0; r < set.records.size(); ++r) {
    VectorXd err = set.records[r].point_forecast() - set.records[r].realized;
    out.row(static_cast<Eigen::Index>(r)) = err.cwiseProduct(err);
  }
  return out;
}

} // namespace bvarcast

#endif
