#ifndef BVARCAST_TESTS_ORACLES_HPP
#define BVARCAST_TESTS_ORACLES_HPP

// Independent reference implementations used only to cross-check the
// library: grid-integration CRPS, an exact random-walk Kalman smoother,
// and a brute-force all-pairs CRPS.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

namespace bvarcast::testing {

// CRPS by numerical integration of [F_emp(x) - H(x - y)]^2 on a fine grid.
inline double crps_grid_oracle(std::vector<double> draws, double y, int grid_points = 200000) {
  std::sort(draws.begin(), draws.end());
  double lo = std::min(draws.front(), y) - 1.0;
  double hi = std::max(draws.back(), y) + 1.0;
  double dx = (hi - lo) / grid_points;
  double acc = 0.0;
  size_t cursor = 0;
  const double m = static_cast<double>(draws.size());
  for (int g = 0; g < grid_points; ++g) {
    double x = lo + (g + 0.5) * dx;
    while (cursor < draws.size() && draws[cursor] <= x) ++cursor;
    double f = static_cast<double>(cursor) / m;
    double h = x >= y ? 1.0 : 0.0;
    acc += (f - h) * (f - h) * dx;
  }
  return acc;
}

inline double crps_brute_force(const std::vector<double>& draws, double y) {
  const double m = static_cast<double>(draws.size());
  double term1 = 0.0, term2 = 0.0;
  for (double a : draws) {
    term1 += std::abs(a - y);
    for (double b : draws) term2 += std::abs(a - b);
  }
  return term1 / m - term2 / (2.0 * m * m);
}

struct SmootherOut {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
};

// Exact RTS smoother for the local-level model h_t = h_{t-1} + N(0, q),
// y_t = h_t + N(0, r_t), prior h_1 ~ N(m0, p0).
inline SmootherOut kalman_smoother_rw(const Eigen::VectorXd& y, const Eigen::VectorXd& obs_var,
                                      double q, double m0, double p0) {
  const Eigen::Index t_len = y.size();
  Eigen::VectorXd fm(t_len), fp(t_len);
  double m = m0, p = p0;
  for (Eigen::Index t = 0; t < t_len; ++t) {
    if (t > 0) p += q;
    double k = p / (p + obs_var(t));
    m += k * (y(t) - m);
    p *= (1.0 - k);
    fm(t) = m;
    fp(t) = p;
  }
  SmootherOut out;
  out.mean.resize(t_len);
  out.variance.resize(t_len);
  out.mean(t_len - 1) = fm(t_len - 1);
  out.variance(t_len - 1) = fp(t_len - 1);
  for (Eigen::Index t = t_len - 2; t >= 0; --t) {
    double c = fp(t) / (fp(t) + q);
    out.mean(t) = fm(t) + c * (out.mean(t + 1) - fm(t));
    out.variance(t) = fp(t) + c * c * (out.variance(t + 1) - (fp(t) + q));
  }
  return out;
}

// unit-lower-triangular LDL' split of an SPD matrix (no pivoting)
struct LdlOut {
  Eigen::MatrixXd l;
  Eigen::VectorXd d;
};

inline LdlOut ldl_unit_lower(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  Eigen::MatrixXd c = llt.matrixL();
  LdlOut out;
  out.d = c.diagonal().array().square();
  out.l = c * c.diagonal().cwiseInverse().asDiagonal();
  return out;
}

} // namespace bvarcast::testing

#endif
