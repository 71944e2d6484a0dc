#include <catch2/catch_amalgamated.hpp>

#include "bvarcast/design.hpp"
#include "sim_data.hpp"

using namespace bvarcast;
using bvarcast::testing::panel_from_matrix;

TEST_CASE("build_design layout") {
  SECTION("N=1, p=1 direct lag layout") {
    MatrixXd v(3, 1);
    v << 1, 2, 3;
    auto d = build_design(panel_from_matrix(v), 1);
    REQUIRE(d.y.rows() == 2);
    REQUIRE(d.y(0, 0) == 2.0);
    REQUIRE(d.y(1, 0) == 3.0);
    REQUIRE(d.x(0, 0) == 1.0);
    REQUIRE(d.x(1, 0) == 2.0);
  }

  SECTION("N=4, p=3 gives K=12, and 20 with the 8 predictors") {
    Rng rng(1);
    MatrixXd v(80, 4), w(80, 8);
    for (Eigen::Index t = 0; t < 80; ++t) {
      for (int j = 0; j < 4; ++j) v(t, j) = rng.normal();
      for (int j = 0; j < 8; ++j) w(t, j) = rng.normal();
    }
    ReturnPanel panel = panel_from_matrix(v);
    auto d = build_design(panel, 3);
    REQUIRE(d.x.cols() == 12);
    REQUIRE(d.y.cols() == 4);

    PredictorPanel preds;
    static_cast<ReturnPanel&>(preds) = panel_from_matrix(w);
    auto dx = build_design(panel, 3, &preds);
    REQUIRE(dx.x.cols() == 20);
    // series-major lag block: columns j*p + (l-1) hold series j at lag l
    REQUIRE(dx.x(5, 0) == v(3 + 5 - 1, 0));
    REQUIRE(dx.x(5, 2) == v(3 + 5 - 3, 0));
    REQUIRE(dx.x(5, 3) == v(3 + 5 - 1, 1));
    // predictor block enters at lag one
    REQUIRE(dx.x(5, 12) == w(3 + 5 - 1, 0));
    REQUIRE(dx.x(5, 19) == w(3 + 5 - 1, 7));
  }

  SECTION("misaligned predictor dates rejected") {
    Rng rng(2);
    MatrixXd v(40, 2), w(40, 2);
    for (Eigen::Index t = 0; t < 40; ++t)
      for (int j = 0; j < 2; ++j) {
        v(t, j) = rng.normal();
        w(t, j) = rng.normal();
      }
    ReturnPanel panel = panel_from_matrix(v);
    PredictorPanel preds;
    static_cast<ReturnPanel&>(preds) = panel_from_matrix(w);
    for (auto& d : preds.dates) d = d.next(); // shift the whole axis
    REQUIRE_THROWS_AS(build_design(panel, 2, &preds), Error);
  }

  SECTION("sample too short rejected") {
    MatrixXd v = MatrixXd::Random(7, 2);
    REQUIRE_THROWS_AS(build_design(panel_from_matrix(v), 3), Error);
  }
}

TEST_CASE("design_row_for_next matches the next build_design row") {
  Rng rng(3);
  MatrixXd v(60, 2), w(60, 3);
  for (Eigen::Index t = 0; t < 60; ++t) {
    for (int j = 0; j < 2; ++j) v(t, j) = rng.normal();
    for (int j = 0; j < 3; ++j) w(t, j) = rng.normal();
  }
  ReturnPanel panel = panel_from_matrix(v);
  PredictorPanel preds;
  static_cast<ReturnPanel&>(preds) = panel_from_matrix(w);
  auto d = build_design(panel, 3, &preds);

  // state made from rows < t reproduces design row for t
  const int t = 40;
  MatrixXd recent = v.middleRows(t - 3, 3);
  VectorXd xrow = design_row_for_next(recent, 3, w.row(t - 1).transpose());
  REQUIRE((xrow.transpose() - d.x.row(t - 3)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("minnesota_moments") {
  Rng rng(4);
  MatrixXd v(300, 2);
  for (Eigen::Index t = 0; t < 300; ++t) {
    v(t, 0) = rng.normal();
    v(t, 1) = 3.0 * rng.normal();
  }
  ReturnPanel panel = panel_from_matrix(v);
  ModelSpec spec;
  spec.lags = 3;

  SECTION("own-lag stds follow lambda1 / l^lambda3") {
    MinnesotaHyper hyper;
    hyper.lambda1 = 0.2;
    hyper.lambda3 = 2.0;
    auto prior = minnesota_moments(hyper, panel, spec);
    const int k = 6;
    REQUIRE_THAT(std::sqrt(prior.variance(0)), Catch::Matchers::WithinAbs(0.2, 1e-12));
    REQUIRE_THAT(std::sqrt(prior.variance(1)), Catch::Matchers::WithinAbs(0.05, 1e-12));
    REQUIRE_THAT(std::sqrt(prior.variance(2)),
                 Catch::Matchers::WithinAbs(0.2 / 9.0, 1e-12));
    // equation 2 own block sits after its cross block
    REQUIRE_THAT(std::sqrt(prior.variance(k + 3)), Catch::Matchers::WithinAbs(0.2, 1e-12));
  }

  SECTION("lambda2 = 1 with equal scales makes cross equal own") {
    MinnesotaHyper hyper;
    hyper.lambda2 = 1.0;
    MatrixXd same(300, 2);
    for (Eigen::Index t = 0; t < 300; ++t) {
      same(t, 0) = v(t, 0);
      same(t, 1) = v(300 - 1 - t, 0); // same marginal scale
    }
    auto prior = minnesota_moments(hyper, panel_from_matrix(same), spec);
    double own = prior.variance(0);
    double cross = prior.variance(3); // eq 0, series 1, lag 1
    REQUIRE_THAT(cross, Catch::Matchers::WithinRel(own, 0.2));
  }

  SECTION("cross scaling follows the residual-std ratio exactly") {
    MinnesotaHyper hyper;
    auto prior = minnesota_moments(hyper, panel, spec);
    double s0 = std::sqrt(detail::ar_residual_variance(v.col(0), 3));
    double s1 = std::sqrt(detail::ar_residual_variance(v.col(1), 3));
    double expect = hyper.lambda1 * hyper.lambda2 * s0 / s1;
    REQUIRE_THAT(std::sqrt(prior.variance(3)), Catch::Matchers::WithinRel(expect, 1e-12));
  }

  SECTION("prior mean is zero regardless of the data") {
    auto prior = minnesota_moments(MinnesotaHyper{}, panel, spec);
    REQUIRE(prior.mean.cwiseAbs().maxCoeff() == 0.0);
  }

  SECTION("exogenous block scaled by lambda4") {
    Rng r2(5);
    MatrixXd w(300, 2);
    for (Eigen::Index t = 0; t < 300; ++t)
      for (int j = 0; j < 2; ++j) w(t, j) = 0.5 * r2.normal();
    PredictorPanel preds;
    static_cast<ReturnPanel&>(preds) = panel_from_matrix(w);
    ModelSpec xspec;
    xspec.family = ModelFamily::VARX;
    xspec.lags = 3;
    MinnesotaHyper hyper;
    auto prior = minnesota_moments(hyper, panel, xspec, &preds);
    REQUIRE(prior.variance.size() == 2 * 8);
    double s0 = std::sqrt(detail::ar_residual_variance(v.col(0), 3));
    double sw = std::sqrt(detail::ar_residual_variance(w.col(0), 3));
    REQUIRE_THAT(std::sqrt(prior.variance(6)),
                 Catch::Matchers::WithinRel(hyper.lambda4 * s0 / sw, 1e-12));
  }

  SECTION("zero-variance series rejected") {
    MatrixXd flat = MatrixXd::Zero(100, 1);
    REQUIRE_THROWS_AS(minnesota_moments(MinnesotaHyper{}, panel_from_matrix(flat), spec), Error);
  }
}

TEST_CASE("bic_lag_scan") {
  SECTION("VAR(2) data selects lag 2 most of the time") {
    MatrixXd coef(2, 4); // N=2, p=2, series-major [s0l1 s0l2 s1l1 s1l2]
    coef << 0.5, -0.3, 0.1, 0.0,
            0.0, 0.2, 0.4, -0.25;
    MatrixXd sigma = MatrixXd::Identity(2, 2);
    int hits = 0;
    const int reps = 50;
    for (int r = 0; r < reps; ++r) {
      Rng rng(1000 + static_cast<std::uint64_t>(r));
      MatrixXd data = bvarcast::testing::simulate_var(rng, coef, sigma, 400, 2);
      VectorXd bic = bic_lag_scan(panel_from_matrix(data), 4);
      Eigen::Index best;
      bic.minCoeff(&best);
      if (best == 1) ++hits; // zero-based: lag order 2
    }
    REQUIRE(hits >= 45); // >= 90%
  }

  SECTION("fit term never increases with lag order") {
    Rng rng(6);
    MatrixXd data(250, 2);
    for (Eigen::Index t = 0; t < 250; ++t)
      for (int j = 0; j < 2; ++j) data(t, j) = rng.normal();
    ReturnPanel panel = panel_from_matrix(data);
    const int max_p = 5;
    VectorXd bic = bic_lag_scan(panel, max_p);
    const double t_eff = 250 - max_p;
    for (int p = 2; p <= max_p; ++p) {
      double fit_prev = bic(p - 2) - 2.0 * 2.0 * (p - 1) * std::log(t_eff);
      double fit_cur = bic(p - 1) - 2.0 * 2.0 * p * std::log(t_eff);
      REQUIRE(fit_cur <= fit_prev + 1e-9);
    }
  }

  SECTION("white noise prefers the smallest model") {
    int hits = 0;
    const int reps = 30;
    for (int r = 0; r < reps; ++r) {
      Rng rng(2000 + static_cast<std::uint64_t>(r));
      MatrixXd data(300, 1);
      for (Eigen::Index t = 0; t < 300; ++t) data(t, 0) = rng.normal();
      VectorXd bic = bic_lag_scan(panel_from_matrix(data), 4);
      Eigen::Index best;
      bic.minCoeff(&best);
      if (best == 0) ++hits;
    }
    REQUIRE(hits >= 24);
  }

  SECTION("insufficient sample rejected") {
    MatrixXd data = MatrixXd::Random(10, 3);
    REQUIRE_THROWS_AS(bic_lag_scan(panel_from_matrix(data), 3), Error);
  }
}
