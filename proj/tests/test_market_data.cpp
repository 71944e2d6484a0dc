#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <numeric>

#include "bvarcast/market_data.hpp"
#include "bvarcast/rng.hpp"

using namespace bvarcast;

namespace {

PriceSeries series_from(const std::string& name, Date start, const std::vector<double>& prices) {
  std::vector<PriceObservation> obs;
  Date d = start;
  for (double p : prices) {
    obs.push_back({d, p});
    d = d.next();
  }
  return PriceSeries(name, std::move(obs));
}

} // namespace

TEST_CASE("to_log_returns basics") {
  Date d0 = Date::from_ymd(2020, 1, 1);

  SECTION("equal prices force a zero return") {
    auto r = to_log_returns(series_from("x", d0, {100.0, 100.0}));
    REQUIRE(r.size() == 1);
    REQUIRE(r[0] == 0.0);
  }
  SECTION("analytic inverse of the transform") {
    auto r = to_log_returns(series_from("x", d0, {100.0, 100.0 * std::exp(0.02)}));
    REQUIRE_THAT(r[0], Catch::Matchers::WithinAbs(2.0, 1e-12));
  }
  SECTION("output length is input length minus one") {
    auto r = to_log_returns(series_from("x", d0, {1.0, 2.0, 3.0, 4.0}));
    REQUIRE(r.size() == 3);
  }
  SECTION("fewer than two observations rejected") {
    REQUIRE_THROWS_AS(to_log_returns(series_from("x", d0, {100.0})), Error);
  }
  SECTION("non-positive price rejected with the offending date") {
    try {
      series_from("x", d0, {100.0, -1.0});
      FAIL("expected rejection");
    } catch (const Error& e) {
      REQUIRE(std::string(e.what()).find("2020-01-02") != std::string::npos);
    }
  }
  SECTION("duplicate or decreasing dates rejected") {
    std::vector<PriceObservation> obs = {{d0, 1.0}, {d0, 2.0}};
    REQUIRE_THROWS_AS(PriceSeries("x", obs), Error);
  }
}

TEST_CASE("price round trip through returns") {
  Rng rng(7);
  Date d0 = Date::from_ymd(2018, 3, 1);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> prices{50.0 + 100.0 * rng.uniform()};
    for (int t = 0; t < 300; ++t)
      prices.push_back(prices.back() * std::exp(0.05 * rng.normal()));
    auto series = series_from("p", d0, prices);
    auto returns = to_log_returns(series);
    double price = prices[0];
    for (size_t t = 0; t < returns.size(); ++t) {
      price *= std::exp(returns[t] / 100.0);
      REQUIRE_THAT(price, Catch::Matchers::WithinRel(prices[t + 1], 1e-9));
    }
  }
}

TEST_CASE("align_predictors carry-forward") {
  // target calendar: 7 consecutive days starting Friday 2020-01-03
  std::vector<Date> target;
  Date d = Date::from_ymd(2020, 1, 3);
  for (int i = 0; i < 7; ++i) {
    target.push_back(d);
    d = d.next();
  }

  SECTION("weekend gaps carry exactly zero") {
    // quotes Fri 03, Mon 06, Tue 07, ... (no Sat 04 / Sun 05)
    std::vector<PriceObservation> obs = {{Date::from_ymd(2020, 1, 3), 10.0},
                                         {Date::from_ymd(2020, 1, 6), 12.0},
                                         {Date::from_ymd(2020, 1, 7), 11.0},
                                         {Date::from_ymd(2020, 1, 8), 11.5},
                                         {Date::from_ymd(2020, 1, 9), 12.5}};
    PredictorPanel panel = align_predictors(target, {PriceSeries("eq", obs)});
    REQUIRE(panel.values.rows() == 6);
    REQUIRE(panel.values(0, 0) == 0.0); // Sat
    REQUIRE(panel.values(1, 0) == 0.0); // Sun
    REQUIRE_THAT(panel.values(2, 0),
                 Catch::Matchers::WithinAbs(100.0 * std::log(12.0 / 10.0), 1e-12));
    REQUIRE(panel.carried_dates[0].size() == 2);
    REQUIRE(panel.carried_dates[0][0].str() == "2020-01-04");
  }

  SECTION("fully quoted predictor equals plain log returns") {
    std::vector<double> prices = {10, 11, 12, 11, 13, 12, 14};
    auto series = series_from("full", target[0], prices);
    PredictorPanel panel = align_predictors(target, {series});
    auto direct = to_log_returns(series);
    for (size_t t = 0; t < direct.size(); ++t)
      REQUIRE(panel.values(static_cast<Eigen::Index>(t), 0) == direct[t]);
    REQUIRE(panel.carried_dates[0].empty());
  }

  SECTION("two missing days then a quote give two zeros then the gap return") {
    std::vector<PriceObservation> obs = {{target[0], 20.0}, {target[3], 25.0}};
    std::vector<Date> four(target.begin(), target.begin() + 4);
    PredictorPanel panel = align_predictors(four, {PriceSeries("gap", obs)});
    REQUIRE(panel.values(0, 0) == 0.0);
    REQUIRE(panel.values(1, 0) == 0.0);
    REQUIRE_THAT(panel.values(2, 0),
                 Catch::Matchers::WithinAbs(100.0 * std::log(25.0 / 20.0), 1e-12));
  }

  SECTION("series starting after the first target date is rejected by name") {
    std::vector<PriceObservation> obs = {{target[2], 1.0}, {target[3], 2.0}};
    try {
      align_predictors(target, {PriceSeries("latecomer", obs)});
      FAIL("expected rejection");
    } catch (const Error& e) {
      REQUIRE(std::string(e.what()).find("latecomer") != std::string::npos);
    }
  }

  SECTION("aligning an already-aligned series changes nothing") {
    std::vector<PriceObservation> sparse = {{target[0], 10.0},
                                            {target[2], 12.0},
                                            {target[5], 9.0}};
    PredictorPanel first = align_predictors(target, {PriceSeries("eq", sparse)});
    // materialize the carried price path and align again
    std::vector<double> carried{10.0};
    for (Eigen::Index t = 0; t < first.values.rows(); ++t)
      carried.push_back(carried.back() * std::exp(first.values(t, 0) / 100.0));
    PredictorPanel second = align_predictors(target, {series_from("eq", target[0], carried)});
    for (Eigen::Index t = 0; t < first.values.rows(); ++t)
      REQUIRE_THAT(second.values(t, 0), Catch::Matchers::WithinAbs(first.values(t, 0), 1e-12));
  }
}

TEST_CASE("build_return_panel wants one shared complete calendar") {
  Date d0 = Date::from_ymd(2020, 1, 1);
  auto a = series_from("a", d0, {1, 2, 3, 4});
  auto b = series_from("b", d0, {2, 3, 4, 5});
  ReturnPanel panel = build_return_panel({a, b});
  REQUIRE(panel.values.rows() == 3);
  REQUIRE(panel.names == std::vector<std::string>{"a", "b"});

  auto shifted = series_from("c", d0.next(), {2, 3, 4, 5});
  REQUIRE_THROWS_AS(build_return_panel({a, shifted}), Error);
  auto shorter = series_from("c", d0, {2, 3, 4});
  REQUIRE_THROWS_AS(build_return_panel({a, shorter}), Error);
}

TEST_CASE("describe moments") {
  SECTION("symmetric two-point series") {
    MatrixXd values(6, 1);
    values << -1, 1, -1, 1, -1, 1;
    ReturnPanel panel;
    panel.names = {"sym"};
    panel.values = values;
    Date d = Date::from_ymd(2020, 1, 1);
    for (int i = 0; i < 6; ++i) {
      panel.dates.push_back(d);
      d = d.next();
    }
    DescriptiveStats stats = describe(panel);
    REQUIRE_THAT(stats.stats[0].mean, Catch::Matchers::WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(stats.stats[0].skewness, Catch::Matchers::WithinAbs(0.0, 1e-15));
    REQUIRE(stats.stats[0].maximum == 1.0);
    REQUIRE(stats.stats[0].minimum == -1.0);
    REQUIRE(stats.stats[0].median == 0.0); // even-length midpoint
    REQUIRE(stats.stats[0].kurtosis >= 1.0);
  }

  SECTION("standard normal Monte Carlo kurtosis targets 3") {
    Rng rng(123);
    MatrixXd values(1000000, 1);
    for (Eigen::Index t = 0; t < values.rows(); ++t) values(t, 0) = rng.normal();
    ReturnPanel panel;
    panel.names = {"z"};
    panel.values = values;
    Date d = Date::from_ymd(1990, 1, 1);
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      panel.dates.push_back(d);
      d = d.next();
    }
    DescriptiveStats stats = describe(panel);
    REQUIRE_THAT(stats.stats[0].kurtosis, Catch::Matchers::WithinAbs(3.0, 0.05));
    REQUIRE_THAT(stats.stats[0].std_dev, Catch::Matchers::WithinAbs(1.0, 0.01));
  }

  SECTION("zero-variance series rejected") {
    MatrixXd values = MatrixXd::Constant(10, 1, 0.5);
    ReturnPanel panel;
    panel.names = {"flat"};
    panel.values = values;
    Date d = Date::from_ymd(2020, 1, 1);
    for (int i = 0; i < 10; ++i) {
      panel.dates.push_back(d);
      d = d.next();
    }
    REQUIRE_THROWS_AS(describe(panel), Error);
  }

  SECTION("statistics are invariant to shuffling rows in time") {
    Rng rng(5);
    MatrixXd values(41, 2);
    for (Eigen::Index t = 0; t < values.rows(); ++t)
      for (Eigen::Index j = 0; j < 2; ++j) values(t, j) = rng.normal();
    ReturnPanel panel = [&] {
      ReturnPanel p;
      p.names = {"a", "b"};
      p.values = values;
      Date d = Date::from_ymd(2020, 1, 1);
      for (Eigen::Index i = 0; i < values.rows(); ++i) {
        p.dates.push_back(d);
        d = d.next();
      }
      return p;
    }();
    DescriptiveStats before = describe(panel);

    std::vector<Eigen::Index> perm(static_cast<size_t>(values.rows()));
    std::iota(perm.begin(), perm.end(), 0);
    for (size_t i = perm.size(); i > 1; --i)
      std::swap(perm[i - 1], perm[rng.uniform_index(i)]);
    MatrixXd shuffled(values.rows(), values.cols());
    for (size_t i = 0; i < perm.size(); ++i)
      shuffled.row(static_cast<Eigen::Index>(i)) = values.row(perm[i]);
    panel.values = shuffled;
    DescriptiveStats after = describe(panel);

    for (int j = 0; j < 2; ++j) {
      REQUIRE(before.stats[j].maximum == after.stats[j].maximum);
      REQUIRE(before.stats[j].minimum == after.stats[j].minimum);
      REQUIRE_THAT(after.stats[j].mean, Catch::Matchers::WithinAbs(before.stats[j].mean, 1e-12));
      REQUIRE_THAT(after.stats[j].std_dev,
                   Catch::Matchers::WithinAbs(before.stats[j].std_dev, 1e-12));
      REQUIRE_THAT(after.stats[j].median, Catch::Matchers::WithinAbs(before.stats[j].median, 1e-12));
      REQUIRE_THAT(after.stats[j].skewness,
                   Catch::Matchers::WithinAbs(before.stats[j].skewness, 1e-10));
      REQUIRE_THAT(after.stats[j].kurtosis,
                   Catch::Matchers::WithinAbs(before.stats[j].kurtosis, 1e-10));
    }
  }
}

TEST_CASE("panel csv round trip") {
  Rng rng(9);
  MatrixXd values(25, 3);
  for (Eigen::Index t = 0; t < 25; ++t)
    for (Eigen::Index j = 0; j < 3; ++j) values(t, j) = 10.0 * rng.normal();
  ReturnPanel panel;
  panel.names = {"alpha", "beta", "gamma"};
  panel.values = values;
  Date d = Date::from_ymd(2019, 6, 1);
  for (int i = 0; i < 25; ++i) {
    panel.dates.push_back(d);
    d = d.next();
  }

  auto path = std::filesystem::temp_directory_path() / "bvarcast_test_panel.csv";
  write_panel_csv(panel, path.string());
  ReturnPanel loaded = read_panel_csv(path.string());
  REQUIRE(loaded.names == panel.names);
  REQUIRE(loaded.dates.size() == panel.dates.size());
  REQUIRE((loaded.values - panel.values).cwiseAbs().maxCoeff() == 0.0);
  std::filesystem::remove(path);
}
