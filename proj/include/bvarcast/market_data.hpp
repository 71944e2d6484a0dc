#ifndef BVARCAST_MARKET_DATA_HPP
#define BVARCAST_MARKET_DATA_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "bvarcast/calendar.hpp"
#include "bvarcast/csv.hpp"
#include "bvarcast/linalg.hpp"

namespace bvarcast {

struct PriceObservation {
  Date date;
  double price = 0.0;
};

// Daily price history of one asset; dates strictly increasing, prices > 0.
class PriceSeries {
public:
  PriceSeries(std::string name, std::vector<PriceObservation> observations)
      : name_(std::move(name)), obs_(std::move(observations)) {
    for (size_t i = 0; i < obs_.size(); ++i) {
      if (!(obs_[i].price > 0.0) || !std::isfinite(obs_[i].price))
        fail(name_ + ": non-positive price on " + obs_[i].date.str());
      if (i > 0 && !(obs_[i].date > obs_[i - 1].date))
        fail(name_ + ": dates not strictly increasing at " + obs_[i].date.str());
    }
  }

  const std::string& name() const { return name_; }
  const std::vector<PriceObservation>& observations() const { return obs_; }
  size_t size() const { return obs_.size(); }

  static PriceSeries read_csv(const std::string& path, const std::string& name) {
    auto t = csv::read_file(path);
    if (t.header.size() != 2 || t.header[0] != "date" || t.header[1] != "price")
      fail(path + ": expected header 'date,price'");
    std::vector<PriceObservation> obs;
    obs.reserve(t.rows.size());
    for (size_t i = 0; i < t.rows.size(); ++i) {
      const std::string where = path + ":" + std::to_string(i + 2);
      Date d = Date::parse(t.rows[i][0]);
      double p = csv::parse_double(t.rows[i][1], where);
      if (!(p > 0.0)) fail(where + ": non-positive price on " + d.str());
      obs.push_back({d, p});
    }
    return PriceSeries(name, std::move(obs));
  }

private:
  std::string name_;
  std::vector<PriceObservation> obs_;
};

// Dated T x N matrix of percent log returns.
struct ReturnPanel {
  std::vector<Date> dates;
  std::vector<std::string> names;
  MatrixXd values; // T x N

  void validate() const {
    require(static_cast<size_t>(values.rows()) == dates.size(),
            "ReturnPanel: row count must equal date count");
    require(static_cast<size_t>(values.cols()) == names.size(),
            "ReturnPanel: column count must equal name count");
    require(values.allFinite(), "ReturnPanel: non-finite value");
    for (size_t i = 1; i < dates.size(); ++i)
      require(dates[i] > dates[i - 1], "ReturnPanel: dates not strictly increasing");
  }
};

// Calendar-aligned predictor returns; closed-market dates hold exactly 0.0.
struct PredictorPanel : ReturnPanel {
  std::vector<std::vector<Date>> carried_dates; // per series, dates with no quote
};

struct SeriesStats {
  double maximum, minimum, mean, median, std_dev, skewness, kurtosis;
};

struct DescriptiveStats {
  std::vector<std::string> names;
  std::vector<SeriesStats> stats;
};

// y_t = 100 * log(S_t / S_{t-1})
inline std::vector<double> to_log_returns(const PriceSeries& prices) {
  require(prices.size() >= 2, prices.name() + ": need at least 2 observations");
  const auto& obs = prices.observations();
  std::vector<double> r(obs.size() - 1);
  for (size_t t = 1; t < obs.size(); ++t)
    r[t - 1] = 100.0 * std::log(obs[t].price / obs[t - 1].price);
  return r;
}

// Assembles the return panel for series sharing one complete date axis.
// A missing date in any series is an error, not a fill.
inline ReturnPanel build_return_panel(const std::vector<PriceSeries>& series) {
  require(!series.empty(), "build_return_panel: no series");
  const auto& ref = series.front().observations();
  require(ref.size() >= 2, "build_return_panel: need at least 2 observations");
  for (const auto& s : series) {
    require(s.size() == ref.size(),
            s.name() + ": date axis differs from " + series.front().name());
    for (size_t t = 0; t < ref.size(); ++t)
      if (s.observations()[t].date != ref[t].date)
        fail(s.name() + ": date axis differs from " + series.front().name() +
             " at " + s.observations()[t].date.str());
  }
  ReturnPanel panel;
  panel.values.resize(static_cast<Eigen::Index>(ref.size() - 1),
                      static_cast<Eigen::Index>(series.size()));
  for (size_t j = 0; j < series.size(); ++j) {
    panel.names.push_back(series[j].name());
    auto r = to_log_returns(series[j]);
    for (size_t t = 0; t < r.size(); ++t)
      panel.values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = r[t];
  }
  for (size_t t = 1; t < ref.size(); ++t) panel.dates.push_back(ref[t].date);
  panel.validate();
  return panel;
}

// Aligns predictor prices onto the target calendar: a date with no quote
// reuses the previous target date's price, giving a return of exactly 0.
// Quotes on dates outside the target calendar are never consumed.
inline PredictorPanel align_predictors(const std::vector<Date>& target_dates,
                                       const std::vector<PriceSeries>& raw) {
  require(target_dates.size() >= 2, "align_predictors: need at least 2 target dates");
  PredictorPanel panel;
  const size_t t_out = target_dates.size() - 1;
  panel.values.resize(static_cast<Eigen::Index>(t_out),
                      static_cast<Eigen::Index>(raw.size()));
  panel.carried_dates.resize(raw.size());

  for (size_t j = 0; j < raw.size(); ++j) {
    const auto& obs = raw[j].observations();
    panel.names.push_back(raw[j].name());
    if (obs.empty() || obs.front().date > target_dates.front())
      fail(raw[j].name() + ": predictor series starts after first target date " +
           target_dates.front().str());
    size_t cursor = 0;
    double prev_price = 0.0;
    for (size_t k = 0; k < target_dates.size(); ++k) {
      bool quoted = false;
      while (cursor < obs.size() && obs[cursor].date <= target_dates[k]) {
        if (obs[cursor].date == target_dates[k]) quoted = true;
        ++cursor;
      }
      double price = quoted ? obs[cursor - 1].price : prev_price;
      if (k == 0 && !quoted) {
        // anchor: last quote at or before the first target date
        price = obs[cursor - 1].price;
        quoted = true;
      }
      if (k > 0) {
        panel.values(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(j)) =
            quoted ? 100.0 * std::log(price / prev_price) : 0.0;
        if (!quoted) panel.carried_dates[j].push_back(target_dates[k]);
      }
      prev_price = price;
    }
  }
  panel.dates.assign(target_dates.begin() + 1, target_dates.end());
  panel.validate();
  return panel;
}

namespace detail {

inline double median_of_sorted(std::vector<double>& x) {
  std::sort(x.begin(), x.end());
  size_t n = x.size();
  return n % 2 == 1 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

} // namespace detail

// Per-series moments; std dev uses the T-1 denominator, skewness and
// kurtosis are the population-normalized standardized moments (raw
// kurtosis, so the normal reference value is 3).
inline DescriptiveStats describe(const ReturnPanel& panel) {
  const Eigen::Index t_len = panel.values.rows();
  require(t_len >= 4, "describe: need at least 4 observations per series");
  DescriptiveStats out;
  out.names = panel.names;
  for (Eigen::Index j = 0; j < panel.values.cols(); ++j) {
    auto col = panel.values.col(j);
    SeriesStats s{};
    s.maximum = col.maxCoeff();
    s.minimum = col.minCoeff();
    s.mean = col.mean();
    std::vector<double> sorted(col.data(), col.data() + t_len);
    s.median = detail::median_of_sorted(sorted);
    const double n = static_cast<double>(t_len);
    double m2 = (col.array() - s.mean).square().sum() / n;
    if (!(m2 > 0.0))
      fail(panel.names[j] + ": zero variance, skewness/kurtosis undefined");
    double m3 = (col.array() - s.mean).cube().sum() / n;
    double m4 = (col.array() - s.mean).pow(4).sum() / n;
    s.std_dev = std::sqrt(m2 * n / (n - 1.0));
    s.skewness = m3 / std::pow(m2, 1.5);
    s.kurtosis = m4 / (m2 * m2);
    out.stats.push_back(s);
  }
  return out;
}

// ---- panel CSV interchange: `date` first column, one column per series ----

inline void write_panel_csv(const ReturnPanel& panel, const std::string& path) {
  auto out = csv::open_out(path);
  out << "date";
  for (const auto& n : panel.names) out << ',' << n;
  out << '\n';
  out.precision(17);
  for (Eigen::Index t = 0; t < panel.values.rows(); ++t) {
    out << panel.dates[static_cast<size_t>(t)].str();
    for (Eigen::Index j = 0; j < panel.values.cols(); ++j) out << ',' << panel.values(t, j);
    out << '\n';
  }
}

inline ReturnPanel read_panel_csv(const std::string& path) {
  auto t = csv::read_file(path);
  require(t.header.size() >= 2 && t.header[0] == "date",
          path + ": expected header 'date,<series...>'");
  ReturnPanel panel;
  panel.names.assign(t.header.begin() + 1, t.header.end());
  panel.values.resize(static_cast<Eigen::Index>(t.rows.size()),
                      static_cast<Eigen::Index>(panel.names.size()));
  for (size_t i = 0; i < t.rows.size(); ++i) {
    panel.dates.push_back(Date::parse(t.rows[i][0]));
    for (size_t j = 0; j < panel.names.size(); ++j)
      panel.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          csv::parse_double(t.rows[i][j + 1], path + ":" + std::to_string(i + 2));
  }
  panel.validate();
  return panel;
}

} // namespace bvarcast

#endif
