#ifndef BVARCAST_COMMANDS_HPP
#define BVARCAST_COMMANDS_HPP

#include <chrono>
#include <filesystem>
#include <iostream>

#include "bvarcast/config.hpp"
#include "bvarcast/report.hpp"
#include "bvarcast/rolling.hpp"

namespace bvarcast {

namespace cmd_detail {

inline std::string iso_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class LineLog {
public:
  LineLog(const std::string& path, std::ostream* echo) : out_(path, std::ios::app), echo_(echo) {}
  void operator()(const std::string& msg) {
    std::string line = iso_now() + " " + msg;
    if (out_.good()) out_ << line << '\n' << std::flush;
    if (echo_) *echo_ << line << '\n';
  }

private:
  std::ofstream out_;
  std::ostream* echo_;
};

inline std::vector<PriceSeries> read_price_files(const RunConfig& cfg,
                                                 const std::vector<std::string>& files,
                                                 const std::vector<std::string>& names) {
  std::vector<PriceSeries> out;
  for (size_t i = 0; i < files.size(); ++i)
    out.push_back(PriceSeries::read_csv(cfg.data_path(files[i]), names[i]));
  return out;
}

} // namespace cmd_detail

// Transform raw price files into the return and predictor panels, logging
// every carried-forward predictor date.
inline void cmd_ingest(const RunConfig& cfg, std::ostream* echo = nullptr) {
  std::filesystem::create_directories(cfg.out_dir);
  cmd_detail::LineLog log(cfg.out_path("ingest_log.txt"), echo);

  auto targets = cmd_detail::read_price_files(cfg, cfg.target_files, cfg.target_names);
  ReturnPanel returns = build_return_panel(targets);
  write_panel_csv(returns, cfg.returns_csv());
  log("ingested " + std::to_string(targets.size()) + " target series, " +
      std::to_string(returns.values.rows()) + " return rows -> " + cfg.returns_csv());

  if (!cfg.predictor_files.empty()) {
    std::vector<Date> price_dates;
    for (const auto& obs : targets.front().observations()) price_dates.push_back(obs.date);
    auto raw = cmd_detail::read_price_files(cfg, cfg.predictor_files, cfg.predictor_names);
    PredictorPanel preds = align_predictors(price_dates, raw);
    write_panel_csv(preds, cfg.predictors_csv());
    for (size_t j = 0; j < preds.names.size(); ++j) {
      log("predictor " + preds.names[j] + ": " +
          std::to_string(preds.carried_dates[j].size()) + " carried-forward dates");
      for (const auto& d : preds.carried_dates[j])
        log("  carried " + preds.names[j] + " " + d.str());
    }
    log("aligned " + std::to_string(raw.size()) + " predictors -> " + cfg.predictors_csv());
  }
}

// Table-1-style descriptive statistics of the ingested return panel.
inline void cmd_describe(const RunConfig& cfg) {
  ReturnPanel panel = read_panel_csv(cfg.returns_csv());
  DescriptiveStats stats = describe(panel);
  auto out = csv::open_out(cfg.out_path("descriptive_stats.csv"));
  out << "statistic";
  for (const auto& n : stats.names) out << ',' << n;
  out << '\n';
  out.precision(10);
  auto row = [&](const char* name, auto getter) {
    out << name;
    for (const auto& s : stats.stats) out << ',' << getter(s);
    out << '\n';
  };
  row("maximum", [](const SeriesStats& s) { return s.maximum; });
  row("minimum", [](const SeriesStats& s) { return s.minimum; });
  row("mean", [](const SeriesStats& s) { return s.mean; });
  row("median", [](const SeriesStats& s) { return s.median; });
  row("std_dev", [](const SeriesStats& s) { return s.std_dev; });
  row("skewness", [](const SeriesStats& s) { return s.skewness; });
  row("kurtosis", [](const SeriesStats& s) { return s.kurtosis; });
}

// Roll every configured model over the panel; resumable, one draw file and
// one progress log per model. Returns false if any origin stays incomplete.
inline bool cmd_run(const RunConfig& cfg, std::ostream* echo = nullptr) {
  ReturnPanel panel = read_panel_csv(cfg.returns_csv());
  PredictorPanel preds;
  bool have_preds = std::filesystem::exists(cfg.predictors_csv());
  if (have_preds) {
    ReturnPanel p = read_panel_csv(cfg.predictors_csv());
    static_cast<ReturnPanel&>(preds) = std::move(p);
  }

  bool all_complete = true;
  for (const auto& id : cfg.models) {
    ModelSpec spec = cfg.model_spec(id);
    cmd_detail::LineLog log(cfg.out_path(id + ".log"), echo);
    RollingOptions opts;
    opts.store_path = cfg.forecasts_path(id);
    opts.n_threads = cfg.threads;
    opts.log = [&log, &id](const std::string& msg) { log(id + ": " + msg); };
    log(id + ": rolling " + std::to_string(cfg.plan.n_origins) + " origins, window " +
        std::to_string(cfg.plan.window) + ", " + std::to_string(spec.n_iter) + "/" +
        std::to_string(spec.n_burn) + " draws, seed " + std::to_string(cfg.seed));
    ForecastSet set = run_rolling(panel, have_preds ? &preds : nullptr, spec, cfg.plan, opts);
    if (!set.complete()) {
      all_complete = false;
      log(id + ": INCOMPLETE, " + std::to_string(set.failures.size()) + " failed origins");
    } else {
      log(id + ": complete -> " + opts.store_path);
    }
  }
  return all_complete;
}

// Emit the comparison tables and the combined text report.
inline void cmd_evaluate(const RunConfig& cfg) {
  std::vector<ForecastSet> sets;
  for (const auto& id : cfg.models) sets.push_back(load_forecasts(cfg.forecasts_path(id)));
  for (const auto& s : sets) {
    const RollingPlan& a = s.meta.plan;
    const RollingPlan& b = sets.front().meta.plan;
    if (a.window != b.window || a.first_origin != b.first_origin ||
        a.n_origins != b.n_origins || a.stride != b.stride)
      fail("evaluate: rolling plan of '" + s.meta.model + "' differs from '" +
           sets.front().meta.model + "'");
  }
  EvaluationReport report =
      build_report(sets, cfg.benchmark, cfg.mcs_alpha, cfg.bootstrap_reps, cfg.seed);

  auto write = [&](const std::string& file, const std::string& content) {
    auto out = csv::open_out(cfg.out_path(file));
    out << content;
  };
  write("table2_coverage.csv", render_percent_csv(report, true));
  write("table_success.csv", render_percent_csv(report, false));
  write("table3_rmse.csv", render_comparison_csv(report, Measure::RMSE));
  write("table4_crps.csv", render_comparison_csv(report, Measure::CRPS));
  write("table6_pl.csv", render_comparison_csv(report, Measure::LOG_SCORE));
  write("report.txt", render_text_report(report));

  std::vector<std::string> uni;
  for (const auto& id : cfg.models)
    if (model_by_id(id).family == ModelFamily::AR) uni.push_back(id);
  if (!uni.empty()) write("table7_univariate.csv", render_univariate_csv(report, uni));
}

// Credible-band export for one (model, series): enough to redraw the
// interval figures in any plotting tool.
inline void cmd_plot_data(const RunConfig& cfg, const std::string& model,
                          const std::string& series) {
  bool known = false;
  for (const auto& id : cfg.models) known |= id == model;
  require(known, "plot-data: model '" + model + "' is not in the configured model list");
  ForecastSet set = load_forecasts(cfg.forecasts_path(model));
  Eigen::Index col = -1;
  for (size_t i = 0; i < set.meta.series.size(); ++i)
    if (set.meta.series[i] == series) col = static_cast<Eigen::Index>(i);
  require(col >= 0, "plot-data: unknown series '" + series + "'");

  auto out = csv::open_out(cfg.out_path("band_" + model + "_" + series + ".csv"));
  out << "date,realized,point,lower,upper\n";
  out.precision(17);
  for (const auto& rec : set.records) {
    IntervalBand band = credible_band(rec.pred, col);
    out << rec.date.str() << ',' << rec.realized(col) << ',' << rec.point_forecast()(col)
        << ',' << band.lower << ',' << band.upper << '\n';
  }
}

} // namespace bvarcast

#endif
