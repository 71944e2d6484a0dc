#ifndef BVARCAST_REPORT_HPP
#define BVARCAST_REPORT_HPP

#include <iomanip>
#include <map>
#include <sstream>

#include "bvarcast/model_compare.hpp"

namespace bvarcast {

enum class Measure { RMSE, CRPS, LOG_SCORE };

struct ModelEvaluation {
  std::string model; // canonical id
  std::string label;
  VectorXd rmse, crps, log_score;       // raw per-series values
  VectorXd rmse_ratio, crps_ratio;      // vs benchmark (benchmark row = 1)
  VectorXd ls_diff;                     // vs benchmark (benchmark row = 0)
  VectorXd coverage_violation, success; // percentages
  // per series: Diebold-Mariano p vs benchmark and star count (1 = 10%, 2 = 5%)
  std::map<Measure, VectorXd> dm_p;
  std::map<Measure, std::vector<int>> stars;
  std::map<Measure, std::vector<bool>> in_mcs;
};

struct EvaluationReport {
  std::vector<std::string> series;
  std::string benchmark;
  std::vector<ModelEvaluation> models;
  double mcs_alpha = 0.10;
};

namespace detail {

inline MatrixXd per_origin_loss(const ForecastSet& set, Measure m) {
  switch (m) {
    case Measure::RMSE: return squared_errors_per_origin(set);
    case Measure::CRPS: return crps_per_origin(set);
    case Measure::LOG_SCORE: return -log_score_per_origin(set); // loss = negative score
  }
  fail("per_origin_loss: bad measure");
}

} // namespace detail

// Cross-model comparison against a benchmark: metric levels, ratios or
// differences, Diebold-Mariano stars, and model-confidence-set membership
// per series and measure.
inline EvaluationReport build_report(const std::vector<ForecastSet>& sets,
                                     const std::string& benchmark_id, double mcs_alpha = 0.10,
                                     int bootstrap_reps = 5000, std::uint64_t seed = 0) {
  require(!sets.empty(), "build_report: no forecast sets");
  const ForecastSet* bench = nullptr;
  for (const auto& s : sets)
    if (s.meta.model == benchmark_id) bench = &s;
  require(bench != nullptr, "build_report: benchmark '" + benchmark_id + "' not among the sets");

  const auto& series = bench->meta.series;
  for (const auto& s : sets) {
    require(s.meta.series == series, "build_report: series mismatch across models");
    require(s.records.size() == bench->records.size(),
            "build_report: origin count mismatch for " + s.meta.model);
    for (size_t r = 0; r < s.records.size(); ++r)
      require(s.records[r].origin == bench->records[r].origin,
              "build_report: origin rows differ for " + s.meta.model);
  }

  const Eigen::Index n = static_cast<Eigen::Index>(series.size());
  const int n_models = static_cast<int>(sets.size());
  const std::vector<Measure> measures = {Measure::RMSE, Measure::CRPS, Measure::LOG_SCORE};

  EvaluationReport report;
  report.series = series;
  report.benchmark = benchmark_id;
  report.mcs_alpha = mcs_alpha;

  // per-origin losses per measure and model
  std::map<Measure, std::vector<MatrixXd>> losses;
  for (Measure m : measures) {
    auto& v = losses[m];
    v.reserve(sets.size());
    for (const auto& s : sets) v.push_back(detail::per_origin_loss(s, m));
  }

  VectorXd bench_rmse = rmse(*bench);
  VectorXd bench_crps = crps(*bench);
  VectorXd bench_ls = log_score(*bench);

  for (int j = 0; j < n_models; ++j) {
    const auto& s = sets[static_cast<size_t>(j)];
    ModelEvaluation ev;
    ev.model = s.meta.model;
    ev.label = model_by_id(s.meta.model).label;
    ev.rmse = rmse(s);
    ev.crps = crps(s);
    ev.log_score = log_score(s);
    ev.coverage_violation = interval_violations(s);
    ev.success = success_rate(s);
    ev.rmse_ratio = ev.rmse.cwiseQuotient(bench_rmse);
    ev.crps_ratio = ev.crps.cwiseQuotient(bench_crps);
    ev.ls_diff = ev.log_score - bench_ls;

    const bool is_bench = s.meta.model == benchmark_id;
    for (Measure m : measures) {
      VectorXd pvals = VectorXd::Constant(n, 1.0);
      std::vector<int> stars(static_cast<size_t>(n), 0);
      if (!is_bench) {
        for (Eigen::Index i = 0; i < n; ++i) {
          LossSeries la{ev.model, series[static_cast<size_t>(i)],
                        losses[m][static_cast<size_t>(j)].col(i)};
          LossSeries lb{benchmark_id, series[static_cast<size_t>(i)],
                        detail::per_origin_loss(*bench, m).col(i)};
          DmResult dm = dm_test(la, lb);
          pvals(i) = dm.p_value;
          if (dm.p_value < 0.05) stars[static_cast<size_t>(i)] = 2;
          else if (dm.p_value < 0.10) stars[static_cast<size_t>(i)] = 1;
        }
      }
      ev.dm_p[m] = pvals;
      ev.stars[m] = stars;
      ev.in_mcs[m] = std::vector<bool>(static_cast<size_t>(n), true);
    }
    report.models.push_back(std::move(ev));
  }

  // model confidence set per series and measure
  if (n_models >= 2) {
    int which = 0;
    for (Measure m : measures) {
      for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<LossSeries> ls;
        ls.reserve(sets.size());
        for (int j = 0; j < n_models; ++j)
          ls.push_back({sets[static_cast<size_t>(j)].meta.model, series[static_cast<size_t>(i)],
                        losses[m][static_cast<size_t>(j)].col(i)});
        McsResult mcs = model_confidence_set(
            ls, mcs_alpha, bootstrap_reps, 0,
            detail::mix64(seed ^ detail::mix64(static_cast<std::uint64_t>(++which))));
        for (int j = 0; j < n_models; ++j)
          report.models[static_cast<size_t>(j)].in_mcs[m][static_cast<size_t>(i)] = false;
        for (int j : mcs.survivors)
          report.models[static_cast<size_t>(j)].in_mcs[m][static_cast<size_t>(i)] = true;
      }
    }
  }
  return report;
}

// ---- table rendering ----------------------------------------------------

namespace detail {

inline std::string fmt_value(double v, int prec = 5) {
  std::ostringstream ss;
  ss << std::setprecision(prec) << v;
  return ss.str();
}

inline std::string star_suffix(int stars) {
  return stars == 2 ? "**" : stars == 1 ? "*" : "";
}

} // namespace detail

// Benchmark row carries the raw metric; other rows carry the ratio (or
// difference for the log score) with Diebold-Mariano stars appended, and
// one mcs_<series> membership column per series.
inline std::string render_comparison_csv(const EvaluationReport& report, Measure measure) {
  std::ostringstream out;
  out << "model";
  for (const auto& s : report.series) out << ',' << s;
  for (const auto& s : report.series) out << ",mcs_" << s;
  out << '\n';
  for (const auto& ev : report.models) {
    const bool is_bench = ev.model == report.benchmark;
    out << ev.label;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(report.series.size()); ++i) {
      double v;
      if (measure == Measure::RMSE) v = is_bench ? ev.rmse(i) : ev.rmse_ratio(i);
      else if (measure == Measure::CRPS) v = is_bench ? ev.crps(i) : ev.crps_ratio(i);
      else v = is_bench ? ev.log_score(i) : ev.ls_diff(i);
      out << ',' << detail::fmt_value(v);
      if (!is_bench) out << detail::star_suffix(ev.stars.at(measure)[static_cast<size_t>(i)]);
    }
    for (size_t i = 0; i < report.series.size(); ++i)
      out << ',' << (ev.in_mcs.at(measure)[i] ? "true" : "false");
    out << '\n';
  }
  return out.str();
}

inline std::string render_percent_csv(const EvaluationReport& report, bool coverage) {
  std::ostringstream out;
  out << "model";
  for (const auto& s : report.series) out << ',' << s;
  out << '\n';
  for (const auto& ev : report.models) {
    out << ev.label;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(report.series.size()); ++i)
      out << ',' << detail::fmt_value(coverage ? ev.coverage_violation(i) : ev.success(i));
    out << '\n';
  }
  return out.str();
}

inline std::string render_text_report(const EvaluationReport& report) {
  std::ostringstream out;
  auto section = [&](const std::string& title, Measure m, bool ratios) {
    out << title << '\n';
    out << std::left << std::setw(14) << "model";
    for (const auto& s : report.series) out << std::right << std::setw(14) << s;
    out << std::right << std::setw(8) << "mcs" << '\n';
    for (const auto& ev : report.models) {
      const bool is_bench = ev.model == report.benchmark;
      out << std::left << std::setw(14) << ev.label;
      for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(report.series.size()); ++i) {
        double v;
        if (m == Measure::RMSE) v = is_bench || !ratios ? ev.rmse(i) : ev.rmse_ratio(i);
        else if (m == Measure::CRPS) v = is_bench || !ratios ? ev.crps(i) : ev.crps_ratio(i);
        else v = is_bench || !ratios ? ev.log_score(i) : ev.ls_diff(i);
        std::string cell = detail::fmt_value(v) +
                           (is_bench ? "" : detail::star_suffix(ev.stars.at(m)[static_cast<size_t>(i)]));
        out << std::right << std::setw(14) << cell;
      }
      std::string mcs;
      for (size_t i = 0; i < report.series.size(); ++i)
        mcs += ev.in_mcs.at(m)[i] ? 'y' : '.';
      out << std::right << std::setw(8) << mcs << '\n';
    }
    out << '\n';
  };
  out << "forecast comparison vs benchmark " << report.benchmark << "  (stars: * 10%, ** 5%; "
      << "mcs column: one flag per series at alpha = " << report.mcs_alpha << ")\n\n";
  section("RMSE (benchmark row: level; other rows: ratio to benchmark)", Measure::RMSE, true);
  section("CRPS (benchmark row: level; other rows: ratio to benchmark)", Measure::CRPS, true);
  section("Log predictive score (benchmark row: level; other rows: difference)",
          Measure::LOG_SCORE, true);

  out << "95% interval violations (%)\n";
  out << std::left << std::setw(14) << "model";
  for (const auto& s : report.series) out << std::right << std::setw(14) << s;
  out << '\n';
  for (const auto& ev : report.models) {
    out << std::left << std::setw(14) << ev.label;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(report.series.size()); ++i)
      out << std::right << std::setw(14) << detail::fmt_value(ev.coverage_violation(i));
    out << '\n';
  }
  out << "\nsuccess rate (%)\n";
  out << std::left << std::setw(14) << "model";
  for (const auto& s : report.series) out << std::right << std::setw(14) << s;
  out << '\n';
  for (const auto& ev : report.models) {
    out << std::left << std::setw(14) << ev.label;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(report.series.size()); ++i)
      out << std::right << std::setw(14) << detail::fmt_value(ev.success(i));
    out << '\n';
  }
  return out.str();
}

// Univariate robustness table: RMSE and CRPS levels for the AR models next
// to the multivariate benchmark.
inline std::string render_univariate_csv(const EvaluationReport& report,
                                         const std::vector<std::string>& univariate_ids) {
  std::ostringstream out;
  out << "measure,model";
  for (const auto& s : report.series) out << ',' << s;
  out << '\n';
  auto row = [&](const std::string& measure, const ModelEvaluation& ev, const VectorXd& vals) {
    out << measure << ',' << ev.label;
    for (Eigen::Index i = 0; i < vals.size(); ++i) out << ',' << detail::fmt_value(vals(i));
    out << '\n';
  };
  for (const auto& ev : report.models) {
    bool uni = std::find(univariate_ids.begin(), univariate_ids.end(), ev.model) !=
               univariate_ids.end();
    if (uni || ev.model == report.benchmark) row("RMSE", ev, ev.rmse);
  }
  for (const auto& ev : report.models) {
    bool uni = std::find(univariate_ids.begin(), univariate_ids.end(), ev.model) !=
               univariate_ids.end();
    if (uni || ev.model == report.benchmark) row("CRPS", ev, ev.crps);
  }
  return out.str();
}

} // namespace bvarcast

#endif
