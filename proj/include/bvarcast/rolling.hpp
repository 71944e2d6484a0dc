#ifndef BVARCAST_ROLLING_HPP
#define BVARCAST_ROLLING_HPP

#include <atomic>
#include <condition_variable>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>

#include "bvarcast/store.hpp"

namespace bvarcast {

inline std::string canonical_model_id(const ModelSpec& spec) {
  for (const auto& m : known_models())
    if (m.family == spec.family && m.volatility == spec.volatility &&
        (m.lags == 0 || m.lags == spec.lags))
      return m.id;
  fail("canonical_model_id: no registered model for this spec");
}

struct RollingOptions {
  std::string store_path;                       // empty = keep in memory only
  int n_threads = 1;                            // origins run in parallel
  std::function<void(const std::string&)> log;  // per-origin progress callback
  bool resume = true;
};

namespace detail {

inline ReturnPanel slice_panel(const ReturnPanel& panel, int first, int count) {
  ReturnPanel out;
  out.names = panel.names;
  out.dates.assign(panel.dates.begin() + first, panel.dates.begin() + first + count);
  out.values = panel.values.middleRows(first, count);
  return out;
}

inline PredictorPanel slice_predictors(const PredictorPanel& preds, int first, int count) {
  PredictorPanel out;
  out.names = preds.names;
  out.dates.assign(preds.dates.begin() + first, preds.dates.begin() + first + count);
  out.values = preds.values.middleRows(first, count);
  return out;
}

inline void check_manifest_matches(const ForecastMeta& have, const ForecastMeta& want,
                                   const std::string& path) {
  auto mismatch = [&](const std::string& field) {
    fail(path + ": manifest mismatch on field '" + field + "'");
  };
  if (have.model != want.model) mismatch("model");
  if (have.family != want.family) mismatch("family");
  if (have.volatility != want.volatility) mismatch("volatility");
  if (have.lags != want.lags) mismatch("lags");
  if (have.plan.window != want.plan.window) mismatch("window");
  if (have.plan.first_origin != want.plan.first_origin) mismatch("first_origin");
  if (have.plan.n_origins != want.plan.n_origins) mismatch("origins");
  if (have.plan.stride != want.plan.stride) mismatch("stride");
  if (have.seed != want.seed) mismatch("seed");
  if (have.n_iter != want.n_iter) mismatch("n_iter");
  if (have.n_burn != want.n_burn) mismatch("n_burn");
  if (have.series != want.series) mismatch("series");
}

} // namespace detail

// Rolling-window re-estimation and one-day-ahead simulation. Each origin o
// fits on rows [o, o + window) and forecasts row o + window; completed
// origins found in the store are skipped, and each origin's chain runs on
// its own substream so results are deterministic per (seed, origin).
inline ForecastSet run_rolling(const ReturnPanel& panel, const PredictorPanel* predictors,
                               const ModelSpec& spec, const RollingPlan& plan,
                               const RollingOptions& opts = {}) {
  spec.validate();
  plan.validate(panel.values.rows());
  if (spec.family == ModelFamily::VARX)
    require(predictors != nullptr, "run_rolling: VARX requires a predictor panel");

  ForecastMeta meta;
  meta.model = canonical_model_id(spec);
  meta.family = spec.family;
  meta.volatility = spec.volatility;
  meta.lags = spec.lags;
  meta.plan = plan;
  meta.seed = spec.seed;
  meta.n_iter = spec.n_iter;
  meta.n_burn = spec.n_burn;
  meta.series = panel.names;

  // pick up completed origins from a previous run
  std::map<int, ForecastRecord> done;
  if (!opts.store_path.empty() && opts.resume && std::filesystem::exists(opts.store_path)) {
    ForecastSet prev = recover_forecasts(opts.store_path);
    detail::check_manifest_matches(prev.meta, meta, opts.store_path);
    for (auto& rec : prev.records) done.emplace(rec.origin, std::move(rec));
  }

  struct OriginResult {
    ForecastRecord record;
    std::string error;
  };

  std::vector<int> todo;
  for (int i = 0; i < plan.n_origins; ++i)
    if (!done.count(plan.origin_row(i))) todo.push_back(plan.origin_row(i));

  std::vector<std::optional<OriginResult>> slots(todo.size());
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<size_t> next{0};

  auto compute = [&](int row) -> OriginResult {
    OriginResult res;
    res.record.origin = row;
    try {
      ReturnPanel window = detail::slice_panel(panel, row, plan.window);
      PredictorPanel window_preds;
      const PredictorPanel* preds_ptr = nullptr;
      if (spec.family == ModelFamily::VARX) {
        window_preds = detail::slice_predictors(*predictors, row, plan.window);
        preds_ptr = &window_preds;
      }
      ModelSpec fit_spec = spec;
      fit_spec.keep_volatility_paths = false;
      Rng rng = Rng(spec.seed).stream(static_cast<std::uint64_t>(row));
      ModelFit fit = fit_model(fit_spec, window, preds_ptr, rng);

      ForecastState state;
      state.recent_rows = window.values.bottomRows(spec.lags);
      if (spec.family == ModelFamily::VARX)
        state.predictor_row = window_preds.values.row(plan.window - 1);
      res.record.pred = predict_one_step(fit, state, rng);
      res.record.date = panel.dates[static_cast<size_t>(row + plan.window)];
      res.record.realized = panel.values.row(row + plan.window);
    } catch (const std::exception& e) {
      res.error = e.what();
    }
    return res;
  };

  const int n_workers = std::max(1, std::min<int>(opts.n_threads, static_cast<int>(todo.size())));
  std::vector<std::thread> workers;
  if (!todo.empty() && n_workers > 1) {
    for (int wkr = 0; wkr < n_workers; ++wkr)
      workers.emplace_back([&] {
        for (;;) {
          size_t i = next.fetch_add(1);
          if (i >= todo.size()) return;
          OriginResult res = compute(todo[i]);
          {
            std::lock_guard lock(mu);
            slots[i] = std::move(res);
          }
          cv.notify_all();
        }
      });
  }

  // stream blocks to the store in plan order as they complete
  std::ofstream stream;
  if (!opts.store_path.empty()) {
    stream.open(opts.store_path, std::ios::binary | std::ios::trunc);
    require(stream.good(), "run_rolling: cannot write '" + opts.store_path + "'");
    store_detail::write_manifest(stream, meta, {});
  }

  ForecastSet set;
  set.meta = meta;
  size_t todo_cursor = 0;
  for (int i = 0; i < plan.n_origins; ++i) {
    int row = plan.origin_row(i);
    auto it = done.find(row);
    OriginResult res;
    if (it != done.end()) {
      res.record = it->second;
    } else {
      size_t slot = todo_cursor++;
      if (workers.empty()) {
        res = compute(todo[slot]);
      } else {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return slots[slot].has_value(); });
        res = std::move(*slots[slot]);
        slots[slot].reset();
      }
    }
    if (res.error.empty()) {
      if (stream.is_open()) store_detail::write_block(stream, res.record);
      set.records.push_back(std::move(res.record));
      if (opts.log)
        opts.log("origin " + std::to_string(i + 1) + "/" + std::to_string(plan.n_origins) +
                 " row " + std::to_string(row) + " done");
    } else {
      if (stream.is_open()) store_detail::write_failure_block(stream, row, res.error);
      set.failures.emplace_back(row, res.error);
      if (opts.log)
        opts.log("origin " + std::to_string(i + 1) + "/" + std::to_string(plan.n_origins) +
                 " row " + std::to_string(row) + " FAILED: " + res.error);
    }
    if (stream.is_open()) stream.flush();
  }
  for (auto& w : workers) w.join();
  if (stream.is_open()) stream.close();

  // a clean streamed file already equals the canonical layout; failures
  // need the manifest rewritten with the incomplete list
  if (!opts.store_path.empty() && !set.failures.empty()) store_forecasts(set, opts.store_path);
  return set;
}

} // namespace bvarcast

#endif
