// bvarcast command line: ingest -> describe -> run -> evaluate -> plot-data,
// plus an optional fetch client for pulling price CSVs.

#include <CLI11.hpp>

#include <iostream>

#include "bvarcast/bvarcast.hpp"
#include "bvarcast/fetch.hpp"

namespace {

struct CommonArgs {
  std::string config_path = "bvarcast.conf";
  bvarcast::ConfigOverrides overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "run configuration file")
      ->capture_default_str();
  cmd->add_option("--profile", args.overrides.profile, "desk or full")
      ->check(CLI::IsMember({"desk", "full"}));
  cmd->add_option("--models", args.overrides.models, "space-separated model list override");
  cmd->add_option("--out", args.overrides.out_dir, "output directory override");
  auto* seed = cmd->add_option("--seed", args.overrides.seed, "seed override");
  cmd->callback([&args, seed] { args.overrides.has_seed = seed->count() > 0; });
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian VAR volatility-model forecasting"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string plot_model, plot_series, fetch_url, fetch_name;

  auto* ingest = app.add_subcommand("ingest", "build return and predictor panels from price CSVs");
  add_common(ingest, args);
  auto* describe = app.add_subcommand("describe", "descriptive statistics of the return panel");
  add_common(describe, args);
  auto* run = app.add_subcommand("run", "rolling estimation and one-day-ahead simulation");
  add_common(run, args);
  auto* evaluate = app.add_subcommand("evaluate", "forecast comparison tables and tests");
  add_common(evaluate, args);
  auto* plot = app.add_subcommand("plot-data", "credible-band export for one model and series");
  add_common(plot, args);
  plot->add_option("--model", plot_model, "model id")->required();
  plot->add_option("--series", plot_series, "series name")->required();
  auto* fetch = app.add_subcommand("fetch", "download a date,price CSV into the data directory");
  add_common(fetch, args);
  fetch->add_option("--url", fetch_url, "source URL")->required();
  fetch->add_option("--name", fetch_name, "series name (file becomes <name>.csv)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    bvarcast::RunConfig cfg = bvarcast::load_config(args.config_path, args.overrides);
    if (ingest->parsed()) {
      bvarcast::cmd_ingest(cfg, &std::cerr);
    } else if (describe->parsed()) {
      bvarcast::cmd_describe(cfg);
    } else if (run->parsed()) {
      if (!bvarcast::cmd_run(cfg, &std::cerr)) {
        std::cerr << "run: some origins failed; re-run to retry them\n";
        return 1;
      }
    } else if (evaluate->parsed()) {
      bvarcast::cmd_evaluate(cfg);
    } else if (plot->parsed()) {
      bvarcast::cmd_plot_data(cfg, plot_model, plot_series);
    } else if (fetch->parsed()) {
      std::string path = bvarcast::cmd_fetch(cfg, fetch_url, fetch_name);
      std::cerr << "fetched " << path << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
