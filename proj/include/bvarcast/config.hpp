#ifndef BVARCAST_CONFIG_HPP
#define BVARCAST_CONFIG_HPP

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "bvarcast/estimators.hpp"
#include "bvarcast/forecast.hpp"

namespace bvarcast {

// Run configuration, parsed from a sectioned key = value file. The `full`
// profile carries the reference settings (731-row window, 567 origins,
// 6000/1000 draws, univariate models at 5000/1000); `desk` shrinks the
// budget for continuous-integration scale runs.
struct RunConfig {
  std::string data_dir = ".";
  std::vector<std::string> target_files, target_names;
  std::vector<std::string> predictor_files, predictor_names;

  std::vector<std::string> models;
  std::string benchmark = "bvar";
  std::uint64_t seed = 42;
  std::string out_dir = "out";
  std::string profile = "desk";
  int threads = 1;
  int lags = 3;

  RollingPlan plan;
  int n_iter = 2000, n_burn = 500;
  int ar_n_iter = 2000, ar_n_burn = 500;
  MinnesotaHyper prior;
  double mcs_alpha = 0.10;
  int bootstrap_reps = 5000;

  std::string data_path(const std::string& file) const {
    return (std::filesystem::path(data_dir) / file).string();
  }
  std::string out_path(const std::string& file) const {
    return (std::filesystem::path(out_dir) / file).string();
  }
  std::string returns_csv() const { return out_path("returns.csv"); }
  std::string predictors_csv() const { return out_path("predictors.csv"); }
  std::string forecasts_path(const std::string& model) const {
    return out_path(model + ".forecasts");
  }

  ModelSpec model_spec(const std::string& id) const {
    const ModelId& m = model_by_id(id);
    ModelSpec spec;
    spec.family = m.family;
    spec.volatility = m.volatility;
    spec.lags = m.lags > 0 ? m.lags : lags;
    spec.prior = prior;
    spec.seed = seed;
    if (m.family == ModelFamily::AR) {
      spec.n_iter = ar_n_iter;
      spec.n_burn = ar_n_burn;
    } else {
      spec.n_iter = n_iter;
      spec.n_burn = n_burn;
    }
    return spec;
  }

  void validate() const {
    require(!target_files.empty(), "config: no target series configured");
    require(!models.empty(), "config: at least one model required");
    bool has_bench = false;
    for (const auto& id : models) {
      model_by_id(id); // throws on unknown ids
      if (id == benchmark) has_bench = true;
    }
    require(has_bench, "config: benchmark '" + benchmark + "' must be in the model list");
    bool any_varx = false;
    for (const auto& id : models)
      if (model_by_id(id).family == ModelFamily::VARX) any_varx = true;
    if (any_varx)
      require(!predictor_files.empty(), "config: VARX models need predictor series");
  }
};

namespace config_detail {

struct KeyValues {
  std::map<std::string, std::string> kv;
  const std::string* find(const std::string& key) const {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  }
  std::string get(const std::string& key, const std::string& fallback) const {
    auto* v = find(key);
    return v ? *v : fallback;
  }
  long get_int(const std::string& key, long fallback) const {
    auto* v = find(key);
    if (!v) return fallback;
    try {
      return std::stol(*v);
    } catch (...) {
      fail("config: bad integer for '" + key + "': " + *v);
    }
  }
  double get_double(const std::string& key, double fallback) const {
    auto* v = find(key);
    if (!v) return fallback;
    try {
      return std::stod(*v);
    } catch (...) {
      fail("config: bad number for '" + key + "': " + *v);
    }
  }
};

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

inline std::string stem_of(const std::string& file) {
  return std::filesystem::path(file).stem().string();
}

inline KeyValues parse_sections(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "config: cannot open '" + path + "'");
  KeyValues out;
  std::string line, section;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    size_t b = line.find_last_not_of(" \t\r");
    line = line.substr(a, b - a + 1);
    if (line.front() == '[') {
      require(line.back() == ']', path + ":" + std::to_string(lineno) + ": malformed section");
      section = line.substr(1, line.size() - 2);
      continue;
    }
    size_t eq = line.find('=');
    require(eq != std::string::npos, path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      size_t x = s.find_first_not_of(" \t");
      size_t y = s.find_last_not_of(" \t");
      s = x == std::string::npos ? "" : s.substr(x, y - x + 1);
    };
    trim(key);
    trim(value);
    out.kv[section + "." + key] = value;
  }
  return out;
}

} // namespace config_detail

struct ConfigOverrides {
  std::string profile, models, out_dir;
  std::uint64_t seed = 0;
  bool has_seed = false;
};

inline RunConfig load_config(const std::string& path, const ConfigOverrides& over = {}) {
  using namespace config_detail;
  KeyValues kv = parse_sections(path);
  RunConfig cfg;

  cfg.data_dir = kv.get("data.dir", ".");
  if (const char* env = std::getenv("BVARCAST_DATA_DIR"); env && *env) cfg.data_dir = env;
  cfg.target_files = split_ws(kv.get("data.targets", ""));
  cfg.predictor_files = split_ws(kv.get("data.predictors", ""));
  cfg.target_names = split_ws(kv.get("data.target_names", ""));
  cfg.predictor_names = split_ws(kv.get("data.predictor_names", ""));
  if (cfg.target_names.empty())
    for (const auto& f : cfg.target_files) cfg.target_names.push_back(stem_of(f));
  if (cfg.predictor_names.empty())
    for (const auto& f : cfg.predictor_files) cfg.predictor_names.push_back(stem_of(f));
  require(cfg.target_names.size() == cfg.target_files.size(),
          "config: target_names must match targets");
  require(cfg.predictor_names.size() == cfg.predictor_files.size(),
          "config: predictor_names must match predictors");

  cfg.profile = over.profile.empty() ? kv.get("run.profile", "desk") : over.profile;
  require(cfg.profile == "desk" || cfg.profile == "full",
          "config: profile must be 'desk' or 'full'");
  if (cfg.profile == "full") {
    cfg.plan.window = 731;
    cfg.plan.n_origins = 567;
    cfg.n_iter = 6000;
    cfg.n_burn = 1000;
    cfg.ar_n_iter = 5000;
    cfg.ar_n_burn = 1000;
  } else {
    cfg.plan.window = 731;
    cfg.plan.n_origins = 100;
    cfg.n_iter = 2000;
    cfg.n_burn = 500;
    cfg.ar_n_iter = 2000;
    cfg.ar_n_burn = 500;
  }

  cfg.models = split_ws(over.models.empty() ? kv.get("run.models", "bvar") : over.models);
  cfg.benchmark = kv.get("run.benchmark", "bvar");
  cfg.seed = over.has_seed ? over.seed
                           : static_cast<std::uint64_t>(kv.get_int("run.seed", 42));
  cfg.out_dir = over.out_dir.empty() ? kv.get("run.out", "out") : over.out_dir;
  cfg.threads = static_cast<int>(kv.get_int("run.threads", 1));
  cfg.lags = static_cast<int>(kv.get_int("run.lags", 3));

  cfg.plan.window = static_cast<int>(kv.get_int("plan.window", cfg.plan.window));
  cfg.plan.n_origins = static_cast<int>(kv.get_int("plan.origins", cfg.plan.n_origins));
  cfg.plan.first_origin = static_cast<int>(kv.get_int("plan.first_origin", 0));
  cfg.plan.stride = static_cast<int>(kv.get_int("plan.stride", 1));

  cfg.n_iter = static_cast<int>(kv.get_int("sampler.iterations", cfg.n_iter));
  cfg.n_burn = static_cast<int>(kv.get_int("sampler.burn_in", cfg.n_burn));
  cfg.ar_n_iter = static_cast<int>(kv.get_int("sampler.ar_iterations", cfg.ar_n_iter));
  cfg.ar_n_burn = static_cast<int>(kv.get_int("sampler.ar_burn_in", cfg.ar_n_burn));

  cfg.prior.lambda1 = kv.get_double("prior.lambda1", cfg.prior.lambda1);
  cfg.prior.lambda2 = kv.get_double("prior.lambda2", cfg.prior.lambda2);
  cfg.prior.lambda3 = kv.get_double("prior.lambda3", cfg.prior.lambda3);
  cfg.prior.lambda4 = kv.get_double("prior.lambda4", cfg.prior.lambda4);
  cfg.prior.own_first_lag_mean = kv.get_double("prior.own_first_lag_mean", 0.0);

  cfg.mcs_alpha = kv.get_double("evaluation.mcs_alpha", 0.10);
  cfg.bootstrap_reps = static_cast<int>(kv.get_int("evaluation.bootstrap", 5000));

  cfg.validate();
  return cfg;
}

} // namespace bvarcast

#endif
