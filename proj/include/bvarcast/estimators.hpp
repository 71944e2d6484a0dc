#ifndef BVARCAST_ESTIMATORS_HPP
#define BVARCAST_ESTIMATORS_HPP

#include "bvarcast/sampler_const.hpp"
#include "bvarcast/sampler_garch.hpp"
#include "bvarcast/sampler_sv.hpp"

namespace bvarcast {

// Canonical model identifiers, as they appear in run configs and reports.
struct ModelId {
  std::string id;    // e.g. "bvar-sv"
  std::string label; // e.g. "BVAR-SV"
  ModelFamily family;
  VolatilityScheme volatility;
  int lags; // 0 = use the configured default
};

inline const std::vector<ModelId>& known_models() {
  static const std::vector<ModelId> models = {
      {"bvar", "BVAR", ModelFamily::VAR, VolatilityScheme::CONST, 0},
      {"bvarx", "BVARX", ModelFamily::VARX, VolatilityScheme::CONST, 0},
      {"bvar-sv", "BVAR-SV", ModelFamily::VAR, VolatilityScheme::SV, 0},
      {"bvarx-sv", "BVARX-SV", ModelFamily::VARX, VolatilityScheme::SV, 0},
      {"bvar-garch", "BVAR-GARCH", ModelFamily::VAR, VolatilityScheme::GARCH, 0},
      {"bvarx-garch", "BVARX-GARCH", ModelFamily::VARX, VolatilityScheme::GARCH, 0},
      {"bvar-svt", "BVAR-SVt", ModelFamily::VAR, VolatilityScheme::SVT, 0},
      {"bvarx-svt", "BVARX-SVt", ModelFamily::VARX, VolatilityScheme::SVT, 0},
      {"bar1", "BAR(1)", ModelFamily::AR, VolatilityScheme::CONST, 1},
      {"bar3", "BAR(3)", ModelFamily::AR, VolatilityScheme::CONST, 3},
  };
  return models;
}

inline const ModelId& model_by_id(const std::string& id) {
  for (const auto& m : known_models())
    if (m.id == id) return m;
  fail("unknown model '" + id + "'");
}

// Fitted model for one estimation window: a single joint draw set for the
// multivariate families, or one univariate draw set per series for AR.
struct ModelFit {
  std::vector<PosteriorDrawSet> parts;
  bool univariate() const { return parts.size() > 1; }
};

inline ModelFit fit_model(const ModelSpec& spec, const ReturnPanel& panel,
                          const PredictorPanel* predictors, Rng& rng) {
  spec.validate();
  ModelFit fit;
  if (spec.family == ModelFamily::AR) {
    for (Eigen::Index i = 0; i < panel.values.cols(); ++i)
      fit.parts.push_back(sample_ar(panel.values.col(i), spec.lags, spec, rng));
    return fit;
  }
  const PredictorPanel* use = nullptr;
  if (spec.family == ModelFamily::VARX) {
    require(predictors != nullptr, "fit_model: VARX requires a predictor panel");
    use = predictors;
  }
  auto design = build_design(panel, spec.lags, use);
  auto prior = minnesota_moments(spec.prior, panel, spec, use);
  switch (spec.volatility) {
    case VolatilityScheme::CONST:
      fit.parts.push_back(sample_bvar_const(spec, design.y, design.x, prior, rng));
      break;
    case VolatilityScheme::SV:
      fit.parts.push_back(sample_bvar_sv(spec, design.y, design.x, prior, rng));
      break;
    case VolatilityScheme::SVT:
      fit.parts.push_back(sample_bvar_svt(spec, design.y, design.x, prior, rng));
      break;
    case VolatilityScheme::GARCH:
      fit.parts.push_back(sample_bvar_garch(spec, design.y, design.x, prior, rng));
      break;
  }
  return fit;
}

} // namespace bvarcast

#endif
