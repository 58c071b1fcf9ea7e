#include "oneclass/pipeline.hpp"

#include "oneclass/error.hpp"

namespace oneclass {

Dataset Preprocessing::apply(const Dataset& raw) const {
  if (raw.dim() != norm.mean.size()) {
    throw DimensionError("expected " + std::to_string(norm.mean.size()) + " feature columns, got " +
                         std::to_string(raw.dim()));
  }
  Dataset out = zscore_apply(raw, norm);
  if (ica) out = ica_transform(*ica, out);
  return out;
}

Preprocessing fit_preprocessing(const Dataset& train, const std::optional<IcaConfig>& ica) {
  train.validate();
  Preprocessing p;
  p.norm = zscore_fit(train);
  p.train = zscore_apply(train, p.norm);
  if (ica) {
    p.ica = ica_fit(p.train, *ica);
    p.train = ica_transform(*p.ica, p.train);
  }
  return p;
}

Dataset Detector::preprocess(const Dataset& raw) const {
  if (raw.dim() != input_dim()) {
    throw DimensionError("expected " + std::to_string(input_dim()) + " feature columns, got " +
                         std::to_string(raw.dim()));
  }
  Dataset out = zscore_apply(raw, norm);
  if (ica) out = ica_transform(*ica, out);
  return out;
}

ScoreVector Detector::score(const Dataset& raw, std::size_t threads) const {
  return oneclass::score(model, preprocess(raw), threads);
}

std::vector<Label> Detector::predict(const Dataset& raw, std::size_t threads) const {
  return classify(score(raw, threads), model.delta);
}

Detector fit_detector(const Dataset& train, const DetectorConfig& config) {
  check_hyperparameters(config.C, config.theta);
  config.kernel.validate();
  if (config.ica) config.ica->validate();
  auto prep = fit_preprocessing(train, config.ica);
  Detector det;
  det.norm = std::move(prep.norm);
  det.ica = std::move(prep.ica);
  det.model = fit(prep.train, config.kernel, config.C, config.theta, config.threads);
  return det;
}

}  // namespace oneclass
