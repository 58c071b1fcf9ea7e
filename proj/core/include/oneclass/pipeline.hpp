#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "oneclass/dataset.hpp"
#include "oneclass/fastica.hpp"
#include "oneclass/kernels.hpp"
#include "oneclass/ockelm.hpp"

namespace oneclass {

struct DetectorConfig {
  KernelSpec kernel;
  double C = 1.0;
  double theta = 0.01;
  std::optional<IcaConfig> ica;
  std::size_t threads = 1;
};

// z-score -> optional FastICA -> OCKELM, with every transform fitted on the
// training rows only and frozen for scoring.
struct Detector {
  NormStats norm;
  std::optional<IcaTransform> ica;
  OckelmModel model;

  Index input_dim() const { return norm.mean.size(); }

  // Applies the frozen normalization and ICA to raw rows.
  Dataset preprocess(const Dataset& raw) const;
  ScoreVector score(const Dataset& raw, std::size_t threads = 1) const;
  std::vector<Label> predict(const Dataset& raw, std::size_t threads = 1) const;
};

// Fits normalization and ICA on `train`, returning them with the
// preprocessed training rows.
struct Preprocessing {
  NormStats norm;
  std::optional<IcaTransform> ica;
  Dataset train;

  Dataset apply(const Dataset& raw) const;
};

Preprocessing fit_preprocessing(const Dataset& train, const std::optional<IcaConfig>& ica);

Detector fit_detector(const Dataset& train, const DetectorConfig& config);

}  // namespace oneclass
