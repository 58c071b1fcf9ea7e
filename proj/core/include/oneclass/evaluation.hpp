#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oneclass/dataset.hpp"
#include "oneclass/fastica.hpp"
#include "oneclass/kernels.hpp"
#include "oneclass/pipeline.hpp"

namespace oneclass {

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Zero denominators yield 0 for the affected metric.
Metrics f1_from_counts(Index tp, Index fp, Index fn);

// Confusion counts with +1 (target / normal) as the positive class.
struct Counts {
  Index tp = 0;
  Index fp = 0;
  Index fn = 0;
  Index tn = 0;

  Index total() const { return tp + fp + fn + tn; }
};

Counts tally(std::span<const Label> truth, std::span<const Label> predicted);

struct Hyperparameters {
  KernelSpec kernel;
  double C = 1.0;
  double theta = 0.01;
  std::optional<IcaConfig> ica;
};

struct EvalReport {
  Counts counts;
  Metrics metrics;
  Hyperparameters hyperparameters;
  std::uint64_t seed = 0;
};

EvalReport evaluate(const Detector& detector, const Dataset& test, std::uint64_t seed = 0,
                    std::size_t threads = 1);

struct GridSpec {
  KernelKind kind = KernelKind::kTgak;
  std::vector<double> triangle_values;  // unused for kRbf
  std::vector<double> C_values;
  std::vector<double> sigma_values;
  double theta = 0.01;
  int folds = 5;

  // T in {2^0, 2^0.5, ..., 2^8}, C in {1e-5, ..., 1e5}, sigma in {2^-6, ..., 2^6}.
  static GridSpec full(KernelKind kind);
  // Every other value of each full axis.
  static GridSpec coarse(KernelKind kind);

  std::size_t cell_count() const;
  void validate() const;
};

struct GridCell {
  double triangle = 0.0;  // NaN for kRbf
  double C = 0.0;
  double sigma = 0.0;

  KernelSpec kernel(KernelKind kind) const;
};

struct CellReport {
  GridCell cell;
  std::vector<double> fold_f1;
  double mean_f1 = 0.0;
  bool failed = false;
  std::string failure;
};

struct GridResult {
  KernelKind kind = KernelKind::kTgak;
  std::vector<CellReport> cells;  // T-major, then C, then sigma
  std::size_t best = 0;
  bool no_outliers = false;  // validation ran on held-out targets only

  const CellReport& best_cell() const { return cells[best]; }
};

// k-fold cross-validated search. Normalization (and ICA, when requested) is
// fitted once on all training targets; targets are split into seeded folds,
// every cell fits on the other folds' targets and validates on the held-out
// targets plus the whole cv_outliers pool. Outlier rows never enter a fit.
// Cells are ranked by mean F1; ties go to smaller C, then smaller sigma, then
// smaller T.
GridResult grid_search(const Dataset& train_targets, const Dataset& cv_outliers, const GridSpec& grid,
                       const std::optional<IcaConfig>& ica, std::uint64_t seed, std::size_t threads = 1);

// Fold index (0-based) of every training target under `seed`.
std::vector<int> assign_folds(Index n, int folds, std::uint64_t seed);

struct ProtocolConfig {
  GridSpec grid = GridSpec::full(KernelKind::kTgak);
  std::optional<IcaConfig> ica;  // seed is overridden per run
  std::size_t threads = 1;
};

struct ProtocolRun {
  EvalReport report;
  GridResult search;
  Index train_size = 0;
  Index test_size = 0;
};

// split -> grid search -> fit on all training targets with the best cell ->
// evaluate on the test split.
ProtocolRun run_protocol(const Dataset& labeled, const ProtocolConfig& config, std::uint64_t seed);

}  // namespace oneclass
