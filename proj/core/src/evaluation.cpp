#include "oneclass/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "oneclass/error.hpp"
#include "oneclass/parallel.hpp"
#include "oneclass/seed.hpp"

namespace oneclass {
namespace {

std::vector<double> powers(double base, double from, double to, double step) {
  std::vector<double> out;
  for (double e = from; e <= to + 1e-9; e += step) out.push_back(std::pow(base, e));
  return out;
}

template <typename T>
std::vector<T> every_other(const std::vector<T>& v) {
  std::vector<T> out;
  for (std::size_t i = 0; i < v.size(); i += 2) out.push_back(v[i]);
  return out;
}

void require_all(const Dataset& data, Label label, const char* what) {
  if (!data.labels) return;
  for (Label l : *data.labels) {
    if (l != label) throw DataError(std::string(what) + " contains a row with label " + std::to_string(to_int(l)));
  }
}

// Strictly better under (mean F1 desc, C asc, sigma asc, T asc).
bool better(const CellReport& a, const CellReport& b) {
  if (a.mean_f1 != b.mean_f1) return a.mean_f1 > b.mean_f1;
  if (a.cell.C != b.cell.C) return a.cell.C < b.cell.C;
  if (a.cell.sigma != b.cell.sigma) return a.cell.sigma < b.cell.sigma;
  if (std::isnan(a.cell.triangle) || std::isnan(b.cell.triangle)) return false;
  return a.cell.triangle < b.cell.triangle;
}

}  // namespace

Metrics f1_from_counts(Index tp, Index fp, Index fn) {
  Metrics m;
  if (tp + fp > 0) m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (m.precision + m.recall > 0.0) m.f1 = 2.0 * m.recall * m.precision / (m.precision + m.recall);
  return m;
}

Counts tally(std::span<const Label> truth, std::span<const Label> predicted) {
  if (truth.size() != predicted.size()) throw DimensionError("label vectors differ in length");
  Counts c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool actual = truth[i] == Label::kTarget;
    const bool said = predicted[i] == Label::kTarget;
    if (actual && said) ++c.tp;
    else if (!actual && said) ++c.fp;
    else if (actual && !said) ++c.fn;
    else ++c.tn;
  }
  return c;
}

EvalReport evaluate(const Detector& detector, const Dataset& test, std::uint64_t seed, std::size_t threads) {
  if (!test.labels) throw DataError("evaluation needs a labeled test set");
  EvalReport r;
  const auto predicted = detector.predict(test, threads);
  r.counts = tally(*test.labels, predicted);
  r.metrics = f1_from_counts(r.counts.tp, r.counts.fp, r.counts.fn);
  r.hyperparameters.kernel = detector.model.spec;
  r.hyperparameters.C = detector.model.C;
  r.hyperparameters.theta = detector.model.theta;
  if (detector.ica) {
    IcaConfig ica;
    ica.n_components = detector.ica->n_components;
    r.hyperparameters.ica = ica;
  }
  r.seed = seed;
  return r;
}

GridSpec GridSpec::full(KernelKind kind) {
  GridSpec g;
  g.kind = kind;
  if (kind == KernelKind::kTgak) g.triangle_values = powers(2.0, 0.0, 8.0, 0.5);
  g.C_values = powers(10.0, -5.0, 5.0, 1.0);
  g.sigma_values = powers(2.0, -6.0, 6.0, 1.0);
  return g;
}

GridSpec GridSpec::coarse(KernelKind kind) {
  GridSpec g = full(kind);
  g.triangle_values = every_other(g.triangle_values);
  g.C_values = every_other(g.C_values);
  g.sigma_values = every_other(g.sigma_values);
  return g;
}

std::size_t GridSpec::cell_count() const {
  const std::size_t t = kind == KernelKind::kTgak ? triangle_values.size() : 1;
  return t * C_values.size() * sigma_values.size();
}

void GridSpec::validate() const {
  if (folds < 2) throw InvalidArgument("grid search needs at least 2 folds");
  if (C_values.empty() || sigma_values.empty() || (kind == KernelKind::kTgak && triangle_values.empty())) {
    throw InvalidArgument("grid has an empty axis");
  }
  const auto positive = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
  };
  if (!positive(C_values) || !positive(sigma_values) || !positive(triangle_values)) {
    throw InvalidArgument("grid values must be positive");
  }
  check_hyperparameters(C_values.front(), theta);
}

KernelSpec GridCell::kernel(KernelKind kind) const {
  return kind == KernelKind::kRbf ? KernelSpec::rbf(sigma) : KernelSpec::tgak(sigma, triangle);
}

std::vector<int> assign_folds(Index n, int folds, std::uint64_t seed) {
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  auto rng = make_rng(seed, SeedPurpose::kFolds);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> fold(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < order.size(); ++k) {
    fold[static_cast<std::size_t>(order[k])] = static_cast<int>(k % static_cast<std::size_t>(folds));
  }
  return fold;
}

GridResult grid_search(const Dataset& train_targets, const Dataset& cv_outliers, const GridSpec& grid,
                       const std::optional<IcaConfig>& ica, std::uint64_t seed, std::size_t threads) {
  grid.validate();
  require_all(train_targets, Label::kTarget, "training set");
  require_all(cv_outliers, Label::kOutlier, "cross-validation outlier pool");
  if (train_targets.size() < grid.folds) {
    throw DataError("grid search needs at least as many training rows as folds (" +
                    std::to_string(train_targets.size()) + " < " + std::to_string(grid.folds) + ")");
  }

  const auto prep = fit_preprocessing(train_targets.unlabeled(), ica);
  const Matrix& targets = prep.train.rows;
  const Matrix pool = cv_outliers.size() > 0 ? prep.apply(cv_outliers.unlabeled()).rows : Matrix(0, targets.cols());
  const Index n_pool = pool.rows();

  const auto fold_of = assign_folds(targets.rows(), grid.folds, seed);
  struct FoldIndex {
    std::vector<Index> train;
    std::vector<Index> held;
  };
  std::vector<FoldIndex> folds(static_cast<std::size_t>(grid.folds));
  for (Index i = 0; i < targets.rows(); ++i) {
    for (int f = 0; f < grid.folds; ++f) {
      auto& fi = folds[static_cast<std::size_t>(f)];
      (fold_of[static_cast<std::size_t>(i)] == f ? fi.held : fi.train).push_back(i);
    }
  }

  GridResult result;
  result.kind = grid.kind;
  result.no_outliers = n_pool == 0;
  const std::vector<double> triangles =
      grid.kind == KernelKind::kTgak ? grid.triangle_values : std::vector<double>{std::nan("")};
  const std::size_t n_c = grid.C_values.size();
  const std::size_t n_s = grid.sigma_values.size();
  result.cells.resize(triangles.size() * n_c * n_s);
  const auto cell_index = [&](std::size_t t, std::size_t c, std::size_t s) { return (t * n_c + c) * n_s + s; };
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    for (std::size_t c = 0; c < n_c; ++c) {
      for (std::size_t s = 0; s < n_s; ++s) {
        result.cells[cell_index(t, c, s)].cell = {triangles[t], grid.C_values[c], grid.sigma_values[s]};
      }
    }
  }

  // One kernel per (T, sigma) serves every C and every fold.
  parallel_for(triangles.size() * n_s, threads, [&](std::size_t group) {
    const std::size_t t = group / n_s;
    const std::size_t s = group % n_s;
    const KernelSpec spec = GridCell{triangles[t], 1.0, grid.sigma_values[s]}.kernel(grid.kind);

    Matrix k_targets;
    Matrix k_pool;
    try {
      k_targets = gram(targets, spec);
      if (n_pool > 0) k_pool = gram(pool, targets, spec);
    } catch (const NumericalError& e) {
      for (std::size_t c = 0; c < n_c; ++c) {
        auto& rep = result.cells[cell_index(t, c, s)];
        rep.failed = true;
        rep.failure = e.what();
        rep.fold_f1.assign(static_cast<std::size_t>(grid.folds), 0.0);
      }
      return;
    }

    for (const auto& fold : folds) {
      const Matrix omega = k_targets(fold.train, fold.train);
      const auto n_held = static_cast<Index>(fold.held.size());
      Matrix cross(n_held + n_pool, static_cast<Index>(fold.train.size()));
      cross.topRows(n_held) = k_targets(fold.held, fold.train);
      if (n_pool > 0) cross.bottomRows(n_pool) = k_pool(Eigen::all, fold.train);
      std::vector<Label> truth(static_cast<std::size_t>(n_held), Label::kTarget);
      truth.resize(static_cast<std::size_t>(n_held + n_pool), Label::kOutlier);
      const Matrix fold_rows = targets(fold.train, Eigen::all);

      for (std::size_t c = 0; c < n_c; ++c) {
        auto& rep = result.cells[cell_index(t, c, s)];
        try {
          const auto model = fit_from_gram(fold_rows, omega, spec, grid.C_values[c], grid.theta);
          const auto predicted = classify(score_from_kernel(model, cross), model.delta);
          const auto counts = tally(truth, predicted);
          rep.fold_f1.push_back(f1_from_counts(counts.tp, counts.fp, counts.fn).f1);
        } catch (const NumericalError& e) {
          rep.failed = true;
          rep.failure = e.what();
          rep.fold_f1.push_back(0.0);
        }
      }
    }
  });

  for (auto& rep : result.cells) {
    rep.mean_f1 = rep.failed ? 0.0
                             : std::accumulate(rep.fold_f1.begin(), rep.fold_f1.end(), 0.0) /
                                   static_cast<double>(rep.fold_f1.size());
  }
  for (std::size_t i = 1; i < result.cells.size(); ++i) {
    if (better(result.cells[i], result.cells[result.best])) result.best = i;
  }
  return result;
}

ProtocolRun run_protocol(const Dataset& labeled, const ProtocolConfig& config, std::uint64_t seed) {
  const auto split = one_class_split(labeled, seed);
  std::optional<IcaConfig> ica = config.ica;
  if (ica) ica->seed = seed;

  ProtocolRun run;
  run.train_size = split.train.size();
  run.test_size = split.test.size();
  run.search = grid_search(split.train, split.cv_pool, config.grid, ica, seed, config.threads);

  const auto& best = run.search.best_cell().cell;
  DetectorConfig dc;
  dc.kernel = best.kernel(config.grid.kind);
  dc.C = best.C;
  dc.theta = config.grid.theta;
  dc.ica = ica;
  dc.threads = config.threads;
  const auto detector = fit_detector(split.train, dc);
  run.report = evaluate(detector, split.test, seed, config.threads);
  run.report.hyperparameters.ica = ica;
  return run;
}

}  // namespace oneclass
