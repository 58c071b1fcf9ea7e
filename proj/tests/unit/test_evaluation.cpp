#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oneclass/error.hpp"
#include "oneclass/evaluation.hpp"

namespace oneclass {
namespace {

Dataset blob(Index n, Index d, double shift, Label label, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Dataset out;
  out.rows.resize(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) out.rows(i, j) = g(rng) + shift;
  for (Index j = 0; j < d; ++j) out.feature_names.push_back("f" + std::to_string(j));
  out.labels = std::vector<Label>(static_cast<std::size_t>(n), label);
  return out;
}

GridSpec small_grid() {
  GridSpec g;
  g.kind = KernelKind::kTgak;
  g.triangle_values = {1.0, 4.0};
  g.C_values = {1e-2, 1.0, 1e2};
  g.sigma_values = {0.5, 2.0};
  return g;
}

TEST(Metrics, Examples) {
  const Metrics perfect = f1_from_counts(10, 0, 0);
  EXPECT_EQ(perfect.f1, 1.0);
  const Metrics none = f1_from_counts(0, 3, 2);
  EXPECT_EQ(none.precision, 0.0);
  EXPECT_EQ(none.recall, 0.0);
  EXPECT_EQ(none.f1, 0.0);
  const Metrics m = f1_from_counts(8, 2, 4);
  EXPECT_NEAR(m.precision, 0.8, 1e-12);
  EXPECT_NEAR(m.recall, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(m.f1, 16.0 / 22.0, 1e-12);
  EXPECT_NEAR(m.f1, 0.7273, 5e-5);
}

TEST(Metrics, HarmonicMeanOfItsParts) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> c(0, 50);
  for (int i = 0; i < 200; ++i) {
    const Metrics m = f1_from_counts(c(rng), c(rng), c(rng));
    EXPECT_GE(m.f1, 0.0);
    EXPECT_LE(m.f1, 1.0);
    if (m.precision > 0 && m.recall > 0)
      EXPECT_NEAR(m.f1, 2 * m.precision * m.recall / (m.precision + m.recall), 1e-12);
  }
}

TEST(Metrics, Tally) {
  const std::vector<Label> truth{Label::kTarget, Label::kTarget, Label::kOutlier, Label::kOutlier};
  const std::vector<Label> pred{Label::kTarget, Label::kOutlier, Label::kTarget, Label::kOutlier};
  const Counts c = tally(truth, pred);
  EXPECT_EQ(c.tp, 1);
  EXPECT_EQ(c.fn, 1);
  EXPECT_EQ(c.fp, 1);
  EXPECT_EQ(c.tn, 1);
}

TEST(Grid, Cardinality) {
  EXPECT_EQ(GridSpec::full(KernelKind::kTgak).cell_count(), 2431u);
  EXPECT_EQ(GridSpec::full(KernelKind::kRbf).cell_count(), 143u);
  EXPECT_EQ(GridSpec::coarse(KernelKind::kTgak).cell_count(), 9u * 6u * 7u);
  const GridSpec full = GridSpec::full(KernelKind::kTgak);
  EXPECT_DOUBLE_EQ(full.triangle_values.front(), 1.0);
  EXPECT_DOUBLE_EQ(full.triangle_values.back(), 256.0);
  EXPECT_NEAR(full.triangle_values[1], std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(full.C_values.front(), 1e-5);
  EXPECT_DOUBLE_EQ(full.sigma_values.back(), 64.0);
  EXPECT_EQ(full.theta, 0.01);
  EXPECT_EQ(full.folds, 5);
}

TEST(Grid, Validation) {
  GridSpec g = small_grid();
  g.folds = 1;
  EXPECT_THROW(g.validate(), InvalidArgument);
  g = small_grid();
  g.C_values = {};
  EXPECT_THROW(g.validate(), InvalidArgument);
  g = small_grid();
  g.sigma_values = {-1.0};
  EXPECT_THROW(g.validate(), InvalidArgument);
}

TEST(Folds, BalancedAndSeeded) {
  const auto f = assign_folds(23, 5, 4);
  std::vector<int> sizes(5);
  for (int x : f) ++sizes[static_cast<std::size_t>(x)];
  EXPECT_EQ(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()), 1);
  EXPECT_EQ(f, assign_folds(23, 5, 4));
  EXPECT_NE(f, assign_folds(23, 5, 5));
}

TEST(GridSearch, SingletonGrid) {
  GridSpec g = small_grid();
  g.triangle_values = {2.0};
  g.C_values = {1.0};
  g.sigma_values = {1.0};
  const GridResult r =
      grid_search(blob(30, 5, 0, Label::kTarget, 1).unlabeled(), blob(10, 5, 3, Label::kOutlier, 2), g, {}, 0);
  ASSERT_EQ(r.cells.size(), 1u);
  EXPECT_EQ(r.best, 0u);
  EXPECT_EQ(r.cells[0].fold_f1.size(), 5u);
}

TEST(GridSearch, DeterministicAndBestIsMaximal) {
  const Dataset targets = blob(40, 6, 0, Label::kTarget, 3).unlabeled();
  const Dataset outliers = blob(20, 6, 2.5, Label::kOutlier, 4);
  const GridResult a = grid_search(targets, outliers, small_grid(), {}, 11);
  const GridResult b = grid_search(targets, outliers, small_grid(), {}, 11, 3);
  ASSERT_EQ(a.cells.size(), 12u);
  EXPECT_EQ(a.best, b.best);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    EXPECT_EQ(a.cells[i].fold_f1, b.cells[i].fold_f1);
    EXPECT_GE(a.cells[i].mean_f1, 0.0);
    EXPECT_LE(a.cells[i].mean_f1, 1.0);
    EXPECT_GE(a.best_cell().mean_f1, a.cells[i].mean_f1);
  }
}

TEST(GridSearch, TiesPreferSmallerC) {
  // Far-apart outliers make every cell perfect, so parsimony decides.
  const Dataset targets = blob(30, 4, 0, Label::kTarget, 5).unlabeled();
  const Dataset outliers = blob(10, 4, 1e3, Label::kOutlier, 6);
  GridSpec g = small_grid();
  g.theta = 0.01;
  const GridResult r = grid_search(targets, outliers, g, {}, 0);
  const double top = r.best_cell().mean_f1;
  for (const auto& c : r.cells) {
    if (c.mean_f1 != top) continue;
    EXPECT_GE(c.cell.C, r.best_cell().cell.C);
  }
}

TEST(GridSearch, SubsetNeverBeatsSuperset) {
  const Dataset targets = blob(40, 5, 0, Label::kTarget, 7).unlabeled();
  const Dataset outliers = blob(20, 5, 1.5, Label::kOutlier, 8);
  const GridResult full = grid_search(targets, outliers, small_grid(), {}, 2);
  GridSpec sub = small_grid();
  sub.C_values = {1.0};
  sub.sigma_values = {2.0};
  const GridResult part = grid_search(targets, outliers, sub, {}, 2);
  EXPECT_LE(part.best_cell().mean_f1, full.best_cell().mean_f1);
}

TEST(GridSearch, EmptyPoolFallsBackToTargets) {
  Dataset empty = blob(0, 4, 0, Label::kOutlier, 1);
  const GridResult r = grid_search(blob(20, 4, 0, Label::kTarget, 9).unlabeled(), empty, small_grid(), {}, 0);
  EXPECT_TRUE(r.no_outliers);
}

TEST(GridSearch, RejectsOutliersInTrainingTargets) {
  EXPECT_THROW(grid_search(blob(20, 4, 0, Label::kOutlier, 1), blob(5, 4, 0, Label::kOutlier, 2), small_grid(), {}, 0),
               DataError);
}

TEST(Evaluate, DegenerateDetectors) {
  const Dataset train = blob(30, 3, 0, Label::kTarget, 10).unlabeled();
  const Detector d = fit_detector(train, {KernelSpec::tgak(1.0, 2.0), 1.0, 0.01, std::nullopt, 1});
  const Dataset near = blob(10, 3, 0, Label::kTarget, 11);
  Dataset same = train;
  same.labels = std::vector<Label>(30, Label::kTarget);
  const EvalReport r = evaluate(d, same);
  EXPECT_EQ(r.counts.total(), 30);
  EXPECT_EQ(r.counts.fp + r.counts.tn, 0);
  Dataset far = blob(10, 3, 100, Label::kTarget, 12);
  const EvalReport none = evaluate(d, far);
  EXPECT_EQ(none.metrics.f1, 0.0);
  EXPECT_THROW(evaluate(d, near.unlabeled()), DataError);
}

TEST(Evaluate, RowOrderDoesNotMatter) {
  const Dataset train = blob(30, 3, 0, Label::kTarget, 13).unlabeled();
  const Detector d = fit_detector(train, {KernelSpec::tgak(1.0, 2.0), 1.0, 0.01, std::nullopt, 1});
  const Dataset test = concat(blob(15, 3, 0, Label::kTarget, 14), blob(15, 3, 2, Label::kOutlier, 15));
  std::vector<Index> perm(30);
  for (Index i = 0; i < 30; ++i) perm[static_cast<std::size_t>(i)] = (i * 7) % 30;
  const EvalReport a = evaluate(d, test);
  const EvalReport b = evaluate(d, test.subset(perm));
  EXPECT_EQ(a.counts.tp, b.counts.tp);
  EXPECT_EQ(a.counts.fp, b.counts.fp);
  EXPECT_EQ(a.metrics.f1, b.metrics.f1);
}

}  // namespace
}  // namespace oneclass
