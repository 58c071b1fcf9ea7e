#include "oneclass/ockelm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include <Eigen/Cholesky>

#include "oneclass/error.hpp"

namespace oneclass {
namespace {

constexpr double kJitterStart = 1e-12;
constexpr double kJitterLimit = 1e-6;

}  // namespace

void check_hyperparameters(double C, double theta) {
  if (!(C > 0.0) || !std::isfinite(C)) throw InvalidArgument("regularization C must be a positive finite number");
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidArgument("outlier fraction theta must lie in (0, 1)");
}

Index threshold_rank(double theta, Index n) {
  // The small shrink keeps products like 0.07 * 100 = 7.000000000000001 from
  // rounding up a whole rank.
  const double scaled = theta * static_cast<double>(n) * (1.0 - 1e-12);
  const auto k = static_cast<Index>(std::ceil(scaled));
  return std::clamp<Index>(k, 1, std::max<Index>(n, 1));
}

double threshold(std::span<const double> errors_desc, double theta) {
  if (errors_desc.empty()) throw DataError("cannot compute a threshold from an empty error vector");
  const auto k = threshold_rank(theta, static_cast<Index>(errors_desc.size()));
  return errors_desc[static_cast<std::size_t>(k - 1)];
}

RegularizedSolve solve_regularized(const Matrix& gram, double C) {
  const Index n = gram.rows();
  if (n == 0 || gram.cols() != n) throw DimensionError("regularized solve needs a nonempty square Gram matrix");
  Eigen::MatrixXd system = gram;
  system.diagonal().array() += 1.0 / C;
  const Vector ones = Vector::Ones(n);
  const double scale = std::max(system.trace() / static_cast<double>(n), 0.0);

  RegularizedSolve result;
  double jitter = 0.0;
  for (double factor = kJitterStart;; factor *= 10.0) {
    Eigen::MatrixXd shifted = system;
    shifted.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() == Eigen::Success) {
      Vector a = llt.solve(ones);
      const Vector residual = ones - system * a;
      a += llt.solve(residual);
      if (a.allFinite()) {
        result.coefficients = std::move(a);
        result.jitter = jitter;
        return result;
      }
    }
    if (factor > kJitterLimit * 1.0000001) break;
    jitter = factor * scale;
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(system);
  std::ostringstream msg;
  msg << "regularized kernel system is not positive definite even with jitter " << jitter
      << " (reciprocal condition estimate " << ldlt.rcond() << ")";
  throw NumericalError(msg.str());
}

OckelmModel fit_from_gram(Matrix train_rows, const Matrix& train_gram, const KernelSpec& spec, double C,
                          double theta) {
  check_hyperparameters(C, theta);
  spec.validate();
  if (train_rows.rows() < 2) throw DataError("OCKELM needs at least 2 training rows");
  if (train_gram.rows() != train_rows.rows() || train_gram.cols() != train_rows.rows()) {
    throw DimensionError("training Gram does not match the training rows");
  }

  OckelmModel model;
  model.train_rows = std::move(train_rows);
  model.spec = spec;
  model.C = C;
  model.theta = theta;
  auto solved = solve_regularized(train_gram, C);
  model.coefficients = std::move(solved.coefficients);
  model.jitter = solved.jitter;

  const auto train_scores = score_from_kernel(model, train_gram);
  std::vector<double> sorted(train_scores.errors.begin(), train_scores.errors.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  model.delta = threshold(sorted, theta);
  return model;
}

OckelmModel fit(const Dataset& train, const KernelSpec& spec, double C, double theta, std::size_t threads) {
  check_hyperparameters(C, theta);
  spec.validate();
  train.validate();
  const Matrix omega = gram(train.rows, spec, threads);
  return fit_from_gram(train.rows, omega, spec, C, theta);
}

ScoreVector score_from_kernel(const OckelmModel& model, const Matrix& cross_kernel) {
  if (cross_kernel.cols() != model.size()) {
    throw DimensionError("cross kernel has " + std::to_string(cross_kernel.cols()) + " columns, model has " +
                         std::to_string(model.size()) + " training rows");
  }
  ScoreVector out;
  out.outputs.resize(cross_kernel.rows());
  out.errors.resize(cross_kernel.rows());
  // Fixed summation order so training-set scores match fit-time outputs bitwise.
  for (Index t = 0; t < cross_kernel.rows(); ++t) {
    double sum = 0.0;
    for (Index j = 0; j < cross_kernel.cols(); ++j) sum += cross_kernel(t, j) * model.coefficients(j);
    out.outputs(t) = sum;
    out.errors(t) = std::abs(sum - 1.0);
  }
  return out;
}

ScoreVector score(const OckelmModel& model, const Dataset& batch, std::size_t threads) {
  if (batch.dim() != model.dim()) {
    throw DimensionError("batch has " + std::to_string(batch.dim()) + " features, model expects " +
                         std::to_string(model.dim()));
  }
  return score_from_kernel(model, gram(batch.rows, model.train_rows, model.spec, threads));
}

std::vector<Label> classify(const ScoreVector& scores, double delta) {
  std::vector<Label> out;
  out.reserve(static_cast<std::size_t>(scores.errors.size()));
  for (double e : scores.errors) out.push_back(e < delta ? Label::kTarget : Label::kOutlier);
  return out;
}

std::vector<Label> predict(const OckelmModel& model, const Dataset& batch, std::size_t threads) {
  return classify(score(model, batch, threads), model.delta);
}

}  // namespace oneclass
