#include "oneclass/fastica.hpp"

#include <cmath>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "oneclass/error.hpp"
#include "oneclass/seed.hpp"

namespace oneclass {
namespace {

constexpr double kMinEigenvalue = 1e-12;

}  // namespace

ContrastDerivatives contrast_eval(Contrast contrast, double u) {
  switch (contrast) {
    case Contrast::kLogCosh: {
      const double t = std::tanh(u);
      return {t, 1.0 - t * t};
    }
    case Contrast::kExp: {
      const double e = std::exp(-0.5 * u * u);
      return {u * e, (1.0 - u * u) * e};
    }
    case Contrast::kCube:
      return {u * u * u, 3.0 * u * u};
  }
  return {0.0, 0.0};
}

const char* contrast_name(Contrast contrast) {
  switch (contrast) {
    case Contrast::kLogCosh:
      return "logcosh";
    case Contrast::kExp:
      return "exp";
    case Contrast::kCube:
      return "cube";
  }
  return "logcosh";
}

Contrast parse_contrast(std::string_view name) {
  if (name == "logcosh") return Contrast::kLogCosh;
  if (name == "exp") return Contrast::kExp;
  if (name == "cube") return Contrast::kCube;
  throw InvalidArgument("unknown ICA contrast '" + std::string(name) + "'");
}

void IcaConfig::validate() const {
  if (n_components < 0) throw InvalidArgument("ICA component count must be >= 0");
  if (max_iter < 1) throw InvalidArgument("ICA max_iter must be >= 1");
  if (!(epsilon > 0.0)) throw InvalidArgument("ICA epsilon must be > 0");
}

namespace detail {

Matrix fixed_point_update(const Matrix& W, const Matrix& Z, Contrast contrast) {
  const Index n = W.rows();
  const Index samples = Z.cols();
  const Matrix Y = W * Z;
  Matrix g(n, samples);
  Vector mean_dg = Vector::Zero(n);
  for (Index r = 0; r < n; ++r) {
    for (Index s = 0; s < samples; ++s) {
      const auto d = contrast_eval(contrast, Y(r, s));
      g(r, s) = d.first;
      mean_dg(r) += d.second;
    }
  }
  mean_dg /= static_cast<double>(samples);
  Matrix next = (g * Z.transpose()) / static_cast<double>(samples);
  next -= mean_dg.asDiagonal() * W;
  return next;
}

Matrix symmetric_decorrelation(const Matrix& W) {
  const Eigen::MatrixXd gram = W * W.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
    throw NumericalError("FastICA: unmixing matrix became singular during decorrelation");
  }
  const Eigen::MatrixXd inv_sqrt =
      eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
      eig.eigenvectors().transpose();
  return inv_sqrt * W;
}

Matrix whitened_samples(const IcaTransform& transform, const Matrix& rows) {
  const Eigen::MatrixXd centered = rows.rowwise() - transform.mean.transpose();
  return transform.whiten * centered.transpose();
}

}  // namespace detail

IcaTransform ica_fit(const Dataset& train, const IcaConfig& config) {
  config.validate();
  train.validate();
  const Index d = train.dim();
  const Index samples = train.size();
  if (samples < 2) throw DataError("FastICA needs at least 2 rows");
  const Index n = config.n_components == 0 ? d : config.n_components;
  if (n > d) {
    throw InvalidArgument("ICA component count " + std::to_string(n) + " exceeds feature count " +
                          std::to_string(d));
  }

  IcaTransform t;
  t.n_components = n;
  t.mean = train.rows.colwise().mean().transpose();
  const Eigen::MatrixXd centered = train.rows.rowwise() - t.mean.transpose();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(samples);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw NumericalError("FastICA: covariance eigendecomposition failed");
  // Eigen sorts ascending; keep the last n.
  const Vector values = eig.eigenvalues().tail(n);
  const Eigen::MatrixXd vectors = eig.eigenvectors().rightCols(n);
  if (values.minCoeff() <= kMinEigenvalue) {
    throw NumericalError("FastICA: covariance is rank deficient (kept eigenvalue " +
                         format_double(values.minCoeff()) + "); reduce the component count");
  }
  const Eigen::MatrixXd scaled = values.cwiseSqrt().cwiseInverse().asDiagonal() * vectors.transpose();
  // Full-dimensional runs use the symmetric whitening E D^-1/2 E^T; reduced
  // runs project onto the top-n eigenvectors first (D_n^-1/2 E_n^T).
  t.whiten = n == d ? Matrix(vectors * scaled) : Matrix(scaled);

  const Matrix Z = detail::whitened_samples(t, train.rows);

  auto rng = make_rng(config.seed, SeedPurpose::kIcaInit);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix W(n, n);
  for (Index r = 0; r < n; ++r) {
    for (Index c = 0; c < n; ++c) W(r, c) = normal(rng);
  }
  W = detail::symmetric_decorrelation(W);

  for (int iter = 1; iter <= config.max_iter; ++iter) {
    Matrix next = detail::fixed_point_update(W, Z, config.contrast);
    if (!next.allFinite()) throw NumericalError("FastICA: update produced non-finite values");
    next = detail::symmetric_decorrelation(next);
    next.rowwise().normalize();

    double change = 0.0;
    if (config.convergence == ConvergenceTest::kAlignment) {
      for (Index r = 0; r < n; ++r) change = std::max(change, 1.0 - std::abs(next.row(r).dot(W.row(r))));
    } else {
      change = (next - W).norm();
    }
    W = std::move(next);
    t.iterations_used = iter;
    if (change < config.epsilon) {
      t.converged = true;
      break;
    }
  }
  t.unmixing = std::move(W);
  return t;
}

Dataset ica_transform(const IcaTransform& transform, const Dataset& batch) {
  if (batch.dim() != transform.input_dim()) {
    throw DimensionError("ICA transform expects " + std::to_string(transform.input_dim()) + " features, batch has " +
                         std::to_string(batch.dim()));
  }
  const Matrix S = transform.unmixing * detail::whitened_samples(transform, batch.rows);
  Dataset out;
  out.rows = S.transpose();
  for (Index c = 0; c < transform.n_components; ++c) out.feature_names.push_back("ic" + std::to_string(c + 1));
  out.labels = batch.labels;
  return out;
}

}  // namespace oneclass
