#pragma once

#include <cstdint>

#include "oneclass/dataset.hpp"

namespace oneclass {

// Non-quadratic contrast G; only its first two derivatives enter the update.
enum class Contrast {
  kLogCosh,  // G(u) = log cosh u
  kExp,      // G(u) = -exp(-u^2 / 2)
  kCube,     // G(u) = u^4 / 4
};

struct ContrastDerivatives {
  double first;   // G'(u)
  double second;  // G''(u)
};

ContrastDerivatives contrast_eval(Contrast contrast, double u);

const char* contrast_name(Contrast contrast);
Contrast parse_contrast(std::string_view name);

enum class ConvergenceTest {
  // max over rows of 1 - |<w_new, w_old>|; immune to sign flips.
  kAlignment,
  // Frobenius norm of W_new - W_old.
  kMatrixDelta,
};

struct IcaConfig {
  Index n_components = 0;  // 0 keeps every feature
  int max_iter = 200;
  double epsilon = 1e-4;
  std::uint64_t seed = 0;
  Contrast contrast = Contrast::kLogCosh;
  ConvergenceTest convergence = ConvergenceTest::kAlignment;

  void validate() const;
};

// Fitted parallel FastICA: S = unmixing * whiten * (x - mean).
struct IcaTransform {
  Vector mean;       // d
  Matrix whiten;     // n x d
  Matrix unmixing;   // n x n, orthonormal rows
  Index n_components = 0;
  int iterations_used = 0;
  bool converged = false;

  Index input_dim() const { return mean.size(); }
};

// Centers, whitens with the eigendecomposition of the (1/N) covariance
// keeping the n largest eigenvalues, then runs the fixed-point iteration
// with symmetric decorrelation after every sweep. Throws NumericalError if a
// kept eigenvalue is <= 1e-12 or an update turns non-finite. Hitting max_iter
// is not an error; `converged` reports it.
IcaTransform ica_fit(const Dataset& train, const IcaConfig& config);

Dataset ica_transform(const IcaTransform& transform, const Dataset& batch);

namespace detail {

// Z is n x N whitened data (one column per sample). Returns the raw
// E{z g(w^T z)} - E{g'(w^T z)} w update for every row w of W, before
// decorrelation.
Matrix fixed_point_update(const Matrix& W, const Matrix& Z, Contrast contrast);

// (W W^T)^{-1/2} W.
Matrix symmetric_decorrelation(const Matrix& W);

// Centered, whitened training data (n x N) as used by the iteration.
Matrix whitened_samples(const IcaTransform& transform, const Matrix& rows);

}  // namespace detail

}  // namespace oneclass
