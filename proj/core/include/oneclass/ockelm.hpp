#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "oneclass/dataset.hpp"
#include "oneclass/kernels.hpp"

namespace oneclass {

// One-class kernel extreme learning machine in dual form. Training targets
// are the constant 1; `coefficients` solves (I/C + Omega) a = 1, so the
// output for x is k(x)^T a with k(x) the kernel vector against train_rows.
struct OckelmModel {
  Matrix train_rows;
  KernelSpec spec;
  double C = 1.0;
  double theta = 0.01;
  Vector coefficients;
  double delta = 0.0;
  // Diagonal jitter that had to be added to factorize; 0 for a clean solve.
  double jitter = 0.0;

  Index size() const { return train_rows.rows(); }
  Index dim() const { return train_rows.cols(); }
};

struct ScoreVector {
  Vector outputs;  // O_t = k(x_t)^T a
  Vector errors;   // |O_t - 1|
};

// Rank of the threshold error among the descending-sorted training errors:
// max(1, ceil(theta * n)), 1-based.
Index threshold_rank(double theta, Index n);

// errors_desc must be sorted descending; returns errors_desc[k - 1] with
// k = threshold_rank(theta, size).
double threshold(std::span<const double> errors_desc, double theta);

struct RegularizedSolve {
  Vector coefficients;
  double jitter = 0.0;
};

// Solves (I/C + gram) a = 1 with a Cholesky factorization. If the matrix is
// not numerically positive definite, jitter of 1e-12 * trace / N is added to
// the diagonal and grown tenfold up to 1e-6 * trace / N before giving up with
// NumericalError. One step of iterative refinement follows the solve.
RegularizedSolve solve_regularized(const Matrix& gram, double C);

// Fits from an already assembled training Gram; used when many models share
// one kernel (grid search).
OckelmModel fit_from_gram(Matrix train_rows, const Matrix& train_gram, const KernelSpec& spec, double C,
                          double theta);

OckelmModel fit(const Dataset& train, const KernelSpec& spec, double C, double theta, std::size_t threads = 1);

// cross_kernel is batch x N (rows: instances to score).
ScoreVector score_from_kernel(const OckelmModel& model, const Matrix& cross_kernel);
ScoreVector score(const OckelmModel& model, const Dataset& batch, std::size_t threads = 1);

// +1 iff error < delta; ties go to -1 so the row that defines delta counts
// toward the outlier share.
std::vector<Label> classify(const ScoreVector& scores, double delta);
std::vector<Label> predict(const OckelmModel& model, const Dataset& batch, std::size_t threads = 1);

// Validates C > 0 and 0 < theta < 1, throwing InvalidArgument.
void check_hyperparameters(double C, double theta);

}  // namespace oneclass
