#pragma once

#include <cstddef>
#include <span>

#include "oneclass/dataset.hpp"

namespace oneclass {

enum class KernelKind { kRbf, kTgak };

// Kernel selection shared by fitting, scoring and persistence.
//
// kRbf compares two instances as feature vectors. kTgak treats every
// instance as a univariate sequence indexed by feature position and sums,
// over all monotone alignments, the product of the triangular-weighted local
// kernel. `normalize` applies k(x,y) / sqrt(k(x,x) k(y,y)) to the sequence
// kernel; it is ignored for kRbf, whose self-similarity is already 1.
struct KernelSpec {
  KernelKind kind = KernelKind::kTgak;
  double sigma = 1.0;
  double triangle = 1.0;  // T; +infinity disables truncation
  bool normalize = true;

  static KernelSpec rbf(double sigma) { return {KernelKind::kRbf, sigma, 1.0, true}; }
  static KernelSpec tgak(double sigma, double triangle, bool normalize = true) {
    return {KernelKind::kTgak, sigma, triangle, normalize};
  }

  // Throws InvalidArgument unless sigma > 0 and (for TGAK) triangle > 0.
  void validate() const;
};

const char* kind_name(KernelKind kind);
KernelKind parse_kind(std::string_view name);

using Sequence = std::span<const double>;

// exp(-|x - y|^2 / (2 sigma^2)).
double rbf(Sequence x, Sequence y, double sigma);

// max(1 - |i - j| / T, 0) for 1-based positions i, j.
double triangular_weight(Index i, Index j, double triangle);

// t / (2 - t) with t = w(i,j) * exp(-(x_i - y_j)^2 / (2 sigma^2)).
double tgak_local(Index i, double xi, Index j, double yj, const KernelSpec& spec);

// The per-cell kernel used by the alignment recursion: tgak_local for kTgak,
// the plain Gaussian exp(-(x_i - y_j)^2 / (2 sigma^2)) for kRbf.
double local_kernel(Index i, double xi, Index j, double yj, const KernelSpec& spec);

// Minimum over alignments of the summed squared differences.
double dtw(Sequence x, Sequence y);

// log of the unnormalized alignment kernel, computed with log-sum-exp so long
// sequences do not underflow. Returns -infinity when every alignment passes
// through a truncated cell.
double log_gak(Sequence x, Sequence y, const KernelSpec& spec);

// Unnormalized alignment kernel evaluated directly in linear space:
// M(i,j) = k(i,j) * (M(i-1,j) + M(i,j-1) + M(i-1,j-1)). Reference path for
// short sequences only; it underflows on long ones.
double gak_linear(Sequence x, Sequence y, const KernelSpec& spec);

// Alignment kernel honoring spec.normalize.
double gak(Sequence x, Sequence y, const KernelSpec& spec);

// Kernel between two instances under `spec` (rbf for kRbf, gak for kTgak).
double kernel(Sequence x, Sequence y, const KernelSpec& spec);

// Cross-kernel matrix K(i,j) = kernel(a_i, b_j). `threads` == 0 uses every
// hardware thread; results do not depend on the thread count.
Matrix gram(const Matrix& a, const Matrix& b, const KernelSpec& spec, std::size_t threads = 1);

// Symmetric Gram of a against itself; only the upper triangle is evaluated.
Matrix gram(const Matrix& a, const KernelSpec& spec, std::size_t threads = 1);

}  // namespace oneclass
