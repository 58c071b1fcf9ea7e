#pragma once

#include <utility>
#include <vector>

#include "oneclass/kernels.hpp"

namespace oneclass {

// A monotone alignment between sequences of lengths m and n: 1-based index
// pairs from (1,1) to (m,n), each step advancing either or both indices by 1.
struct AlignmentPath {
  std::vector<std::pair<Index, Index>> pairs;

  bool operator==(const AlignmentPath&) const = default;
  auto operator<=>(const AlignmentPath&) const = default;
};

// Largest m + n accepted by enumerate_alignments; the path count grows like
// the Delannoy numbers (1683 paths at 6 x 6).
inline constexpr Index kMaxEnumeratedLength = 12;

// Every alignment path, each exactly once, in lexicographic order.
// Brute-force oracle for dtw and the alignment kernels.
std::vector<AlignmentPath> enumerate_alignments(Index m, Index n);

// Sum over `path` of (x_i - y_j)^2.
double path_cost(const AlignmentPath& path, Sequence x, Sequence y);

// Product over `path` of local_kernel(i, x_i, j, y_j, spec).
double path_kernel_product(const AlignmentPath& path, Sequence x, Sequence y, const KernelSpec& spec);

}  // namespace oneclass
