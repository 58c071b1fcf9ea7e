#include "oneclass/alignment.hpp"

#include <string>

#include "oneclass/error.hpp"

namespace oneclass {
namespace {

void extend(Index m, Index n, AlignmentPath& current, std::vector<AlignmentPath>& out) {
  const auto [i, j] = current.pairs.back();
  if (i == m && j == n) {
    out.push_back(current);
    return;
  }
  // Steps in lexicographic order of the next pair: (i, j+1), (i+1, j), (i+1, j+1).
  constexpr std::pair<Index, Index> kSteps[] = {{0, 1}, {1, 0}, {1, 1}};
  for (const auto& [di, dj] : kSteps) {
    if (i + di > m || j + dj > n) continue;
    current.pairs.emplace_back(i + di, j + dj);
    extend(m, n, current, out);
    current.pairs.pop_back();
  }
}

}  // namespace

std::vector<AlignmentPath> enumerate_alignments(Index m, Index n) {
  if (m < 1 || n < 1) throw InvalidArgument("alignment lengths must be >= 1");
  if (m + n > kMaxEnumeratedLength) {
    throw InvalidArgument("enumerate_alignments is limited to m + n <= " + std::to_string(kMaxEnumeratedLength));
  }
  std::vector<AlignmentPath> out;
  AlignmentPath current;
  current.pairs.emplace_back(1, 1);
  extend(m, n, current, out);
  return out;
}

double path_cost(const AlignmentPath& path, Sequence x, Sequence y) {
  double cost = 0.0;
  for (const auto& [i, j] : path.pairs) {
    const double diff = x[static_cast<std::size_t>(i - 1)] - y[static_cast<std::size_t>(j - 1)];
    cost += diff * diff;
  }
  return cost;
}

double path_kernel_product(const AlignmentPath& path, Sequence x, Sequence y, const KernelSpec& spec) {
  double product = 1.0;
  for (const auto& [i, j] : path.pairs) {
    product *= local_kernel(i, x[static_cast<std::size_t>(i - 1)], j, y[static_cast<std::size_t>(j - 1)], spec);
  }
  return product;
}

}  // namespace oneclass
