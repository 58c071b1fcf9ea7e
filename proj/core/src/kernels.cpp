#include "oneclass/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "oneclass/error.hpp"
#include "oneclass/parallel.hpp"

namespace oneclass {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp3(double a, double b, double c) {
  const double m = std::max({a, b, c});
  if (m == kNegInf) return kNegInf;
  return m + std::log(std::exp(a - m) + std::exp(b - m) + std::exp(c - m));
}

void require_nonempty(Sequence x, Sequence y) {
  if (x.empty() || y.empty()) throw DataError("alignment kernels need nonempty sequences");
}

// log w(i, j) indexed by |i - j|.
std::vector<double> log_weights(std::size_t max_offset, const KernelSpec& spec) {
  std::vector<double> out(max_offset + 1, 0.0);
  if (spec.kind != KernelKind::kTgak) return out;
  for (std::size_t k = 0; k <= max_offset; ++k) {
    const double w = triangular_weight(1, static_cast<Index>(k) + 1, spec.triangle);
    out[k] = w > 0.0 ? std::log(w) : kNegInf;
  }
  return out;
}

}  // namespace

void KernelSpec::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("kernel sigma must be a positive finite number");
  if (kind == KernelKind::kTgak && !(triangle > 0.0)) throw InvalidArgument("TGAK triangle parameter T must be > 0");
}

const char* kind_name(KernelKind kind) { return kind == KernelKind::kRbf ? "rbf" : "tgak"; }

KernelKind parse_kind(std::string_view name) {
  if (name == "rbf") return KernelKind::kRbf;
  if (name == "tgak") return KernelKind::kTgak;
  throw InvalidArgument("unknown kernel '" + std::string(name) + "' (expected rbf or tgak)");
}

double rbf(Sequence x, Sequence y, double sigma) {
  if (x.size() != y.size()) {
    throw DimensionError("rbf: vectors have " + std::to_string(x.size()) + " and " + std::to_string(y.size()) +
                         " entries");
  }
  double sq = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double diff = x[k] - y[k];
    sq += diff * diff;
  }
  return std::exp(-sq / (2.0 * sigma * sigma));
}

double triangular_weight(Index i, Index j, double triangle) {
  const auto offset = static_cast<double>(i > j ? i - j : j - i);
  return std::max(1.0 - offset / triangle, 0.0);
}

double tgak_local(Index i, double xi, Index j, double yj, const KernelSpec& spec) {
  const double w = triangular_weight(i, j, spec.triangle);
  if (w == 0.0) return 0.0;
  const double diff = xi - yj;
  const double t = w * std::exp(-diff * diff / (2.0 * spec.sigma * spec.sigma));
  return t / (2.0 - t);
}

double local_kernel(Index i, double xi, Index j, double yj, const KernelSpec& spec) {
  if (spec.kind == KernelKind::kTgak) return tgak_local(i, xi, j, yj, spec);
  const double diff = xi - yj;
  return std::exp(-diff * diff / (2.0 * spec.sigma * spec.sigma));
}

double dtw(Sequence x, Sequence y) {
  require_nonempty(x, y);
  const std::size_t n = y.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> prev(n + 1, inf);
  std::vector<double> cur(n + 1, inf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    cur[0] = inf;
    for (std::size_t j = 1; j <= n; ++j) {
      const double diff = x[i - 1] - y[j - 1];
      cur[j] = diff * diff + std::min({prev[j], cur[j - 1], prev[j - 1]});
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

double log_gak(Sequence x, Sequence y, const KernelSpec& spec) {
  require_nonempty(x, y);
  const std::size_t m = x.size();
  const std::size_t n = y.size();
  const auto log_w = log_weights(std::max(m, n), spec);
  const double inv_two_sigma_sq = 1.0 / (2.0 * spec.sigma * spec.sigma);
  const bool tgak = spec.kind == KernelKind::kTgak;

  // Weights only shrink with |i - j|, so each row touches a band of columns.
  std::size_t band = 0;
  while (band + 1 < log_w.size() && log_w[band + 1] != kNegInf) ++band;

  std::vector<double> prev(n + 1, kNegInf);
  std::vector<double> cur(n + 1, kNegInf);
  prev[0] = 0.0;  // M(0,0) = 1
  for (std::size_t i = 1; i <= m; ++i) {
    std::fill(cur.begin(), cur.end(), kNegInf);
    const std::size_t j_lo = i > band ? i - band : 1;
    const std::size_t j_hi = std::min(n, i + band);
    for (std::size_t j = j_lo; j <= j_hi; ++j) {
      const double lw = log_w[i > j ? i - j : j - i];
      const double diff = x[i - 1] - y[j - 1];
      double log_local = -diff * diff * inv_two_sigma_sq;
      if (tgak) {
        const double log_t = lw + log_local;
        log_local = log_t - std::log(2.0 - std::exp(log_t));
      }
      cur[j] = log_local + log_sum_exp3(prev[j], cur[j - 1], prev[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

double gak_linear(Sequence x, Sequence y, const KernelSpec& spec) {
  require_nonempty(x, y);
  const std::size_t m = x.size();
  const std::size_t n = y.size();
  std::vector<double> prev(n + 1, 0.0);
  std::vector<double> cur(n + 1, 0.0);
  prev[0] = 1.0;
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
      const double k = local_kernel(static_cast<Index>(i), x[i - 1], static_cast<Index>(j), y[j - 1], spec);
      cur[j] = k * (prev[j] + cur[j - 1] + prev[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

double gak(Sequence x, Sequence y, const KernelSpec& spec) {
  const double lxy = log_gak(x, y, spec);
  if (!spec.normalize) return std::exp(lxy);
  const double lxx = log_gak(x, x, spec);
  const double lyy = log_gak(y, y, spec);
  if (lxx == kNegInf || lyy == kNegInf) throw NumericalError("alignment self-kernel is zero; cannot normalize");
  return std::exp(lxy - 0.5 * (lxx + lyy));
}

double kernel(Sequence x, Sequence y, const KernelSpec& spec) {
  if (spec.kind == KernelKind::kRbf) return rbf(x, y, spec.sigma);
  return gak(x, y, spec);
}

namespace {

Sequence row_of(const Matrix& m, Index i) {
  return {m.data() + i * m.cols(), static_cast<std::size_t>(m.cols())};
}

std::vector<double> self_log_kernels(const Matrix& m, const KernelSpec& spec, std::size_t threads) {
  std::vector<double> out(static_cast<std::size_t>(m.rows()));
  parallel_for(out.size(), threads, [&](std::size_t i) {
    const auto r = row_of(m, static_cast<Index>(i));
    out[i] = log_gak(r, r, spec);
    if (out[i] == kNegInf) throw NumericalError("alignment self-kernel is zero; cannot normalize");
  });
  return out;
}

double alignment_entry(Sequence x, Sequence y, const KernelSpec& spec, double self_x, double self_y) {
  const double l = log_gak(x, y, spec);
  const double v = spec.normalize ? std::exp(l - 0.5 * (self_x + self_y)) : std::exp(l);
  if (!std::isfinite(v)) throw NumericalError("unnormalized alignment kernel overflowed; enable normalization");
  return v;
}

}  // namespace

Matrix gram(const Matrix& a, const Matrix& b, const KernelSpec& spec, std::size_t threads) {
  spec.validate();
  if (a.cols() != b.cols()) {
    throw DimensionError("gram: operands have " + std::to_string(a.cols()) + " and " + std::to_string(b.cols()) +
                         " features");
  }
  Matrix out(a.rows(), b.rows());
  if (spec.kind == KernelKind::kRbf) {
    parallel_for(static_cast<std::size_t>(a.rows()), threads, [&](std::size_t i) {
      const auto ri = row_of(a, static_cast<Index>(i));
      for (Index j = 0; j < b.rows(); ++j) out(static_cast<Index>(i), j) = rbf(ri, row_of(b, j), spec.sigma);
    });
    return out;
  }
  std::vector<double> self_a;
  std::vector<double> self_b;
  if (spec.normalize) {
    self_a = self_log_kernels(a, spec, threads);
    self_b = self_log_kernels(b, spec, threads);
  }
  parallel_for(static_cast<std::size_t>(a.rows()), threads, [&](std::size_t i) {
    const auto ri = row_of(a, static_cast<Index>(i));
    for (Index j = 0; j < b.rows(); ++j) {
      out(static_cast<Index>(i), j) =
          alignment_entry(ri, row_of(b, j), spec, spec.normalize ? self_a[i] : 0.0,
                          spec.normalize ? self_b[static_cast<std::size_t>(j)] : 0.0);
    }
  });
  return out;
}

Matrix gram(const Matrix& a, const KernelSpec& spec, std::size_t threads) {
  spec.validate();
  const Index n = a.rows();
  Matrix out(n, n);
  std::vector<double> self;
  const bool alignment = spec.kind == KernelKind::kTgak;
  if (alignment && spec.normalize) self = self_log_kernels(a, spec, threads);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t ui) {
    const auto i = static_cast<Index>(ui);
    const auto ri = row_of(a, i);
    for (Index j = i; j < n; ++j) {
      if (!alignment) {
        out(i, j) = rbf(ri, row_of(a, j), spec.sigma);
      } else if (spec.normalize && i == j) {
        out(i, j) = 1.0;
      } else {
        out(i, j) = alignment_entry(ri, row_of(a, j), spec, spec.normalize ? self[ui] : 0.0,
                                    spec.normalize ? self[static_cast<std::size_t>(j)] : 0.0);
      }
    }
  });
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < i; ++j) out(i, j) = out(j, i);
  }
  return out;
}

}  // namespace oneclass
