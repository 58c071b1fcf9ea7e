#include "oneclass/telemetry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "oneclass/error.hpp"
#include "oneclass/seed.hpp"

namespace oneclass {
namespace {

constexpr std::array<std::string_view, 18> kFlightFeatures = {
    "velocity_x",         "velocity_y",         "velocity_z",         "angular_velocity_x",
    "angular_velocity_y", "angular_velocity_z", "linear_accel_x",     "linear_accel_y",
    "linear_accel_z",     "magnetic_field_x",   "magnetic_field_y",   "magnetic_field_z",
    "fluid_pressure",     "temperature",        "altitude_error",     "airspeed_error",
    "tracking_error_x",   "wp_distance",
};

// Cut points closer than this to an existing boundary are dropped so no
// bucket has (near) zero width.
constexpr double kBoundaryTolerance = 1e-9;

}  // namespace

std::span<const std::string_view> flight_feature_schema() { return kFlightFeatures; }

void TelemetrySeries::validate() const {
  if (timestamps.size() != values.size()) {
    throw DataError("series '" + feature_name + "': " + std::to_string(timestamps.size()) + " timestamps but " +
                    std::to_string(values.size()) + " values");
  }
  if (timestamps.empty()) throw DataError("series '" + feature_name + "' is empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || !std::isfinite(timestamps[i])) {
      throw DataError("series '" + feature_name + "': non-finite reading at index " + std::to_string(i));
    }
    if (i > 0 && !(timestamps[i] > timestamps[i - 1])) {
      throw DataError("series '" + feature_name + "': timestamps not strictly increasing at index " +
                      std::to_string(i));
    }
  }
}

TelemetrySeries load_telemetry_csv(const std::filesystem::path& path, std::string feature_name) {
  const Dataset raw = load_csv(path);
  if (raw.dim() != 2) {
    throw DataError("'" + path.string() + "': telemetry export needs exactly two columns t,value");
  }
  TelemetrySeries s;
  s.feature_name = std::move(feature_name);
  s.timestamps.resize(static_cast<std::size_t>(raw.size()));
  s.values.resize(static_cast<std::size_t>(raw.size()));
  for (Index i = 0; i < raw.size(); ++i) {
    s.timestamps[static_cast<std::size_t>(i)] = raw.rows(i, 0);
    s.values[static_cast<std::size_t>(i)] = raw.rows(i, 1);
  }
  s.validate();
  return s;
}

std::vector<double> bucket_boundaries(double t_start, double t_end, std::optional<double> fault_time,
                                      double interval) {
  if (!(interval > 0.0)) throw InvalidArgument("resample interval must be positive");
  if (!(t_end > t_start)) throw DataError("telemetry time span is empty");
  if (fault_time && (*fault_time < t_start || *fault_time > t_end)) {
    throw DataError("fault time " + format_double(*fault_time) + " outside the log span [" +
                    format_double(t_start) + ", " + format_double(t_end) + "]");
  }

  std::vector<double> cuts;
  const auto segment = [&](double from, double to) {
    for (std::size_t k = 0;; ++k) {
      const double t = from + static_cast<double>(k) * interval;
      if (t >= to - kBoundaryTolerance) break;
      cuts.push_back(t);
    }
  };
  if (fault_time) {
    segment(t_start, *fault_time);
    segment(*fault_time, t_end);
  } else {
    segment(t_start, t_end);
  }
  cuts.push_back(t_end);
  return cuts;
}

Dataset resample_telemetry(std::span<const TelemetrySeries> series, const ResampleOptions& options) {
  if (series.empty()) throw DataError("no telemetry series to resample");
  double t_start = series.front().timestamps.empty() ? 0.0 : series.front().timestamps.front();
  double t_end = t_start;
  for (const auto& s : series) {
    s.validate();
    t_start = std::min(t_start, s.timestamps.front());
    t_end = std::max(t_end, s.timestamps.back());
  }

  const auto cuts = bucket_boundaries(t_start, t_end, options.fault_time, options.interval);
  const auto n_buckets = static_cast<Index>(cuts.size() - 1);

  Dataset out;
  out.rows.resize(n_buckets, static_cast<Index>(series.size()));
  out.labels.emplace(static_cast<std::size_t>(n_buckets), Label::kTarget);
  for (Index b = 0; b < n_buckets; ++b) {
    if (options.fault_time && cuts[static_cast<std::size_t>(b)] >= *options.fault_time - kBoundaryTolerance) {
      (*out.labels)[static_cast<std::size_t>(b)] = Label::kOutlier;
    }
  }

  auto rng = make_rng(options.seed, SeedPurpose::kResample);
  for (std::size_t f = 0; f < series.size(); ++f) {
    const auto& s = series[f];
    out.feature_names.push_back(s.feature_name);

    std::vector<std::optional<double>> chosen(static_cast<std::size_t>(n_buckets));
    auto lo = s.timestamps.begin();
    for (Index b = 0; b < n_buckets; ++b) {
      // Buckets are [cut_b, cut_{b+1}); the final bucket also takes t_end.
      const bool last = b + 1 == n_buckets;
      const double upper = cuts[static_cast<std::size_t>(b + 1)];
      auto hi = last ? s.timestamps.end() : std::lower_bound(lo, s.timestamps.end(), upper);
      const auto count = hi - lo;
      if (count > 0) {
        std::uniform_int_distribution<std::ptrdiff_t> pick(0, count - 1);
        const auto offset = (lo - s.timestamps.begin()) + pick(rng);
        chosen[static_cast<std::size_t>(b)] = s.values[static_cast<std::size_t>(offset)];
      }
      lo = hi;
    }

    const auto first = std::find_if(chosen.begin(), chosen.end(), [](const auto& v) { return v.has_value(); });
    if (first == chosen.end()) throw DataError("series '" + s.feature_name + "' has no readings in the log span");
    double carry = **first;
    for (Index b = 0; b < n_buckets; ++b) {
      auto& cell = chosen[static_cast<std::size_t>(b)];
      if (cell) carry = *cell;
      out.rows(b, static_cast<Index>(f)) = carry;
    }
  }
  return out;
}

}  // namespace oneclass
