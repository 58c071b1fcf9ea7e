#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oneclass/dataset.hpp"

namespace oneclass {

// One sensor channel: strictly increasing timestamps (seconds), one finite
// reading per timestamp.
struct TelemetrySeries {
  std::string feature_name;
  std::vector<double> timestamps;
  std::vector<double> values;

  void validate() const;
};

// The 18 flight-state features the resampler emits, in column order.
std::span<const std::string_view> flight_feature_schema();

// Reads a two-column `t,value` export.
TelemetrySeries load_telemetry_csv(const std::filesystem::path& path, std::string feature_name);

struct ResampleOptions {
  // Absent for an all-normal log.
  std::optional<double> fault_time;
  double interval = 0.25;
  std::uint64_t seed = 0;
};

// Cut points over [t_start, t_end]: interval steps from t_start up to the
// fault time, the fault time itself, interval steps from it up to t_end, and
// t_end. A 2 s log faulting at 1.2 s yields {0, .25, .5, .75, 1, 1.2, 1.45,
// 1.7, 1.95, 2}.
std::vector<double> bucket_boundaries(double t_start, double t_end, std::optional<double> fault_time,
                                      double interval);

// One row per bucket, one column per series (in the order given). Each cell
// is a reading drawn uniformly from that feature's bucket; an empty bucket
// repeats the previous bucket's value, and leading empty buckets take the
// first later value. Rows in buckets starting before the fault are +1,
// the rest -1.
Dataset resample_telemetry(std::span<const TelemetrySeries> series, const ResampleOptions& options);

}  // namespace oneclass
