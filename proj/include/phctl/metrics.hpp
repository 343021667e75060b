#pragma once

#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "phctl/schedule.hpp"
#include "phctl/trace.hpp"

namespace phctl::harness {

inline constexpr double kSettlingBandPh = 0.1;

struct SegmentMetrics {
  double t_start;
  double t_end;
  double from;  // setpoint before the segment
  double to;    // setpoint during the segment
  std::optional<double> rise_time_s;      // 10 -> 90 % of the step span
  std::optional<double> first_entry_s;    // first time inside the band, from t_start
  std::optional<double> settling_time_s;  // entry into the band never left
  double overshoot_ph = 0.0;
};

struct Metrics {
  std::vector<SegmentMetrics> segments;
  double rmse_ph = 0.0;
  double iae_ph_s = 0.0;
};

/// Per-segment step metrics plus whole-run tracking error against the
/// recorded setpoint. Throws SegmentTooShort for segments under 5 samples.
Metrics compute_metrics(const SimTrace &trace, const SetpointSchedule &schedule);

nlohmann::json metrics_to_json(const Metrics &m);

/// Aligned plain-text table.
std::string format_metrics(const Metrics &m);

} // namespace phctl::harness
