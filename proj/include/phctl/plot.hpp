#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "phctl/schedule.hpp"
#include "phctl/trace.hpp"

namespace phctl::harness {

struct LabeledTrace {
  std::string label;
  const SimTrace *trace;
};

/// pH against time: the setpoint from `schedule` plus one measured series per
/// trace. Axes span [0, duration] x [min - 0.5, max + 0.5] of the plotted pH.
std::string render_svg(const std::vector<LabeledTrace> &traces,
                       const SetpointSchedule &schedule, const std::string &title = "");

void plot(const SimTrace &trace, const SetpointSchedule &schedule,
          const std::filesystem::path &path, const std::string &title = "");

/// Two measured series over one setpoint, for controller comparisons.
void plot_comparison(const SimTrace &a, const std::string &label_a, const SimTrace &b,
                     const std::string &label_b, const SetpointSchedule &schedule,
                     const std::filesystem::path &path, const std::string &title = "");

} // namespace phctl::harness
