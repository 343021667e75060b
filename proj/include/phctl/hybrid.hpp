#pragma once

#include <memory>

#include "phctl/fuzzy.hpp"
#include "phctl/pid.hpp"
#include "phctl/plant.hpp"

// Cascade control: an outer fuzzy pH supervisor moves the base/acid split of
// a constant total flow; inner PID loops track the two stream setpoints.
namespace phctl::hybrid {

enum class ControllerKind { Hybrid, FuzzyOnly };

/// How the fuzzy correction is turned into a flow split.
///   LinearSplit:  the correction integrates directly into the base fraction.
///   Linearized:   the correction is a requested rate of pH change. The tank
///                 composition is recovered from the measured pH and feed
///                 concentrations, and the split is offset from it by the
///                 amount that produces that rate through the local titration
///                 slope.
enum class OuterMapping { LinearSplit, Linearized };

struct CascadeConfig {
  double fuzzy_period = 1.0;  // s
  double f_total = 0.05;      // L/s
  pid::PidGains gains_acid = pid::zn_tune({18.0, 33.0}, pid::ControllerType::PID);
  pid::PidGains gains_base = pid::zn_tune({18.0, 33.0}, pid::ControllerType::PID);
  ControllerKind controller_kind = ControllerKind::Hybrid;
  OuterMapping outer_mapping = OuterMapping::Linearized;
  double split_rate = 0.02;  // base fraction per s at full-scale correction
  double ph_rate = 0.15;     // pH per s at full-scale correction
  // Linearized only: the error fed to the supervisor uses the pH extrapolated
  // this far ahead at the rate the measured flows currently produce.
  double predict_horizon = 0.0;  // s
  double d_filter_tau = 1.0;

  void validate(const plant::PlantParams &plant, double dt) const;
  friend bool operator==(const CascadeConfig &, const CascadeConfig &) = default;
};

struct ControllerState {
  std::shared_ptr<const fuzzy::FuzzyController> fuzzy;
  pid::PidState pid_acid;
  pid::PidState pid_base;
  double split = 0.0;   // base fraction r in [0, 1]
  double delta = 0.0;   // last fuzzy correction
  double last_fuzzy_t = 0.0;
  long tick = 0;
};

struct ControlOutput {
  double f1_cmd;
  double f2_cmd;
  ControllerState state;
};

/// r' = clamp(r + delta / 100 * rate * period, 0, 1).
double split_from_delta(double r, double delta, double fuzzy_period,
                        double rate = 0.02);

struct FlowSetpoints {
  double f1;  // acid
  double f2;  // base
};

FlowSetpoints setpoints_for_split(double r, double f_total);

/// Tank base fraction consistent with a pH reading, given the feed
/// concentrations from the readings.
double inferred_split(const plant::SensorReadings &readings,
                      const plant::PlantParams &plant);

/// Controller at rest on the steady split that holds `ph` with flows settled
/// on their setpoints. The PID outputs sit on the opening side of the valve
/// dead band so the valves are in equilibrium.
ControllerState initial_state(const CascadeConfig &cfg,
                              const plant::PlantParams &plant, double ph,
                              std::shared_ptr<const fuzzy::FuzzyController> fuzzy,
                              const plant::ValvePair &valves = {});

/// Hybrid cascade tick. The fuzzy supervisor acts on its own period; both PID
/// loops act every tick.
ControlOutput control_step(const ControllerState &cs, const CascadeConfig &cfg,
                           const plant::PlantParams &plant, double ph_setpoint,
                           const plant::SensorReadings &readings, double dt);

/// Same supervisor, flow setpoints sent straight to the valves.
ControlOutput fuzzy_only_step(const ControllerState &cs, const CascadeConfig &cfg,
                              const plant::PlantParams &plant, double ph_setpoint,
                              const plant::SensorReadings &readings, double dt);

/// Dispatches on cfg.controller_kind.
ControlOutput step(const ControllerState &cs, const CascadeConfig &cfg,
                   const plant::PlantParams &plant, double ph_setpoint,
                   const plant::SensorReadings &readings, double dt);

} // namespace phctl::hybrid
