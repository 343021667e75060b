#pragma once

#include <functional>
#include <vector>

#include "phctl/plant.hpp"

namespace phctl::pid {

/// Ultimate gain and oscillation period from the closed-loop experiment.
struct ZnUltimate {
  double g;
  double p;
};

enum class ControllerType { P, PI, PID };

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;

  void validate() const;
  friend bool operator==(const PidGains &, const PidGains &) = default;
};

/// Positional PID memory. Error and output are in normalized units; the
/// caller scales flows by f_max.
struct PidState {
  double integral = 0.0;
  double prev_meas = 0.0;
  double out_lo = 0.0;
  double out_hi = 1.0;
  double d_filter_tau = 1.0;
  double d_state = 0.0;
  bool primed = false;  // prev_meas holds a real sample
};

struct PidStep {
  double output;
  PidState state;
};

/// Ziegler-Nichols closed-loop table.
PidGains zn_tune(ZnUltimate u, ControllerType kind);

/// One controller tick. Derivative acts on the filtered measurement, the
/// integrator is frozen while the output is saturated in the direction of the
/// error, and ki * integral is kept inside [out_lo, out_hi].
PidStep pid_update(const PidState &s, const PidGains &gains, double setpoint,
                   double measurement, double dt);

/// State with the integrator preloaded so the first output equals `output`
/// for zero error and a settled measurement.
PidState bumpless_state(const PidGains &gains, double output, double measurement,
                        double out_lo = 0.0, double out_hi = 1.0,
                        double d_filter_tau = 1.0);

// ---------------------------------------------------------------------------
// Ultimate-gain search

enum class OscillationTrend { Decaying, Steady, Growing };

struct ProbeResult {
  OscillationTrend trend;
  double period;  // s; meaningful when trend != Decaying
};

/// Runs a P-only closed loop at the given gain.
using LoopProbe = std::function<ProbeResult(double gain)>;

struct UltimateSearch {
  double g_start = 0.5;
  double g_max = 1000.0;
  double growth = 1.25;
  double resolution = 0.01;  // relative bracket width at which bisection stops
};

/// Raises the gain geometrically until the loop stops decaying, then bisects
/// the bracket. Returns the smallest sustained-oscillation gain found and the
/// period measured there. Throws NoOscillation when g_max is reached first.
ZnUltimate find_ultimate(const LoopProbe &probe, const UltimateSearch &opts = {});

/// Classifies an oscillation from a sampled response: successive peak-to-peak
/// swings over the second half of the record are compared.
ProbeResult classify_oscillation(const std::vector<double> &y, double dt);

/// Flow loop used for tuning: valve, optional transport delay and optional
/// first-order transmitter lag, closed by a P-only controller.
struct FlowLoopModel {
  plant::ValveModel valve{8.0, 8.0, 0.0};
  double f_max = 0.05;
  double dead_time = 0.0;     // s
  double sensor_tau = 0.0;    // s
  double operating_point = 0.5;  // normalized flow around which the loop is probed
  double step = 0.05;            // normalized setpoint excitation
  double dt = 0.01;
  double horizon = 0.0;  // s; 0 picks a value from the loop time constants
};

/// Transmitter and transport-delay values that put the ultimate point of
/// the default 8 s valve at G = 18, P = 33 s.
FlowLoopModel calibrated_flow_loop();

ProbeResult probe_flow_loop(const FlowLoopModel &m, double gain);

} // namespace phctl::pid
