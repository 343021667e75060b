#pragma once

#include <cstdint>
#include <random>

#include "phctl/chemistry.hpp"

// Perfectly mixed neutralization tank fed by an acid stream (F1, C1) and a
// base stream (F2, C2) through first-order control valves.
namespace phctl::plant {

using chemistry::EquilibriumConstants;
using chemistry::IonInvariants;

struct PlantParams {
  double volume = 5.0;  // L
  double c1 = 0.052;    // acid feed, mol/L
  double c2 = 0.052;    // base feed, mol/L
  double f_max = 0.05;  // per-stream flow limit, L/s
  EquilibriumConstants constants{};
  double sensor_noise_ph = 0.0;  // std-dev of additive pH noise; 0 disables

  void validate() const;
  friend bool operator==(const PlantParams &, const PlantParams &) = default;
};

/// Direction-dependent first-order valve. Opening settles a fraction
/// `hysteresis_eps` short of the command, closing overshoots it by the same
/// fraction.
struct ValveModel {
  double tau_open = 8.0;
  double tau_close = 5.0;
  double hysteresis_eps = 0.04;

  void validate() const;
  friend bool operator==(const ValveModel &, const ValveModel &) = default;
};

struct ValvePair {
  ValveModel acid{};
  ValveModel base{};
  friend bool operator==(const ValvePair &, const ValvePair &) = default;
};

struct PlantState {
  IonInvariants inv{};
  double f1_actual = 0.0;
  double f2_actual = 0.0;
  double t = 0.0;
};

struct SensorReadings {
  double ph;
  double f1;
  double f2;
  double c1_meas;
  double c2_meas;
};

struct InvariantRates {
  double dalpha;
  double dbeta;
};

InvariantRates invariant_derivatives(const PlantState &state,
                                     const PlantParams &params);

/// Exact discrete update of the valve lag over `dt`. Result stays within
/// [0, f_max] and between `current` and the direction-dependent target.
double valve_step(double current, double commanded, const ValveModel &model,
                  double dt, double f_max);

/// Advances valves, then integrates the invariants with one RK4 step using
/// the post-step flows. Throws StateDiverged on any non-finite result.
PlantState plant_step(const PlantState &state, double f1_cmd, double f2_cmd,
                      const PlantParams &params, const ValvePair &valves,
                      double dt);

/// Tank invariants at steady state for base fraction `r` of the total flow.
IonInvariants steady_invariants(double r, const PlantParams &params);

/// Base fraction whose steady state has the given pH, by bisection on r in
/// [0, 1]. Targets outside the reachable range clamp to the nearest end.
double split_for_ph(double ph, const PlantParams &params);

/// d pH / d r of the steady state at base fraction r.
double ph_slope_for_split(double r, const PlantParams &params);

/// Noiseless readout.
SensorReadings measure(const PlantState &state, const PlantParams &params);

/// Readout with the optional Gaussian pH noise hook. Deterministic per seed.
class Sensor {
public:
  explicit Sensor(double noise_ph = 0.0, std::uint64_t seed = 0);

  SensorReadings measure(const PlantState &state, const PlantParams &params);

private:
  double noise_ph_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace phctl::plant
