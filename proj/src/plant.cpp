#include "phctl/plant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "phctl/errors.hpp"

namespace phctl::plant {

void PlantParams::validate() const {
  if (!(volume > 0.0)) {
    throw std::invalid_argument("plant volume must be positive");
  }
  if (!(c1 >= 0.0) || !(c2 >= 0.0)) {
    throw std::invalid_argument("feed concentrations must be non-negative");
  }
  if (!(f_max > 0.0)) {
    throw std::invalid_argument("f_max must be positive");
  }
  if (!(sensor_noise_ph >= 0.0)) {
    throw std::invalid_argument("sensor noise must be non-negative");
  }
}

void ValveModel::validate() const {
  if (!(tau_open > 0.0) || !(tau_close > 0.0)) {
    throw std::invalid_argument("valve time constants must be positive");
  }
  if (!(hysteresis_eps >= 0.0 && hysteresis_eps <= 0.06)) {
    throw std::invalid_argument("valve hysteresis must lie in [0, 0.06]");
  }
}

namespace {

InvariantRates rates(double alpha, double beta, double f1, double f2,
                     const PlantParams &p) {
  const double out = f1 + f2;
  return {(f1 * p.c1 - out * alpha) / p.volume,
          (f2 * p.c2 - out * beta) / p.volume};
}

} // namespace

InvariantRates invariant_derivatives(const PlantState &state,
                                     const PlantParams &params) {
  return rates(state.inv.alpha(), state.inv.beta(), state.f1_actual,
               state.f2_actual, params);
}

double valve_step(double current, double commanded, const ValveModel &model,
                  double dt, double f_max) {
  if (commanded == current) {
    return current;
  }
  const bool opening = commanded > current;
  const double eps = model.hysteresis_eps;
  const double target =
      std::clamp(opening ? commanded * (1.0 - eps) : commanded * (1.0 + eps),
                 0.0, f_max);
  const double tau = opening ? model.tau_open : model.tau_close;
  return target + (current - target) * std::exp(-dt / tau);
}

PlantState plant_step(const PlantState &state, double f1_cmd, double f2_cmd,
                      const PlantParams &params, const ValvePair &valves,
                      double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("plant_step requires dt > 0");
  }
  PlantState next;
  next.f1_actual =
      valve_step(state.f1_actual, f1_cmd, valves.acid, dt, params.f_max);
  next.f2_actual =
      valve_step(state.f2_actual, f2_cmd, valves.base, dt, params.f_max);
  next.t = state.t + dt;

  const double f1 = next.f1_actual;
  const double f2 = next.f2_actual;
  const double a0 = state.inv.alpha();
  const double b0 = state.inv.beta();
  const auto k1 = rates(a0, b0, f1, f2, params);
  const auto k2 = rates(a0 + 0.5 * dt * k1.dalpha, b0 + 0.5 * dt * k1.dbeta, f1,
                        f2, params);
  const auto k3 = rates(a0 + 0.5 * dt * k2.dalpha, b0 + 0.5 * dt * k2.dbeta, f1,
                        f2, params);
  const auto k4 =
      rates(a0 + dt * k3.dalpha, b0 + dt * k3.dbeta, f1, f2, params);
  double alpha =
      a0 + dt / 6.0 * (k1.dalpha + 2.0 * k2.dalpha + 2.0 * k3.dalpha + k4.dalpha);
  double beta =
      b0 + dt / 6.0 * (k1.dbeta + 2.0 * k2.dbeta + 2.0 * k3.dbeta + k4.dbeta);

  if (!std::isfinite(alpha) || !std::isfinite(beta) ||
      !std::isfinite(next.f1_actual) || !std::isfinite(next.f2_actual)) {
    throw StateDiverged("plant state became non-finite");
  }
  constexpr double kNegTol = -1e-15;
  if (alpha < kNegTol || beta < kNegTol) {
    throw StateDiverged("ion invariant went negative; time step too large");
  }
  next.inv = IonInvariants(std::max(alpha, 0.0), std::max(beta, 0.0));
  return next;
}

IonInvariants steady_invariants(double r, const PlantParams &params) {
  const double f = std::clamp(r, 0.0, 1.0);
  return IonInvariants(params.c1 * (1.0 - f), params.c2 * f);
}

double split_for_ph(double ph, const PlantParams &params) {
  auto ph_at = [&](double r) {
    return chemistry::ph_of(steady_invariants(r, params), params.constants);
  };
  double lo = 0.0;
  double hi = 1.0;
  if (ph <= ph_at(lo)) {
    return lo;
  }
  if (ph >= ph_at(hi)) {
    return hi;
  }
  // pH is increasing in r; 60 halvings reach the resolution of a double.
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ph_at(mid) < ph ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double ph_slope_for_split(double r, const PlantParams &params) {
  const auto g = chemistry::ph_gradient(steady_invariants(r, params), params.constants);
  return -params.c1 * g.dalpha + params.c2 * g.dbeta;
}

SensorReadings measure(const PlantState &state, const PlantParams &params) {
  return {chemistry::ph_of(state.inv, params.constants), state.f1_actual,
          state.f2_actual, params.c1, params.c2};
}

Sensor::Sensor(double noise_ph, std::uint64_t seed)
    : noise_ph_(noise_ph), rng_(seed) {
  if (!(noise_ph >= 0.0)) {
    throw std::invalid_argument("sensor noise must be non-negative");
  }
}

SensorReadings Sensor::measure(const PlantState &state,
                               const PlantParams &params) {
  SensorReadings r = plant::measure(state, params);
  if (noise_ph_ > 0.0) {
    r.ph = std::clamp(r.ph + noise_ph_ * normal_(rng_), 0.0, 14.0);
  }
  return r;
}

} // namespace phctl::plant
