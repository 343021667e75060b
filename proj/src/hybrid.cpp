#include "phctl/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phctl::hybrid {

void CascadeConfig::validate(const plant::PlantParams &plant, double dt) const {
  if (!(fuzzy_period >= dt)) {
    throw std::invalid_argument("fuzzy_period must be at least the plant time step");
  }
  if (!(f_total > 0.0 && f_total <= 2.0 * plant.f_max)) {
    throw std::invalid_argument("f_total must lie in (0, 2 f_max]");
  }
  if (!(split_rate > 0.0) || !(ph_rate > 0.0)) {
    throw std::invalid_argument("supervisor rates must be positive");
  }
  if (!(predict_horizon >= 0.0)) {
    throw std::invalid_argument("predict_horizon must be >= 0");
  }
  if (!(d_filter_tau >= 0.0)) {
    throw std::invalid_argument("derivative filter time constant must be >= 0");
  }
  gains_acid.validate();
  gains_base.validate();
}

double split_from_delta(double r, double delta, double fuzzy_period, double rate) {
  return std::clamp(r + delta / 100.0 * rate * fuzzy_period, 0.0, 1.0);
}

FlowSetpoints setpoints_for_split(double r, double f_total) {
  return {(1.0 - r) * f_total, r * f_total};
}

double inferred_split(const plant::SensorReadings &readings,
                      const plant::PlantParams &plant) {
  plant::PlantParams model = plant;
  model.c1 = readings.c1_meas;
  model.c2 = readings.c2_meas;
  return plant::split_for_ph(readings.ph, model);
}

ControllerState initial_state(const CascadeConfig &cfg,
                              const plant::PlantParams &plant, double ph,
                              std::shared_ptr<const fuzzy::FuzzyController> fuzzy,
                              const plant::ValvePair &valves) {
  ControllerState cs;
  cs.fuzzy = fuzzy ? std::move(fuzzy)
                   : std::make_shared<const fuzzy::FuzzyController>(
                         fuzzy::FuzzyController::standard());
  cs.split = plant::split_for_ph(ph, plant);
  const auto sp = setpoints_for_split(cs.split, cfg.f_total);
  const double y1 = sp.f1 / plant.f_max;
  const double y2 = sp.f2 / plant.f_max;
  const double u1 = std::min(1.0, y1 / (1.0 - valves.acid.hysteresis_eps));
  const double u2 = std::min(1.0, y2 / (1.0 - valves.base.hysteresis_eps));
  cs.pid_acid = pid::bumpless_state(cfg.gains_acid, u1, y1, 0.0, 1.0, cfg.d_filter_tau);
  cs.pid_base = pid::bumpless_state(cfg.gains_base, u2, y2, 0.0, 1.0, cfg.d_filter_tau);
  return cs;
}

namespace {

// Outer loop: runs on the first tick and then once per fuzzy period.
void supervise(ControllerState &cs, const CascadeConfig &cfg,
               const plant::PlantParams &plant, double ph_setpoint,
               const plant::SensorReadings &readings, double dt) {
  const long every = std::max(1L, std::lround(cfg.fuzzy_period / dt));
  if (cs.tick % every == 0) {
    if (cfg.outer_mapping == OuterMapping::LinearSplit) {
      cs.delta = cs.fuzzy->output(ph_setpoint - readings.ph);
      cs.split = split_from_delta(cs.split, cs.delta, cfg.fuzzy_period, cfg.split_rate);
    } else {
      plant::PlantParams model = plant;
      model.c1 = readings.c1_meas;
      model.c2 = readings.c2_meas;
      const double r_tank = plant::split_for_ph(readings.ph, model);
      const double slope = plant::ph_slope_for_split(r_tank, model);
      const double tau = model.volume / cfg.f_total;
      double ph_seen = readings.ph;
      const double flow = readings.f1 + readings.f2;
      if (cfg.predict_horizon > 0.0 && flow > 0.0) {
        const double realized = slope * (readings.f2 / flow - r_tank) / tau;
        ph_seen += realized * cfg.predict_horizon;
      }
      cs.delta = cs.fuzzy->output(ph_setpoint - ph_seen);
      const double rate = cs.delta / 100.0 * cfg.ph_rate;
      cs.split = std::clamp(r_tank + tau * rate / slope, 0.0, 1.0);
    }
    cs.last_fuzzy_t = static_cast<double>(cs.tick) * dt;
  }
  ++cs.tick;
}

} // namespace

ControlOutput control_step(const ControllerState &cs, const CascadeConfig &cfg,
                           const plant::PlantParams &plant, double ph_setpoint,
                           const plant::SensorReadings &readings, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("control_step requires dt > 0");
  }
  ControllerState next = cs;
  supervise(next, cfg, plant, ph_setpoint, readings, dt);
  const auto sp = setpoints_for_split(next.split, cfg.f_total);
  const double fm = plant.f_max;
  const auto acid = pid::pid_update(next.pid_acid, cfg.gains_acid, sp.f1 / fm,
                                    readings.f1 / fm, dt);
  const auto base = pid::pid_update(next.pid_base, cfg.gains_base, sp.f2 / fm,
                                    readings.f2 / fm, dt);
  next.pid_acid = acid.state;
  next.pid_base = base.state;
  return {std::clamp(acid.output * fm, 0.0, fm), std::clamp(base.output * fm, 0.0, fm),
          std::move(next)};
}

ControlOutput fuzzy_only_step(const ControllerState &cs, const CascadeConfig &cfg,
                              const plant::PlantParams &plant, double ph_setpoint,
                              const plant::SensorReadings &readings, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("fuzzy_only_step requires dt > 0");
  }
  ControllerState next = cs;
  supervise(next, cfg, plant, ph_setpoint, readings, dt);
  const auto sp = setpoints_for_split(next.split, cfg.f_total);
  const double fm = plant.f_max;
  return {std::clamp(sp.f1, 0.0, fm), std::clamp(sp.f2, 0.0, fm), std::move(next)};
}

ControlOutput step(const ControllerState &cs, const CascadeConfig &cfg,
                   const plant::PlantParams &plant, double ph_setpoint,
                   const plant::SensorReadings &readings, double dt) {
  return cfg.controller_kind == ControllerKind::Hybrid
             ? control_step(cs, cfg, plant, ph_setpoint, readings, dt)
             : fuzzy_only_step(cs, cfg, plant, ph_setpoint, readings, dt);
}

} // namespace phctl::hybrid
