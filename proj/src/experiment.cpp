#include "phctl/experiment.hpp"

#include <cmath>
#include <stdexcept>

#include "phctl/errors.hpp"

namespace phctl::harness {

void ExperimentConfig::validate() const {
  try {
    plant.validate();
    valves.acid.validate();
    valves.base.validate();
    if (!(duration > 0.0) || !(dt > 0.0)) {
      throw std::invalid_argument("duration and dt must be positive");
    }
    cascade.validate(plant, dt);
    if (!(initial_ph >= 0.0 && initial_ph <= 14.0)) {
      throw std::invalid_argument("initial_ph outside [0, 14]");
    }
    const double r = plant::split_for_ph(initial_ph, plant);
    const double reached =
        chemistry::ph_of(plant::steady_invariants(r, plant), plant.constants);
    if (std::abs(reached - initial_ph) > 1e-6) {
      throw std::invalid_argument("initial_ph " + std::to_string(initial_ph) +
                                  " is not reachable with the configured feeds");
    }
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
}

SimTrace run_experiment(const ExperimentConfig &cfg,
                        std::shared_ptr<const fuzzy::FuzzyController> fuzzy) {
  cfg.validate();
  auto cs = hybrid::initial_state(cfg.cascade, cfg.plant, cfg.initial_ph, std::move(fuzzy),
                                 cfg.valves);
  plant::PlantState state;
  state.inv = plant::steady_invariants(cs.split, cfg.plant);
  const auto sp = hybrid::setpoints_for_split(cs.split, cfg.cascade.f_total);
  state.f1_actual = sp.f1;
  state.f2_actual = sp.f2;

  plant::Sensor sensor(cfg.plant.sensor_noise_ph, cfg.seed);
  const auto steps = static_cast<long>(std::llround(cfg.duration / cfg.dt));
  SimTrace trace;
  trace.rows.reserve(static_cast<std::size_t>(steps));
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    state.t = t;
    const auto readings = sensor.measure(state, cfg.plant);
    const double ph_sp = cfg.schedule.value(t);
    auto out = hybrid::step(cs, cfg.cascade, cfg.plant, ph_sp, readings, cfg.dt);
    trace.rows.push_back({t, ph_sp, readings.ph, out.f1_cmd, out.f2_cmd, state.f1_actual,
                          state.f2_actual, state.inv.alpha(), state.inv.beta(),
                          out.state.delta});
    cs = std::move(out.state);
    try {
      state = plant::plant_step(state, out.f1_cmd, out.f2_cmd, cfg.plant, cfg.valves, cfg.dt);
    } catch (const StateDiverged &e) {
      throw StateDiverged(std::string(e.what()) + " at step " + std::to_string(k) +
                              " (t=" + std::to_string(t) + ")",
                          k);
    }
  }
  return trace;
}

ExperimentConfig experiment_1() {
  ExperimentConfig cfg;
  cfg.plant.c1 = 0.052;
  cfg.plant.c2 = 0.052;
  cfg.schedule = SetpointSchedule(PiecewiseConstant{{{0.0, 7.0}, {300.0, 10.0}, {600.0, 7.0}}});
  cfg.duration = 900.0;
  cfg.initial_ph = 7.0;
  cfg.cascade.controller_kind = hybrid::ControllerKind::Hybrid;
  return cfg;
}

ExperimentConfig experiment_2() {
  ExperimentConfig cfg;
  cfg.plant.c1 = 0.051;
  cfg.plant.c2 = 0.0489;
  cfg.schedule = SetpointSchedule(SquareWave{8.5, 1.5, 600.0, 300.0});
  cfg.duration = 2400.0;
  cfg.initial_ph = 7.0;
  cfg.cascade.controller_kind = hybrid::ControllerKind::Hybrid;
  return cfg;
}

std::pair<ExperimentConfig, ExperimentConfig> experiment_3() {
  ExperimentConfig hybrid_cfg;
  hybrid_cfg.plant.c1 = 0.052;
  hybrid_cfg.plant.c2 = 0.052;
  hybrid_cfg.schedule = SetpointSchedule(PiecewiseConstant{{{0.0, 7.0},
                                                             {250.0, 10.0},
                                                             {500.0, 6.0},
                                                             {750.0, 8.0},
                                                             {1000.0, 10.0},
                                                             {1250.0, 6.0},
                                                             {1500.0, 9.0},
                                                             {1750.0, 7.0}}});
  hybrid_cfg.duration = 2000.0;
  hybrid_cfg.initial_ph = 7.0;
  hybrid_cfg.cascade.controller_kind = hybrid::ControllerKind::Hybrid;
  ExperimentConfig fuzzy_cfg = hybrid_cfg;
  fuzzy_cfg.cascade.controller_kind = hybrid::ControllerKind::FuzzyOnly;
  return {hybrid_cfg, fuzzy_cfg};
}

} // namespace phctl::harness
