#pragma once

#include <cstdint>
#include <memory>
#include <utility>

#include "phctl/hybrid.hpp"
#include "phctl/plant.hpp"
#include "phctl/schedule.hpp"
#include "phctl/trace.hpp"

namespace phctl::harness {

struct ExperimentConfig {
  plant::PlantParams plant{};
  plant::ValvePair valves{};
  hybrid::CascadeConfig cascade{};
  SetpointSchedule schedule = SetpointSchedule::constant(7.0);
  double duration = 900.0;  // s
  double dt = 0.1;          // s
  double initial_ph = 7.0;
  std::uint64_t seed = 0;

  /// Throws ConfigError on any violated field constraint.
  void validate() const;
  friend bool operator==(const ExperimentConfig &, const ExperimentConfig &) = default;
};

/// Deterministic closed-loop run of duration / dt steps. StateDiverged is
/// rethrown with the offending step index.
SimTrace run_experiment(const ExperimentConfig &cfg,
                        std::shared_ptr<const fuzzy::FuzzyController> fuzzy = nullptr);

/// Steps 7 -> 10 at 300 s and back to 7 at 600 s, 0.052 M feeds.
ExperimentConfig experiment_1();

/// Square wave 7 <-> 10 with period 600 s, 0.051 M acid and 0.0489 M base.
ExperimentConfig experiment_2();

/// Shared 6..10 staircase, hybrid first and fuzzy-only second.
std::pair<ExperimentConfig, ExperimentConfig> experiment_3();

} // namespace phctl::harness
