#pragma once

#include <filesystem>

#include <nlohmann/json_fwd.hpp>

#include "phctl/experiment.hpp"

// JSON form of ExperimentConfig. Keys mirror the struct field names; missing
// keys keep their defaults and unknown keys are rejected with ConfigError.
namespace phctl::harness {

ExperimentConfig config_from_json(const nlohmann::json &j);
nlohmann::json config_to_json(const ExperimentConfig &cfg);

ExperimentConfig load_config(const std::filesystem::path &path);
void save_config(const ExperimentConfig &cfg, const std::filesystem::path &path);

} // namespace phctl::harness
