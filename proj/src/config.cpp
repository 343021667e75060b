#include "phctl/config.hpp"

#include <fstream>
#include <initializer_list>
#include <string>

#include <nlohmann/json.hpp>

#include "phctl/errors.hpp"

namespace phctl::harness {

using nlohmann::json;

namespace {

void check_keys(const json &j, std::initializer_list<const char *> allowed,
                const std::string &where) {
  if (!j.is_object()) {
    throw ConfigError(where + ": expected an object");
  }
  for (const auto &item : j.items()) {
    bool known = false;
    for (const char *k : allowed) {
      known = known || item.key() == k;
    }
    if (!known) {
      throw ConfigError(where + ": unknown key '" + item.key() + "'");
    }
  }
}

template <typename T>
void read(const json &j, const char *key, T &out, const std::string &where) {
  if (!j.contains(key)) {
    return;
  }
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception &e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

plant::ValveModel valve_from(const json &j, plant::ValveModel v, const std::string &where) {
  check_keys(j, {"tau_open", "tau_close", "hysteresis_eps"}, where);
  read(j, "tau_open", v.tau_open, where);
  read(j, "tau_close", v.tau_close, where);
  read(j, "hysteresis_eps", v.hysteresis_eps, where);
  return v;
}

json valve_to(const plant::ValveModel &v) {
  return {{"tau_open", v.tau_open}, {"tau_close", v.tau_close},
          {"hysteresis_eps", v.hysteresis_eps}};
}

pid::PidGains gains_from(const json &j, pid::PidGains g, const std::string &where) {
  check_keys(j, {"kp", "ki", "kd"}, where);
  read(j, "kp", g.kp, where);
  read(j, "ki", g.ki, where);
  read(j, "kd", g.kd, where);
  return g;
}

json gains_to(const pid::PidGains &g) { return {{"kp", g.kp}, {"ki", g.ki}, {"kd", g.kd}}; }

const char *kind_name(hybrid::ControllerKind k) {
  return k == hybrid::ControllerKind::Hybrid ? "hybrid" : "fuzzy_only";
}

const char *mapping_name(hybrid::OuterMapping m) {
  return m == hybrid::OuterMapping::LinearSplit ? "linear_split" : "linearized";
}

SetpointSchedule schedule_from(const json &j) {
  const std::string where = "schedule";
  if (!j.is_object() || !j.contains("kind")) {
    throw ConfigError("schedule: missing 'kind'");
  }
  const auto kind = j.at("kind").get<std::string>();
  try {
    if (kind == "piecewise_constant") {
      check_keys(j, {"kind", "points"}, where);
      PiecewiseConstant pw;
      for (const auto &p : j.at("points")) {
        pw.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
      }
      return SetpointSchedule(std::move(pw));
    }
    if (kind == "square_wave") {
      check_keys(j, {"kind", "center", "amplitude", "period", "t_start"}, where);
      return SetpointSchedule(SquareWave{j.at("center").get<double>(),
                                         j.at("amplitude").get<double>(),
                                         j.at("period").get<double>(),
                                         j.value("t_start", 0.0)});
    }
  } catch (const json::exception &e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const std::invalid_argument &e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError("schedule: unknown kind '" + kind + "'");
}

json schedule_to(const SetpointSchedule &s) {
  if (const auto *pw = std::get_if<PiecewiseConstant>(&s.kind())) {
    auto pts = json::array();
    for (const auto &[t, v] : pw->points) {
      pts.push_back({t, v});
    }
    return {{"kind", "piecewise_constant"}, {"points", pts}};
  }
  const auto &sq = std::get<SquareWave>(s.kind());
  return {{"kind", "square_wave"},
          {"center", sq.center},
          {"amplitude", sq.amplitude},
          {"period", sq.period},
          {"t_start", sq.t_start}};
}

} // namespace

ExperimentConfig config_from_json(const json &j) {
  check_keys(j,
             {"plant", "valves", "cascade", "schedule", "duration", "dt", "initial_ph",
              "seed"},
             "config");
  ExperimentConfig cfg;

  if (j.contains("plant")) {
    const auto &p = j.at("plant");
    check_keys(p, {"volume", "c1", "c2", "f_max", "constants", "sensor_noise_ph"}, "plant");
    read(p, "volume", cfg.plant.volume, "plant");
    read(p, "c1", cfg.plant.c1, "plant");
    read(p, "c2", cfg.plant.c2, "plant");
    read(p, "f_max", cfg.plant.f_max, "plant");
    read(p, "sensor_noise_ph", cfg.plant.sensor_noise_ph, "plant");
    if (p.contains("constants")) {
      const auto &k = p.at("constants");
      check_keys(k, {"k1", "k2", "kw"}, "plant.constants");
      double k1 = cfg.plant.constants.k1();
      double k2 = cfg.plant.constants.k2();
      double kw = cfg.plant.constants.kw();
      read(k, "k1", k1, "plant.constants");
      read(k, "k2", k2, "plant.constants");
      read(k, "kw", kw, "plant.constants");
      try {
        cfg.plant.constants = chemistry::EquilibriumConstants(k1, k2, kw);
      } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("plant.constants: ") + e.what());
      }
    }
  }

  if (j.contains("valves")) {
    const auto &v = j.at("valves");
    check_keys(v, {"acid", "base"}, "valves");
    if (v.contains("acid")) {
      cfg.valves.acid = valve_from(v.at("acid"), cfg.valves.acid, "valves.acid");
    }
    if (v.contains("base")) {
      cfg.valves.base = valve_from(v.at("base"), cfg.valves.base, "valves.base");
    }
  }

  if (j.contains("cascade")) {
    const auto &c = j.at("cascade");
    check_keys(c,
               {"fuzzy_period", "f_total", "gains", "controller_kind", "outer_mapping",
                "split_rate", "ph_rate", "predict_horizon", "d_filter_tau"},
               "cascade");
    auto &cc = cfg.cascade;
    read(c, "fuzzy_period", cc.fuzzy_period, "cascade");
    read(c, "f_total", cc.f_total, "cascade");
    read(c, "split_rate", cc.split_rate, "cascade");
    read(c, "ph_rate", cc.ph_rate, "cascade");
    read(c, "predict_horizon", cc.predict_horizon, "cascade");
    read(c, "d_filter_tau", cc.d_filter_tau, "cascade");
    if (c.contains("gains")) {
      const auto &g = c.at("gains");
      check_keys(g, {"acid", "base"}, "cascade.gains");
      if (g.contains("acid")) {
        cc.gains_acid = gains_from(g.at("acid"), cc.gains_acid, "cascade.gains.acid");
      }
      if (g.contains("base")) {
        cc.gains_base = gains_from(g.at("base"), cc.gains_base, "cascade.gains.base");
      }
    }
    if (c.contains("controller_kind")) {
      const auto k = c.at("controller_kind").get<std::string>();
      if (k == "hybrid") {
        cc.controller_kind = hybrid::ControllerKind::Hybrid;
      } else if (k == "fuzzy_only") {
        cc.controller_kind = hybrid::ControllerKind::FuzzyOnly;
      } else {
        throw ConfigError("cascade.controller_kind: unknown value '" + k + "'");
      }
    }
    if (c.contains("outer_mapping")) {
      const auto m = c.at("outer_mapping").get<std::string>();
      if (m == "linear_split") {
        cc.outer_mapping = hybrid::OuterMapping::LinearSplit;
      } else if (m == "linearized") {
        cc.outer_mapping = hybrid::OuterMapping::Linearized;
      } else {
        throw ConfigError("cascade.outer_mapping: unknown value '" + m + "'");
      }
    }
  }

  if (j.contains("schedule")) {
    cfg.schedule = schedule_from(j.at("schedule"));
  }
  read(j, "duration", cfg.duration, "config");
  read(j, "dt", cfg.dt, "config");
  read(j, "initial_ph", cfg.initial_ph, "config");
  read(j, "seed", cfg.seed, "config");
  cfg.validate();
  return cfg;
}

json config_to_json(const ExperimentConfig &cfg) {
  const auto &k = cfg.plant.constants;
  const auto &c = cfg.cascade;
  return {
      {"plant",
       {{"volume", cfg.plant.volume},
        {"c1", cfg.plant.c1},
        {"c2", cfg.plant.c2},
        {"f_max", cfg.plant.f_max},
        {"constants", {{"k1", k.k1()}, {"k2", k.k2()}, {"kw", k.kw()}}},
        {"sensor_noise_ph", cfg.plant.sensor_noise_ph}}},
      {"valves", {{"acid", valve_to(cfg.valves.acid)}, {"base", valve_to(cfg.valves.base)}}},
      {"cascade",
       {{"fuzzy_period", c.fuzzy_period},
        {"f_total", c.f_total},
        {"gains", {{"acid", gains_to(c.gains_acid)}, {"base", gains_to(c.gains_base)}}},
        {"controller_kind", kind_name(c.controller_kind)},
        {"outer_mapping", mapping_name(c.outer_mapping)},
        {"split_rate", c.split_rate},
        {"ph_rate", c.ph_rate},
        {"predict_horizon", c.predict_horizon},
        {"d_filter_tau", c.d_filter_tau}}},
      {"schedule", schedule_to(cfg.schedule)},
      {"duration", cfg.duration},
      {"dt", cfg.dt},
      {"initial_ph", cfg.initial_ph},
      {"seed", cfg.seed},
  };
}

ExperimentConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception &e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

void save_config(const ExperimentConfig &cfg, const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << config_to_json(cfg).dump(2) << '\n';
}

} // namespace phctl::harness
