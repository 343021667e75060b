// phsim: pH neutralization plant simulator with hybrid fuzzy/PID control.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "phctl/chemistry.hpp"
#include "phctl/config.hpp"
#include "phctl/errors.hpp"
#include "phctl/experiment.hpp"
#include "phctl/metrics.hpp"
#include "phctl/pid.hpp"
#include "phctl/plot.hpp"

namespace fs = std::filesystem;
using namespace phctl;
using namespace phctl::harness;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;

void write_text(const fs::path &path, const std::string &text) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << text;
}

Metrics report(const std::string &name, const SimTrace &trace,
               const SetpointSchedule &schedule) {
  const Metrics m = compute_metrics(trace, schedule);
  std::cout << "== " << name << " ==\n" << format_metrics(m);
  return m;
}

void run_single(const std::string &name, const ExperimentConfig &cfg, const fs::path &dir,
                std::shared_ptr<const fuzzy::FuzzyController> fz = nullptr) {
  fs::create_directories(dir);
  save_config(cfg, dir / (name + ".json"));
  const SimTrace trace = run_experiment(cfg, std::move(fz));
  write_csv(trace, dir / (name + ".csv"));
  plot(trace, cfg.schedule, dir / (name + ".svg"), name);
  const Metrics m = report(name, trace, cfg.schedule);
  write_text(dir / "metrics.json", metrics_to_json(m).dump(2) + "\n");
}

void run_pair(const std::string &name_a, const ExperimentConfig &a, const std::string &name_b,
              const ExperimentConfig &b, const fs::path &dir) {
  fs::create_directories(dir);
  save_config(a, dir / (name_a + ".json"));
  save_config(b, dir / (name_b + ".json"));
  auto fut_a = std::async(std::launch::async, [&a] { return run_experiment(a); });
  auto fut_b = std::async(std::launch::async, [&b] { return run_experiment(b); });
  const SimTrace ta = fut_a.get();
  const SimTrace tb = fut_b.get();
  write_csv(ta, dir / (name_a + ".csv"));
  write_csv(tb, dir / (name_b + ".csv"));
  plot_comparison(ta, name_a, tb, name_b, a.schedule, dir / "compare.svg",
                  name_a + " vs " + name_b);
  const Metrics ma = report(name_a, ta, a.schedule);
  const Metrics mb = report(name_b, tb, b.schedule);
  nlohmann::json j{{name_a, metrics_to_json(ma)}, {name_b, metrics_to_json(mb)}};
  write_text(dir / "metrics.json", j.dump(2) + "\n");
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"pH neutralization plant simulator with hybrid fuzzy/PID control"};
  app.require_subcommand(1);

  auto *titrate = app.add_subcommand("titrate", "static titration curve at fixed alpha");
  double alpha = 0.026;
  double beta_max = 0.078;
  int steps = 781;
  std::string titrate_out;
  titrate->add_option("--alpha", alpha, "total sulfate, mol/L")->required();
  titrate->add_option("--beta-max", beta_max, "largest sodium invariant, mol/L")->required();
  titrate->add_option("--steps", steps, "number of points")->check(CLI::PositiveNumber);
  titrate->add_option("--out", titrate_out, "output CSV")->required();

  auto *tune = app.add_subcommand("tune", "Ziegler-Nichols tuning of the flow loop");
  std::string tune_config;
  pid::FlowLoopModel loop = pid::calibrated_flow_loop();
  tune->add_option("--config", tune_config, "experiment config JSON")->required();
  tune->add_option("--dead-time", loop.dead_time, "flow loop transport delay, s");
  tune->add_option("--sensor-lag", loop.sensor_tau, "flow transmitter time constant, s");

  auto *run = app.add_subcommand("run", "simulate one configuration");
  std::string run_config;
  std::string run_out;
  std::string run_plot;
  std::string run_fuzzy;
  run->add_option("--config", run_config, "experiment config JSON")->required();
  run->add_option("--out", run_out, "trace CSV")->required();
  run->add_option("--plot", run_plot, "SVG plot");
  run->add_option("--fuzzy", run_fuzzy, "fuzzy controller override JSON");

  std::string out_dir = "out";
  auto *exp1 = app.add_subcommand("exp1", "setpoint steps 7 -> 10 -> 7");
  auto *exp2 = app.add_subcommand("exp2", "square-wave tracking 7 <-> 10");
  auto *exp3 = app.add_subcommand("exp3", "hybrid vs fuzzy-only comparison");
  for (auto *sub : {exp1, exp2, exp3}) {
    sub->add_option("--out-dir", out_dir, "output directory");
  }

  auto *compare = app.add_subcommand("compare", "run two configurations side by side");
  std::string cfg_a;
  std::string cfg_b;
  compare->add_option("--config-a", cfg_a)->required();
  compare->add_option("--config-b", cfg_b)->required();
  compare->add_option("--out-dir", out_dir)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*titrate) {
      if (!(alpha >= 0.0) || !(beta_max >= 0.0)) {
        throw ConfigError("alpha and beta-max must be non-negative");
      }
      std::vector<double> betas;
      for (int i = 0; i < steps; ++i) {
        betas.push_back(steps == 1 ? 0.0 : beta_max * i / (steps - 1));
      }
      const auto curve = chemistry::titration_curve(alpha, betas);
      std::ofstream out(titrate_out);
      if (!out) {
        throw IoError("cannot open " + titrate_out);
      }
      out << "beta_mol_per_l,ph\n";
      char line[64];
      for (const auto &p : curve) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g\n", p.beta, p.ph);
        out << line;
      }
    } else if (*tune) {
      const ExperimentConfig cfg = load_config(tune_config);
      loop.valve = cfg.valves.acid;
      loop.f_max = cfg.plant.f_max;
      const auto u = pid::find_ultimate(
          [&loop](double g) { return pid::probe_flow_loop(loop, g); });
      std::printf("ultimate gain G = %.4g\noscillation period P = %.4g s\n", u.g, u.p);
      const char *names[] = {"P", "PI", "PID"};
      const pid::ControllerType kinds[] = {pid::ControllerType::P, pid::ControllerType::PI,
                                           pid::ControllerType::PID};
      for (int i = 0; i < 3; ++i) {
        const auto g = pid::zn_tune(u, kinds[i]);
        std::printf("%-4s kp = %-10.5g ki = %-10.5g kd = %.5g\n", names[i], g.kp, g.ki, g.kd);
      }
    } else if (*run) {
      const ExperimentConfig cfg = load_config(run_config);
      std::shared_ptr<const fuzzy::FuzzyController> fz;
      if (!run_fuzzy.empty()) {
        std::ifstream in(run_fuzzy);
        if (!in) {
          throw ConfigError("cannot open fuzzy override " + run_fuzzy);
        }
        try {
          fz = std::make_shared<const fuzzy::FuzzyController>(
              fuzzy::controller_from_json(nlohmann::json::parse(in)));
        } catch (const std::exception &e) {
          throw ConfigError(std::string("fuzzy override: ") + e.what());
        }
      }
      const SimTrace trace = run_experiment(cfg, fz);
      write_csv(trace, fs::path(run_out));
      if (!run_plot.empty()) {
        plot(trace, cfg.schedule, run_plot);
      }
      report("run", trace, cfg.schedule);
    } else if (*exp1) {
      run_single("exp1", experiment_1(), out_dir);
    } else if (*exp2) {
      run_single("exp2", experiment_2(), out_dir);
    } else if (*exp3) {
      const auto [h, f] = experiment_3();
      run_pair("hybrid", h, "fuzzy_only", f, out_dir);
    } else if (*compare) {
      run_pair("a", load_config(cfg_a), "b", load_config(cfg_b), out_dir);
    }
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const StateDiverged &e) {
    std::cerr << "simulation diverged: " << e.what() << '\n';
    return kExitDiverged;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
