#include "doctest.h"

#include <cmath>
#include <deque>
#include <numbers>
#include <random>

#include "phctl/errors.hpp"
#include "phctl/pid.hpp"

using namespace phctl::pid;

namespace {

// First-order-plus-dead-time plant K e^{-Ls} / (tau s + 1) under P control,
// simulated with an exact zero-order-hold update.
struct Fopdt {
  double k = 1.0;
  double tau = 10.0;
  double dead = 2.0;
  double dt = 0.01;
  double horizon = 600.0;

  ProbeResult operator()(double gain) const {
    const auto n = static_cast<std::size_t>(horizon / dt);
    const auto d = static_cast<std::size_t>(std::lround(dead / dt));
    const double a = std::exp(-dt / tau);
    std::deque<double> pipe(d, 0.0);
    double y = 0.0;
    std::vector<double> rec;
    rec.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      pipe.push_back(gain * (1.0 - y));
      const double u = pipe.front();
      pipe.pop_front();
      y = a * y + (1.0 - a) * k * u;
      rec.push_back(y);
    }
    return classify_oscillation(rec, dt);
  }

  // Phase crossover: atan(w tau) + w L = pi; ultimate gain |1 / G(jw)|.
  std::pair<double, double> analytic() const {
    double lo = 1e-6, hi = std::numbers::pi / dead;
    for (int i = 0; i < 200; ++i) {
      const double w = 0.5 * (lo + hi);
      (std::atan(w * tau) + w * dead < std::numbers::pi ? lo : hi) = w;
    }
    const double w = 0.5 * (lo + hi);
    return {std::sqrt(1.0 + w * w * tau * tau) / k, 2.0 * std::numbers::pi / w};
  }
};

PidState wide_state(double lo, double hi) {
  PidState s;
  s.out_lo = lo;
  s.out_hi = hi;
  return s;
}

} // namespace

TEST_CASE("Ziegler-Nichols table is exact") {
  const auto pid = zn_tune({18.0, 33.0}, ControllerType::PID);
  const double kp = 0.6 * 18.0;
  CHECK(pid.kp == kp);
  CHECK(pid.ki == 2.0 * kp / 33.0);
  CHECK(pid.kd == kp * 33.0 / 8.0);
  CHECK(std::abs(pid.kp - 10.8) <= 0.01);
  CHECK(std::abs(pid.ki - 0.65) <= 0.01);
  CHECK(std::abs(pid.kd - 44.5) <= 0.06);

  const auto p = zn_tune({18.0, 33.0}, ControllerType::P);
  CHECK(p == PidGains{9.0, 0.0, 0.0});

  const auto pi = zn_tune({18.0, 33.0}, ControllerType::PI);
  CHECK(pi.kp == 0.45 * 18.0);
  CHECK(pi.ki == 1.2 * (0.45 * 18.0) / 33.0);
  CHECK(pi.kd == 0.0);

  const auto unit = zn_tune({1.0, 1.0}, ControllerType::PID);
  CHECK(unit.kp == 0.6);
  CHECK(unit.ki == 1.2);
  CHECK(unit.kd == 0.075);

  CHECK_THROWS_AS(zn_tune({0.0, 1.0}, ControllerType::P), std::invalid_argument);
}

TEST_CASE("PID law") {
  SUBCASE("zero error from rest stays at zero") {
    PidState s;
    const PidGains g{10.8, 0.65, 44.55};
    for (int i = 0; i < 1000; ++i) {
      const auto st = pid_update(s, g, 0.3, 0.3, 0.1);
      CHECK(st.output == 0.0);
      s = st.state;
    }
  }

  SUBCASE("pure proportional") {
    const auto st = pid_update(wide_state(-10.0, 10.0), {2.0, 0.0, 0.0}, 1.5, 0.0, 0.1);
    CHECK(st.output == 3.0);
  }

  SUBCASE("setpoint step moves the output by exactly kp times the step") {
    const PidGains g{10.8, 0.6545, 44.55};
    PidState s = bumpless_state(g, 0.4, 0.4, -10.0, 10.0);
    const auto before = pid_update(s, g, 0.4, 0.4, 0.1);
    const auto after = pid_update(before.state, g, 0.45, 0.4, 0.1);
    CHECK(after.output - before.output == doctest::Approx(10.8 * 0.05).epsilon(1e-12));
  }

  SUBCASE("bumpless preload reproduces the requested output") {
    const PidGains g{10.8, 0.6545, 44.55};
    const auto s = bumpless_state(g, 0.37, 0.2);
    CHECK(pid_update(s, g, 0.2, 0.2, 0.1).output == doctest::Approx(0.37).epsilon(1e-15));
  }

  SUBCASE("output bounds and anti-windup on a saturating step") {
    const PidGains g{10.8, 0.6545, 44.55};
    PidState s;
    double y = 0.0;
    double peak_integral = 0.0;
    const double a = std::exp(-0.1);
    for (int i = 0; i < 5000; ++i) {
      const double sp = i < 2500 ? 2.0 : 0.2;  // first half unreachable
      const auto st = pid_update(s, g, sp, y, 0.1);
      CHECK(st.output >= 0.0);
      CHECK(st.output <= 1.0);
      s = st.state;
      peak_integral = std::max(peak_integral, std::abs(s.integral));
      y = a * y + (1.0 - a) * st.output;
    }
    CHECK(peak_integral <= (1.0 - 0.0) / g.ki + 1e-12);
  }

  SUBCASE("recovers from saturation on a valve-like lag") {
    const PidGains g{10.8, 0.6545, 44.55};
    PidState s;
    double y = 0.0;
    const double a = std::exp(-0.1 / 8.0);
    for (int i = 0; i < 8000; ++i) {
      const double sp = i < 2500 ? 2.0 : 0.2;
      const auto st = pid_update(s, g, sp, y, 0.1);
      s = st.state;
      y = a * y + (1.0 - a) * st.output;
    }
    CHECK(y == doctest::Approx(0.2).epsilon(1e-6));
  }

  SUBCASE("random inputs never leave the bounds") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    PidState s = wide_state(-0.5, 0.5);
    const PidGains g{3.0, 1.0, 0.5};
    for (int i = 0; i < 5000; ++i) {
      const auto st = pid_update(s, g, u(rng), u(rng), 0.1);
      CHECK(st.output >= -0.5);
      CHECK(st.output <= 0.5);
      CHECK(std::abs(g.ki * st.state.integral) <= 0.5 + 1e-12);
      s = st.state;
    }
  }

  CHECK_THROWS_AS(pid_update({}, {1, 0, 0}, 0, 0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(PidGains({-1.0, 0.0, 0.0}).validate(), std::invalid_argument);
}

TEST_CASE("oscillation classifier") {
  const double dt = 0.05;
  auto signal = [&](double growth) {
    std::vector<double> y;
    for (int i = 0; i < 4000; ++i) {
      const double t = i * dt;
      y.push_back(std::exp(growth * t) * std::sin(2.0 * std::numbers::pi * t / 10.0));
    }
    return y;
  };
  const auto steady = classify_oscillation(signal(0.0), dt);
  CHECK(steady.trend == OscillationTrend::Steady);
  CHECK(steady.period == doctest::Approx(10.0).epsilon(0.01));
  CHECK(classify_oscillation(signal(-0.02), dt).trend == OscillationTrend::Decaying);
  CHECK(classify_oscillation(signal(0.02), dt).trend == OscillationTrend::Growing);
  CHECK(classify_oscillation(std::vector<double>(100, 1.0), dt).trend ==
        OscillationTrend::Decaying);
}

TEST_CASE("ultimate gain search") {
  SUBCASE("first-order-plus-dead-time loop against the analytic crossover") {
    const Fopdt loop;
    const auto [g_star, p_star] = loop.analytic();
    const auto u = find_ultimate(loop);
    CHECK(u.g == doctest::Approx(g_star).epsilon(0.05));
    CHECK(u.p == doctest::Approx(p_star).epsilon(0.05));
  }

  SUBCASE("pure first-order loop never oscillates") {
    Fopdt loop;
    loop.dead = 0.0;
    loop.horizon = 100.0;
    UltimateSearch opts;
    opts.g_max = 100.0;
    CHECK_THROWS_AS(find_ultimate(loop, opts), phctl::NoOscillation);
  }

  SUBCASE("calibrated flow loop reproduces the tuning experiment") {
    const auto m = calibrated_flow_loop();
    const auto u = find_ultimate([&](double g) { return probe_flow_loop(m, g); });
    CHECK(u.g == doctest::Approx(18.0).epsilon(0.10));
    CHECK(u.p == doctest::Approx(33.0).epsilon(0.10));
  }
}
