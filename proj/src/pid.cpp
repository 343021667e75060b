#include "phctl/pid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <stdexcept>

#include "phctl/errors.hpp"

namespace phctl::pid {

void PidGains::validate() const {
  if (!(kp >= 0.0) || !(ki >= 0.0) || !(kd >= 0.0)) {
    throw std::invalid_argument("PID gains must be non-negative");
  }
}

PidGains zn_tune(ZnUltimate u, ControllerType kind) {
  if (!(u.g > 0.0) || !(u.p > 0.0)) {
    throw std::invalid_argument("ultimate gain and period must be positive");
  }
  switch (kind) {
  case ControllerType::P:
    return {0.5 * u.g, 0.0, 0.0};
  case ControllerType::PI: {
    const double kp = 0.45 * u.g;
    return {kp, 1.2 * kp / u.p, 0.0};
  }
  case ControllerType::PID: {
    const double kp = 0.6 * u.g;
    return {kp, 2.0 * kp / u.p, kp * u.p / 8.0};
  }
  }
  throw std::invalid_argument("unknown controller type");
}

PidStep pid_update(const PidState &s, const PidGains &gains, double setpoint,
                   double measurement, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("pid_update requires dt > 0");
  }
  PidState next = s;
  const double e = setpoint - measurement;
  const double prev = s.primed ? s.prev_meas : measurement;
  const double raw_rate = (measurement - prev) / dt;
  next.d_state = s.d_filter_tau > 0.0
                     ? s.d_state + dt / (s.d_filter_tau + dt) * (raw_rate - s.d_state)
                     : raw_rate;
  next.prev_meas = measurement;
  next.primed = true;

  // The integral used here is the one accumulated through the previous tick,
  // so a setpoint step moves the output by exactly kp * step.
  const double unsat =
      gains.kp * e + gains.ki * s.integral - gains.kd * next.d_state;
  const double out = std::clamp(unsat, s.out_lo, s.out_hi);

  const bool deepens = (unsat >= s.out_hi && e > 0.0) ||
                       (unsat <= s.out_lo && e < 0.0);
  if (!deepens) {
    next.integral = s.integral + e * dt;
  }
  if (gains.ki > 0.0) {
    next.integral = std::clamp(next.integral, s.out_lo / gains.ki,
                               s.out_hi / gains.ki);
  }
  return {out, next};
}

PidState bumpless_state(const PidGains &gains, double output, double measurement,
                        double out_lo, double out_hi, double d_filter_tau) {
  if (!(out_lo < out_hi)) {
    throw std::invalid_argument("PID output bounds must satisfy lo < hi");
  }
  PidState s;
  s.out_lo = out_lo;
  s.out_hi = out_hi;
  s.d_filter_tau = d_filter_tau;
  s.prev_meas = measurement;
  s.primed = true;
  s.integral = gains.ki > 0.0 ? std::clamp(output, out_lo, out_hi) / gains.ki : 0.0;
  return s;
}

ZnUltimate find_ultimate(const LoopProbe &probe, const UltimateSearch &opts) {
  if (!(opts.g_start > 0.0) || !(opts.growth > 1.0) || !(opts.resolution > 0.0)) {
    throw std::invalid_argument("invalid ultimate-gain search options");
  }
  double lo = 0.0;
  std::optional<double> hi;
  ProbeResult at_hi{OscillationTrend::Decaying, 0.0};
  for (double g = opts.g_start; g <= opts.g_max; g *= opts.growth) {
    const ProbeResult r = probe(g);
    if (r.trend != OscillationTrend::Decaying) {
      hi = g;
      at_hi = r;
      break;
    }
    lo = g;
  }
  if (!hi) {
    throw NoOscillation("no sustained oscillation up to gain " +
                        std::to_string(opts.g_max));
  }
  while (*hi - lo > opts.resolution * *hi) {
    const double mid = 0.5 * (lo + *hi);
    const ProbeResult r = probe(mid);
    if (r.trend == OscillationTrend::Decaying) {
      lo = mid;
    } else {
      hi = mid;
      at_hi = r;
    }
  }
  return {*hi, at_hi.period};
}

ProbeResult classify_oscillation(const std::vector<double> &y, double dt) {
  const ProbeResult none{OscillationTrend::Decaying, 0.0};
  if (y.size() < 8) {
    return none;
  }
  const auto [mn, mx] = std::minmax_element(y.begin(), y.end());
  const double scale = *mx - *mn;
  if (!(scale > 0.0)) {
    return none;
  }

  struct Extremum {
    std::size_t i;
    double v;
    bool is_max;
  };
  std::vector<Extremum> ext;
  for (std::size_t i = y.size() / 2 + 1; i + 1 < y.size(); ++i) {
    const double dl = y[i] - y[i - 1];
    const double dr = y[i + 1] - y[i];
    if (dl > 0.0 && dr <= 0.0) {
      ext.push_back({i, y[i], true});
    } else if (dl < 0.0 && dr >= 0.0) {
      ext.push_back({i, y[i], false});
    }
  }
  std::vector<double> swings;
  for (std::size_t k = 1; k < ext.size(); ++k) {
    if (ext[k].is_max != ext[k - 1].is_max) {
      swings.push_back(std::abs(ext[k].v - ext[k - 1].v));
    }
  }
  if (swings.size() < 4 || swings.back() < 1e-6 * scale) {
    return none;
  }

  std::vector<std::size_t> maxima;
  for (const auto &e : ext) {
    if (e.is_max) {
      maxima.push_back(e.i);
    }
  }
  const double period =
      maxima.size() >= 2
          ? dt * static_cast<double>(maxima.back() - maxima.front()) /
                static_cast<double>(maxima.size() - 1)
          : 0.0;

  // Geometric mean change per swing; compare swings of the same parity so a
  // biased (asymmetric) oscillation is not mistaken for growth.
  const std::size_t n = swings.size() - 1 - ((swings.size() - 1) % 2);
  const double ratio =
      std::pow(swings[n] / swings[0], 1.0 / static_cast<double>(n));
  constexpr double kSteadyBand = 0.002;
  OscillationTrend trend = OscillationTrend::Steady;
  if (ratio > 1.0 + kSteadyBand) {
    trend = OscillationTrend::Growing;
  } else if (ratio < 1.0 - kSteadyBand) {
    trend = OscillationTrend::Decaying;
  }
  return {trend, period};
}

FlowLoopModel calibrated_flow_loop() {
  FlowLoopModel m;
  m.valve = plant::ValveModel{8.0, 8.0, 0.0};
  m.sensor_tau = 51.617;
  m.dead_time = 3.5837;
  return m;
}

ProbeResult probe_flow_loop(const FlowLoopModel &m, double gain) {
  if (!(m.dt > 0.0) || !(m.f_max > 0.0)) {
    throw std::invalid_argument("flow loop needs positive dt and f_max");
  }
  const double horizon =
      m.horizon > 0.0
          ? m.horizon
          : std::max(300.0, 30.0 * (std::max(m.valve.tau_open, m.valve.tau_close) +
                                    m.sensor_tau + m.dead_time));
  const auto steps = static_cast<std::size_t>(horizon / m.dt);
  const auto delay_steps = static_cast<std::size_t>(std::lround(m.dead_time / m.dt));
  const double sensor_decay = m.sensor_tau > 0.0 ? std::exp(-m.dt / m.sensor_tau) : 0.0;

  const double bias = m.operating_point;
  const double setpoint = m.operating_point + m.step;
  double flow = m.operating_point * m.f_max;
  double meas = m.operating_point;
  std::deque<double> pipe(delay_steps, flow);

  std::vector<double> record;
  record.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const double u = std::clamp(bias + gain * (setpoint - meas), 0.0, 1.0);
    pipe.push_back(u * m.f_max);
    const double cmd = pipe.front();
    pipe.pop_front();
    flow = plant::valve_step(flow, cmd, m.valve, m.dt, m.f_max);
    const double norm = flow / m.f_max;
    meas = norm + (meas - norm) * sensor_decay;
    record.push_back(meas);
  }
  return classify_oscillation(record, m.dt);
}

} // namespace phctl::pid
