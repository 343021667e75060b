#include "phctl/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace phctl::harness {

namespace {

void check_ph(double v) {
  if (!(v >= 0.0 && v <= 14.0)) {
    throw std::invalid_argument("setpoint outside [0, 14]: " + std::to_string(v));
  }
}

} // namespace

SetpointSchedule::SetpointSchedule(Kind kind) : kind_(std::move(kind)) {
  if (const auto *pw = std::get_if<PiecewiseConstant>(&kind_)) {
    if (pw->points.empty()) {
      throw std::invalid_argument("piecewise schedule has no points");
    }
    for (std::size_t i = 0; i < pw->points.size(); ++i) {
      check_ph(pw->points[i].second);
      if (i > 0 && !(pw->points[i].first > pw->points[i - 1].first)) {
        throw std::invalid_argument("schedule times must be strictly ascending");
      }
    }
  } else {
    const auto &sq = std::get<SquareWave>(kind_);
    if (!(sq.period > 0.0) || !(sq.amplitude >= 0.0)) {
      throw std::invalid_argument("square wave needs period > 0 and amplitude >= 0");
    }
    check_ph(sq.center - sq.amplitude);
    check_ph(sq.center + sq.amplitude);
  }
}

double SetpointSchedule::value(double t) const {
  if (const auto *pw = std::get_if<PiecewiseConstant>(&kind_)) {
    double v = pw->points.front().second;
    for (const auto &[ts, val] : pw->points) {
      if (t >= ts) {
        v = val;
      } else {
        break;
      }
    }
    return v;
  }
  const auto &sq = std::get<SquareWave>(kind_);
  const double low = sq.center - sq.amplitude;
  if (t < sq.t_start) {
    return low;
  }
  const double phase = std::fmod(t - sq.t_start, sq.period);
  return phase < 0.5 * sq.period ? sq.center + sq.amplitude : low;
}

std::vector<double> SetpointSchedule::change_times(double duration) const {
  std::vector<double> out;
  if (const auto *pw = std::get_if<PiecewiseConstant>(&kind_)) {
    for (std::size_t i = 1; i < pw->points.size(); ++i) {
      const auto [ts, v] = pw->points[i];
      if (ts > 0.0 && ts < duration && v != pw->points[i - 1].second) {
        out.push_back(ts);
      }
    }
    return out;
  }
  const auto &sq = std::get<SquareWave>(kind_);
  if (sq.amplitude == 0.0) {
    return out;
  }
  for (long k = 0;; ++k) {
    const double ts = sq.t_start + 0.5 * sq.period * static_cast<double>(k);
    if (ts >= duration) {
      break;
    }
    if (ts > 0.0) {
      out.push_back(ts);
    }
  }
  return out;
}

} // namespace phctl::harness
