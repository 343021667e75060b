#pragma once

#include <utility>
#include <variant>
#include <vector>

namespace phctl::harness {

struct PiecewiseConstant {
  std::vector<std::pair<double, double>> points;  // (t_start, pH), t ascending
  friend bool operator==(const PiecewiseConstant &, const PiecewiseConstant &) = default;
};

/// Low level (center - amplitude) before t_start, then high for the first
/// half of each period and low for the second.
struct SquareWave {
  double center;
  double amplitude;
  double period;
  double t_start;
  friend bool operator==(const SquareWave &, const SquareWave &) = default;
};

class SetpointSchedule {
public:
  using Kind = std::variant<PiecewiseConstant, SquareWave>;

  explicit SetpointSchedule(Kind kind);
  static SetpointSchedule constant(double ph) {
    return SetpointSchedule(PiecewiseConstant{{{0.0, ph}}});
  }

  double value(double t) const;

  /// Times in (0, duration) at which the setpoint changes value.
  std::vector<double> change_times(double duration) const;

  const Kind &kind() const noexcept { return kind_; }
  friend bool operator==(const SetpointSchedule &, const SetpointSchedule &) = default;

private:
  Kind kind_;
};

} // namespace phctl::harness
