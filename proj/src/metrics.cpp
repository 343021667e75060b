#include "phctl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "phctl/errors.hpp"

namespace phctl::harness {

namespace {

// Time at which the segment first reaches `level` moving from below (dir > 0)
// or above (dir < 0), linearly interpolated between samples.
std::optional<double> crossing(const std::vector<TraceRow> &rows, std::size_t b,
                               std::size_t e, double level, double dir) {
  for (std::size_t i = b; i < e; ++i) {
    if (dir * (rows[i].ph - level) >= 0.0) {
      if (i == b) {
        return rows[i].t;
      }
      const double y0 = rows[i - 1].ph;
      const double y1 = rows[i].ph;
      const double frac = y1 == y0 ? 1.0 : (level - y0) / (y1 - y0);
      return rows[i - 1].t + frac * (rows[i].t - rows[i - 1].t);
    }
  }
  return std::nullopt;
}

SegmentMetrics segment_metrics(const std::vector<TraceRow> &rows, std::size_t b,
                               std::size_t e, double from, double to, double t_end) {
  SegmentMetrics m{rows[b].t, t_end, from, to, {}, {}, {}, 0.0};
  const double span = to - from;
  const double dir = span > 0.0 ? 1.0 : -1.0;
  if (span != 0.0) {
    const auto t10 = crossing(rows, b, e, from + 0.1 * span, dir);
    const auto t90 = crossing(rows, b, e, from + 0.9 * span, dir);
    if (t10 && t90) {
      m.rise_time_s = *t90 - *t10;
    }
  }

  auto inside = [&](std::size_t i) { return std::abs(rows[i].ph - to) <= kSettlingBandPh; };
  for (std::size_t i = b; i < e; ++i) {
    if (inside(i)) {
      m.first_entry_s = rows[i].t - m.t_start;
      break;
    }
  }
  std::optional<std::size_t> last_out;
  for (std::size_t i = b; i < e; ++i) {
    if (!inside(i)) {
      last_out = i;
    }
  }
  if (!last_out) {
    m.settling_time_s = 0.0;
  } else if (*last_out + 1 < e) {
    m.settling_time_s = rows[*last_out + 1].t - m.t_start;
  }

  if (span != 0.0) {
    double worst = 0.0;
    for (std::size_t i = b; i < e; ++i) {
      worst = std::max(worst, dir * (rows[i].ph - to));
    }
    m.overshoot_ph = worst;
  }
  return m;
}

} // namespace

Metrics compute_metrics(const SimTrace &trace, const SetpointSchedule &schedule) {
  const auto &rows = trace.rows;
  if (rows.empty()) {
    throw std::invalid_argument("cannot compute metrics of an empty trace");
  }
  const double dt = rows.size() > 1 ? rows[1].t - rows[0].t : 0.0;
  const double t_end = rows.back().t + dt;

  std::vector<double> bounds{rows.front().t};
  for (double ts : schedule.change_times(t_end)) {
    if (ts > rows.front().t) {
      bounds.push_back(ts);
    }
  }

  Metrics out;
  std::size_t cursor = 0;
  for (std::size_t s = 0; s < bounds.size(); ++s) {
    const double seg_end = s + 1 < bounds.size() ? bounds[s + 1] : t_end;
    const std::size_t b = cursor;
    std::size_t e = b;
    // Half-sample slack absorbs rounding of k * dt against the change time.
    while (e < rows.size() && rows[e].t < seg_end - 0.5 * dt) {
      ++e;
    }
    if (s + 1 == bounds.size()) {
      e = rows.size();
    }
    if (e - b < 5) {
      throw SegmentTooShort("segment starting at t=" + std::to_string(bounds[s]) +
                            " has " + std::to_string(e - b) + " samples");
    }
    const double from = s == 0 ? rows[b].ph_sp : rows[b - 1].ph_sp;
    out.segments.push_back(segment_metrics(rows, b, e, from, rows[b].ph_sp, seg_end));
    cursor = e;
  }

  double sq = 0.0;
  double abs_sum = 0.0;
  for (const auto &r : rows) {
    const double err = r.ph - r.ph_sp;
    sq += err * err;
    abs_sum += std::abs(err);
  }
  out.rmse_ph = std::sqrt(sq / static_cast<double>(rows.size()));
  out.iae_ph_s = abs_sum * dt;
  return out;
}

nlohmann::json metrics_to_json(const Metrics &m) {
  auto opt = [](const std::optional<double> &v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  auto segs = nlohmann::json::array();
  for (const auto &s : m.segments) {
    segs.push_back({{"t_start", s.t_start},
                    {"t_end", s.t_end},
                    {"from", s.from},
                    {"to", s.to},
                    {"rise_time_s", opt(s.rise_time_s)},
                    {"first_entry_s", opt(s.first_entry_s)},
                    {"settling_time_s", opt(s.settling_time_s)},
                    {"overshoot_ph", s.overshoot_ph}});
  }
  return {{"segments", segs}, {"rmse_ph", m.rmse_ph}, {"iae_ph_s", m.iae_ph_s}};
}

std::string format_metrics(const Metrics &m) {
  auto opt = [](const std::optional<double> &v) {
    char buf[32];
    if (v) {
      std::snprintf(buf, sizeof(buf), "%10.1f", *v);
    } else {
      std::snprintf(buf, sizeof(buf), "%10s", "-");
    }
    return std::string(buf);
  };
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%8s %8s %6s %6s %10s %10s %10s %10s\n", "t_start",
                "t_end", "from", "to", "rise_s", "entry_s", "settle_s", "overshoot");
  out += line;
  for (const auto &s : m.segments) {
    std::snprintf(line, sizeof(line), "%8.1f %8.1f %6.2f %6.2f %s %s %s %10.3f\n",
                  s.t_start, s.t_end, s.from, s.to, opt(s.rise_time_s).c_str(),
                  opt(s.first_entry_s).c_str(), opt(s.settling_time_s).c_str(),
                  s.overshoot_ph);
    out += line;
  }
  std::snprintf(line, sizeof(line), "rmse_ph  %.4f\niae_ph_s %.2f\n", m.rmse_ph, m.iae_ph_s);
  out += line;
  return out;
}

} // namespace phctl::harness
