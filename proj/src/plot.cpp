#include "phctl/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "phctl/errors.hpp"

namespace phctl::harness {

namespace {

constexpr double kWidth = 900.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;
constexpr std::size_t kMaxPoints = 2000;

const char *const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
    }
  }
  return out;
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const {
    return kTop + (y1 - y) / (y1 - y0) * (kHeight - kTop - kBottom);
  }
};

} // namespace

std::string render_svg(const std::vector<LabeledTrace> &traces,
                       const SetpointSchedule &schedule, const std::string &title) {
  if (traces.empty()) {
    throw std::invalid_argument("nothing to plot");
  }
  double duration = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto &lt : traces) {
    const auto &rows = lt.trace->rows;
    if (rows.empty()) {
      throw std::invalid_argument("cannot plot an empty trace");
    }
    const double dt = rows.size() > 1 ? rows[1].t - rows[0].t : 0.0;
    duration = std::max(duration, rows.back().t + dt);
    for (const auto &r : rows) {
      lo = std::min({lo, r.ph, schedule.value(r.t)});
      hi = std::max({hi, r.ph, schedule.value(r.t)});
    }
  }
  const Frame f{0.0, duration, lo - 0.5, hi + 0.5};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) {
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << escape(title) << "</text>\n";
  }
  svg << "<g id=\"axes\" data-x0=\"" << num(f.x0) << "\" data-x1=\"" << num(f.x1)
      << "\" data-y0=\"" << num(f.y0) << "\" data-y1=\"" << num(f.y1)
      << "\" stroke=\"black\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << f.py(f.y0) << "\" x2=\"" << kWidth - kRight
      << "\" y2=\"" << f.py(f.y0) << "\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << f.py(f.y0) << "\" x2=\"" << kLeft
      << "\" y2=\"" << f.py(f.y1) << "\"/>\n";
  for (int i = 0; i <= 10; ++i) {
    const double x = f.x0 + (f.x1 - f.x0) * i / 10.0;
    svg << "<text stroke=\"none\" x=\"" << f.px(x) << "\" y=\"" << f.py(f.y0) + 16
        << "\" text-anchor=\"middle\">" << num(std::round(x)) << "</text>\n";
  }
  for (double y = std::ceil(f.y0); y <= f.y1; y += 1.0) {
    svg << "<text stroke=\"none\" x=\"" << kLeft - 6 << "\" y=\"" << f.py(y) + 4
        << "\" text-anchor=\"end\">" << num(y) << "</text>\n";
    svg << "<line stroke=\"#ddd\" x1=\"" << kLeft << "\" y1=\"" << f.py(y) << "\" x2=\""
        << kWidth - kRight << "\" y2=\"" << f.py(y) << "\"/>\n";
  }
  svg << "<text stroke=\"none\" x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\""
      << kHeight - 12 << "\" text-anchor=\"middle\">time (s)</text>\n";
  svg << "<text stroke=\"none\" transform=\"translate(16," << (kTop + kHeight - kBottom) / 2
      << ") rotate(-90)\" text-anchor=\"middle\">pH</text>\n";
  svg << "</g>\n";

  // Setpoint drawn as a staircase on the first trace's time base.
  const auto &base = traces.front().trace->rows;
  svg << "<polyline class=\"series\" data-name=\"setpoint\" fill=\"none\" stroke=\"#555\" "
         "stroke-dasharray=\"6,4\" points=\"";
  double prev = schedule.value(base.front().t);
  svg << num(f.px(base.front().t)) << ',' << num(f.py(prev));
  for (const auto &r : base) {
    const double v = schedule.value(r.t);
    if (v != prev) {
      svg << ' ' << num(f.px(r.t)) << ',' << num(f.py(prev)) << ' ' << num(f.px(r.t)) << ','
          << num(f.py(v));
      prev = v;
    }
  }
  svg << ' ' << num(f.px(duration)) << ',' << num(f.py(prev)) << "\"/>\n";

  for (std::size_t s = 0; s < traces.size(); ++s) {
    const auto &rows = traces[s].trace->rows;
    const std::size_t stride = std::max<std::size_t>(1, rows.size() / kMaxPoints);
    svg << "<polyline class=\"series\" data-name=\"" << escape(traces[s].label)
        << "\" fill=\"none\" stroke-width=\"1.5\" stroke=\"" << kColors[s % 4] << "\" points=\"";
    for (std::size_t i = 0; i < rows.size(); i += stride) {
      if (i > 0) {
        svg << ' ';
      }
      svg << num(f.px(rows[i].t)) << ',' << num(f.py(rows[i].ph));
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << kWidth - kRight - 150 << "\" y=\"" << kTop + 14 + 16 * s
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << kColors[s % 4] << "\">"
        << escape(traces[s].label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

namespace {

void write_file(const std::filesystem::path &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << content;
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

} // namespace

void plot(const SimTrace &trace, const SetpointSchedule &schedule,
          const std::filesystem::path &path, const std::string &title) {
  write_file(path, render_svg({{"measured pH", &trace}}, schedule, title));
}

void plot_comparison(const SimTrace &a, const std::string &label_a, const SimTrace &b,
                     const std::string &label_b, const SetpointSchedule &schedule,
                     const std::filesystem::path &path, const std::string &title) {
  write_file(path, render_svg({{label_a, &a}, {label_b, &b}}, schedule, title));
}

} // namespace phctl::harness
