#include "phctl/trace.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>

#include "phctl/errors.hpp"

namespace phctl::harness {

namespace {

void put(std::ostream &out, double v) {
  std::array<char, 32> buf{};
  const int n = std::snprintf(buf.data(), buf.size(), "%.17g", v);
  out.write(buf.data(), n);
}

} // namespace

void write_csv(const SimTrace &trace, std::ostream &out) {
  out << kTraceHeader << '\n';
  for (const auto &r : trace.rows) {
    const std::array<double, 10> v{r.t,  r.ph_sp, r.ph,    r.f1_cmd, r.f2_cmd,
                                   r.f1, r.f2,    r.alpha, r.beta,   r.delta};
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) {
        out << ',';
      }
      put(out, v[i]);
    }
    out << '\n';
  }
}

void write_csv(const SimTrace &trace, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  write_csv(trace, out);
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

SimTrace read_csv(std::istream &in) {
  SimTrace trace;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) {
    throw CsvError("missing header", 1);
  }
  ++lineno;
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  if (line != kTraceHeader) {
    throw CsvError("line 1: unexpected header '" + line + "'", 1);
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    std::array<double, 10> v{};
    std::string_view rest(line);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto comma = rest.find(',');
      const bool last = i + 1 == v.size();
      if (last != (comma == std::string_view::npos)) {
        throw CsvError("line " + std::to_string(lineno) + ": expected 10 fields", lineno);
      }
      const std::string_view field = last ? rest : rest.substr(0, comma);
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v[i]);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw CsvError("line " + std::to_string(lineno) + ": bad number '" +
                           std::string(field) + "'",
                       lineno);
      }
      if (!last) {
        rest.remove_prefix(comma + 1);
      }
    }
    trace.rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9]});
  }
  return trace;
}

SimTrace read_csv(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  return read_csv(in);
}

} // namespace phctl::harness
