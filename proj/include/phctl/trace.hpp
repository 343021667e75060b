#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace phctl::harness {

struct TraceRow {
  double t;
  double ph_sp;
  double ph;
  double f1_cmd;
  double f2_cmd;
  double f1;
  double f2;
  double alpha;
  double beta;
  double delta;

  friend bool operator==(const TraceRow &, const TraceRow &) = default;
};

/// Rows sampled every dt; row k holds the state at t = k dt and the commands
/// issued at that instant.
struct SimTrace {
  std::vector<TraceRow> rows;
  friend bool operator==(const SimTrace &, const SimTrace &) = default;
};

inline constexpr const char *kTraceHeader = "t,ph_sp,ph,f1_cmd,f2_cmd,f1,f2,alpha,beta,delta";

void write_csv(const SimTrace &trace, std::ostream &out);
void write_csv(const SimTrace &trace, const std::filesystem::path &path);

/// Throws CsvError carrying the 1-based line number of the first bad line.
SimTrace read_csv(std::istream &in);
SimTrace read_csv(const std::filesystem::path &path);

} // namespace phctl::harness
