#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "npg/diagnostics.hpp"
#include "npg/solver.hpp"
#include "run_config.hpp"

namespace npg::cli {

inline constexpr const char* kTraceHeader =
    "iter,q,merit,gamma,backtracks,step_norm,residual,partition";

/// Shortest decimal that parses back to the same double ("inf", "-inf",
/// "nan" for non-finite values).
std::string format_double(double value);

void write_trace_csv(std::ostream& out, const Trace& trace);
std::string trace_csv(const Trace& trace);

/// One parsed CSV row; the partition column stays textual.
struct TraceRow {
  long long iter = 0;
  double q = 0.0, merit = 0.0, gamma = 0.0;
  int backtracks = 0;
  double step_norm = 0.0, residual = 0.0;
  std::string partition;
};

/// Parses a trace written by write_trace_csv. Throws ContractViolation on a
/// header mismatch or malformed row.
std::vector<TraceRow> read_trace_csv(std::istream& in);

nlohmann::json summary_json(const RunResult& result, const RunConfig& config,
                            double stationarity);

nlohmann::json rate_report_json(const diagnostics::RateReport& report);

/// Writes `text` to `path`; throws std::runtime_error if the file cannot be
/// written.
void write_file(const std::string& path, const std::string& text);

}  // namespace npg::cli
