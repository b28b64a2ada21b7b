#include "trace_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace npg::cli {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace) {
    out << r.k << ',' << format_double(r.q) << ',' << format_double(r.merit)
        << ',' << format_double(r.gamma) << ',' << r.backtracks << ','
        << format_double(r.step_norm) << ',' << format_double(r.residual)
        << ',' << to_string(r.partition) << '\n';
  }
}

std::string trace_csv(const Trace& trace) {
  std::ostringstream out;
  write_trace_csv(out, trace);
  return out.str();
}

namespace {

double parse_double(const std::string& field) {
  if (field == "inf") return kInfinity;
  if (field == "-inf") return -kInfinity;
  if (field == "nan") return std::nan("");
  double value = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw ContractViolation("trace csv: bad number '" + field + "'");
  }
  return value;
}

}  // namespace

std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw ContractViolation("trace csv: unexpected header");
  }
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 8) throw ContractViolation("trace csv: expected 8 columns");
    TraceRow row;
    row.iter = static_cast<long long>(parse_double(f[0]));
    row.q = parse_double(f[1]);
    row.merit = parse_double(f[2]);
    row.gamma = parse_double(f[3]);
    row.backtracks = static_cast<int>(parse_double(f[4]));
    row.step_norm = parse_double(f[5]);
    row.residual = parse_double(f[6]);
    row.partition = f[7];
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json summary_json(const RunResult& result, const RunConfig& config,
                            double stationarity) {
  std::vector<double> x(result.x_final.data(),
                        result.x_final.data() + result.x_final.size());
  return {
      {"status", to_string(result.status)},
      {"iterations", result.iterations()},
      {"final_q", result.final_q},
      {"final_merit", result.final_merit},
      {"final_residual", result.final_residual()},
      {"stationarity", stationarity},
      {"wall_time_ms",
       std::chrono::duration<double, std::milli>(result.wall_time).count()},
      {"x_final", x},
      {"config", to_json(config)},
  };
}

nlohmann::json rate_report_json(const diagnostics::RateReport& report) {
  nlohmann::json out = {{"rate_class", to_string(report.rate_class)},
                        {"fit_quality", report.fit_quality},
                        {"q_star_used", report.q_star_used},
                        {"points_used", report.points_used},
                        {"theta_hat", nullptr},
                        {"beta_hat", nullptr}};
  if (report.theta_hat) out["theta_hat"] = *report.theta_hat;
  if (report.beta_hat) out["beta_hat"] = *report.beta_hat;
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace npg::cli
