#include "cdqvi/report.hpp"

#include <json.hpp>

#include <cstdio>

namespace cdqvi {

using nlohmann::json;

namespace {

std::string format(const char* fmt, auto... args) {
  char buf[256];
  const int len = std::snprintf(buf, sizeof buf, fmt, args...);
  return std::string(buf, static_cast<std::size_t>(len > 0 ? len : 0));
}

json to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string render_csv(std::span<const SolveReport> reports, const RenderOptions& opts) {
  std::string out =
      "problem,phi,status,outer_iters,inner_newton,inner_ls,h_evals,jh_evals,time_s,residual_inf\n";
  for (const auto& r : reports) {
    out += csv_field(r.problem) + ",";
    out += format("%g,%s,%d,%d,%d,%d,%d,", r.phi, std::string(to_string(r.status)).c_str(),
                  r.outer_iterations, r.inner_newton, r.inner_linesearch, r.h_evals, r.jh_evals);
    out += opts.include_timing ? format("%.6f", r.wall_time) : std::string("NA");
    out += format(",%.17g\n", r.final_residual);
  }
  return out;
}

std::string render_table(std::span<const SolveReport> reports, const RenderOptions& opts) {
  std::string out = format("%-12s %-8s %-8s %-16s %6s %6s %10s %14s\n", "Problem", "Phi", "Iter",
                           "(newton,ls,fb)", "H", "JH", "Time", "||Y||inf");
  int solved = 0;
  for (const auto& r : reports) {
    const bool ok = r.status == SolveStatus::Solved;
    solved += ok ? 1 : 0;
    const std::string iter = ok ? std::to_string(r.outer_iterations) : std::string("failure");
    const std::string counters =
        format("(%d, %d, %d)", r.inner_newton, r.inner_linesearch, r.inner_fallback);
    const std::string time = opts.include_timing ? format("%.4f", r.wall_time) : std::string("NA");
    out += format("%-12s %-8.0e %-8s %-16s %6d %6d %10s %14.5e\n", r.problem.c_str(), r.phi,
                  iter.c_str(), counters.c_str(), r.h_evals, r.jh_evals, time.c_str(),
                  r.final_residual);
  }
  if (opts.summary) {
    out += format("solved: %d, failed: %d\n", solved, static_cast<int>(reports.size()) - solved);
  }
  return out;
}

json report_to_json(const SolveReport& r, const RenderOptions& opts) {
  json j;
  j["problem"] = r.problem;
  j["phi"] = r.phi;
  j["status"] = std::string(to_string(r.status));
  if (!r.failure_reason.empty()) j["failure_reason"] = r.failure_reason;
  j["outer_iters"] = r.outer_iterations;
  j["inner_newton"] = r.inner_newton;
  j["inner_ls"] = r.inner_linesearch;
  j["inner_fallback"] = r.inner_fallback;
  j["h_evals"] = r.h_evals;
  j["jh_evals"] = r.jh_evals;
  if (opts.include_timing) j["time_s"] = r.wall_time;
  j["residual_inf"] = r.final_residual;
  j["eps_history"] = r.eps_history;
  j["delta_history"] = r.delta_history;
  j["residual_history"] = r.residual_history;
  json statuses = json::array();
  for (auto s : r.inner_statuses) statuses.push_back(std::string(to_string(s)));
  j["inner_statuses"] = std::move(statuses);
  j["solution"] = {{"tau", to_json(r.solution.tau)},
                   {"lambda", to_json(r.solution.lambda)},
                   {"sigma", to_json(r.solution.sigma)}};
  return j;
}

}  // namespace

std::string render_reports(std::span<const SolveReport> reports, const RenderOptions& opts) {
  switch (opts.format) {
    case ReportFormat::Csv: return render_csv(reports, opts);
    case ReportFormat::Table: return render_table(reports, opts);
    case ReportFormat::Json: break;
  }
  json doc;
  doc["reports"] = json::array();
  int solved = 0;
  for (const auto& r : reports) {
    doc["reports"].push_back(report_to_json(r, opts));
    solved += r.status == SolveStatus::Solved ? 1 : 0;
  }
  doc["summary"] = {{"solved", solved}, {"failed", static_cast<int>(reports.size()) - solved}};
  return doc.dump(2) + "\n";
}

std::string render_kkt_points(std::span<const KktPoint> points, ReportFormat fmt) {
  if (fmt == ReportFormat::Json) {
    json doc = json::array();
    for (const auto& p : points) {
      doc.push_back({{"active_set", p.active_set},
                     {"residual", p.residual},
                     {"tau", to_json(p.tau)},
                     {"lambda", to_json(p.lambda)}});
    }
    return doc.dump(2) + "\n";
  }
  std::string out;
  if (fmt == ReportFormat::Csv) {
    out = "point,active_set,residual,kind,index,value\n";
    for (std::size_t k = 0; k < points.size(); ++k) {
      const auto& p = points[k];
      for (Eigen::Index i = 0; i < p.tau.size(); ++i)
        out += format("%zu,%u,%.17g,tau,%ld,%.17g\n", k, p.active_set, p.residual,
                      static_cast<long>(i), p.tau(i));
      for (Eigen::Index i = 0; i < p.lambda.size(); ++i)
        out += format("%zu,%u,%.17g,lambda,%ld,%.17g\n", k, p.active_set, p.residual,
                      static_cast<long>(i), p.lambda(i));
    }
    return out;
  }
  out = format("%zu KKT point(s)\n", points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& p = points[k];
    std::string active;
    for (Eigen::Index i = 0; i < p.lambda.size(); ++i)
      if (p.active_set & (std::uint32_t{1} << i)) active += (active.empty() ? "" : ",") + std::to_string(i + 1);
    out += format("#%zu  active={%s}  residual=%.3e\n", k + 1, active.c_str(), p.residual);
    out += "  tau    =";
    for (Eigen::Index i = 0; i < p.tau.size(); ++i) out += format(" % .10g", p.tau(i));
    out += "\n  lambda =";
    for (Eigen::Index i = 0; i < p.lambda.size(); ++i) out += format(" % .10g", p.lambda(i));
    out += "\n";
  }
  return out;
}

}  // namespace cdqvi
