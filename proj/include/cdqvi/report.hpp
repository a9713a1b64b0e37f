#pragma once

#include "cdqvi/oracle.hpp"
#include "cdqvi/solver.hpp"

#include <span>
#include <string>

namespace cdqvi {

enum class ReportFormat { Table, Csv, Json };

struct RenderOptions {
  ReportFormat format = ReportFormat::Table;
  /// When false the time column is written as NA (csv/table) or omitted
  /// (json), so output depends only on the inputs.
  bool include_timing = true;
  /// Table only: append the solved/failed summary line.
  bool summary = true;
};

/// csv columns: problem, phi, status, outer_iters, inner_newton, inner_ls,
/// h_evals, jh_evals, time_s, residual_inf.
std::string render_reports(std::span<const SolveReport> reports, const RenderOptions& opts);

std::string render_kkt_points(std::span<const KktPoint> points, ReportFormat format);

}  // namespace cdqvi
