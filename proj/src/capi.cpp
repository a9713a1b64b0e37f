#include "cdqvi/cdqvi.h"

#include "cdqvi/canonical_dual.hpp"
#include "cdqvi/contact.hpp"
#include "cdqvi/error.hpp"
#include "cdqvi/instance_io.hpp"
#include "cdqvi/oracle.hpp"
#include "cdqvi/report.hpp"
#include "cdqvi/selfcheck.hpp"
#include "cdqvi/solver.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <algorithm>
#include <new>
#include <optional>
#include <string>
#include <vector>

struct cdqvi_instance {
  cdqvi::ContactProblem problem;
};

struct cdqvi_report {
  cdqvi::SolveReport rep;
};

struct cdqvi_report_list {
  std::vector<cdqvi_report> reports;
};

struct cdqvi_kkt_list {
  std::vector<cdqvi::KktPoint> points;
};

namespace {

thread_local std::string g_last_error;

cdqvi_status fail(cdqvi_status code, std::string msg) {
  g_last_error = std::move(msg);
  return code;
}

cdqvi_status map_kind(cdqvi::ErrorKind kind) {
  switch (kind) {
    case cdqvi::ErrorKind::Usage: return CDQVI_ERR_USAGE;
    case cdqvi::ErrorKind::InvalidInstance: return CDQVI_ERR_INVALID_INSTANCE;
    case cdqvi::ErrorKind::Io: return CDQVI_ERR_IO;
    case cdqvi::ErrorKind::Parse: return CDQVI_ERR_PARSE;
    case cdqvi::ErrorKind::Capability: return CDQVI_ERR_CAPABILITY;
  }
  return CDQVI_ERR_INTERNAL;
}

template <typename F>
cdqvi_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return CDQVI_OK;
  } catch (const cdqvi::Error& ex) {
    return fail(map_kind(ex.kind()), ex.what());
  } catch (const nlohmann::json::exception& ex) {
    return fail(CDQVI_ERR_PARSE, ex.what());
  } catch (const std::bad_alloc&) {
    return fail(CDQVI_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& ex) {
    return fail(CDQVI_ERR_INTERNAL, ex.what());
  } catch (...) {
    return fail(CDQVI_ERR_INTERNAL, "unknown error");
  }
}

#define CDQVI_CHECK_ARG(cond, what) \
  if (!(cond)) return fail(CDQVI_ERR_USAGE, what)

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

cdqvi::SolverParams to_params(const cdqvi_solver_params* p) {
  cdqvi::SolverParams out;
  if (p == nullptr) return out;
  out.eps0 = p->eps0;
  out.delta0 = p->delta0;
  out.gamma = p->gamma;
  out.outer_tol = p->outer_tol;
  out.max_outer = p->max_outer;
  out.inner_tol0 = p->inner_tol0;
  out.inner_max_iter = p->inner_max_iter;
  return out;
}

cdqvi::ReportFormat to_format(cdqvi_format f) {
  switch (f) {
    case CDQVI_FORMAT_TABLE: return cdqvi::ReportFormat::Table;
    case CDQVI_FORMAT_CSV: return cdqvi::ReportFormat::Csv;
    case CDQVI_FORMAT_JSON: return cdqvi::ReportFormat::Json;
  }
  throw cdqvi::Error(cdqvi::ErrorKind::Usage, "unknown output format");
}

cdqvi::Vec copy_in(const double* data, std::size_t n) {
  return Eigen::Map<const cdqvi::Vec>(data, static_cast<Eigen::Index>(n));
}

void copy_out(const cdqvi::Vec& v, double* dst) {
  if (dst != nullptr) Eigen::Map<cdqvi::Vec>(dst, v.size()) = v;
}

}  // namespace

extern "C" {

const char* cdqvi_version(void) { return "0.1.0"; }

const char* cdqvi_last_error(void) { return g_last_error.c_str(); }

void cdqvi_string_free(char* s) { std::free(s); }

void cdqvi_contact_spec_default(cdqvi_contact_spec* spec) {
  if (spec == nullptr) return;
  spec->nodes = 1;
  spec->phi = 1.0;
  spec->l = 10.0;
  spec->k_t = 1.0;
  spec->k_n = 1.0;
  spec->coupling = 0.0;
  spec->stiffness_path = nullptr;
  spec->load_normal = 1.0;
  spec->load_tangential = 0.5;
  spec->fext = nullptr;
  spec->fext_len = 0;
}

cdqvi_status cdqvi_instance_generate(const cdqvi_contact_spec* spec, cdqvi_instance** out) {
  CDQVI_CHECK_ARG(spec != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    cdqvi::ContactSpec s;
    s.nodes = spec->nodes;
    s.phi = spec->phi;
    s.l = spec->l;
    if (spec->stiffness_path != nullptr)
      s.stiffness = cdqvi::StiffnessFile{spec->stiffness_path};
    else
      s.stiffness = cdqvi::SpringLattice{spec->k_t, spec->k_n, spec->coupling};
    cdqvi::require(spec->nodes >= 1, cdqvi::ErrorKind::Usage, "need at least one contact node");
    if (spec->fext != nullptr) {
      cdqvi::require(spec->fext_len == 2 * static_cast<size_t>(spec->nodes), cdqvi::ErrorKind::Usage,
                     "explicit load must have 2 * nodes entries");
      s.fext = Eigen::Map<const cdqvi::Vec>(spec->fext, static_cast<Eigen::Index>(spec->fext_len));
    } else {
      s.fext = cdqvi::default_load(spec->nodes, spec->load_normal, spec->load_tangential);
    }
    *out = new cdqvi_instance{cdqvi::generate_problem(s)};
  });
}

cdqvi_status cdqvi_instance_random(uint32_t nodes, double phi, double l, uint64_t seed,
                                   cdqvi_instance** out) {
  CDQVI_CHECK_ARG(out != nullptr, "null argument");
  return guarded([&] {
    cdqvi::require(nodes >= 1, cdqvi::ErrorKind::Usage, "need at least one contact node");
    *out = new cdqvi_instance{cdqvi::random_problem(nodes, phi, l, seed)};
  });
}

cdqvi_status cdqvi_instance_load(const char* path, cdqvi_instance** out) {
  CDQVI_CHECK_ARG(path != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = new cdqvi_instance{cdqvi::load_instance(path)}; });
}

cdqvi_status cdqvi_instance_save(const cdqvi_instance* inst, const char* path) {
  CDQVI_CHECK_ARG(inst != nullptr && path != nullptr, "null argument");
  return guarded([&] { cdqvi::save_instance(inst->problem, path); });
}

cdqvi_status cdqvi_instance_set_meta(cdqvi_instance* inst, const char* meta_json) {
  CDQVI_CHECK_ARG(inst != nullptr && meta_json != nullptr, "null argument");
  return guarded([&] {
    const auto meta = nlohmann::json::parse(meta_json);
    cdqvi::require(meta.is_object(), cdqvi::ErrorKind::Usage, "meta must be a JSON object");
    inst->problem.meta_json = meta.dump();
  });
}

cdqvi_status cdqvi_instance_with_phi(const cdqvi_instance* inst, double phi, cdqvi_instance** out) {
  CDQVI_CHECK_ARG(inst != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = new cdqvi_instance{inst->problem.with_phi(phi)}; });
}

void cdqvi_instance_free(cdqvi_instance* inst) { delete inst; }

cdqvi_status cdqvi_instance_dims(const cdqvi_instance* inst, size_t* n, size_t* m) {
  CDQVI_CHECK_ARG(inst != nullptr, "null instance");
  if (n != nullptr) *n = inst->problem.instance.n();
  if (m != nullptr) *m = inst->problem.instance.m();
  return CDQVI_OK;
}

cdqvi_status cdqvi_instance_phi(const cdqvi_instance* inst, double* phi) {
  CDQVI_CHECK_ARG(inst != nullptr && phi != nullptr, "null argument");
  *phi = inst->problem.phi;
  return CDQVI_OK;
}

cdqvi_status cdqvi_kkt_residual(const cdqvi_instance* inst, const double* tau, const double* lambda,
                                double* y) {
  CDQVI_CHECK_ARG(inst != nullptr && tau != nullptr && lambda != nullptr && y != nullptr,
                  "null argument");
  return guarded([&] {
    const auto& in = inst->problem.instance;
    copy_out(cdqvi::kkt_residual(in, copy_in(tau, in.n()), copy_in(lambda, in.m())), y);
  });
}

void cdqvi_solver_params_default(cdqvi_solver_params* params) {
  if (params == nullptr) return;
  const cdqvi::SolverParams d;
  params->eps0 = d.eps0;
  params->delta0 = d.delta0;
  params->gamma = d.gamma;
  params->outer_tol = d.outer_tol;
  params->max_outer = d.max_outer;
  params->inner_tol0 = d.inner_tol0;
  params->inner_max_iter = d.inner_max_iter;
}

cdqvi_status cdqvi_solve(const cdqvi_instance* inst, const cdqvi_solver_params* params,
                         const double* start, const char* problem_id, cdqvi_report** out) {
  CDQVI_CHECK_ARG(inst != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    const auto& in = inst->problem.instance;
    std::optional<cdqvi::PrimalDualPoint> x0;
    if (start != nullptr) x0 = cdqvi::unpack(in, copy_in(start, in.n() + 2 * in.m()));
    *out = new cdqvi_report{cdqvi::solve_problem(inst->problem, to_params(params),
                                                 problem_id ? problem_id : "", x0)};
  });
}

void cdqvi_report_free(cdqvi_report* report) { delete report; }

cdqvi_status cdqvi_report_get_summary(const cdqvi_report* report, cdqvi_report_summary* out) {
  CDQVI_CHECK_ARG(report != nullptr && out != nullptr, "null argument");
  const auto& r = report->rep;
  out->phi = r.phi;
  out->status = r.status == cdqvi::SolveStatus::Solved ? CDQVI_SOLVED : CDQVI_FAILURE;
  out->outer_iterations = r.outer_iterations;
  out->inner_newton = r.inner_newton;
  out->inner_linesearch = r.inner_linesearch;
  out->inner_fallback = r.inner_fallback;
  out->h_evals = r.h_evals;
  out->jh_evals = r.jh_evals;
  out->wall_time = r.wall_time;
  out->final_residual = r.final_residual;
  return CDQVI_OK;
}

cdqvi_status cdqvi_report_get_solution(const cdqvi_report* report, double* tau, double* lambda,
                                       double* sigma) {
  CDQVI_CHECK_ARG(report != nullptr, "null report");
  copy_out(report->rep.solution.tau, tau);
  copy_out(report->rep.solution.lambda, lambda);
  copy_out(report->rep.solution.sigma, sigma);
  return CDQVI_OK;
}

cdqvi_status cdqvi_report_get_schedule(const cdqvi_report* report, size_t* count, double* eps,
                                       double* delta) {
  CDQVI_CHECK_ARG(report != nullptr && count != nullptr, "null argument");
  const auto& r = report->rep;
  *count = r.eps_history.size();
  if (eps != nullptr) std::copy(r.eps_history.begin(), r.eps_history.end(), eps);
  if (delta != nullptr) std::copy(r.delta_history.begin(), r.delta_history.end(), delta);
  return CDQVI_OK;
}

cdqvi_status cdqvi_sweep(const cdqvi_instance* inst, const double* phis, size_t n_phis,
                         const cdqvi_solver_params* params, int32_t jobs, const char* problem_id,
                         cdqvi_report_list** out) {
  CDQVI_CHECK_ARG(inst != nullptr && out != nullptr, "null argument");
  CDQVI_CHECK_ARG(phis != nullptr || n_phis == 0, "null phi list");
  return guarded([&] {
    std::vector<cdqvi::NamedProblem> problems{{problem_id ? problem_id : "", inst->problem}};
    std::vector<double> grid(phis, phis + n_phis);
    auto reports = cdqvi::sweep(problems, grid, to_params(params), jobs > 0 ? jobs : 1);
    auto list = new cdqvi_report_list;
    list->reports.reserve(reports.size());
    for (auto& r : reports) list->reports.push_back(cdqvi_report{std::move(r)});
    *out = list;
  });
}

void cdqvi_report_list_free(cdqvi_report_list* list) { delete list; }

size_t cdqvi_report_list_size(const cdqvi_report_list* list) {
  return list != nullptr ? list->reports.size() : 0;
}

const cdqvi_report* cdqvi_report_list_get(const cdqvi_report_list* list, size_t i) {
  if (list == nullptr || i >= list->reports.size()) return nullptr;
  return &list->reports[i];
}

cdqvi_status cdqvi_render_reports(const cdqvi_report* const* reports, size_t n, cdqvi_format format,
                                  int include_timing, char** out) {
  CDQVI_CHECK_ARG(out != nullptr && (reports != nullptr || n == 0), "null argument");
  return guarded([&] {
    std::vector<cdqvi::SolveReport> copy;
    copy.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      cdqvi::require(reports[i] != nullptr, cdqvi::ErrorKind::Usage, "null report in list");
      copy.push_back(reports[i]->rep);
    }
    cdqvi::RenderOptions opts;
    opts.format = to_format(format);
    opts.include_timing = include_timing != 0;
    *out = copy_string(cdqvi::render_reports(copy, opts));
  });
}

cdqvi_status cdqvi_oracle_enumerate(const cdqvi_instance* inst, double tol, cdqvi_kkt_list** out) {
  CDQVI_CHECK_ARG(inst != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    *out = new cdqvi_kkt_list{cdqvi::enumerate_kkt(inst->problem.instance, tol)};
  });
}

void cdqvi_kkt_list_free(cdqvi_kkt_list* list) { delete list; }

size_t cdqvi_kkt_list_size(const cdqvi_kkt_list* list) {
  return list != nullptr ? list->points.size() : 0;
}

cdqvi_status cdqvi_kkt_list_get(const cdqvi_kkt_list* list, size_t i, double* tau, double* lambda,
                                uint32_t* active_set, double* residual) {
  CDQVI_CHECK_ARG(list != nullptr, "null list");
  CDQVI_CHECK_ARG(i < list->points.size(), "index out of range");
  const auto& p = list->points[i];
  copy_out(p.tau, tau);
  copy_out(p.lambda, lambda);
  if (active_set != nullptr) *active_set = p.active_set;
  if (residual != nullptr) *residual = p.residual;
  return CDQVI_OK;
}

cdqvi_status cdqvi_kkt_list_render(const cdqvi_kkt_list* list, cdqvi_format format, char** out) {
  CDQVI_CHECK_ARG(list != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = copy_string(cdqvi::render_kkt_points(list->points, to_format(format))); });
}

cdqvi_status cdqvi_self_check(uint64_t seed, int32_t* failures, char** out) {
  CDQVI_CHECK_ARG(failures != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    const auto results = cdqvi::run_self_check(seed);
    std::string text;
    int32_t failed = 0;
    for (const auto& r : results) {
      failed += r.passed ? 0 : 1;
      text += std::string(r.passed ? "PASS  " : "FAIL  ") + r.name + "  (" + r.detail + ")\n";
    }
    *failures = failed;
    *out = copy_string(text);
  });
}

}  // extern "C"
