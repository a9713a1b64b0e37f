// Command-line front end. Talks to the solver only through the C API.
//
// Exit codes: 0 solved, 1 solver failure, 2 usage, 3 I/O or malformed
// instance, 4 capability limit.

#include "cdqvi/cdqvi.h"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitCapability = 4;

struct InstanceDeleter {
  void operator()(cdqvi_instance* p) const { cdqvi_instance_free(p); }
};
struct ReportDeleter {
  void operator()(cdqvi_report* p) const { cdqvi_report_free(p); }
};
struct ReportListDeleter {
  void operator()(cdqvi_report_list* p) const { cdqvi_report_list_free(p); }
};
struct KktListDeleter {
  void operator()(cdqvi_kkt_list* p) const { cdqvi_kkt_list_free(p); }
};
struct StringDeleter {
  void operator()(char* p) const { cdqvi_string_free(p); }
};

using InstancePtr = std::unique_ptr<cdqvi_instance, InstanceDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

// Maps a library error onto the process exit code.
int exit_code_for(cdqvi_status st) {
  switch (st) {
    case CDQVI_OK: return 0;
    case CDQVI_ERR_USAGE: return kExitUsage;
    case CDQVI_ERR_CAPABILITY: return kExitCapability;
    case CDQVI_ERR_IO:
    case CDQVI_ERR_PARSE:
    case CDQVI_ERR_INVALID_INSTANCE: return kExitIo;
    case CDQVI_ERR_INTERNAL: return kExitFailure;
  }
  return kExitFailure;
}

int report_error(cdqvi_status st, const std::string& context) {
  std::cerr << "cdqvi: " << context << ": " << cdqvi_last_error() << "\n";
  return exit_code_for(st);
}

struct GenOptions {
  uint32_t nodes = 1;
  double phi = 1.0;
  double l = 10.0;
  double kt = 1.0;
  double kn = 1.0;
  double coupling = 0.0;
  std::string stiffness_file;
  double load_normal = 1.0;
  double load_tangential = 0.5;
  std::vector<double> fext;
  std::optional<uint64_t> random_seed;
};

struct OutputOptions {
  std::string format = "table";
  std::string path;
  bool no_timing = false;
};

void add_gen_flags(CLI::App* cmd, GenOptions& g) {
  cmd->add_option("--nodes", g.nodes, "contact nodes r (N = 2r)")->check(CLI::PositiveNumber);
  cmd->add_option("--phi", g.phi, "Coulomb friction coefficient")->check(CLI::PositiveNumber);
  cmd->add_option("--l", g.l, "magnitude of the lower bound on normal stress")->check(CLI::PositiveNumber);
  cmd->add_option("--kt", g.kt, "tangential spring stiffness")->check(CLI::PositiveNumber);
  cmd->add_option("--kn", g.kn, "normal spring stiffness")->check(CLI::PositiveNumber);
  cmd->add_option("--coupling", g.coupling, "spring coupling between neighbouring nodes")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--stiffness-file", g.stiffness_file, "JSON file with the stiffness matrix C")
      ->check(CLI::ExistingFile);
  cmd->add_option("--load-normal", g.load_normal, "normal load amplitude");
  cmd->add_option("--load-tangential", g.load_tangential, "tangential load amplitude");
  cmd->add_option("--fext", g.fext, "explicit external load, 2 * nodes comma-separated values")
      ->delimiter(',');
  cmd->add_option("--random-seed", g.random_seed, "random SPD stiffness and load instead of the lattice");
}

void add_solver_flags(CLI::App* cmd, cdqvi_solver_params& p) {
  cmd->add_option("--eps0", p.eps0, "initial smoothing parameter")->check(CLI::PositiveNumber);
  cmd->add_option("--delta0", p.delta0, "initial box relaxation")->check(CLI::PositiveNumber);
  cmd->add_option("--gamma", p.gamma, "box shrink factor in (0,1)")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--tol", p.outer_tol, "termination tolerance on |Y|_inf")->check(CLI::PositiveNumber);
  cmd->add_option("--max-outer", p.max_outer, "outer iteration cap")->check(CLI::NonNegativeNumber);
  cmd->add_option("--inner-tol", p.inner_tol0, "first inner tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--inner-max-iter", p.inner_max_iter, "inner iteration cap")->check(CLI::PositiveNumber);
}

void add_output_flags(CLI::App* cmd, OutputOptions& o) {
  cmd->add_option("--format", o.format, "table, csv or json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  cmd->add_option("-o,--output", o.path, "write to file instead of stdout");
  cmd->add_flag("--no-timing", o.no_timing, "write NA for wall time (reproducible output)");
}

cdqvi_format parse_format(const std::string& s) {
  if (s == "csv") return CDQVI_FORMAT_CSV;
  if (s == "json") return CDQVI_FORMAT_JSON;
  return CDQVI_FORMAT_TABLE;
}

int emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
    return 0;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.flush();
  if (!out) {
    std::cerr << "cdqvi: cannot write " << path << "\n";
    return kExitIo;
  }
  return 0;
}

int make_instance(const GenOptions& g, InstancePtr& out) {
  cdqvi_instance* raw = nullptr;
  cdqvi_status st;
  if (g.random_seed) {
    st = cdqvi_instance_random(g.nodes, g.phi, g.l, *g.random_seed, &raw);
  } else {
    cdqvi_contact_spec spec;
    cdqvi_contact_spec_default(&spec);
    spec.nodes = g.nodes;
    spec.phi = g.phi;
    spec.l = g.l;
    spec.k_t = g.kt;
    spec.k_n = g.kn;
    spec.coupling = g.coupling;
    spec.stiffness_path = g.stiffness_file.empty() ? nullptr : g.stiffness_file.c_str();
    spec.load_normal = g.load_normal;
    spec.load_tangential = g.load_tangential;
    if (!g.fext.empty()) {
      spec.fext = g.fext.data();
      spec.fext_len = g.fext.size();
    }
    st = cdqvi_instance_generate(&spec, &raw);
  }
  if (st != CDQVI_OK) {
    // A bad stiffness file is an input problem; anything else is a flag problem.
    const int code = report_error(st, "cannot generate instance");
    return (st == CDQVI_ERR_USAGE || g.stiffness_file.empty()) ? kExitUsage : code;
  }
  out.reset(raw);
  return 0;
}

int load(const std::string& path, InstancePtr& out) {
  cdqvi_instance* raw = nullptr;
  const cdqvi_status st = cdqvi_instance_load(path.c_str(), &raw);
  if (st != CDQVI_OK) {
    report_error(st, "cannot load " + path);
    return kExitIo;
  }
  out.reset(raw);
  return 0;
}

std::string meta_for(const GenOptions& g) {
  std::string meta = "{\"generator\":";
  if (g.random_seed) {
    meta += "\"random\",\"seed\":" + std::to_string(*g.random_seed);
  } else if (!g.stiffness_file.empty()) {
    meta += "\"stiffness-file\"";
  } else {
    meta += "\"spring-lattice\",\"kt\":" + std::to_string(g.kt) + ",\"kn\":" + std::to_string(g.kn) +
            ",\"coupling\":" + std::to_string(g.coupling);
    if (g.fext.empty()) {
      meta += ",\"load_normal\":" + std::to_string(g.load_normal) +
              ",\"load_tangential\":" + std::to_string(g.load_tangential);
    } else {
      meta += ",\"load\":\"explicit\"";
    }
  }
  return meta + ",\"nodes\":" + std::to_string(g.nodes) + "}";
}

int cmd_gen(const GenOptions& g, const std::string& out_path) {
  InstancePtr inst;
  if (int rc = make_instance(g, inst); rc != 0) return rc;
  cdqvi_instance_set_meta(inst.get(), meta_for(g).c_str());
  if (cdqvi_status st = cdqvi_instance_save(inst.get(), out_path.c_str()); st != CDQVI_OK)
    return report_error(st, "cannot save instance");
  size_t n = 0, m = 0;
  cdqvi_instance_dims(inst.get(), &n, &m);
  std::cerr << "wrote " << out_path << " (N=" << n << ", m=" << m << ")\n";
  return 0;
}

int render_and_emit(const std::vector<const cdqvi_report*>& reports, const OutputOptions& o) {
  char* raw = nullptr;
  const cdqvi_status st = cdqvi_render_reports(reports.data(), reports.size(), parse_format(o.format),
                                               o.no_timing ? 0 : 1, &raw);
  if (st != CDQVI_OK) return report_error(st, "cannot render report");
  StringPtr text(raw);
  return emit(text.get(), o.path);
}

std::string default_problem_id(const std::string& path) {
  return path.empty() ? std::string("generated") : std::filesystem::path(path).stem().string();
}

int cmd_solve(const std::string& path, const cdqvi_solver_params& params, const OutputOptions& o,
              std::string problem) {
  InstancePtr inst;
  if (int rc = load(path, inst); rc != 0) return rc;
  if (problem.empty()) problem = default_problem_id(path);
  cdqvi_report* raw = nullptr;
  if (cdqvi_status st = cdqvi_solve(inst.get(), &params, nullptr, problem.c_str(), &raw); st != CDQVI_OK)
    return report_error(st, "solve failed");
  std::unique_ptr<cdqvi_report, ReportDeleter> rep(raw);
  if (int rc = render_and_emit({rep.get()}, o); rc != 0) return rc;
  cdqvi_report_summary s;
  cdqvi_report_get_summary(rep.get(), &s);
  return s.status == CDQVI_SOLVED ? 0 : kExitFailure;
}

int cmd_sweep(const std::string& path, const GenOptions& g, const std::vector<double>& phis,
              const cdqvi_solver_params& params, int jobs, const OutputOptions& o,
              std::string problem) {
  InstancePtr inst;
  if (int rc = path.empty() ? make_instance(g, inst) : load(path, inst); rc != 0) return rc;
  if (problem.empty()) problem = default_problem_id(path);
  cdqvi_report_list* raw = nullptr;
  if (cdqvi_status st = cdqvi_sweep(inst.get(), phis.data(), phis.size(), &params, jobs,
                                    problem.c_str(), &raw);
      st != CDQVI_OK)
    return report_error(st, "sweep failed");
  std::unique_ptr<cdqvi_report_list, ReportListDeleter> list(raw);
  std::vector<const cdqvi_report*> reports;
  bool all_solved = true;
  for (size_t i = 0; i < cdqvi_report_list_size(list.get()); ++i) {
    const cdqvi_report* r = cdqvi_report_list_get(list.get(), i);
    cdqvi_report_summary s;
    cdqvi_report_get_summary(r, &s);
    all_solved = all_solved && s.status == CDQVI_SOLVED;
    reports.push_back(r);
  }
  if (int rc = render_and_emit(reports, o); rc != 0) return rc;
  return all_solved ? 0 : kExitFailure;
}

int cmd_oracle(const std::string& path, double tol, const OutputOptions& o) {
  InstancePtr inst;
  if (int rc = load(path, inst); rc != 0) return rc;
  cdqvi_kkt_list* raw = nullptr;
  if (cdqvi_status st = cdqvi_oracle_enumerate(inst.get(), tol, &raw); st != CDQVI_OK)
    return report_error(st, "oracle failed");
  std::unique_ptr<cdqvi_kkt_list, KktListDeleter> list(raw);
  char* text_raw = nullptr;
  if (cdqvi_status st = cdqvi_kkt_list_render(list.get(), parse_format(o.format), &text_raw);
      st != CDQVI_OK)
    return report_error(st, "cannot render KKT points");
  StringPtr text(text_raw);
  return emit(text.get(), o.path);
}

int cmd_check(uint64_t seed) {
  int32_t failures = 0;
  char* raw = nullptr;
  if (cdqvi_status st = cdqvi_self_check(seed, &failures, &raw); st != CDQVI_OK)
    return report_error(st, "self-check failed to run");
  StringPtr text(raw);
  std::fputs(text.get(), stdout);
  return failures == 0 ? 0 : kExitFailure;
}

int default_jobs() {
  if (const char* env = std::getenv("CDQVI_JOBS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Canonical-duality solver for affine quasi-variational inequalities from "
               "contact problems with Coulomb friction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cdqvi_version()));

  GenOptions gen_opts;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "generate a contact instance file");
  add_gen_flags(gen, gen_opts);
  gen->add_option("-o,--output", gen_out, "instance file to write")->required();

  cdqvi_solver_params params;
  cdqvi_solver_params_default(&params);
  OutputOptions out_opts;
  std::string instance_path;
  std::string problem_id;

  auto* solve = app.add_subcommand("solve", "solve one instance");
  solve->add_option("instance", instance_path, "instance file")->required();
  solve->add_option("--problem", problem_id, "problem label in the report");
  add_solver_flags(solve, params);
  add_output_flags(solve, out_opts);

  GenOptions sweep_gen;
  std::vector<double> phis{1e-3, 1e-2, 1e-1, 1e0, 1e1, 1e2, 1e3, 1e4, 1e5};
  int jobs = default_jobs();
  auto* sweep = app.add_subcommand("sweep", "solve one instance for a list of friction coefficients");
  sweep->add_option("instance", instance_path, "instance file (omit to generate from flags)");
  add_gen_flags(sweep, sweep_gen);
  sweep->add_option("--phis", phis, "friction coefficients, comma separated")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  sweep->add_option("--jobs", jobs, "concurrent solves (default: CDQVI_JOBS or 1)")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--problem", problem_id, "problem label in the report");
  add_solver_flags(sweep, params);
  add_output_flags(sweep, out_opts);

  double oracle_tol = 1e-9;
  auto* oracle = app.add_subcommand("oracle", "enumerate all KKT points of a small instance (m <= 20)");
  oracle->add_option("instance", instance_path, "instance file")->required();
  oracle->add_option("--tol", oracle_tol, "sign tolerance")->check(CLI::NonNegativeNumber);
  add_output_flags(oracle, out_opts);

  uint64_t check_seed = 1;
  auto* check = app.add_subcommand("check", "run the built-in property checks");
  check->add_option("--seed", check_seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (gen->parsed()) return cmd_gen(gen_opts, gen_out);
  if (solve->parsed()) return cmd_solve(instance_path, params, out_opts, problem_id);
  if (sweep->parsed()) return cmd_sweep(instance_path, sweep_gen, phis, params, jobs, out_opts, problem_id);
  if (oracle->parsed()) return cmd_oracle(instance_path, oracle_tol, out_opts);
  if (check->parsed()) return cmd_check(check_seed);
  return kExitUsage;
}
