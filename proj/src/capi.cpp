#include "blaschke/blaschke.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "blaschke/error.hpp"
#include "blaschke/report.hpp"
#include "json_writer.hpp"

using namespace blaschke;

struct blaschke_config {
  RunConfig cfg;
};

struct blaschke_report {
  Report report;
  std::string branch;
};

namespace {

thread_local std::string g_last_error;

int record(int code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

// Runs `f`, mapping exceptions to error codes.
template <class F>
int guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return BLASCHKE_OK;
  } catch (const Error& e) {
    return record(static_cast<int>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return record(BLASCHKE_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(BLASCHKE_E_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

int invalid(const char* what) { return record(BLASCHKE_E_INVALID_ARGUMENT, std::string("invalid argument: ") + what); }

}  // namespace

extern "C" {

const char* blaschke_version(void) { return kToolVersion; }

const char* blaschke_last_error(void) { return g_last_error.c_str(); }

const char* blaschke_error_name(int code) {
  switch (code) {
    case BLASCHKE_OK: return "ok";
    case BLASCHKE_E_INVALID_ARGUMENT: return "invalid_argument";
    case BLASCHKE_E_INTERNAL: return "internal";
    default: return error_code_name(static_cast<ErrorCode>(code));
  }
}

void blaschke_string_free(char* s) { std::free(s); }

int blaschke_catalog_json(char** out) {
  if (!out) return invalid("out");
  return guarded([&] {
    ojson list = ojson::array();
    for (const auto& e : catalog()) {
      ojson params = ojson::array();
      for (const auto& p : e.params) {
        params.push_back({{"name", p.name},
                          {"integer", p.integer},
                          {"lo", num(p.lo)},
                          {"hi", num(p.hi)},
                          {"lo_open", p.lo_open},
                          {"hi_open", p.hi_open},
                          {"default", num(p.default_value)},
                          {"constraint", p.constraint}});
      }
      list.push_back({{"id", e.id}, {"description", e.description}, {"params", std::move(params)}});
    }
    *out = dup(write_json(ojson{{"format_version", kReportFormatVersion}, {"surfaces", std::move(list)}}));
  });
}

int blaschke_config_create(blaschke_config** out) {
  if (!out) return invalid("out");
  return guarded([&] { *out = new blaschke_config{}; });
}

void blaschke_config_destroy(blaschke_config* cfg) { delete cfg; }

int blaschke_config_set_surface(blaschke_config* cfg, const char* id) {
  if (!cfg || !id) return invalid("config or id");
  return guarded([&] { cfg->cfg.surface = id; });
}

int blaschke_config_set_grid(blaschke_config* cfg, const char* path) {
  if (!cfg || !path) return invalid("config or path");
  return guarded([&] { cfg->cfg.grid_path = path; });
}

int blaschke_config_set_param(blaschke_config* cfg, const char* name, double value) {
  if (!cfg || !name) return invalid("config or name");
  return guarded([&] { cfg->cfg.params[name] = value; });
}

int blaschke_config_set_samples(blaschke_config* cfg, int samples) {
  if (!cfg) return invalid("config");
  return guarded([&] { cfg->cfg.samples = samples; });
}

int blaschke_config_set_seed(blaschke_config* cfg, uint64_t seed) {
  if (!cfg) return invalid("config");
  return guarded([&] { cfg->cfg.seed = seed; });
}

int blaschke_config_set_deriv(blaschke_config* cfg, const char* strategy) {
  if (!cfg || !strategy) return invalid("config or strategy");
  return guarded([&] {
    const std::string s = strategy;
    if (s == "exact") {
      cfg->cfg.deriv = DerivStrategy::kExact;
    } else if (s == "fd") {
      cfg->cfg.deriv = DerivStrategy::kFd;
    } else {
      fail(ErrorCode::kConfig, "derivative strategy must be 'exact' or 'fd', got '" + s + "'");
    }
  });
}

int blaschke_config_set_fd_step(blaschke_config* cfg, double h) {
  if (!cfg) return invalid("config");
  return guarded([&] { cfg->cfg.fd_step = h; });
}

int blaschke_config_set_tolerance(blaschke_config* cfg, const char* which, double value) {
  if (!cfg || !which) return invalid("config or tolerance name");
  return guarded([&] {
    const std::string w = which;
    if (w == "cluster") {
      cfg->cfg.tol_cluster = value;
    } else if (w == "residual") {
      cfg->cfg.tol_residual = value;
    } else if (w == "regularity") {
      cfg->cfg.tol_regularity = value;
    } else {
      fail(ErrorCode::kConfig, "unknown tolerance '" + w + "' (cluster, residual or regularity)");
    }
  });
}

int blaschke_config_set_perturbation(blaschke_config* cfg, const char* field, double amplitude, uint64_t seed) {
  if (!cfg || !field) return invalid("config or field");
  return guarded([&] { cfg->cfg.perturb = Perturbation{parse_perturb_field(field), amplitude, seed}; });
}

int blaschke_config_set_threads(blaschke_config* cfg, int threads) {
  if (!cfg) return invalid("config");
  return guarded([&] { cfg->cfg.threads = threads; });
}

int blaschke_run_check(const blaschke_config* cfg, blaschke_report** out) {
  if (!cfg || !out) return invalid("config or out");
  *out = nullptr;
  return guarded([&] {
    auto* r = new blaschke_report{run_check(cfg->cfg), {}};
    r->branch = branch_name(r->report.verdict.branch);
    *out = r;
  });
}

void blaschke_report_destroy(blaschke_report* report) { delete report; }

int blaschke_report_json(const blaschke_report* report, char** out) {
  if (!report || !out) return invalid("report or out");
  return guarded([&] { *out = dup(report_json(report->report)); });
}

int blaschke_report_csv(const blaschke_report* report, char** out) {
  if (!report || !out) return invalid("report or out");
  return guarded([&] { *out = dup(report_csv(report->report)); });
}

int blaschke_report_exit_code(const blaschke_report* report) { return report ? exit_code(report->report) : 4; }

const char* blaschke_report_branch(const blaschke_report* report) { return report ? report->branch.c_str() : ""; }

double blaschke_report_wall_seconds(const blaschke_report* report) { return report ? report->report.wall_seconds : 0.0; }

int blaschke_export_grid(const blaschke_config* cfg, int shape, double spacing, char** out) {
  if (!cfg || !out) return invalid("config or out");
  return guarded([&] {
    const CatalogSurface s = make_surface(cfg->cfg.surface, cfg->cfg.params);
    if (s.light_cone) fail(ErrorCode::kConfig, "grid export supports space-form catalog surfaces only");
    *out = dup(export_grid(s.imm, centered_lattice(s, shape, spacing)));
  });
}

int blaschke_validate_component(const char* grid_path, int n, double tol_residual, char** json_out, int* code) {
  if (!grid_path || !json_out || !code) return invalid("grid path, json_out or exit_code");
  return guarded([&] {
    const GridImmersion g = load_grid_immersion(grid_path);
    Tolerances tol;
    if (tol_residual > 0.0) tol.residual = tol_residual;
    std::vector<Vector> points;
    for (int f = 0; f < g.lattice.node_count(); ++f) points.push_back(g.lattice.node(f));
    ComponentReport rep;
    try {
      rep = validate_example11_component(g.imm, n, points, DerivStrategy::kExact, tol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kAmbientConstraint) throw;
      rep.accepted = false;
      rep.rejection = e.what();
    }
    *json_out = dup(component_report_json(rep, grid_path, n, tol));
    *code = exit_code(rep);
  });
}

int blaschke_canonical_json(const char* text, char** out) {
  if (!text || !out) return invalid("text or out");
  return guarded([&] { *out = dup(canonical_json(text)); });
}

}  // extern "C"
