// blaschke: command-line front end over the C API.
//
//   blaschke list [--json]
//   blaschke check --surface ID [--param k=1 ...] [--samples N] [--seed S] [--deriv exact|fd]
//                  [--fd-step H] [--tol-cluster T] [--tol-residual T] [--tol-regularity T]
//                  [--perturb A=1e-3] [--perturb-seed S] [--threads N] [--out report.json] [--csv table.csv]
//   blaschke check --grid FILE ...
//   blaschke validate-component --grid FILE --n N [--tol-residual T] [--out report.json]
//   blaschke export-grid --surface ID [--param ...] [--shape 5] [--spacing 0.05] --out FILE
//
// Exit codes: 0 ok / verdict matches, 2 indeterminate, 3 residual failure or
// mismatch (or rejected component), 4 usage, configuration or runtime error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "blaschke/blaschke.h"

namespace {

constexpr int kExitError = 4;

struct Failure {
  std::string message;
};

void check(int rc, const char* what) {
  if (rc != BLASCHKE_OK) {
    throw Failure{std::string(what) + ": " + blaschke_error_name(rc) + ": " + blaschke_last_error()};
  }
}

// Owns a string returned by the library.
struct Owned {
  char* p = nullptr;
  ~Owned() { blaschke_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{"cannot open '" + path + "' for writing"};
  out << text;
  if (!out) throw Failure{"write to '" + path + "' failed"};
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

double parse_number(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw Failure{"invalid number '" + s + "' for " + what};
  return v;
}

std::pair<std::string, double> split_assignment(const std::string& s, const std::string& what) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw Failure{what + " must look like name=value, got '" + s + "'"};
  return {s.substr(0, eq), parse_number(s.substr(eq + 1), what + " " + s.substr(0, eq))};
}

struct Config {
  blaschke_config* h = nullptr;
  Config() { check(blaschke_config_create(&h), "config"); }
  ~Config() { blaschke_config_destroy(h); }
  Config(const Config&) = delete;
  Config& operator=(const Config&) = delete;
};

void apply_surface(Config& c, const std::string& surface, const std::vector<std::string>& params) {
  check(blaschke_config_set_surface(c.h, surface.c_str()), "surface");
  for (const auto& p : params) {
    const auto [name, value] = split_assignment(p, "--param");
    check(blaschke_config_set_param(c.h, name.c_str(), value), "param");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformal invariants of space-like hypersurfaces: checks and classification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(blaschke_version()));

  auto* list = app.add_subcommand("list", "List catalog surfaces and their parameters");
  bool list_json = false;
  list->add_flag("--json", list_json, "Print the catalog as JSON");

  auto* chk = app.add_subcommand("check", "Sample a surface, evaluate residuals and classify");
  std::string surface, grid, out, csv, deriv = "exact", perturb;
  std::vector<std::string> params;
  int samples = 20, threads = 0;
  std::uint64_t seed = 1, perturb_seed = 0;
  double fd_step = 1e-2;
  std::optional<double> tol_cluster, tol_residual, tol_regularity;
  auto* src = chk->add_option_group("input");
  src->add_option("--surface", surface, "Catalog surface id");
  src->add_option("--grid", grid, "Lattice file instead of a catalog surface");
  src->require_option(1);
  chk->add_option("--param", params, "Surface parameter name=value (repeatable)");
  chk->add_option("--samples", samples, "Number of sample points")->capture_default_str();
  chk->add_option("--seed", seed, "Sampling seed")->capture_default_str();
  chk->add_option("--deriv", deriv, "Derivative strategy")->check(CLI::IsMember({"exact", "fd"}))->capture_default_str();
  chk->add_option("--fd-step", fd_step, "Finite-difference base step")->capture_default_str();
  chk->add_option("--tol-cluster", tol_cluster, "Eigenvalue cluster / parallelism tolerance");
  chk->add_option("--tol-residual", tol_residual, "Structure-equation residual tolerance");
  chk->add_option("--tol-regularity", tol_regularity, "Minimum e^{2tau} of a regular point");
  chk->add_option("--perturb", perturb, "Perturb a field before the checks: A=amp, B=amp or C=amp");
  chk->add_option("--perturb-seed", perturb_seed, "Seed of the perturbation")->capture_default_str();
  chk->add_option("--threads", threads, "Worker threads (0: BLASCHKE_THREADS or all cores)")->capture_default_str();
  chk->add_option("--out", out, "JSON report path ('-' or omitted: stdout)");
  chk->add_option("--csv", csv, "Per-sample CSV table path");

  auto* val = app.add_subcommand("validate-component", "Validate a lattice-file component u: N^k -> S^{k+1}_1(r)");
  std::string val_grid, val_out;
  int val_n = 0;
  double val_tol = 0.0;
  val->add_option("--grid", val_grid, "Lattice file of the component")->required();
  val->add_option("--n", val_n, "Dimension n of the product hypersurface")->required();
  val->add_option("--tol-residual", val_tol, "Residual tolerance (default 1e-6)");
  val->add_option("--out", val_out, "JSON report path ('-' or omitted: stdout)");

  auto* exp = app.add_subcommand("export-grid", "Write exact order-4 jets of a catalog surface on a lattice");
  std::string exp_surface, exp_out;
  std::vector<std::string> exp_params;
  int exp_shape = 5;
  double exp_spacing = 0.05;
  exp->add_option("--surface", exp_surface, "Catalog surface id")->required();
  exp->add_option("--param", exp_params, "Surface parameter name=value (repeatable)");
  exp->add_option("--shape", exp_shape, "Nodes per axis")->capture_default_str();
  exp->add_option("--spacing", exp_spacing, "Node spacing")->capture_default_str();
  exp->add_option("--out", exp_out, "Output path ('-' or omitted: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (list->parsed()) {
      Owned s;
      check(blaschke_catalog_json(&s.p), "list");
      if (list_json) {
        std::cout << s.str();
        return 0;
      }
      const auto cat = nlohmann::json::parse(s.str());
      for (const auto& e : cat.at("surfaces")) {
        std::cout << e.at("id").get<std::string>() << "\n    " << e.at("description").get<std::string>() << "\n";
        for (const auto& p : e.at("params")) {
          std::cout << "    --param " << p.at("name").get<std::string>() << "=";
          std::cout << p.at("default").get<double>();
          std::cout << (p.at("integer").get<bool>() ? "  (integer" : "  (real");
          const auto bound = [](const nlohmann::json& b, const char* inf) {
            if (b.is_null()) return std::string(inf);
            std::ostringstream os;
            os << b.get<double>();
            return os.str();
          };
          std::cout << " in " << (p.at("lo_open").get<bool>() ? "(" : "[") << bound(p.at("lo"), "-inf") << ", "
                    << bound(p.at("hi"), "inf") << (p.at("hi_open").get<bool>() ? ")" : "]");
          const auto rule = p.at("constraint").get<std::string>();
          if (!rule.empty()) std::cout << "; " << rule;
          std::cout << ")\n";
        }
      }
      return 0;
    }

    if (chk->parsed()) {
      Config c;
      if (!surface.empty()) {
        apply_surface(c, surface, params);
      } else {
        if (!params.empty()) throw Failure{"--param does not apply to --grid input"};
        check(blaschke_config_set_grid(c.h, grid.c_str()), "grid");
      }
      check(blaschke_config_set_samples(c.h, samples), "samples");
      check(blaschke_config_set_seed(c.h, seed), "seed");
      check(blaschke_config_set_deriv(c.h, deriv.c_str()), "deriv");
      check(blaschke_config_set_fd_step(c.h, fd_step), "fd-step");
      if (tol_cluster) check(blaschke_config_set_tolerance(c.h, "cluster", *tol_cluster), "tol-cluster");
      if (tol_residual) check(blaschke_config_set_tolerance(c.h, "residual", *tol_residual), "tol-residual");
      if (tol_regularity) check(blaschke_config_set_tolerance(c.h, "regularity", *tol_regularity), "tol-regularity");
      if (!perturb.empty()) {
        const auto [field, amp] = split_assignment(perturb, "--perturb");
        check(blaschke_config_set_perturbation(c.h, field.c_str(), amp, perturb_seed), "perturb");
      }
      check(blaschke_config_set_threads(c.h, threads), "threads");

      blaschke_report* rep = nullptr;
      check(blaschke_run_check(c.h, &rep), "check");
      struct Guard {
        blaschke_report* r;
        ~Guard() { blaschke_report_destroy(r); }
      } guard{rep};
      Owned json;
      check(blaschke_report_json(rep, &json.p), "report");
      emit(out, json.str());
      if (!csv.empty()) {
        Owned table;
        check(blaschke_report_csv(rep, &table.p), "csv");
        write_file(csv, table.str());
      }
      const int code = blaschke_report_exit_code(rep);
      std::fprintf(stderr, "verdict: %s  exit: %d  wall: %.3f s\n", blaschke_report_branch(rep), code,
                   blaschke_report_wall_seconds(rep));
      return code;
    }

    if (val->parsed()) {
      Owned json;
      int code = kExitError;
      check(blaschke_validate_component(val_grid.c_str(), val_n, val_tol, &json.p, &code), "validate-component");
      emit(val_out, json.str());
      return code;
    }

    if (exp->parsed()) {
      Config c;
      apply_surface(c, exp_surface, exp_params);
      Owned text;
      check(blaschke_export_grid(c.h, exp_shape, exp_spacing, &text.p), "export-grid");
      emit(exp_out, text.str());
      return 0;
    }
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", f.message.c_str());
    return kExitError;
  }
  return kExitError;
}
