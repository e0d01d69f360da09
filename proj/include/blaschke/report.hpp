#pragma once

// Sampling runs over catalog surfaces or lattice files, report emission
// (JSON / CSV) and the lattice interchange format.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blaschke/catalog.hpp"
#include "blaschke/structure_checks.hpp"

namespace blaschke {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kReportFormatVersion = 1;
inline constexpr int kGridFormatVersion = 1;
/// Jet order stored per lattice node.
inline constexpr int kGridJetOrder = 4;

struct RunConfig {
  std::string surface;
  ParamMap params;
  /// Lattice file used instead of a catalog surface.
  std::string grid_path;
  int samples = 20;
  std::uint64_t seed = 1;
  DerivStrategy deriv = DerivStrategy::kExact;
  double fd_step = 1e-2;
  // Unset tolerances default per strategy (lattice input counts as fd).
  std::optional<double> tol_cluster;
  std::optional<double> tol_residual;
  std::optional<double> tol_regularity;
  Perturbation perturb;
  /// 0: BLASCHKE_THREADS if set, else hardware concurrency.
  int threads = 0;

  Tolerances tolerances() const;
  /// Throws kConfig on invalid settings.
  void validate() const;
};

struct SampleRecord {
  int index = 0;
  Vector point;
  bool usable = true;
  std::string error;  // error code name when unusable
  double tau = ResidualSummary::kUnset;
  double e2tau = ResidualSummary::kUnset;
  double e2tau_expected = ResidualSummary::kUnset;
  Vector a_values;
  Vector b_values;
  double c_norm = ResidualSummary::kUnset;
  PointResiduals residuals;
  double pair_relation = ResidualSummary::kUnset;
  // Space-form vs light-cone pipeline (max abs component difference).
  double cross_g = ResidualSummary::kUnset;
  double cross_A = ResidualSummary::kUnset;
  double cross_B = ResidualSummary::kUnset;
  double cross_c_norm = ResidualSummary::kUnset;
  double lift_null = ResidualSummary::kUnset;
  double lift_metric = ResidualSummary::kUnset;
};

struct CrossPipeline {
  double g = ResidualSummary::kUnset;
  double A = ResidualSummary::kUnset;
  double B = ResidualSummary::kUnset;
  double c_norm = ResidualSummary::kUnset;
  double lift_null = ResidualSummary::kUnset;
  double lift_metric = ResidualSummary::kUnset;
};

struct ExpectedCheck {
  bool present = false;
  std::optional<Branch> branch;
  bool branch_match = true;
  bool a_pattern_match = true;
  bool b_pattern_match = true;
  double a_error = ResidualSummary::kUnset;
  double b_error = ResidualSummary::kUnset;
  double e2tau_error = ResidualSummary::kUnset;  // relative
  std::vector<ExpectedCluster> a;
  std::vector<ExpectedCluster> b;
  std::string tau_law;
  std::vector<std::pair<std::string, double>> notes;
};

struct Report {
  RunConfig config;
  Tolerances tolerances;
  std::string source;    // surface id or lattice path
  std::string pipeline;  // "space_form" or "light_cone"
  std::string label;
  ParamMap params;
  std::optional<double> epsilon;
  int n = 0;
  std::vector<SampleRecord> samples;
  int unusable = 0;
  ResidualSummary residuals;
  Eigenstructure eigen;
  ClassificationVerdict verdict;
  CrossPipeline cross;
  ExpectedCheck expected;
  std::string version = kToolVersion;
  /// Not serialized: reports must be byte-reproducible.
  double wall_seconds = 0.0;
};

/// Deterministic for a fixed config regardless of the thread count.
Report run_check(const RunConfig& config);

/// 0 = verdict matches the expected record (or none is present and the
/// verdict is determinate); 2 = indeterminate; 3 = integrability failure or
/// verdict mismatch.
int exit_code(const Report& r);

std::string report_json(const Report& r);
std::string report_csv(const Report& r);

/// Re-emits JSON text with the report writer (17 significant digits,
/// non-finite numbers as null); used for round-trip checks.
std::string canonical_json(const std::string& text);

std::string component_report_json(const ComponentReport& r, const std::string& source, int n,
                                  const Tolerances& tol);
int exit_code(const ComponentReport& r);

// ---- lattice files ----------------------------------------------------------

struct GridLattice {
  Vector origin;
  Vector spacing;
  std::vector<int> shape;

  int dim() const { return static_cast<int>(shape.size()); }
  int node_count() const;
  std::vector<int> multi_index(int flat) const;  // last axis fastest
  int flat_index(const std::vector<int>& idx) const;
  Vector node(int flat) const;
};

struct GridImmersion {
  Immersion imm;  // jets only at lattice nodes
  GridLattice lattice;
  /// Nodes with neighbours on both sides along every axis; only these reach
  /// jet order 5 (by central differences of the stored order-4 data).
  std::vector<int> interior;
};

GridImmersion parse_grid(const std::string& text);
GridImmersion load_grid_immersion(const std::string& path);

/// Exact order-4 jets of `imm` on the lattice, serialized in the grid format.
std::string export_grid(const Immersion& imm, const GridLattice& lattice);

/// Lattice of `shape` nodes per axis centred in the surface's sampling box.
GridLattice centered_lattice(const CatalogSurface& s, int shape, double spacing);

}  // namespace blaschke
