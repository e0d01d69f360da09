#pragma once

// Residuals of the structure equations of (g, A, B, C), eigenstructure of A
// and B across sample points, and the parallel-Blaschke classifier.
//
// Every quantity is evaluated in the Cholesky g-orthonormal frame at the
// sample point, so components are chart-independent.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "blaschke/conformal_lift.hpp"
#include "blaschke/spaceform.hpp"
#include "blaschke/tensor_algebra.hpp"

namespace blaschke {

/// Chart-component jets of the four invariants from either pipeline.
struct InvariantJets {
  int n = 0;
  TMat g;
  TMat A;
  TMat B;
  TVec C;
  bool has_C = false;
};

InvariantJets invariants_of(const SpaceformJets& s);
InvariantJets invariants_of(const LiftJets& l);

enum class PerturbField { kNone, kA, kB, kC };
const char* perturb_field_name(PerturbField f);
PerturbField parse_perturb_field(const std::string& name);

/// Adds amplitude * (R0 + sum_k R1_k dx_k) to one field, with R0, R1_k
/// symmetric (or covector) arrays of uniform [-1, 1] entries drawn from
/// `seed`. Used to confirm that the residuals detect broken fields.
struct Perturbation {
  PerturbField field = PerturbField::kNone;
  double amplitude = 0.0;
  std::uint64_t seed = 0;
};
void apply_perturbation(InvariantJets& inv, const Perturbation& p);

/// Invariant values in the g-orthonormal frame at one point.
struct FrameInvariants {
  Matrix A;
  Matrix B;
  Vector C;  // empty when unavailable
};
FrameInvariants frame_invariants(const InvariantJets& inv);

/// Residuals at one point; NaN marks a quantity the jet orders do not reach.
struct PointResiduals {
  double codazzi_A = 0.0;
  double codazzi_B = 0.0;
  double ricci_C = 0.0;
  double gauss = 0.0;
  double trace_B = 0.0;
  double norm_B = 0.0;
  double parallel_A = 0.0;
  double parallel_B = 0.0;
  double c_norm = 0.0;
};
PointResiduals point_residuals(const InvariantJets& inv);

/// Individual residual operations on frame-component values.
/// nabla_X(i, j, k) = X_{ij;k}; nabla_C(i, j) = C_{i;j}.
double residual_codazzi_A(const Cube<double>& nabla_A, const Matrix& B, const Vector& C);
double residual_codazzi_B(const Cube<double>& nabla_B, const Vector& C);
double residual_ricci_C(const Matrix& nabla_C, const Matrix& A, const Matrix& B);
double residual_gauss(const Quad<double>& R, const Matrix& A, const Matrix& B);
struct TraceNorm {
  double trace = 0.0;
  double norm = 0.0;  // | |B|^2 - (n-1)/n |
};
TraceNorm check_trace_norm(const Matrix& B);

struct Tolerances {
  double cluster = 1e-6;
  double residual = 1e-6;
  double regularity = 1e-10;
  static Tolerances for_strategy(DerivStrategy s);
};

/// NaN marks a residual no sample could evaluate.
struct ResidualSummary {
  static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
  double codazzi_A = kUnset;
  double codazzi_B = kUnset;
  double ricci_C = kUnset;
  double gauss = kUnset;
  double trace_B = kUnset;
  double norm_B = kUnset;
  double parallel_A = kUnset;
  double parallel_B = kUnset;
  double pair_relation = kUnset;
  double c_norm = kUnset;
  Tolerances tolerances;

  /// Max-reduction that skips NaN entries.
  void absorb(const PointResiduals& r);
  void absorb_pair_relation(double r);
  /// Names of integrability residuals (codazzi, ricci, gauss, trace, norm)
  /// above the residual tolerance.
  std::vector<std::string> failed_integrability() const;
};

/// Eigen-decomposition of A in the frame plus B blocks on its eigenspaces.
struct PointSpectrum {
  Vector a_values;  // ascending
  Vector b_values;  // ascending
  EigenClusterSet a_clusters;
  EigenClusterSet b_clusters;
  /// Per A-cluster eigenvalues of B restricted to that eigenspace.
  std::vector<Vector> b_blocks;
  /// Largest off-block entry of B between distinct A-eigenspaces.
  double alignment = 0.0;
};
PointSpectrum point_spectrum(const FrameInvariants& f, double tol);

/// Pair relation of parallel Blaschke tensors: max over A-clusters t != t'
/// and over B-eigenvalues b, b' inside their blocks of |a_t + a_t' - b b'|.
/// Throws kAlignment when A and B fail to be simultaneously block diagonal
/// within `tol`.
double pair_relation(const PointSpectrum& s, double tol);

struct Eigenstructure {
  bool isoparametric = true;  // cluster pattern identical at every point
  EigenClusterSet a;          // values averaged over points
  EigenClusterSet b;
  double a_drift = 0.0;  // max cross-point spread of a cluster value
  double b_drift = 0.0;
  /// Max spread of B eigenvalues inside one A-eigenspace (0 iff B is
  /// block scalar on A's decomposition).
  double b_block_spread = 0.0;
  /// Per A-cluster: true when B vanishes on that eigenspace at every point.
  std::vector<bool> b_zero_on_cluster;
  std::vector<int> cluster_counts;  // per sample
};
Eigenstructure eigenstructure(const std::vector<PointSpectrum>& samples, double tol);

enum class Branch {
  kCase1Isotropic,
  kCylinderS,
  kCylinderFlat,
  kCylinderH,
  kWarped,
  kEx11Type,
  kEx12Type,
  kIndeterminate,
};
const char* branch_name(Branch b);
std::optional<Branch> parse_branch(const std::string& name);

struct ClassificationVerdict {
  Branch branch = Branch::kIndeterminate;
  int s = 0;
  std::vector<int> multiplicities;
  std::vector<std::string> reasons;
  /// Observations that do not block the verdict.
  std::vector<std::string> notes;
  /// More than three distinct eigenvalues although A is parallel; this
  /// contradicts the three-eigenvalue bound and is reported loudly.
  bool eigenvalue_bound_violated = false;
  ResidualSummary diagnostics;
};

/// `epsilon` is the ambient curvature of a space-form input; light-cone
/// inputs pass nullopt.
ClassificationVerdict classify(const ResidualSummary& residuals, const Eigenstructure& eig,
                               std::optional<double> epsilon);

}  // namespace blaschke
