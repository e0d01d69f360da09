#pragma once

// Closed-form surfaces with parallel Blaschke tensor, each with an exact
// Taylor-arithmetic chart and an expected-invariant record.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "blaschke/conformal_lift.hpp"
#include "blaschke/differentiation.hpp"
#include "blaschke/structure_checks.hpp"

namespace blaschke {

struct ParamSpec {
  std::string name;
  bool integer = true;
  double lo = 0.0;
  double hi = 0.0;
  bool lo_open = false;
  bool hi_open = false;
  double default_value = 0.0;
  std::string constraint;  // cross-parameter rule, human readable
};

using ParamMap = std::map<std::string, double>;

struct ExpectedCluster {
  double value = 0.0;
  int multiplicity = 0;
};

struct ExpectedRecord {
  std::vector<ExpectedCluster> a;  // ascending
  std::vector<ExpectedCluster> b;  // ascending, pipeline orientation
  std::optional<Branch> branch;
  /// Closed-form e^{2 tau} at a chart point, when known.
  std::function<double(const Vector&)> e2tau;
  std::string tau_law;
  /// Extra named closed-form quantities (e.g. alternative conventions, for
  /// comparison); reported, not enforced.
  std::vector<std::pair<std::string, double>> notes;
};

struct CatalogSurface {
  std::string id;
  ParamMap params;
  bool light_cone = false;
  Immersion imm;            // space-form input (unused for light-cone entries)
  LightConeImmersion lift;  // light-cone input (light-cone entries only)
  /// Ambient curvature of a space-form input.
  std::optional<double> epsilon;
  /// Interior sampling box of the chart.
  Vector box_lo;
  Vector box_hi;
  ExpectedRecord expected;
};

struct CatalogEntry {
  std::string id;
  std::string description;
  std::vector<ParamSpec> params;
  std::function<CatalogSurface(const ParamMap&)> build;
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry& catalog_entry(const std::string& id);

/// Fills defaults, rejects unknown names and out-of-range values.
ParamMap resolve_params(const CatalogEntry& entry, const ParamMap& given);
CatalogSurface make_surface(const std::string& id, const ParamMap& params);

/// Chart maps in Taylor arithmetic (time-like coordinate first for H^k):
///   H^k(r): r (prod cosh, sinh x_1 prod_{i>1} cosh x_i, ..., sinh x_k)
///   S^q(R): R (prod cos,  sin y_1 prod_{i>1} cos y_i,  ..., sin y_q)
std::vector<Taylor> hyperbolic_chart(std::span<const Taylor> x, double r);
std::vector<Taylor> sphere_chart(std::span<const Taylor> y, double radius);

CatalogSurface make_cylinder_desitter(int k, int n, double r);
CatalogSurface make_cylinder_flat(int k, int n);
CatalogSurface make_cylinder_ads(int k, int n, double r);
CatalogSurface make_warped(int p, int q, int n, double r);
CatalogSurface make_example12_instance(int k, int p, int n);
CatalogSurface make_maximal_ads_product(int p, int n);

/// The maximal component H^p(r1) x H^{k-p}(r2) in H^{k+1}_1(r) of the
/// light-cone product above, as a space-form immersion.
Immersion make_example12_component(int k, int p, int n);

/// Closed-form warped-product constants for the corrected unit normal.
struct WarpedConstants {
  double alpha = 0.0;  // shape value * t on the H^p factor
  double beta = 0.0;   // on the S^q factor
  double c = 0.0;      // H * t
  double d = 0.0;      // e^{2 tau} * t^2
  double a1 = 0.0, a2 = 0.0, a3 = 0.0;
  double b1 = 0.0, b2 = 0.0, b3 = 0.0;
};
WarpedConstants warped_constants(int p, int q, int n, double r);

struct ComponentCheck {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct ComponentReport {
  bool accepted = false;
  std::string rejection;  // first failed check, empty when accepted
  std::vector<ComponentCheck> checks;
  /// Case-3 verification of the lift y = (u, v); present when accepted.
  std::optional<ResidualSummary> residuals;
  std::optional<ClassificationVerdict> verdict;
};

/// Builds y = (u, v) with v the standard H^{n-k}(r) chart, time-like
/// coordinates first; chart = (chart of u, chart of v).
LightConeImmersion example11_lift(const Immersion& component, int n, DerivStrategy strategy,
                                  const FdOptions& fd = {});

/// Checks a candidate component u: M^k -> S^{k+1}_1(r) at the given chart
/// points: H = 0, |h|^2 = (n-1)/n, scalar curvature k(k-1)/r^2 - (n-1)/n and
/// Laplacian -k u / r^2. On acceptance runs the light-cone verification of
/// the lift at the same points (v sampled at the origin of its chart).
ComponentReport validate_example11_component(const Immersion& component, int n,
                                             std::span<const Vector> points, DerivStrategy strategy,
                                             const Tolerances& tol, const FdOptions& fd = {});

}  // namespace blaschke
