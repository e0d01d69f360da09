#pragma once

// Immersions of chart domains into pseudo-Euclidean space and their jets.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "blaschke/pseudo_linalg.hpp"
#include "blaschke/taylor.hpp"

namespace blaschke {

inline constexpr int kMaxJetOrder = 5;

enum class AmbientConstraint { kNone, kSphere, kHyperbolic, kLightCone };

const char* constraint_name(AmbientConstraint c);
AmbientConstraint parse_constraint(const std::string& name);

struct Ambient {
  Signature signature;
  AmbientConstraint constraint = AmbientConstraint::kNone;
  double radius = 1.0;

  /// Required value of <u,u>: r^2, -r^2 or 0 (kNone has no requirement).
  double target() const;
  /// Sectional curvature of the space form: 0, 1/r^2, -1/r^2.
  double curvature() const;
};

using EvalFn = std::function<Vector(const Vector&)>;
using TaylorFn = std::function<std::vector<Taylor>(std::span<const Taylor>)>;

class JetData;

struct Immersion {
  int chart_dim = 0;
  Ambient ambient;
  EvalFn eval;
  /// Optional closed-form map evaluated in Taylor arithmetic.
  TaylorFn exact;
  int exact_max_order = kMaxJetOrder;
  /// Optional jet supplier overriding both strategies (lattice data).
  std::function<JetData(const Vector&, int)> supplied;
  /// Chart domain box; points must stay inside it.
  Vector domain_lo;
  Vector domain_hi;
  std::string label;
};

/// Partials of an immersion at a point up to `order`, stored as one
/// truncated Taylor value per ambient component. Mixed partials are
/// canonical by construction.
class JetData {
 public:
  JetData() = default;
  JetData(Vector point, std::vector<Taylor> components);

  const Vector& point() const { return point_; }
  int order() const { return components_.empty() ? 0 : components_.front().order(); }
  int chart_dim() const { return static_cast<int>(point_.size()); }
  int ambient_dim() const { return static_cast<int>(components_.size()); }

  /// d^{axes} u at the point; axes in any order.
  Vector partial(std::span<const int> axes) const;
  Vector partial(std::initializer_list<int> axes) const {
    return partial(std::span<const int>(axes.begin(), axes.size()));
  }
  Vector value() const;

  const std::vector<Taylor>& components() const { return components_; }

  /// Rebuilds a jet from a partial-derivative callback (axes sorted ascending).
  static JetData from_partials(const Vector& point, int order, int ambient_dim,
                               const std::function<Vector(std::span<const int>)>& partial);

 private:
  Vector point_;
  std::vector<Taylor> components_;
};

enum class DerivStrategy { kExact, kFd };

const char* strategy_name(DerivStrategy s);

struct FdOptions {
  double h0 = 1e-2;
};

/// Stencil radius of the fd strategy: kMaxJetOrder * h0.
double fd_margin(const FdOptions& fd);

JetData jet(const Immersion& imm, const Vector& point, int order, DerivStrategy strategy,
            const FdOptions& fd = {});

/// Central-difference estimate of d^{axes} f with two-level Richardson
/// extrapolation (h0, h0/2).
Vector fd_partial(const EvalFn& f, const Vector& point, std::span<const int> axes, double h0);
double fd_partial(const std::function<double(const Vector&)>& f, const Vector& point,
                  std::span<const int> axes, double h0);

/// Throws kAmbientConstraint when |<u,u> - c| > 1e-10 * max(1, |c|).
void check_ambient(const Ambient& ambient, const Vector& u);

/// Taylor variables x0_i + dx_i for a chart point.
std::vector<Taylor> chart_variables(const Vector& point, int order);

}  // namespace blaschke
