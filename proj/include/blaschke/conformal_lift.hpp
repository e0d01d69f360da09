#pragma once

// Light-cone pipeline: hypersurfaces as null immersions y: M^n -> C^{n+2}
// in R^{n+3}_2 with <dy,dy> = g, and extraction of g, A, B, C from the frame
// {y, N, y_i, xi}.
//
// Canonical lifts use time-like coordinates first:
//   eps = 0:  sigma(u) = ((1+<u,u>)/2, u, (1-<u,u>)/2)
//   eps > 0:  sigma(u) = (r, u)
//   eps < 0:  sigma(u) = (u, r)
// and y = e^tau sigma(u).

#include <functional>
#include <optional>

#include "blaschke/differentiation.hpp"
#include "blaschke/riemannian.hpp"
#include "blaschke/spaceform.hpp"
#include "blaschke/tensor_algebra.hpp"

namespace blaschke {

/// Sign of C_i = s <d_i xi, N>, fixed so both pipelines agree.
inline constexpr double kConformalFormSign = -1.0;

struct LightConeImmersion {
  Immersion imm;
  /// Optional vector Xi at a chart point; xi is chosen with <xi, Xi> < 0.
  /// Without it xi has its first nonzero coordinate positive.
  std::function<Vector(const Vector&)> orientation;
  /// Highest jet order the supplier can deliver.
  int max_order = kMaxJetOrder;
};

struct ConformalFrame {
  Vector y;
  Vector N;
  Matrix tangent;  // columns y_i in a g-orthonormal combination
  Vector xi;
};

/// Jet-level frame and invariants in chart components. For an order-K jet of
/// y: g has order K-1, A and B order K-2, C order K-3.
struct LiftJets {
  int n = 0;
  TVec y;
  std::vector<TVec> dy;
  TMat g;
  TMat g_inv;
  TVec laplacian;
  TVec N;
  TVec xi;
  TMat A;
  TMat B;
  TVec C;
  bool has_C = false;
};

/// Throws kLiftFailure unless the signature is R^{n+3}_2.
void check_lift_signature(const Signature& sig, int chart_dim);

LightConeImmersion canonical_lift(const Immersion& imm, DerivStrategy strategy, const FdOptions& fd = {},
                                  bool flip_normal = false);

/// Residuals of a lift at a point: |<y,y>| and, for canonical lifts of a
/// space-form immersion, max |<dy,dy> - e^{2tau} I|.
struct LiftResiduals {
  double null = 0.0;
  double metric = 0.0;
};
LiftResiduals lift_residuals(const Immersion& space_form, const LightConeImmersion& lift,
                             const Vector& point, DerivStrategy strategy, const FdOptions& fd = {});

LiftJets lift_jets(const JetData& y, const Signature& sig, const std::optional<Vector>& orientation);

ConformalFrame conformal_frame(const JetData& y, const Signature& sig,
                               const std::optional<Vector>& orientation = std::nullopt);

/// Largest violation of the frame normalizations (<y,y>=0, <N,N>=0,
/// <N,y>=-1, <y,y_i>=<N,y_i>=<xi,y>=<xi,N>=<xi,y_i>=0, <xi,xi>=-1,
/// <y_i,y_j>=delta_ij).
double frame_residual(const ConformalFrame& f, const Signature& sig);

LiftJets invariants_from_lift(const LightConeImmersion& lift, const Vector& point, int order,
                              DerivStrategy strategy, const FdOptions& fd = {});

}  // namespace blaschke
