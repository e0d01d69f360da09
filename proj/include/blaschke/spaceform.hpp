#pragma once

// Conformal invariants of a space-like hypersurface u: M^n -> L^{n+1}(eps)
// computed from its fundamental forms.
//
// Conventions: II = <du, de> = -<d^2 u, e> with e the unit time-like normal
// whose first nonzero coordinate is positive at the evaluation point;
// H = tr_I(h) / n. All tensors are chart components.

#include "blaschke/differentiation.hpp"
#include "blaschke/riemannian.hpp"
#include "blaschke/tensor_algebra.hpp"

namespace blaschke {

struct FundamentalForms {
  SymTensor2 first;
  SymTensor2 second;
  double mean_curvature = 0.0;
  Vector normal;
  double epsilon = 0.0;
};

/// tau with its gradient and covariant Hessian (w.r.t. I), in chart
/// components and in the Cholesky I-orthonormal frame.
struct TauData {
  double tau = 0.0;
  Vector grad;
  SymTensor2 hess;
  Vector grad_frame;
  SymTensor2 hess_frame;
};

struct SpaceformOptions {
  bool flip_normal = false;
  double regularity = 1e-10;
  /// Stop after I, h, H and e^{2tau} (no regularity check).
  bool forms_only = false;
};

/// Jet-level pipeline output. Orders drop as derivatives are taken: for an
/// order-K jet of u, h and B have order K-2, C order K-3, A order K-4.
struct SpaceformJets {
  int n = 0;
  double epsilon = 0.0;
  TMat first;
  TMat first_inv;
  TMat second;
  TVec normal;
  Taylor mean;
  Taylor e2tau;
  Taylor tau;
  TVec dtau;
  TMat hess_tau;
  TMat g;
  TMat A;
  TMat B;
  TVec C;
  bool has_C = false;
  bool has_A = false;
};

/// Checks that the ambient signature and constraint describe a Lorentzian
/// space form of dimension n+1 and returns its curvature eps.
double spaceform_epsilon(const Ambient& ambient, int chart_dim);

SpaceformJets spaceform_jets(const JetData& u, const Ambient& ambient, const SpaceformOptions& opt = {});

FundamentalForms fundamental_forms(const JetData& jet, const Ambient& ambient, bool flip_normal = false);

/// e^{2 tau} = (n |h|^2 - (tr h)^2) / (n - 1); throws kNonRegular at or
/// below `regularity`.
double conformal_factor(const FundamentalForms& ff, double regularity = 1e-10);

TauData tau_field(const Immersion& imm, const Vector& point, DerivStrategy strategy,
                  const FdOptions& fd = {});

SymTensor2 blaschke_tensor(const FundamentalForms& ff, const TauData& tau);
SymTensor2 conformal_second_ff(const FundamentalForms& ff, double tau);
Vector conformal_form(const FundamentalForms& ff, const TauData& tau, const Vector& grad_mean);

/// A_{ij} = tau_i tau_j - H h_ij - tau_{,ij} - (|dtau|^2 - H^2 - eps) I_ij / 2
template <class S>
Mat<S> blaschke_formula(const Mat<S>& first, const Mat<S>& first_inv, const Mat<S>& second,
                        const S& mean, const std::vector<S>& dtau, const Mat<S>& hess_tau,
                        double epsilon) {
  const int n = first.rows();
  S grad2 = first_inv(0, 0) * dtau[0] * dtau[0];
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      if (k == 0 && l == 0) continue;
      grad2 += first_inv(k, l) * dtau[static_cast<std::size_t>(k)] * dtau[static_cast<std::size_t>(l)];
    }
  const S bracket = 0.5 * (grad2 - mean * mean - epsilon);
  Mat<S> a(n, n, hess_tau(0, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = dtau[static_cast<std::size_t>(i)] * dtau[static_cast<std::size_t>(j)] - mean * second(i, j) -
                hess_tau(i, j) - bracket * first(i, j);
  return a;
}

/// C_i = e^{-tau} (H tau_i - h_ij tau^j - H_i), tau^j raised with I.
template <class S>
std::vector<S> conformal_form_formula(const Mat<S>& first_inv, const Mat<S>& second, const S& mean,
                                      const S& tau, const std::vector<S>& dtau,
                                      const std::vector<S>& dmean) {
  using std::exp;
  const int n = second.rows();
  std::vector<S> up;
  for (int j = 0; j < n; ++j) {
    S acc = first_inv(j, 0) * dtau[0];
    for (int k = 1; k < n; ++k) acc += first_inv(j, k) * dtau[static_cast<std::size_t>(k)];
    up.push_back(acc);
  }
  const S scale = exp(-tau);
  std::vector<S> c;
  for (int i = 0; i < n; ++i) {
    S acc = mean * dtau[static_cast<std::size_t>(i)] - dmean[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) acc -= second(i, j) * up[static_cast<std::size_t>(j)];
    c.push_back(scale * acc);
  }
  return c;
}

}  // namespace blaschke
