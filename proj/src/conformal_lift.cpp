#include "blaschke/conformal_lift.hpp"

#include <cmath>
#include <sstream>

#include "blaschke/error.hpp"

namespace blaschke {

void check_lift_signature(const Signature& sig, int n) {
  if (sig.total_dim != n + 3 || sig.time_dims != 2) {
    std::ostringstream msg;
    msg << "light-cone immersion of an " << n << "-manifold needs signature (" << n + 3 << ", 2), got ("
        << sig.total_dim << ", " << sig.time_dims << ")";
    fail(ErrorCode::kLiftFailure, msg.str());
  }
}

namespace {

template <class S>
std::vector<S> sigma(const std::vector<S>& u, const Ambient& ambient) {
  const Signature& sig = ambient.signature;
  const S one = constant_like(u[0], 1.0);
  std::vector<S> out;
  switch (ambient.constraint) {
    case AmbientConstraint::kNone: {
      const S q = inner(u, u, sig);
      out.push_back(0.5 * (one + q));
      out.insert(out.end(), u.begin(), u.end());
      out.push_back(0.5 * (one - q));
      break;
    }
    case AmbientConstraint::kSphere:
      out.push_back(ambient.radius * one);
      out.insert(out.end(), u.begin(), u.end());
      break;
    case AmbientConstraint::kHyperbolic:
      out = u;
      out.push_back(ambient.radius * one);
      break;
    case AmbientConstraint::kLightCone:
      fail(ErrorCode::kLiftFailure, "input is already a light-cone immersion");
  }
  return out;
}

// Vector Xi with <xi, Xi> < 0 for the frame vector xi of the lift, built
// from the space-form normal e.
Vector lift_orientation(const Vector& u, const Vector& e, const Ambient& ambient) {
  const int m = static_cast<int>(u.size());
  Vector out = Vector::Zero(m + 2 - (ambient.constraint == AmbientConstraint::kNone ? 0 : 1));
  switch (ambient.constraint) {
    case AmbientConstraint::kNone: {
      const double a = inner(u, e, ambient.signature);
      out(0) = a;
      out.segment(1, m) = e;
      out(m + 1) = -a;
      break;
    }
    case AmbientConstraint::kSphere: out.segment(1, m) = e; break;
    case AmbientConstraint::kHyperbolic: out.segment(0, m) = e; break;
    case AmbientConstraint::kLightCone: break;
  }
  return out;
}

JetData lifted_jet(const Immersion& imm, const Vector& point, int order, DerivStrategy strategy,
                   const FdOptions& fd, bool flip) {
  if (order + 2 > kMaxJetOrder) {
    std::ostringstream msg;
    msg << "canonical lift supplies jets up to order " << kMaxJetOrder - 2 << ", requested " << order;
    fail(ErrorCode::kMissingExactJet, msg.str());
  }
  const JetData u = jet(imm, point, order + 2, strategy, fd);
  SpaceformOptions opt;
  opt.forms_only = true;
  opt.flip_normal = flip;
  const SpaceformJets s = spaceform_jets(u, imm.ambient, opt);
  if (!(s.e2tau.value() > 1e-10)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "non-regular (umbilic) point: e^{2tau} = " << s.e2tau.value();
    fail(ErrorCode::kNonRegular, msg.str());
  }
  const Taylor scale = sqrt(s.e2tau);
  std::vector<Taylor> uc;
  for (const auto& c : u.components()) uc.push_back(c.truncated(order));
  std::vector<Taylor> y = sigma(uc, imm.ambient);
  for (auto& c : y) c = scale * c;
  return JetData(point, std::move(y));
}

}  // namespace

LightConeImmersion canonical_lift(const Immersion& imm, DerivStrategy strategy, const FdOptions& fd,
                                  bool flip_normal) {
  const int n = imm.chart_dim;
  spaceform_epsilon(imm.ambient, n);
  LightConeImmersion out;
  out.imm.chart_dim = n;
  out.imm.ambient.signature = Signature(n + 3, 2);
  out.imm.ambient.constraint = AmbientConstraint::kLightCone;
  out.imm.domain_lo = imm.domain_lo;
  out.imm.domain_hi = imm.domain_hi;
  out.imm.label = imm.label + " (canonical lift)";
  out.max_order = kMaxJetOrder - 2;
  out.imm.supplied = [imm, strategy, fd, flip_normal](const Vector& p, int order) {
    return lifted_jet(imm, p, order, strategy, fd, flip_normal);
  };
  out.imm.eval = [imm, strategy, fd, flip_normal](const Vector& p) {
    return lifted_jet(imm, p, 0, strategy, fd, flip_normal).value();
  };
  out.orientation = [imm, strategy, fd, flip_normal](const Vector& p) {
    const JetData u = jet(imm, p, 2, strategy, fd);
    const FundamentalForms ff = fundamental_forms(u, imm.ambient, flip_normal);
    return lift_orientation(u.value(), ff.normal, imm.ambient);
  };
  return out;
}

LiftResiduals lift_residuals(const Immersion& space_form, const LightConeImmersion& lift,
                             const Vector& point, DerivStrategy strategy, const FdOptions& fd) {
  const JetData y = jet(lift.imm, point, 1, strategy, fd);
  const JetData u = jet(space_form, point, 2, strategy, fd);
  const FundamentalForms ff = fundamental_forms(u, space_form.ambient);
  const double e2 = conformal_factor(ff);
  const Signature& sig = lift.imm.ambient.signature;
  LiftResiduals r;
  r.null = std::abs(inner(y.value(), y.value(), sig));
  const int n = space_form.chart_dim;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double gij = inner(y.partial({i}), y.partial({j}), sig);
      r.metric = std::max(r.metric, std::abs(gij - e2 * ff.first(i, j)));
    }
  return r;
}

LiftJets lift_jets(const JetData& y, const Signature& sig, const std::optional<Vector>& orientation) {
  const int n = y.chart_dim();
  const int order = y.order();
  check_lift_signature(sig, n);
  if (order < 2) fail(ErrorCode::kParameter, "light-cone pipeline needs a jet of order >= 2");
  if (y.ambient_dim() != sig.total_dim) fail(ErrorCode::kDimensionMismatch, "jet length != signature");

  LiftJets out;
  out.n = n;
  out.y = y.components();
  out.dy = tangent_jets(out.y, n);
  std::vector<std::vector<TVec>> ddy;
  for (const auto& d : out.dy) ddy.push_back(tangent_jets(d, n));

  out.g = induced_metric(out.dy, sig);
  {
    Eigen::LLT<Matrix> llt(values(out.g));
    if (llt.info() != Eigen::Success) fail(ErrorCode::kMetricDegenerate, "<dy,dy> not positive definite");
  }
  out.g_inv = inverse(out.g);
  const Cube<Taylor> gamma = christoffel_jets(out.g, out.g_inv);

  // Covariant Hessian of y; its metric trace gives N.
  std::vector<std::vector<TVec>> hess = ddy;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        hess[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            axpy(hess[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], -gamma(k, i, j),
                 out.dy[static_cast<std::size_t>(k)]);
  out.laplacian = laplacian_jets(out.dy, ddy, out.g_inv, gamma);

  const double dn = static_cast<double>(n);
  TVec y_low;
  for (const auto& c : out.y) y_low.push_back(c.truncated(order - 2));
  out.N = axpy(scaled(out.laplacian, y_low[0].constant_like(1.0 / dn)),
               inner(out.laplacian, out.laplacian, sig) / (2.0 * dn * dn), y_low);

  std::vector<TVec> span{y_low, out.N};
  std::vector<Vector> span_values{values(out.y), values(out.N)};
  for (const auto& d : out.dy) {
    span.push_back(d);
    span_values.push_back(values(d));
  }
  Vector seed;
  try {
    seed = orthogonal_complement_unit(span_values, sig, CausalType::kTimeLike);
  } catch (const Error& err) {
    fail(ErrorCode::kFrameDegenerate, std::string("conformal frame: ") + err.what());
  }
  if (orientation && inner(seed, *orientation, sig) > 0.0) seed = -seed;
  const TVec raw = project_off(span, constant_vector(y_low[0], seed), sig);
  const Taylor q = inner(raw, raw, sig);
  if (!(q.value() < 0.0)) fail(ErrorCode::kFrameDegenerate, "conformal frame: xi not time-like");
  out.xi = scaled(raw, pow(-q, -0.5));

  out.A = TMat(n, n, y_low[0]);
  out.B = TMat(n, n, y_low[0]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const TVec& h = hess[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      out.A(i, j) = inner(out.N, h, sig);
      out.B(i, j) = -inner(out.xi, h, sig);
    }
  if (order >= 3) {
    for (int i = 0; i < n; ++i) {
      TVec dxi;
      for (const auto& c : out.xi) dxi.push_back(c.derivative(i));
      out.C.push_back(kConformalFormSign * inner(dxi, out.N, sig));
    }
    out.has_C = true;
  }
  return out;
}

ConformalFrame conformal_frame(const JetData& y, const Signature& sig, const std::optional<Vector>& orientation) {
  const LiftJets l = lift_jets(y, sig, orientation);
  ConformalFrame f;
  f.y = values(l.y);
  f.N = values(l.N);
  Matrix dy(sig.total_dim, l.n);
  for (int i = 0; i < l.n; ++i) dy.col(i) = values(l.dy[static_cast<std::size_t>(i)]);
  f.tangent = dy * orthonormal_frame(SymTensor2(values(l.g)));
  f.xi = values(l.xi);
  return f;
}

double frame_residual(const ConformalFrame& f, const Signature& sig) {
  double r = 0.0;
  auto check = [&](const Vector& a, const Vector& b, double expected) {
    r = std::max(r, std::abs(inner(a, b, sig) - expected));
  };
  check(f.y, f.y, 0.0);
  check(f.N, f.N, 0.0);
  check(f.N, f.y, -1.0);
  check(f.xi, f.xi, -1.0);
  check(f.xi, f.y, 0.0);
  check(f.xi, f.N, 0.0);
  for (int i = 0; i < f.tangent.cols(); ++i) {
    check(f.tangent.col(i), f.y, 0.0);
    check(f.tangent.col(i), f.N, 0.0);
    check(f.tangent.col(i), f.xi, 0.0);
    for (int j = 0; j < f.tangent.cols(); ++j) check(f.tangent.col(i), f.tangent.col(j), i == j ? 1.0 : 0.0);
  }
  return r;
}

LiftJets invariants_from_lift(const LightConeImmersion& lift, const Vector& point, int order,
                              DerivStrategy strategy, const FdOptions& fd) {
  if (order > lift.max_order) {
    std::ostringstream msg;
    msg << "lift supplies jets up to order " << lift.max_order << ", requested " << order;
    fail(ErrorCode::kMissingExactJet, msg.str());
  }
  const JetData y = jet(lift.imm, point, order, strategy, fd);
  std::optional<Vector> hint;
  if (lift.orientation) hint = lift.orientation(point);
  return lift_jets(y, lift.imm.ambient.signature, hint);
}

}  // namespace blaschke
