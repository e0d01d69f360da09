#include "blaschke/spaceform.hpp"

#include <cmath>
#include <sstream>

#include "blaschke/error.hpp"

namespace blaschke {

double spaceform_epsilon(const Ambient& ambient, int n) {
  const Signature& sig = ambient.signature;
  auto expect = [&](int dim, int s, const char* what) {
    if (sig.total_dim != dim || sig.time_dims != s) {
      std::ostringstream msg;
      msg << what << " needs signature (" << dim << ", " << s << ") for chart_dim " << n << ", got ("
          << sig.total_dim << ", " << sig.time_dims << ")";
      fail(ErrorCode::kDimensionMismatch, msg.str());
    }
  };
  switch (ambient.constraint) {
    case AmbientConstraint::kNone: expect(n + 1, 1, "flat ambient"); break;
    case AmbientConstraint::kSphere: expect(n + 2, 1, "de Sitter ambient"); break;
    case AmbientConstraint::kHyperbolic: expect(n + 2, 2, "anti-de Sitter ambient"); break;
    case AmbientConstraint::kLightCone:
      fail(ErrorCode::kAmbientConstraint, "light-cone immersion given to the space-form pipeline");
  }
  if (!(ambient.radius > 0.0)) fail(ErrorCode::kParameter, "ambient radius must be positive");
  return ambient.curvature();
}

namespace {

// Pointwise unit normal: orthogonal to the tangents (and the position off
// the flat case), time-like, first nonzero coordinate positive.
Vector normal_seed(const std::vector<TVec>& du, const std::vector<Taylor>& u, const Ambient& ambient,
                   bool flip) {
  std::vector<Vector> span;
  for (const auto& d : du) span.push_back(values(d));
  if (ambient.constraint != AmbientConstraint::kNone) span.push_back(values(u));
  Vector e;
  try {
    e = orthogonal_complement_unit(span, ambient.signature, CausalType::kTimeLike);
  } catch (const Error& err) {
    if (err.code() == ErrorCode::kCausalType) {
      fail(ErrorCode::kNotSpaceLike, std::string("normal not time-like: ") + err.what());
    }
    throw;
  }
  return flip ? Vector(-e) : e;
}

void check_positive_definite(const TMat& first) {
  const Matrix m = values(first);
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() == Eigen::Success) return;
  // A clearly negative direction means a time-like tangent, not a degenerate chart.
  const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(m).eigenvalues();
  if (ev(0) < -1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff())) {
    fail(ErrorCode::kNotSpaceLike, "first fundamental form indefinite: surface not space-like");
  }
  fail(ErrorCode::kMetricDegenerate, "first fundamental form not positive definite");
}

}  // namespace

SpaceformJets spaceform_jets(const JetData& u, const Ambient& ambient, const SpaceformOptions& opt) {
  const int n = u.chart_dim();
  const int order = u.order();
  if (n < 2) fail(ErrorCode::kParameter, "hypersurface dimension must be at least 2");
  if (order < 2) fail(ErrorCode::kParameter, "space-form pipeline needs a jet of order >= 2");
  if (u.ambient_dim() != ambient.signature.total_dim) {
    fail(ErrorCode::kDimensionMismatch, "jet length does not match the ambient signature");
  }
  SpaceformJets out;
  out.n = n;
  out.epsilon = spaceform_epsilon(ambient, n);
  const Signature& sig = ambient.signature;

  const auto& uc = u.components();
  const std::vector<TVec> du = tangent_jets(uc, n);
  std::vector<std::vector<TVec>> ddu;
  for (const auto& d : du) ddu.push_back(tangent_jets(d, n));

  out.first = induced_metric(du, sig);
  check_positive_definite(out.first);
  out.first_inv = inverse(out.first);

  const Vector seed = normal_seed(du, uc, ambient, opt.flip_normal);
  std::vector<TVec> span = du;
  if (ambient.constraint != AmbientConstraint::kNone) {
    TVec pos;
    for (const auto& c : uc) pos.push_back(c.truncated(order - 1));
    span.push_back(pos);
  }
  const TVec raw = project_off(span, constant_vector(du[0][0], seed), sig);
  const Taylor q = inner(raw, raw, sig);
  if (!(q.value() < 0.0)) fail(ErrorCode::kNotSpaceLike, "normal not time-like");
  out.normal = scaled(raw, pow(-q, -0.5));

  out.second = TMat(n, n, ddu[0][0][0]);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Taylor h = -inner(ddu[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], out.normal, sig);
      out.second(i, j) = h;
      out.second(j, i) = h;
    }

  const TMat shape = matmul(out.first_inv, out.second);
  const Taylor tr = trace(shape);
  const Taylor tr2 = trace(matmul(shape, shape));
  out.mean = tr / static_cast<double>(n);
  out.e2tau = (static_cast<double>(n) * tr2 - tr * tr) / static_cast<double>(n - 1);
  if (opt.forms_only) return out;
  if (!(out.e2tau.value() > opt.regularity)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "non-regular (umbilic) point: e^{2tau} = " << out.e2tau.value();
    fail(ErrorCode::kNonRegular, msg.str());
  }
  out.tau = 0.5 * log(out.e2tau);

  out.g = TMat(n, n, out.e2tau);
  out.B = TMat(n, n, out.e2tau);
  const Taylor etau = exp(out.tau);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out.g(i, j) = out.e2tau * out.first(i, j);
      out.B(i, j) = etau * (out.second(i, j) - out.mean * out.first(i, j));
    }

  if (order >= 3) {
    std::vector<Taylor> dmean;
    for (int i = 0; i < n; ++i) {
      out.dtau.push_back(out.tau.derivative(i));
      dmean.push_back(out.mean.derivative(i));
    }
    out.C = conformal_form_formula(out.first_inv, out.second, out.mean, out.tau, out.dtau, dmean);
    out.has_C = true;
  }
  if (order >= 4) {
    const Cube<Taylor> gamma = christoffel_jets(out.first, out.first_inv);
    out.hess_tau = covariant_hessian(out.tau, gamma);
    out.A = blaschke_formula(out.first, out.first_inv, out.second, out.mean, out.dtau, out.hess_tau,
                             out.epsilon);
    out.has_A = true;
  }
  return out;
}

FundamentalForms fundamental_forms(const JetData& jet, const Ambient& ambient, bool flip_normal) {
  const JetData low(jet.point(), [&] {
    std::vector<Taylor> c;
    for (const auto& t : jet.components()) c.push_back(t.truncated(2));
    return c;
  }());
  SpaceformOptions opt;
  opt.flip_normal = flip_normal;
  opt.forms_only = true;  // umbilic points are legal here; conformal_factor decides
  const SpaceformJets s = spaceform_jets(low, ambient, opt);
  FundamentalForms ff;
  ff.first = SymTensor2(values(s.first));
  ff.second = SymTensor2(values(s.second));
  ff.mean_curvature = s.mean.value();
  ff.normal = values(s.normal);
  ff.epsilon = s.epsilon;
  return ff;
}

double conformal_factor(const FundamentalForms& ff, double regularity) {
  const int n = ff.first.dim();
  if (n < 2) fail(ErrorCode::kParameter, "conformal factor needs n >= 2");
  const Matrix shape = ff.first.matrix().llt().solve(ff.second.matrix());
  const double tr = shape.trace();
  const double tr2 = (shape * shape).trace();
  const double e2 = (n * tr2 - tr * tr) / (n - 1);
  if (!(e2 > regularity)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "non-regular (umbilic) point: e^{2tau} = " << e2;
    fail(ErrorCode::kNonRegular, msg.str());
  }
  return e2;
}

TauData tau_field(const Immersion& imm, const Vector& point, DerivStrategy strategy, const FdOptions& fd) {
  const SpaceformJets s = spaceform_jets(jet(imm, point, 4, strategy, fd), imm.ambient);
  TauData t;
  t.tau = s.tau.value();
  t.grad = values(s.dtau);
  t.hess = SymTensor2(values(s.hess_tau));
  const Matrix f = orthonormal_frame(SymTensor2(values(s.first)));
  t.grad_frame = f.transpose() * t.grad;
  t.hess_frame = SymTensor2(frame_components(t.hess.matrix(), f));
  return t;
}

SymTensor2 blaschke_tensor(const FundamentalForms& ff, const TauData& tau) {
  const Mat<double> first = to_mat(ff.first.matrix());
  const Mat<double> first_inv = to_mat(ff.first.matrix().inverse());
  std::vector<double> dtau(tau.grad.data(), tau.grad.data() + tau.grad.size());
  const Mat<double> a = blaschke_formula(first, first_inv, to_mat(ff.second.matrix()), ff.mean_curvature,
                                         dtau, to_mat(tau.hess.matrix()), ff.epsilon);
  return SymTensor2(to_matrix(a));
}

SymTensor2 conformal_second_ff(const FundamentalForms& ff, double tau) {
  return SymTensor2(std::exp(tau) * (ff.second.matrix() - ff.mean_curvature * ff.first.matrix()));
}

Vector conformal_form(const FundamentalForms& ff, const TauData& tau, const Vector& grad_mean) {
  std::vector<double> dtau(tau.grad.data(), tau.grad.data() + tau.grad.size());
  std::vector<double> dmean(grad_mean.data(), grad_mean.data() + grad_mean.size());
  const auto c = conformal_form_formula(to_mat(ff.first.matrix().inverse()), to_mat(ff.second.matrix()),
                                        ff.mean_curvature, tau.tau, dtau, dmean);
  return Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(c.size()));
}

}  // namespace blaschke
