#include "blaschke/differentiation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "blaschke/error.hpp"

namespace blaschke {

const char* constraint_name(AmbientConstraint c) {
  switch (c) {
    case AmbientConstraint::kNone: return "none";
    case AmbientConstraint::kSphere: return "sphere";
    case AmbientConstraint::kHyperbolic: return "hyperbolic";
    case AmbientConstraint::kLightCone: return "light-cone";
  }
  return "none";
}

AmbientConstraint parse_constraint(const std::string& name) {
  if (name == "none") return AmbientConstraint::kNone;
  if (name == "sphere") return AmbientConstraint::kSphere;
  if (name == "hyperbolic") return AmbientConstraint::kHyperbolic;
  if (name == "light-cone") return AmbientConstraint::kLightCone;
  fail(ErrorCode::kParameter, "unknown ambient constraint '" + name + "'");
}

double Ambient::target() const {
  switch (constraint) {
    case AmbientConstraint::kSphere: return radius * radius;
    case AmbientConstraint::kHyperbolic: return -radius * radius;
    default: return 0.0;
  }
}

double Ambient::curvature() const {
  switch (constraint) {
    case AmbientConstraint::kSphere: return 1.0 / (radius * radius);
    case AmbientConstraint::kHyperbolic: return -1.0 / (radius * radius);
    default: return 0.0;
  }
}

const char* strategy_name(DerivStrategy s) { return s == DerivStrategy::kExact ? "exact" : "fd"; }

double fd_margin(const FdOptions& fd) { return kMaxJetOrder * fd.h0; }

JetData::JetData(Vector point, std::vector<Taylor> components)
    : point_(std::move(point)), components_(std::move(components)) {}

Vector JetData::partial(std::span<const int> axes) const {
  Vector out(ambient_dim());
  for (int a = 0; a < ambient_dim(); ++a) out(a) = components_[static_cast<std::size_t>(a)].partial(axes);
  return out;
}

Vector JetData::value() const {
  Vector out(ambient_dim());
  for (int a = 0; a < ambient_dim(); ++a) out(a) = components_[static_cast<std::size_t>(a)].value();
  return out;
}

JetData JetData::from_partials(const Vector& point, int order, int ambient_dim,
                               const std::function<Vector(std::span<const int>)>& partial) {
  const int n = static_cast<int>(point.size());
  auto basis = MonomialBasis::get(n, std::max(order, kMaxJetOrder));
  std::vector<Taylor> comps(static_cast<std::size_t>(ambient_dim), Taylor(basis, order));
  for (std::size_t i = 0; i < basis->size(order); ++i) {
    std::vector<int> axes;
    const auto e = basis->exponents(i);
    for (int v = 0; v < n; ++v) {
      for (int k = 0; k < e[static_cast<std::size_t>(v)]; ++k) axes.push_back(v);
    }
    const Vector p = partial(axes);
    if (p.size() != ambient_dim) fail(ErrorCode::kDimensionMismatch, "partial has wrong ambient length");
    for (int a = 0; a < ambient_dim; ++a) {
      comps[static_cast<std::size_t>(a)].coeff(i) = p(a) / basis->factorial(i);
    }
  }
  return JetData(point, std::move(comps));
}

std::vector<Taylor> chart_variables(const Vector& point, int order) {
  const int n = static_cast<int>(point.size());
  auto basis = MonomialBasis::get(n, std::max(order, kMaxJetOrder));
  std::vector<Taylor> x;
  x.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x.push_back(Taylor::variable(basis, order, i, point(i)));
  return x;
}

void check_ambient(const Ambient& ambient, const Vector& u) {
  if (ambient.constraint == AmbientConstraint::kNone) return;
  const double q = inner(u, u, ambient.signature);
  const double c = ambient.target();
  if (std::abs(q - c) > 1e-10 * std::max(1.0, std::abs(c))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "ambient constraint violated: <u,u> = " << q << ", expected " << c << " ("
        << constraint_name(ambient.constraint) << ")";
    fail(ErrorCode::kAmbientConstraint, msg.str());
  }
}

namespace {

double binomial(int k, int j) {
  double b = 1.0;
  for (int i = 1; i <= j; ++i) b = b * (k - j + i) / i;
  return b;
}

// Tensor-product stencil of nested central differences with step h.
Vector nested_central(const EvalFn& f, const Vector& point, std::span<const int> exps, double h) {
  const int n = static_cast<int>(point.size());
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  Vector acc;
  bool first = true;
  while (true) {
    Vector x = point;
    double w = 1.0;
    for (int a = 0; a < n; ++a) {
      const int k = exps[static_cast<std::size_t>(a)];
      const int j = idx[static_cast<std::size_t>(a)];
      x(a) += (k - 2 * j) * h;
      w *= ((j % 2) ? -1.0 : 1.0) * binomial(k, j);
    }
    const Vector fx = f(x);
    if (!fx.allFinite()) fail(ErrorCode::kNonFinite, "non-finite sample in finite-difference stencil");
    if (first) {
      acc = w * fx;
      first = false;
    } else {
      acc += w * fx;
    }
    int a = 0;
    for (; a < n; ++a) {
      if (++idx[static_cast<std::size_t>(a)] <= exps[static_cast<std::size_t>(a)]) break;
      idx[static_cast<std::size_t>(a)] = 0;
    }
    if (a == n) break;
  }
  int total = 0;
  for (int e : exps) total += e;
  return acc / std::pow(2.0 * h, total);
}

}  // namespace

Vector fd_partial(const EvalFn& f, const Vector& point, std::span<const int> axes, double h0) {
  if (!(h0 > 0.0)) fail(ErrorCode::kParameter, "fd step must be positive");
  if (static_cast<int>(axes.size()) > kMaxJetOrder) fail(ErrorCode::kParameter, "fd order above cap");
  std::vector<int> exps(static_cast<std::size_t>(point.size()), 0);
  for (int a : axes) {
    if (a < 0 || a >= point.size()) fail(ErrorCode::kDimensionMismatch, "fd axis out of range");
    ++exps[static_cast<std::size_t>(a)];
  }
  if (axes.empty()) {
    const Vector v = f(point);
    if (!v.allFinite()) fail(ErrorCode::kNonFinite, "non-finite sample");
    return v;
  }
  const Vector coarse = nested_central(f, point, exps, h0);
  const Vector fine = nested_central(f, point, exps, 0.5 * h0);
  return (4.0 * fine - coarse) / 3.0;
}

double fd_partial(const std::function<double(const Vector&)>& f, const Vector& point,
                  std::span<const int> axes, double h0) {
  EvalFn wrapped = [&f](const Vector& x) {
    Vector v(1);
    v(0) = f(x);
    return v;
  };
  return fd_partial(wrapped, point, axes, h0)(0);
}

namespace {

void check_domain(const Immersion& imm, const Vector& point, double margin) {
  if (point.size() != imm.chart_dim) fail(ErrorCode::kDimensionMismatch, "chart point has wrong length");
  if (imm.domain_lo.size() == 0) return;
  for (int i = 0; i < imm.chart_dim; ++i) {
    if (point(i) - margin < imm.domain_lo(i) || point(i) + margin > imm.domain_hi(i)) {
      std::ostringstream msg;
      msg << "chart point too close to boundary on axis " << i << " (margin " << margin << ")";
      fail(ErrorCode::kChartBoundary, msg.str());
    }
  }
}

}  // namespace

JetData jet(const Immersion& imm, const Vector& point, int order, DerivStrategy strategy,
            const FdOptions& fd) {
  if (order < 0 || order > kMaxJetOrder) fail(ErrorCode::kParameter, "jet order must be in [0, 5]");
  if (imm.supplied) return imm.supplied(point, order);
  if (strategy == DerivStrategy::kExact) {
    if (!imm.exact) fail(ErrorCode::kMissingExactJet, "exact strategy requested but no exact jet supplied");
    if (order > imm.exact_max_order) fail(ErrorCode::kMissingExactJet, "exact jet order unavailable");
    check_domain(imm, point, 0.0);
    auto x = chart_variables(point, order);
    auto comps = imm.exact(x);
    for (const auto& c : comps) {
      for (double v : c.coeffs()) {
        if (!std::isfinite(v)) fail(ErrorCode::kNonFinite, "non-finite exact jet coefficient");
      }
    }
    return JetData(point, std::move(comps));
  }
  check_domain(imm, point, fd_margin(fd));
  const int ambient_dim = imm.ambient.signature.total_dim;
  return JetData::from_partials(point, order, ambient_dim, [&](std::span<const int> axes) {
    return fd_partial(imm.eval, point, axes, fd.h0);
  });
}

}  // namespace blaschke
