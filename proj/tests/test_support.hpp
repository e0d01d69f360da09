#pragma once

// Shared fixtures: a generic non-umbilic Minkowski graph, ambient isometries,
// and seeded chart sampling.

#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "blaschke/catalog.hpp"
#include "blaschke/differentiation.hpp"
#include "blaschke/pseudo_linalg.hpp"
#include "blaschke/taylor.hpp"

namespace testing {

using namespace blaschke;

inline EvalFn eval_of(const TaylorFn& exact) {
  return [exact](const Vector& x) {
    const auto vars = chart_variables(x, 0);
    const auto out = exact(vars);
    Vector v(static_cast<Eigen::Index>(out.size()));
    for (std::size_t i = 0; i < out.size(); ++i) v(static_cast<Eigen::Index>(i)) = out[i].value();
    return v;
  };
}

inline Immersion from_exact(int chart_dim, Ambient ambient, TaylorFn exact, double box, const char* label) {
  Immersion imm;
  imm.chart_dim = chart_dim;
  imm.ambient = ambient;
  imm.exact = std::move(exact);
  imm.eval = eval_of(imm.exact);
  imm.domain_lo = Vector::Constant(chart_dim, -box);
  imm.domain_hi = Vector::Constant(chart_dim, box);
  imm.label = label;
  return imm;
}

/// u = (f(x), x) in R^4_1 with a cubic f: space-like near the origin, not
/// umbilic, non-constant mean curvature (C != 0), not parallel.
inline Immersion generic_graph() {
  return from_exact(3, Ambient{Signature(4, 1), AmbientConstraint::kNone, 1.0},
                    [](std::span<const Taylor> x) {
                      const Taylor f = 0.3 * x[0] * x[0] + 0.1 * x[1] * x[1] - 0.2 * x[2] * x[2] +
                                       0.15 * x[0] * x[1] * x[2] + 0.05 * x[0] * x[0] * x[0] + 0.1 * x[1];
                      return std::vector<Taylor>{f, x[0], x[1], x[2]};
                    },
                    1.0, "generic cubic graph");
}

/// Composition of a linear ambient map (and translation) with an immersion.
inline Immersion transformed(const Immersion& imm, const Matrix& L, const Vector& shift) {
  Immersion out = imm;
  const TaylorFn inner = imm.exact;
  out.exact = [inner, L, shift](std::span<const Taylor> x) {
    const auto u = inner(x);
    std::vector<Taylor> v;
    for (int i = 0; i < L.rows(); ++i) {
      Taylor acc = u[0] * L(i, 0);
      for (int j = 1; j < L.cols(); ++j) acc += u[static_cast<std::size_t>(j)] * L(i, j);
      v.push_back(acc + shift(i));
    }
    return v;
  };
  out.eval = [e = imm.eval, L, shift](const Vector& x) { return Vector(L * e(x) + shift); };
  return out;
}

inline Matrix boost(int dim, int time_axis, int space_axis, double rapidity) {
  Matrix m = Matrix::Identity(dim, dim);
  m(time_axis, time_axis) = m(space_axis, space_axis) = std::cosh(rapidity);
  m(time_axis, space_axis) = m(space_axis, time_axis) = std::sinh(rapidity);
  return m;
}

inline Matrix rotation(int dim, int a, int b, double angle) {
  Matrix m = Matrix::Identity(dim, dim);
  m(a, a) = m(b, b) = std::cos(angle);
  m(a, b) = -std::sin(angle);
  m(b, a) = std::sin(angle);
  return m;
}

/// Max |L^T eta L - eta|: isometry check of the fixture itself.
inline double isometry_defect(const Matrix& L, const Signature& sig) {
  const Matrix eta = sig.metric();
  return (L.transpose() * eta * L - eta).cwiseAbs().maxCoeff();
}

inline std::vector<Vector> sample_box(const Vector& lo, const Vector& hi, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vector> pts;
  for (int s = 0; s < count; ++s) {
    Vector x(lo.size());
    for (Eigen::Index i = 0; i < lo.size(); ++i) x(i) = lo(i) + (hi(i) - lo(i)) * u(rng);
    pts.push_back(x);
  }
  return pts;
}

inline std::vector<Vector> sample_surface(const CatalogSurface& s, int count, std::uint64_t seed) {
  return sample_box(s.box_lo, s.box_hi, count, seed);
}

inline Vector sorted(Vector v) {
  std::sort(v.data(), v.data() + v.size());
  return v;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }
inline double max_abs_diff(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace testing
