#include "blaschke/riemannian.hpp"

#include <cmath>

#include "blaschke/error.hpp"

namespace blaschke {

Cube<Taylor> christoffel_jets(const TMat& g, const TMat& g_inv) {
  const int n = g.rows();
  std::vector<TMat> dg;  // dg[k](i, j) = d_k g_ij
  for (int k = 0; k < n; ++k) {
    TMat d(n, n, g(0, 0).derivative(k));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d(i, j) = g(i, j).derivative(k);
    dg.push_back(std::move(d));
  }
  // lowered Gamma_{l,ij} = (d_i g_lj + d_j g_li - d_l g_ij) / 2
  Cube<Taylor> lowered(n, dg[0](0, 0));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        lowered(l, i, j) = 0.5 * (dg[static_cast<std::size_t>(i)](l, j) + dg[static_cast<std::size_t>(j)](l, i) -
                                  dg[static_cast<std::size_t>(l)](i, j));
  Cube<Taylor> gamma(n, dg[0](0, 0));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Taylor acc = g_inv(k, 0) * lowered(0, i, j);
        for (int l = 1; l < n; ++l) acc += g_inv(k, l) * lowered(l, i, j);
        gamma(k, i, j) = std::move(acc);
      }
  return gamma;
}

TMat covariant_hessian(const Taylor& f, const Cube<Taylor>& gamma) {
  const int n = gamma.dim();
  TVec df;
  for (int i = 0; i < n; ++i) df.push_back(f.derivative(i));
  TMat h(n, n, df[0]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Taylor acc = df[static_cast<std::size_t>(i)].derivative(j);
      for (int k = 0; k < n; ++k) acc -= gamma(k, i, j) * df[static_cast<std::size_t>(k)];
      h(i, j) = std::move(acc);
    }
  return h;
}

Cube<Taylor> covariant_derivative(const TMat& t, const Cube<Taylor>& gamma) {
  const int n = t.rows();
  Cube<Taylor> out(n, t(0, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Taylor acc = t(i, j).derivative(k);
        for (int l = 0; l < n; ++l) {
          acc -= gamma(l, k, i) * t(l, j);
          acc -= gamma(l, k, j) * t(i, l);
        }
        out(i, j, k) = std::move(acc);
      }
  return out;
}

TMat covariant_derivative(const TVec& c, const Cube<Taylor>& gamma) {
  const int n = static_cast<int>(c.size());
  TMat out(n, n, c[0]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Taylor acc = c[static_cast<std::size_t>(i)].derivative(j);
      for (int l = 0; l < n; ++l) acc -= gamma(l, j, i) * c[static_cast<std::size_t>(l)];
      out(i, j) = std::move(acc);
    }
  return out;
}

Quad<Taylor> riemann_jets(const TMat& g, const Cube<Taylor>& gamma) {
  const int n = g.rows();
  // R^m_{jkl} = d_k G^m_{lj} - d_l G^m_{kj} + G^m_{kp} G^p_{lj} - G^m_{lp} G^p_{kj}
  Quad<Taylor> up(n, gamma(0, 0, 0));
  for (int m = 0; m < n; ++m)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Taylor acc = gamma(m, l, j).derivative(k) - gamma(m, k, j).derivative(l);
          for (int p = 0; p < n; ++p) {
            acc += gamma(m, k, p) * gamma(p, l, j);
            acc -= gamma(m, l, p) * gamma(p, k, j);
          }
          up(m, j, k, l) = std::move(acc);
        }
  Quad<Taylor> low(n, up(0, 0, 0, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Taylor acc = g(i, 0) * up(0, j, k, l);
          for (int m = 1; m < n; ++m) acc += g(i, m) * up(m, j, k, l);
          low(i, j, k, l) = std::move(acc);
        }
  return low;
}

Taylor scalar_curvature(const Quad<Taylor>& riemann, const TMat& g_inv) {
  const int n = riemann.dim();
  Taylor acc = riemann(0, 0, 0, 0) * 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) acc += g_inv(i, k) * g_inv(j, l) * riemann(i, j, k, l);
  return acc;
}

std::vector<TVec> tangent_jets(const std::vector<Taylor>& u, int chart_dim) {
  std::vector<TVec> d(static_cast<std::size_t>(chart_dim));
  for (int i = 0; i < chart_dim; ++i)
    for (const auto& c : u) d[static_cast<std::size_t>(i)].push_back(c.derivative(i));
  return d;
}

TMat induced_metric(const std::vector<TVec>& d_u, const Signature& sig) {
  const int n = static_cast<int>(d_u.size());
  TMat g(n, n, d_u[0][0]);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      g(i, j) = inner(d_u[static_cast<std::size_t>(i)], d_u[static_cast<std::size_t>(j)], sig);
      if (j != i) g(j, i) = g(i, j);
    }
  return g;
}

TVec laplacian_jets(const std::vector<TVec>& d_u, const std::vector<std::vector<TVec>>& dd_u,
                    const TMat& g_inv, const Cube<Taylor>& gamma) {
  const int n = static_cast<int>(d_u.size());
  const std::size_t dim = d_u[0].size();
  TVec out;
  for (std::size_t a = 0; a < dim; ++a) {
    Taylor acc = dd_u[0][0][a] * 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Taylor hess = dd_u[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][a];
        for (int k = 0; k < n; ++k) hess -= gamma(k, i, j) * d_u[static_cast<std::size_t>(k)][a];
        acc += g_inv(i, j) * hess;
      }
    out.push_back(std::move(acc));
  }
  return out;
}

TMat field_jet_fd(const MetricField& field, const Vector& point, int order, double h0) {
  const int n = static_cast<int>(point.size());
  const int dim = field(point).dim();
  EvalFn flat = [&](const Vector& x) {
    const SymTensor2 t = field(x);
    Vector v(dim * dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) v(i * dim + j) = t(i, j);
    return v;
  };
  const JetData jd = JetData::from_partials(point, order, dim * dim, [&](std::span<const int> axes) {
    return fd_partial(flat, point, axes, h0);
  });
  (void)n;
  TMat out(dim, dim, jd.components()[0]);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) out(i, j) = jd.components()[static_cast<std::size_t>(i * dim + j)];
  return out;
}

Cube<double> values(const Cube<Taylor>& t) {
  const int n = t.dim();
  Cube<double> out(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out(i, j, k) = t(i, j, k).value();
  return out;
}

Quad<double> values(const Quad<Taylor>& t) {
  const int n = t.dim();
  Quad<double> out(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) out(i, j, k, l) = t(i, j, k, l).value();
  return out;
}

Cube<double> frame_components(const Cube<double>& t, const Matrix& f) {
  const int n = t.dim();
  Cube<double> a(n, 0.0), b(n, 0.0);
  for (int p = 0; p < n; ++p)  // contract first slot
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += f(i, p) * t(i, j, k);
        a(p, j, k) = s;
      }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += f(j, q) * a(p, j, k);
        b(p, q, k) = s;
      }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += f(k, r) * b(p, q, k);
        a(p, q, r) = s;
      }
  return a;
}

Quad<double> frame_components(const Quad<double>& t, const Matrix& f) {
  const int n = t.dim();
  Quad<double> cur = t;
  for (int slot = 0; slot < 4; ++slot) {
    Quad<double> next(n, 0.0);
    int idx[4];
    for (idx[0] = 0; idx[0] < n; ++idx[0])
      for (idx[1] = 0; idx[1] < n; ++idx[1])
        for (idx[2] = 0; idx[2] < n; ++idx[2])
          for (idx[3] = 0; idx[3] < n; ++idx[3]) {
            double s = 0.0;
            int src[4] = {idx[0], idx[1], idx[2], idx[3]};
            const int target = idx[slot];
            for (int m = 0; m < n; ++m) {
              src[slot] = m;
              s += f(m, target) * cur(src[0], src[1], src[2], src[3]);
            }
            next(idx[0], idx[1], idx[2], idx[3]) = s;
          }
    cur = std::move(next);
  }
  return cur;
}

namespace {

struct MetricJets {
  TMat g;
  TMat g_inv;
  Cube<Taylor> gamma;
};

MetricJets metric_jets(const MetricField& metric, const Vector& point, int order, double h0) {
  MetricJets m;
  m.g = field_jet_fd(metric, point, order, h0);
  m.g_inv = inverse(m.g);
  m.gamma = christoffel_jets(m.g, m.g_inv);
  return m;
}

}  // namespace

Cube<double> christoffel(const MetricField& metric, const Vector& point, double h0) {
  return values(metric_jets(metric, point, 1, h0).gamma);
}

Cube<double> covariant_derivative_3tensor(const MetricField& t, const MetricField& metric,
                                          const Vector& point, double h0) {
  const auto m = metric_jets(metric, point, 1, h0);
  const TMat tj = field_jet_fd(t, point, 1, h0);
  const Cube<double> chart = values(covariant_derivative(tj, m.gamma));
  return frame_components(chart, orthonormal_frame(SymTensor2(values(m.g))));
}

Quad<double> riemann_curvature(const MetricField& metric, const Vector& point, double h0) {
  const auto m = metric_jets(metric, point, 2, h0);
  const Quad<double> chart = values(riemann_jets(m.g, m.gamma));
  return frame_components(chart, orthonormal_frame(SymTensor2(values(m.g))));
}

double scalar_curvature(const MetricField& metric, const Vector& point, double h0) {
  const auto m = metric_jets(metric, point, 2, h0);
  return scalar_curvature(riemann_jets(m.g, m.gamma), m.g_inv).value();
}

Vector laplacian_of_immersion(const JetData& u, const TMat& metric) {
  const int n = u.chart_dim();
  const auto d_u = tangent_jets(u.components(), n);
  std::vector<std::vector<TVec>> dd_u(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) dd_u[static_cast<std::size_t>(i)] = tangent_jets(d_u[static_cast<std::size_t>(i)], n);
  const TMat g_inv = inverse(metric);
  const auto gamma = christoffel_jets(metric, g_inv);
  return values(laplacian_jets(d_u, dd_u, g_inv, gamma));
}

Vector laplacian_of_immersion(const JetData& u, const Signature& sig) {
  if (u.order() < 2) fail(ErrorCode::kParameter, "laplacian needs a jet of order >= 2");
  const auto d_u = tangent_jets(u.components(), u.chart_dim());
  return laplacian_of_immersion(u, induced_metric(d_u, sig));
}

}  // namespace blaschke
