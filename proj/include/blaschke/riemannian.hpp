#pragma once

// Levi-Civita calculus on chart-component jet fields, plus finite-difference
// entry points for metrics given as plain point maps.

#include <functional>

#include "blaschke/differentiation.hpp"
#include "blaschke/tensor_algebra.hpp"

namespace blaschke {

/// gamma(k, i, j) = Gamma^k_{ij}; one order below the metric.
Cube<Taylor> christoffel_jets(const TMat& g, const TMat& g_inv);

/// f_{;ij} = d_i d_j f - Gamma^k_{ij} d_k f
TMat covariant_hessian(const Taylor& f, const Cube<Taylor>& gamma);

/// out(i, j, k) = T_{ij;k}
Cube<Taylor> covariant_derivative(const TMat& t, const Cube<Taylor>& gamma);

/// out(i, j) = C_{i;j}
TMat covariant_derivative(const TVec& c, const Cube<Taylor>& gamma);

/// R_{ijkl} with R_{ijij} the sectional curvature of span(e_i, e_j) for
/// orthonormal e_i, e_j (unit sphere: +1).
Quad<Taylor> riemann_jets(const TMat& g, const Cube<Taylor>& gamma);

Taylor scalar_curvature(const Quad<Taylor>& riemann, const TMat& g_inv);

/// Metric trace of the ambient-valued covariant Hessian of u.
TVec laplacian_jets(const std::vector<TVec>& d_u, const std::vector<std::vector<TVec>>& dd_u,
                    const TMat& g_inv, const Cube<Taylor>& gamma);

/// First fundamental form <d_i u, d_j u> as jets.
TMat induced_metric(const std::vector<TVec>& d_u, const Signature& sig);

/// d_i u for every chart axis.
std::vector<TVec> tangent_jets(const std::vector<Taylor>& u, int chart_dim);

using MetricField = std::function<SymTensor2(const Vector&)>;

/// Jet of a tensor field from central differences of its entries.
TMat field_jet_fd(const MetricField& field, const Vector& point, int order, double h0);

/// Chart-component Christoffel symbols of a metric field.
Cube<double> christoffel(const MetricField& metric, const Vector& point, double h0 = 1e-2);

/// T_{ij;k} in g-orthonormal components.
Cube<double> covariant_derivative_3tensor(const MetricField& t, const MetricField& metric,
                                          const Vector& point, double h0 = 1e-2);

/// R_{ijkl} in g-orthonormal components.
Quad<double> riemann_curvature(const MetricField& metric, const Vector& point, double h0 = 1e-2);

double scalar_curvature(const MetricField& metric, const Vector& point, double h0 = 1e-2);

/// Delta u = g^{ij}(d_i d_j u - Gamma^k_{ij} d_k u) for the induced metric of u.
/// Needs a jet of order >= 2.
Vector laplacian_of_immersion(const JetData& u, const Signature& sig);

/// Same, for an explicit metric jet (order >= 1 in the chart variables of u).
Vector laplacian_of_immersion(const JetData& u, const TMat& metric);

/// Components of a rank-3 / rank-4 value array in a frame (columns).
Cube<double> frame_components(const Cube<double>& t, const Matrix& frame);
Quad<double> frame_components(const Quad<double>& t, const Matrix& frame);
Cube<double> values(const Cube<Taylor>& t);
Quad<double> values(const Quad<Taylor>& t);

}  // namespace blaschke
