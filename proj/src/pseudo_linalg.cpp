#include "blaschke/pseudo_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "blaschke/error.hpp"

namespace blaschke {

Signature::Signature(int n, int s) : total_dim(n), time_dims(s) {
  if (n < 1 || s < 0 || s > n) fail(ErrorCode::kParameter, "signature needs 0 <= s <= N, N >= 1");
}

Matrix Signature::metric() const {
  Matrix m = Matrix::Identity(total_dim, total_dim);
  for (int i = 0; i < time_dims; ++i) m(i, i) = -1.0;
  return m;
}

SymTensor2::SymTensor2(const Matrix& m) {
  if (m.rows() != m.cols()) fail(ErrorCode::kDimensionMismatch, "symmetric tensor must be square");
  m_ = 0.5 * (m + m.transpose());
}

SymTensor2 SymTensor2::diagonal(std::span<const double> d) {
  SymTensor2 t(static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) t.set(static_cast<int>(i), static_cast<int>(i), d[i]);
  return t;
}

std::vector<int> EigenClusterSet::multiplicities() const {
  std::vector<int> m;
  for (const auto& c : clusters) m.push_back(c.multiplicity);
  return m;
}

double inner(const Vector& xi, const Vector& eta, const Signature& sig) {
  if (xi.size() != sig.total_dim || eta.size() != sig.total_dim) {
    fail(ErrorCode::kDimensionMismatch, "inner product: vector length differs from signature");
  }
  double acc = 0.0;
  for (int i = 0; i < sig.total_dim; ++i) acc += sig.eta(i) * xi(i) * eta(i);
  return acc;
}

Matrix gram(std::span<const Vector> vectors, const Signature& sig) {
  const auto m = static_cast<Eigen::Index>(vectors.size());
  Matrix g(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = a; b < m; ++b) {
      g(a, b) = g(b, a) = inner(vectors[static_cast<std::size_t>(a)],
                                vectors[static_cast<std::size_t>(b)], sig);
    }
  }
  return g;
}

namespace {

Eigen::LLT<Matrix> checked_cholesky(const SymTensor2& g) {
  Eigen::LLT<Matrix> llt(g.matrix());
  const double scale = std::max(g.matrix().cwiseAbs().maxCoeff(), 1e-300);
  bool ok = llt.info() == Eigen::Success;
  if (ok) {
    const Matrix l = llt.matrixL();
    for (Eigen::Index i = 0; i < l.rows(); ++i) {
      if (!(l(i, i) * l(i, i) > 1e-14 * scale)) ok = false;
    }
  }
  if (!ok) fail(ErrorCode::kMetricDegenerate, "metric degenerate: not positive definite");
  return llt;
}

}  // namespace

SelfAdjointEigen self_adjoint_eigen(const SymTensor2& t, const SymTensor2& g) {
  if (t.dim() != g.dim()) fail(ErrorCode::kDimensionMismatch, "eigenproblem: T and g differ in size");
  const auto llt = checked_cholesky(g);
  const Matrix l = llt.matrixL();
  // C = L^{-1} T L^{-T}
  Matrix c = l.triangularView<Eigen::Lower>().solve(t.matrix());
  c = l.triangularView<Eigen::Lower>().solve(c.transpose()).transpose();
  c = 0.5 * (c + c.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(c);
  SelfAdjointEigen out;
  out.values = solver.eigenvalues();
  out.vectors = l.transpose().triangularView<Eigen::Upper>().solve(solver.eigenvectors());
  return out;
}

Matrix orthonormal_frame(const SymTensor2& g) {
  const auto llt = checked_cholesky(g);
  const Matrix l = llt.matrixL();
  const Matrix id = Matrix::Identity(g.dim(), g.dim());
  return l.transpose().triangularView<Eigen::Upper>().solve(id);
}

Matrix frame_components(const Matrix& t, const Matrix& frame) {
  return frame.transpose() * t * frame;
}

EigenClusterSet cluster(std::span<const double> values, double tol) {
  if (!(tol > 0.0)) fail(ErrorCode::kParameter, "cluster tolerance must be positive");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  EigenClusterSet set;
  set.tolerance = tol;
  std::size_t start = 0;
  auto close = [&](std::size_t begin, std::size_t end) {
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) sum += v[i];
    set.clusters.push_back({sum / static_cast<double>(end - begin), static_cast<int>(end - begin),
                            v[end - 1] - v[begin]});
  };
  for (std::size_t i = 1; i <= v.size(); ++i) {
    if (i == v.size() || v[i] - v[start] > tol) {
      if (i > start) close(start, i);
      start = i;
    }
  }
  for (std::size_t c = 1; c < set.clusters.size(); ++c) {
    const double gap = set.clusters[c].value - set.clusters[c - 1].value;
    if (gap <= 2.0 * tol) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "cluster ambiguity: representatives " << set.clusters[c - 1].value << " and "
          << set.clusters[c].value << " differ by " << gap << " <= 2*tol (" << 2.0 * tol << ")";
      fail(ErrorCode::kClusterAmbiguity, msg.str());
    }
  }
  return set;
}

EigenClusterSet eigen_clusters(const SymTensor2& t, const SymTensor2& g, double tol) {
  const auto eig = self_adjoint_eigen(t, g);
  return cluster(std::span<const double>(eig.values.data(), static_cast<std::size_t>(eig.values.size())),
                 tol);
}

Vector project_off(std::span<const Vector> vectors, const Vector& seed, const Signature& sig) {
  if (vectors.empty()) return seed;
  const Matrix g = gram(vectors, sig);
  Vector rhs(static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t a = 0; a < vectors.size(); ++a) rhs(static_cast<Eigen::Index>(a)) = inner(vectors[a], seed, sig);
  Eigen::FullPivLU<Matrix> lu(g);
  lu.setThreshold(1e-12);
  if (lu.rank() < g.rows()) {
    fail(ErrorCode::kDegenerateComplement, "degenerate complement: Gram matrix singular");
  }
  const Vector coef = lu.solve(rhs);
  Vector v = seed;
  for (std::size_t a = 0; a < vectors.size(); ++a) v -= coef(static_cast<Eigen::Index>(a)) * vectors[a];
  return v;
}

Vector orthogonal_complement_unit(std::span<const Vector> vectors, const Signature& sig,
                                  CausalType type) {
  for (const auto& v : vectors) {
    if (v.size() != sig.total_dim) fail(ErrorCode::kDimensionMismatch, "complement: vector length");
  }
  if (static_cast<int>(vectors.size()) != sig.total_dim - 1) {
    fail(ErrorCode::kDegenerateComplement, "complement must be one-dimensional");
  }
  // Any seed outside the span gives the same line; take the basis vector with
  // the largest projected norm.
  Vector best;
  double best_norm = -1.0;
  for (int i = 0; i < sig.total_dim; ++i) {
    Vector e = Vector::Zero(sig.total_dim);
    e(i) = 1.0;
    Vector p = project_off(vectors, e, sig);
    const double n = std::abs(inner(p, p, sig));
    if (n > best_norm) {
      best_norm = n;
      best = p;
    }
  }
  const double q = inner(best, best, sig);
  const double scale = best.squaredNorm();
  if (!(std::abs(q) > 1e-12 * std::max(scale, 1e-300))) {
    fail(ErrorCode::kDegenerateComplement, "degenerate complement: null direction");
  }
  const bool want_time = type != CausalType::kSpaceLike;
  if (want_time != (q < 0.0)) {
    fail(ErrorCode::kCausalType, want_time ? "complement is space-like, time-like requested"
                                           : "complement is time-like, space-like requested");
  }
  Vector v = best / std::sqrt(std::abs(q));
  const double cut = 1e-12 * v.cwiseAbs().maxCoeff();
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > cut) {
      if (v(i) < 0.0) v = -v;
      break;
    }
  }
  return v;
}

}  // namespace blaschke
