#pragma once

// Signature-aware dense linear algebra on small matrices.

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace blaschke {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// R^N_s: the first `time_dims` coordinates carry the minus sign.
struct Signature {
  int total_dim = 0;
  int time_dims = 0;

  Signature() = default;
  Signature(int n, int s);

  double eta(int i) const { return i < time_dims ? -1.0 : 1.0; }
  Matrix metric() const;
  bool operator==(const Signature&) const = default;
};

/// Components of a symmetric (0,2) tensor. Symmetry is enforced on write.
class SymTensor2 {
 public:
  SymTensor2() = default;
  explicit SymTensor2(int dim) : m_(Matrix::Zero(dim, dim)) {}
  /// Symmetrizes the input as (M + M^T) / 2.
  explicit SymTensor2(const Matrix& m);

  static SymTensor2 identity(int dim) { return SymTensor2(Matrix(Matrix::Identity(dim, dim))); }
  static SymTensor2 diagonal(std::span<const double> d);

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  void set(int i, int j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

struct EigenCluster {
  double value = 0.0;
  int multiplicity = 0;
  double spread = 0.0;
};

struct EigenClusterSet {
  std::vector<EigenCluster> clusters;
  double tolerance = 0.0;

  int count() const { return static_cast<int>(clusters.size()); }
  std::vector<int> multiplicities() const;
};

/// Eigenpairs of the g-self-adjoint operator g^{-1} T.
struct SelfAdjointEigen {
  Vector values;   // ascending
  Matrix vectors;  // columns, g-orthonormal
};

enum class CausalType { kTimeLike, kSpaceLike, kNullPair };

double inner(const Vector& xi, const Vector& eta, const Signature& sig);

/// Gram matrix <v_a, v_b> of a list of ambient vectors.
Matrix gram(std::span<const Vector> vectors, const Signature& sig);

/// Cholesky-reduced generalized symmetric eigenproblem T v = lambda g v.
/// Throws kMetricDegenerate when g is not positive definite.
SelfAdjointEigen self_adjoint_eigen(const SymTensor2& t, const SymTensor2& g);

/// Columns form a g-orthonormal basis (F^T g F = I), F = L^{-T} with g = L L^T.
Matrix orthonormal_frame(const SymTensor2& g);

/// Components of a (0,2) tensor in the frame F: F^T T F.
Matrix frame_components(const Matrix& t, const Matrix& frame);

/// Groups ascending-sorted copies of `values`: a value joins the open cluster
/// when within `tol` of its first member. Adjacent cluster means closer than
/// 2*tol raise kClusterAmbiguity.
EigenClusterSet cluster(std::span<const double> values, double tol);

EigenClusterSet eigen_clusters(const SymTensor2& t, const SymTensor2& g, double tol);

/// Unit vector spanning the orthogonal complement of `vectors`, normalized to
/// <v,v> = -1 (time-like, null-pair) or +1 (space-like); first nonzero
/// coordinate positive.
Vector orthogonal_complement_unit(std::span<const Vector> vectors, const Signature& sig,
                                  CausalType type);

/// Unnormalized projection of `seed` off span(vectors).
Vector project_off(std::span<const Vector> vectors, const Vector& seed, const Signature& sig);

}  // namespace blaschke
