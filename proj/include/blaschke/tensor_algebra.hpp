#pragma once

// Small dense arrays over a scalar type that is either double or Taylor, so
// the same formulas serve point values and jet fields.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "blaschke/error.hpp"
#include "blaschke/pseudo_linalg.hpp"
#include "blaschke/taylor.hpp"

namespace blaschke {

template <class S>
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols, const S& fill) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows * cols), fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  S& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * cols_ + j)]; }
  const S& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * cols_ + j)]; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<S> a_;
};

/// Rank-3 and rank-4 component arrays with equal extents.
template <class S>
class Cube {
 public:
  Cube() = default;
  Cube(int n, const S& fill) : n_(n), a_(static_cast<std::size_t>(n * n * n), fill) {}
  int dim() const { return n_; }
  S& operator()(int i, int j, int k) { return a_[static_cast<std::size_t>((i * n_ + j) * n_ + k)]; }
  const S& operator()(int i, int j, int k) const { return a_[static_cast<std::size_t>((i * n_ + j) * n_ + k)]; }

 private:
  int n_ = 0;
  std::vector<S> a_;
};

template <class S>
class Quad {
 public:
  Quad() = default;
  Quad(int n, const S& fill) : n_(n), a_(static_cast<std::size_t>(n * n * n * n), fill) {}
  int dim() const { return n_; }
  S& operator()(int i, int j, int k, int l) {
    return a_[static_cast<std::size_t>(((i * n_ + j) * n_ + k) * n_ + l)];
  }
  const S& operator()(int i, int j, int k, int l) const {
    return a_[static_cast<std::size_t>(((i * n_ + j) * n_ + k) * n_ + l)];
  }

 private:
  int n_ = 0;
  std::vector<S> a_;
};

using TVec = std::vector<Taylor>;
using TMat = Mat<Taylor>;

template <class S>
S zero_like(const S& ref) {
  return constant_like(ref, 0.0);
}

template <class S>
Mat<S> matmul(const Mat<S>& a, const Mat<S>& b) {
  Mat<S> c(a.rows(), b.cols(), zero_like(a(0, 0)));
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      S acc = a(i, 0) * b(0, j);
      for (int k = 1; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      c(i, j) = acc;
    }
  }
  return c;
}

template <class S>
S trace(const Mat<S>& a) {
  S acc = a(0, 0);
  for (int i = 1; i < a.rows(); ++i) acc += a(i, i);
  return acc;
}

/// Gauss-Jordan inverse, pivoting on the point value.
template <class S>
Mat<S> inverse(Mat<S> a) {
  const int n = a.rows();
  Mat<S> inv(n, n, zero_like(a(0, 0)));
  for (int i = 0; i < n; ++i) inv(i, i) = constant_like(a(0, 0), 1.0);
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(value_of(a(i, j))));
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(value_of(a(r, col))) > std::abs(value_of(a(piv, col)))) piv = r;
    }
    if (!(std::abs(value_of(a(piv, col))) > 1e-14 * scale)) {
      fail(ErrorCode::kMetricDegenerate, "singular matrix in jet inverse");
    }
    if (piv != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    const S p = 1.0 / a(col, col);
    for (int j = 0; j < n; ++j) {
      a(col, j) = a(col, j) * p;
      inv(col, j) = inv(col, j) * p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const S f = a(r, col);
      for (int j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

template <class S>
S inner(const std::vector<S>& x, const std::vector<S>& y, const Signature& sig) {
  S acc = x[0] * y[0] * sig.eta(0);
  for (int i = 1; i < sig.total_dim; ++i) acc += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)] * sig.eta(i);
  return acc;
}

template <class S>
std::vector<S> axpy(const std::vector<S>& x, const S& a, const std::vector<S>& y) {
  // x + a*y
  std::vector<S> out = x;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += a * y[i];
  return out;
}

template <class S>
std::vector<S> scaled(const std::vector<S>& x, const S& a) {
  std::vector<S> out = x;
  for (auto& v : out) v = v * a;
  return out;
}

/// seed - sum_a c_a w_a, orthogonal to every w_a.
template <class S>
std::vector<S> project_off(const std::vector<std::vector<S>>& w, const std::vector<S>& seed,
                           const Signature& sig) {
  const int m = static_cast<int>(w.size());
  Mat<S> g(m, m, zero_like(seed[0]));
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) g(a, b) = g(b, a) = inner(w[static_cast<std::size_t>(a)], w[static_cast<std::size_t>(b)], sig);
  const Mat<S> gi = inverse(g);
  std::vector<S> rhs;
  for (int a = 0; a < m; ++a) rhs.push_back(inner(w[static_cast<std::size_t>(a)], seed, sig));
  std::vector<S> out = seed;
  for (int a = 0; a < m; ++a) {
    S c = gi(a, 0) * rhs[0];
    for (int b = 1; b < m; ++b) c += gi(a, b) * rhs[static_cast<std::size_t>(b)];
    out = axpy(out, -c, w[static_cast<std::size_t>(a)]);
  }
  return out;
}

inline Vector values(const TVec& v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i].value();
  return out;
}

inline Matrix values(const TMat& m) {
  Matrix out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).value();
  return out;
}

inline Mat<double> to_mat(const Matrix& m) {
  Mat<double> out(static_cast<int>(m.rows()), static_cast<int>(m.cols()), 0.0);
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

inline Matrix to_matrix(const Mat<double>& m) {
  Matrix out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

inline TVec constant_vector(const Taylor& ref, const Vector& v) {
  TVec out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(ref.constant_like(v(i)));
  return out;
}

}  // namespace blaschke
