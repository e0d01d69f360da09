#pragma once

// Truncated multivariate Taylor arithmetic.
//
// A Taylor value stores the coefficients c_a = (d^a f)(x0) / a! of a
// polynomial in the chart offsets dx_1..dx_n, truncated at a total degree.
// Monomials are ordered by degree first, so the coefficient vector of an
// order-k value is a prefix of the order-K layout for every k <= K.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace blaschke {

class MonomialBasis {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Shared, immutable basis for `nvars` variables up to `max_order`.
  static std::shared_ptr<const MonomialBasis> get(int nvars, int max_order);

  int nvars() const { return nvars_; }
  int max_order() const { return max_order_; }

  /// Number of monomials of total degree <= order.
  std::size_t size(int order) const { return prefix_[static_cast<std::size_t>(order)]; }
  std::size_t size() const { return exponents_.size(); }

  std::span<const int> exponents(std::size_t i) const {
    return {exponents_[i].data(), exponents_[i].size()};
  }
  int degree(std::size_t i) const { return degree_[i]; }

  /// Index of an exponent vector, or npos when its degree exceeds max_order.
  std::size_t index_of(std::span<const int> exps) const;

  /// Index of the monomial from a sorted (or unsorted) list of axes,
  /// e.g. {0, 0, 2} -> x0^2 x2.
  std::size_t index_of_axes(std::span<const int> axes) const;

  /// Index of (exponent i) + e_var, or npos.
  std::size_t raised(std::size_t i, int var) const {
    return raised_[i * static_cast<std::size_t>(nvars_) + static_cast<std::size_t>(var)];
  }

  /// a! for monomial i.
  double factorial(std::size_t i) const { return factorial_[i]; }

  /// Pairs (i, j) with exps(i) + exps(j) == exps(r).
  std::span<const std::pair<std::uint32_t, std::uint32_t>> product_terms(std::size_t r) const {
    return {terms_.data() + term_start_[r], term_start_[r + 1] - term_start_[r]};
  }

  MonomialBasis(int nvars, int max_order);

 private:
  int nvars_;
  int max_order_;
  std::vector<std::vector<int>> exponents_;
  std::vector<int> degree_;
  std::vector<std::size_t> prefix_;
  std::vector<std::size_t> raised_;
  std::vector<double> factorial_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> terms_;
  std::vector<std::size_t> term_start_;
};

class Taylor {
 public:
  using BasisPtr = std::shared_ptr<const MonomialBasis>;

  Taylor() = default;
  Taylor(BasisPtr basis, int order);

  static Taylor constant(BasisPtr basis, int order, double value);
  /// x0 + dx_var
  static Taylor variable(BasisPtr basis, int order, int var, double x0);

  const BasisPtr& basis() const { return basis_; }
  int order() const { return order_; }
  int nvars() const { return basis_->nvars(); }
  std::size_t size() const { return coeffs_.size(); }

  double value() const { return coeffs_[0]; }
  double coeff(std::size_t i) const { return coeffs_[i]; }
  double& coeff(std::size_t i) { return coeffs_[i]; }
  std::span<const double> coeffs() const { return coeffs_; }

  /// Partial derivative d^a f(x0) for the monomial with the given axes.
  double partial(std::span<const int> axes) const;

  /// d/dx_var, one order lower.
  Taylor derivative(int var) const;
  Taylor truncated(int order) const;

  /// Same basis and order, every coefficient set to `value` at degree 0.
  Taylor constant_like(double value) const { return constant(basis_, order_, value); }

  Taylor& operator+=(const Taylor& o);
  Taylor& operator-=(const Taylor& o);
  Taylor& operator*=(const Taylor& o);
  Taylor& operator+=(double s);
  Taylor& operator-=(double s);
  Taylor& operator*=(double s);
  Taylor& operator/=(double s);

  friend Taylor operator-(Taylor a);
  friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
  friend Taylor operator*(const Taylor& a, const Taylor& b);
  friend Taylor operator/(const Taylor& a, const Taylor& b);
  friend Taylor operator+(Taylor a, double s) { return a += s; }
  friend Taylor operator+(double s, Taylor a) { return a += s; }
  friend Taylor operator-(Taylor a, double s) { return a -= s; }
  friend Taylor operator-(double s, const Taylor& a) { return (-a) += s; }
  friend Taylor operator*(Taylor a, double s) { return a *= s; }
  friend Taylor operator*(double s, Taylor a) { return a *= s; }
  friend Taylor operator/(Taylor a, double s) { return a /= s; }
  friend Taylor operator/(double s, const Taylor& a);

 private:
  BasisPtr basis_;
  int order_ = 0;
  std::vector<double> coeffs_;
};

/// f(a) from the derivatives f^(m)(a.value()), m = 0..a.order().
Taylor compose(const Taylor& a, std::span<const double> derivatives);

Taylor exp(const Taylor& a);
Taylor log(const Taylor& a);
Taylor sqrt(const Taylor& a);
Taylor pow(const Taylor& a, double p);
Taylor sin(const Taylor& a);
Taylor cos(const Taylor& a);
Taylor sinh(const Taylor& a);
Taylor cosh(const Taylor& a);
Taylor inverse(const Taylor& a);

/// Re-expresses `t` in `target`, whose variables offset..offset+t.nvars()-1
/// are the variables of t.
Taylor embed(const Taylor& t, const Taylor::BasisPtr& target, int offset);

/// Uniform access for generic code evaluated on double or Taylor.
inline double constant_like(double, double value) { return value; }
inline Taylor constant_like(const Taylor& ref, double value) { return ref.constant_like(value); }
inline double value_of(double x) { return x; }
inline double value_of(const Taylor& x) { return x.value(); }

}  // namespace blaschke
