#include "blaschke/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "blaschke/error.hpp"

namespace blaschke {

namespace {

void enumerate_degree(int nvars, int degree, int var, std::vector<int>& current,
                      std::vector<std::vector<int>>& out) {
  if (var == nvars - 1) {
    current[static_cast<std::size_t>(var)] = degree;
    out.push_back(current);
    return;
  }
  for (int e = degree; e >= 0; --e) {
    current[static_cast<std::size_t>(var)] = e;
    enumerate_degree(nvars, degree - e, var + 1, current, out);
  }
  current[static_cast<std::size_t>(var)] = 0;
}

double factorial_of(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

MonomialBasis::MonomialBasis(int nvars, int max_order) : nvars_(nvars), max_order_(max_order) {
  if (nvars < 1 || max_order < 0) fail(ErrorCode::kParameter, "monomial basis needs nvars >= 1");
  std::vector<int> current(static_cast<std::size_t>(nvars), 0);
  prefix_.clear();
  for (int d = 0; d <= max_order; ++d) {
    enumerate_degree(nvars, d, 0, current, exponents_);
    prefix_.push_back(exponents_.size());
  }
  const std::size_t m = exponents_.size();
  degree_.resize(m);
  factorial_.resize(m);
  std::map<std::vector<int>, std::size_t> lookup;
  for (std::size_t i = 0; i < m; ++i) {
    int deg = 0;
    double f = 1.0;
    for (int e : exponents_[i]) {
      deg += e;
      f *= factorial_of(e);
    }
    degree_[i] = deg;
    factorial_[i] = f;
    lookup.emplace(exponents_[i], i);
  }
  raised_.assign(m * static_cast<std::size_t>(nvars), npos);
  for (std::size_t i = 0; i < m; ++i) {
    if (degree_[i] == max_order) continue;
    for (int v = 0; v < nvars; ++v) {
      auto e = exponents_[i];
      ++e[static_cast<std::size_t>(v)];
      raised_[i * static_cast<std::size_t>(nvars) + static_cast<std::size_t>(v)] = lookup.at(e);
    }
  }
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> per_result(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (degree_[i] + degree_[j] > max_order) continue;
      std::vector<int> e(static_cast<std::size_t>(nvars));
      for (std::size_t v = 0; v < e.size(); ++v) e[v] = exponents_[i][v] + exponents_[j][v];
      per_result[lookup.at(e)].emplace_back(static_cast<std::uint32_t>(i),
                                            static_cast<std::uint32_t>(j));
    }
  }
  term_start_.assign(m + 1, 0);
  for (std::size_t r = 0; r < m; ++r) {
    term_start_[r + 1] = term_start_[r] + per_result[r].size();
    terms_.insert(terms_.end(), per_result[r].begin(), per_result[r].end());
  }
}

std::shared_ptr<const MonomialBasis> MonomialBasis::get(int nvars, int max_order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{nvars, max_order}];
  if (!slot) slot = std::make_shared<const MonomialBasis>(nvars, max_order);
  return slot;
}

std::size_t MonomialBasis::index_of(std::span<const int> exps) const {
  if (static_cast<int>(exps.size()) != nvars_) fail(ErrorCode::kDimensionMismatch, "exponent length");
  int deg = 0;
  for (int e : exps) {
    if (e < 0) return npos;
    deg += e;
  }
  if (deg > max_order_) return npos;
  std::size_t idx = 0;
  for (int v = 0; v < nvars_; ++v) {
    for (int k = 0; k < exps[static_cast<std::size_t>(v)]; ++k) idx = raised(idx, v);
  }
  return idx;
}

std::size_t MonomialBasis::index_of_axes(std::span<const int> axes) const {
  std::vector<int> e(static_cast<std::size_t>(nvars_), 0);
  for (int a : axes) {
    if (a < 0 || a >= nvars_) fail(ErrorCode::kDimensionMismatch, "axis out of range");
    ++e[static_cast<std::size_t>(a)];
  }
  return index_of(e);
}

Taylor::Taylor(BasisPtr basis, int order)
    : basis_(std::move(basis)), order_(order), coeffs_(basis_->size(order), 0.0) {}

Taylor Taylor::constant(BasisPtr basis, int order, double value) {
  Taylor t(std::move(basis), order);
  t.coeffs_[0] = value;
  return t;
}

Taylor Taylor::variable(BasisPtr basis, int order, int var, double x0) {
  Taylor t(std::move(basis), order);
  t.coeffs_[0] = x0;
  if (order >= 1) t.coeffs_[t.basis_->raised(0, var)] = 1.0;
  return t;
}

double Taylor::partial(std::span<const int> axes) const {
  if (static_cast<int>(axes.size()) > order_) fail(ErrorCode::kParameter, "partial beyond jet order");
  const std::size_t i = basis_->index_of_axes(axes);
  return coeffs_[i] * basis_->factorial(i);
}

Taylor Taylor::derivative(int var) const {
  if (order_ == 0) fail(ErrorCode::kParameter, "derivative of an order-0 jet: jet order exhausted");
  Taylor d(basis_, order_ - 1);
  const auto& b = *basis_;
  for (std::size_t i = 0; i < d.coeffs_.size(); ++i) {
    const std::size_t up = b.raised(i, var);
    d.coeffs_[i] = coeffs_[up] * static_cast<double>(b.exponents(up)[static_cast<std::size_t>(var)]);
  }
  return d;
}

Taylor Taylor::truncated(int order) const {
  Taylor t(basis_, std::min(order, order_));
  std::copy_n(coeffs_.begin(), t.coeffs_.size(), t.coeffs_.begin());
  return t;
}

Taylor& Taylor::operator+=(const Taylor& o) {
  if (o.order_ < order_) *this = truncated(o.order_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

Taylor& Taylor::operator-=(const Taylor& o) {
  if (o.order_ < order_) *this = truncated(o.order_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

Taylor& Taylor::operator*=(const Taylor& o) { return *this = *this * o; }

Taylor& Taylor::operator+=(double s) {
  coeffs_[0] += s;
  return *this;
}
Taylor& Taylor::operator-=(double s) {
  coeffs_[0] -= s;
  return *this;
}
Taylor& Taylor::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}
Taylor& Taylor::operator/=(double s) {
  for (double& c : coeffs_) c /= s;
  return *this;
}

Taylor operator-(Taylor a) {
  for (double& c : a.coeffs_) c = -c;
  return a;
}

Taylor operator*(const Taylor& a, const Taylor& b) {
  const int order = std::min(a.order_, b.order_);
  Taylor r(a.basis_, order);
  const auto& basis = *a.basis_;
  for (std::size_t k = 0; k < r.coeffs_.size(); ++k) {
    double acc = 0.0;
    for (const auto& [i, j] : basis.product_terms(k)) acc += a.coeffs_[i] * b.coeffs_[j];
    r.coeffs_[k] = acc;
  }
  return r;
}

Taylor operator/(const Taylor& a, const Taylor& b) { return a * inverse(b); }
Taylor operator/(double s, const Taylor& a) { return inverse(a) *= s; }

Taylor compose(const Taylor& a, std::span<const double> derivatives) {
  const int order = a.order();
  Taylor delta = a;
  delta.coeff(0) = 0.0;
  Taylor result = a.constant_like(derivatives[0]);
  Taylor power = a.constant_like(1.0);
  double factorial = 1.0;
  for (int m = 1; m <= order; ++m) {
    power = power * delta;
    factorial *= m;
    const double w = derivatives[static_cast<std::size_t>(m)] / factorial;
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < result.size(); ++i) result.coeff(i) += w * power.coeff(i);
  }
  return result;
}

namespace {

std::vector<double> derivative_buffer(const Taylor& a) {
  return std::vector<double>(static_cast<std::size_t>(a.order()) + 1, 0.0);
}

}  // namespace

Taylor exp(const Taylor& a) {
  auto d = derivative_buffer(a);
  std::fill(d.begin(), d.end(), std::exp(a.value()));
  return compose(a, d);
}

Taylor log(const Taylor& a) {
  const double x = a.value();
  if (!(x > 0.0)) fail(ErrorCode::kNonFinite, "log of non-positive Taylor value");
  auto d = derivative_buffer(a);
  d[0] = std::log(x);
  double f = 1.0;  // (m-1)!
  for (std::size_t m = 1; m < d.size(); ++m) {
    if (m > 1) f *= static_cast<double>(m - 1);
    d[m] = ((m % 2 == 1) ? 1.0 : -1.0) * f / std::pow(x, static_cast<double>(m));
  }
  return compose(a, d);
}

Taylor pow(const Taylor& a, double p) {
  const double x = a.value();
  if (!(x > 0.0)) fail(ErrorCode::kNonFinite, "pow of non-positive Taylor value");
  auto d = derivative_buffer(a);
  double coef = 1.0;
  for (std::size_t m = 0; m < d.size(); ++m) {
    d[m] = coef * std::pow(x, p - static_cast<double>(m));
    coef *= p - static_cast<double>(m);
  }
  return compose(a, d);
}

Taylor sqrt(const Taylor& a) { return pow(a, 0.5); }

Taylor inverse(const Taylor& a) {
  const double x = a.value();
  if (x == 0.0 || !std::isfinite(x)) fail(ErrorCode::kNonFinite, "inverse of zero Taylor value");
  auto d = derivative_buffer(a);
  double coef = 1.0;
  for (std::size_t m = 0; m < d.size(); ++m) {
    d[m] = coef / std::pow(x, static_cast<double>(m + 1));
    coef *= -static_cast<double>(m + 1);
  }
  return compose(a, d);
}

Taylor sin(const Taylor& a) {
  auto d = derivative_buffer(a);
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double cycle[4] = {s, c, -s, -c};
  for (std::size_t m = 0; m < d.size(); ++m) d[m] = cycle[m % 4];
  return compose(a, d);
}

Taylor cos(const Taylor& a) {
  auto d = derivative_buffer(a);
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double cycle[4] = {c, -s, -c, s};
  for (std::size_t m = 0; m < d.size(); ++m) d[m] = cycle[m % 4];
  return compose(a, d);
}

Taylor sinh(const Taylor& a) {
  auto d = derivative_buffer(a);
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  for (std::size_t m = 0; m < d.size(); ++m) d[m] = (m % 2 == 0) ? s : c;
  return compose(a, d);
}

Taylor cosh(const Taylor& a) {
  auto d = derivative_buffer(a);
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  for (std::size_t m = 0; m < d.size(); ++m) d[m] = (m % 2 == 0) ? c : s;
  return compose(a, d);
}

Taylor embed(const Taylor& t, const Taylor::BasisPtr& target, int offset) {
  const auto& src = *t.basis();
  if (offset < 0 || offset + src.nvars() > target->nvars() || t.order() > target->max_order()) {
    fail(ErrorCode::kDimensionMismatch, "embed: target basis too small");
  }
  Taylor out(target, t.order());
  std::vector<int> e(static_cast<std::size_t>(target->nvars()), 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto ex = src.exponents(i);
    for (int v = 0; v < src.nvars(); ++v) e[static_cast<std::size_t>(offset + v)] = ex[static_cast<std::size_t>(v)];
    out.coeff(target->index_of(e)) = t.coeff(i);
  }
  return out;
}

}  // namespace blaschke
