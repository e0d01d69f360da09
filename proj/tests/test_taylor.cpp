#include <cmath>
#include <vector>

#include "doctest.h"
#include "blaschke/taylor.hpp"

using namespace blaschke;

namespace {

// Two-variable jets at (x0, y0) of the given order.
std::pair<Taylor, Taylor> xy(double x0, double y0, int order) {
  auto b = MonomialBasis::get(2, order);
  return {Taylor::variable(b, order, 0, x0), Taylor::variable(b, order, 1, y0)};
}

double partial(const Taylor& t, std::initializer_list<int> axes) {
  return t.partial(std::span<const int>(axes.begin(), axes.size()));
}

}  // namespace

TEST_CASE("monomial basis is graded and prefix-stable") {
  auto b = MonomialBasis::get(3, 5);
  CHECK(b->size(0) == 1);
  CHECK(b->size(1) == 4);
  CHECK(b->size(2) == 10);
  CHECK(b->size(5) == 56);
  for (std::size_t i = 1; i < b->size(); ++i) CHECK(b->degree(i - 1) <= b->degree(i));
  const int a1[] = {2, 0, 0, 1}, a2[] = {0, 1, 2, 0};
  CHECK(b->index_of_axes(a1) == b->index_of_axes(a2));
  CHECK(MonomialBasis::get(3, 5).get() == b.get());
}

TEST_CASE("elementary functions match their closed-form derivatives") {
  auto [x, y] = xy(0.3, -0.7, 5);
  const Taylor e = exp(x * y);
  // d/dx exp(xy) = y exp(xy); d2/dxdy = (1 + xy) exp(xy)
  const double v = std::exp(0.3 * -0.7);
  CHECK(partial(e, {0}) == doctest::Approx(-0.7 * v).epsilon(1e-14));
  CHECK(partial(e, {0, 1}) == doctest::Approx((1 + 0.3 * -0.7) * v).epsilon(1e-14));
  CHECK(partial(e, {1, 0}) == partial(e, {0, 1}));

  const Taylor s = sin(x), c = cos(x);
  const Taylor one = s * s + c * c;
  CHECK(one.value() == doctest::Approx(1.0));
  for (std::size_t i = 1; i < one.size(); ++i) CHECK(std::abs(one.coeff(i)) < 1e-14);

  const Taylor ch = cosh(y), sh = sinh(y);
  const Taylor hyp = ch * ch - sh * sh;
  for (std::size_t i = 1; i < hyp.size(); ++i) CHECK(std::abs(hyp.coeff(i)) < 1e-13);

  const Taylor l = log(exp(x + 2.0));
  for (std::size_t i = 0; i < l.size(); ++i) CHECK(std::abs(l.coeff(i) - (x + 2.0).coeff(i)) < 1e-13);

  const Taylor r = sqrt(x * x + 1.0);
  const Taylor back = r * r - (x * x + 1.0);
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(std::abs(back.coeff(i)) < 1e-14);

  const Taylor q = (x + 3.0) / (x + 3.0);
  CHECK(q.value() == doctest::Approx(1.0));
  for (std::size_t i = 1; i < q.size(); ++i) CHECK(std::abs(q.coeff(i)) < 1e-15);
}

TEST_CASE("sin has fifth derivative cos") {
  auto b = MonomialBasis::get(1, 5);
  const Taylor s = sin(Taylor::variable(b, 5, 0, 0.4));
  CHECK(partial(s, {0, 0, 0, 0, 0}) == doctest::Approx(std::cos(0.4)).epsilon(1e-14));
}

TEST_CASE("derivative and truncation lower the order") {
  auto [x, y] = xy(1.0, 2.0, 4);
  const Taylor f = x * x * y;
  const Taylor dx = f.derivative(0);
  CHECK(dx.order() == 3);
  CHECK(dx.value() == doctest::Approx(4.0));            // 2xy
  CHECK(partial(dx, {1}) == doctest::Approx(2.0));      // 2x
  CHECK(f.truncated(2).order() == 2);
  CHECK(f.truncated(2).coeff(0) == f.coeff(0));
}

TEST_CASE("embed moves variables into a wider basis") {
  auto b1 = MonomialBasis::get(1, 3);
  const Taylor t = sin(Taylor::variable(b1, 3, 0, 0.2));
  auto b3 = MonomialBasis::get(3, 3);
  const Taylor e = embed(t, b3, 2);
  CHECK(partial(e, {2, 2}) == doctest::Approx(-std::sin(0.2)));
  CHECK(partial(e, {0}) == 0.0);
  CHECK(partial(e, {1, 2}) == 0.0);
}
