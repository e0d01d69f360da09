#include "blaschke/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "blaschke/error.hpp"
#include "blaschke/riemannian.hpp"

namespace blaschke {

std::vector<Taylor> hyperbolic_chart(std::span<const Taylor> x, double r) {
  const std::size_t k = x.size();
  std::vector<Taylor> out(k + 1, x[0].constant_like(r));
  // suffix[j] = prod_{i >= j} cosh x_i
  std::vector<Taylor> suffix(k + 1, x[0].constant_like(1.0));
  for (std::size_t j = k; j-- > 0;) suffix[j] = cosh(x[j]) * suffix[j + 1];
  out[0] = r * suffix[0];
  for (std::size_t j = 0; j < k; ++j) out[j + 1] = r * sinh(x[j]) * suffix[j + 1];
  return out;
}

std::vector<Taylor> sphere_chart(std::span<const Taylor> y, double radius) {
  const std::size_t q = y.size();
  std::vector<Taylor> out(q + 1, y[0].constant_like(radius));
  std::vector<Taylor> suffix(q + 1, y[0].constant_like(1.0));
  for (std::size_t j = q; j-- > 0;) suffix[j] = cos(y[j]) * suffix[j + 1];
  out[0] = radius * suffix[0];
  for (std::size_t j = 0; j < q; ++j) out[j + 1] = radius * sin(y[j]) * suffix[j + 1];
  return out;
}

namespace {

constexpr double kHypBox = 0.6;
constexpr double kHypDomain = 4.0;
constexpr double kSphBox = 0.6;
constexpr double kSphDomain = 1.4;
constexpr double kFlatBox = 1.0;
constexpr double kFlatDomain = 10.0;

void require(bool ok, const std::string& msg) {
  if (!ok) fail(ErrorCode::kParameter, msg);
}

// Chart box built from per-axis (box, domain) half-widths around 0.
struct ChartLayout {
  std::vector<double> box_lo, box_hi, dom_lo, dom_hi;
  void add(int count, double box, double domain) {
    for (int i = 0; i < count; ++i) {
      box_lo.push_back(-box);
      box_hi.push_back(box);
      dom_lo.push_back(-domain);
      dom_hi.push_back(domain);
    }
  }
  void add_interval(double blo, double bhi, double dlo, double dhi) {
    box_lo.push_back(blo);
    box_hi.push_back(bhi);
    dom_lo.push_back(dlo);
    dom_hi.push_back(dhi);
  }
  static Vector vec(const std::vector<double>& v) { return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())); }
};

void apply_layout(CatalogSurface& s, Immersion& imm, const ChartLayout& l) {
  imm.domain_lo = ChartLayout::vec(l.dom_lo);
  imm.domain_hi = ChartLayout::vec(l.dom_hi);
  s.box_lo = ChartLayout::vec(l.box_lo);
  s.box_hi = ChartLayout::vec(l.box_hi);
}

// Plain evaluation through order-0 Taylor arithmetic.
EvalFn eval_from_exact(TaylorFn exact) {
  return [exact = std::move(exact)](const Vector& x) {
    const auto vars = chart_variables(x, 0);
    const auto c = exact(vars);
    Vector v(static_cast<Eigen::Index>(c.size()));
    for (std::size_t i = 0; i < c.size(); ++i) v(static_cast<Eigen::Index>(i)) = c[i].value();
    return v;
  };
}

std::vector<ExpectedCluster> merged(std::vector<ExpectedCluster> c) {
  std::sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
  std::vector<ExpectedCluster> out;
  for (const auto& x : c) {
    if (!out.empty() && std::abs(out.back().value - x.value) <= 1e-9 * std::max(1.0, std::abs(x.value))) {
      out.back().multiplicity += x.multiplicity;
    } else {
      out.push_back(x);
    }
  }
  return out;
}

// Product hypersurface with constant shape values lambda (multiplicity k)
// and mu (multiplicity n-k) in an ambient of curvature eps.
ExpectedRecord product_record(int k, int n, double lambda, double mu, double eps) {
  ExpectedRecord r;
  const double e2 = k * (n - k) * (lambda - mu) * (lambda - mu) / (n - 1.0);
  const double h = (k * lambda + (n - k) * mu) / n;
  auto a_of = [&](double l) { return (-h * l + 0.5 * (h * h + eps)) / e2; };
  r.a = merged({{a_of(lambda), k}, {a_of(mu), n - k}});
  r.b = merged({{(lambda - h) / std::sqrt(e2), k}, {(mu - h) / std::sqrt(e2), n - k}});
  r.e2tau = [e2](const Vector&) { return e2; };
  std::ostringstream law;
  law.precision(17);
  law << "e^{2tau} constant = " << e2;
  r.tau_law = law.str();
  r.notes.emplace_back("mean_curvature", h);
  return r;
}

ParamSpec int_param(const std::string& name, double lo, double hi, double def, std::string rule = {}) {
  return ParamSpec{name, true, lo, hi, false, false, def, std::move(rule)};
}

ParamSpec real_param(const std::string& name, double lo, double hi, bool lo_open, bool hi_open, double def,
                     std::string rule = {}) {
  return ParamSpec{name, false, lo, hi, lo_open, hi_open, def, std::move(rule)};
}

int as_int(const ParamMap& p, const std::string& name) { return static_cast<int>(std::lround(p.at(name))); }

}  // namespace

CatalogSurface make_cylinder_desitter(int k, int n, double r) {
  require(k >= 1 && k <= n - 1, "cylinder_desitter needs 1 <= k <= n-1");
  require(r > 0.0, "cylinder_desitter needs r > 0");
  CatalogSurface s;
  s.id = "cylinder_desitter";
  s.params = {{"k", k}, {"n", n}, {"r", r}};
  s.epsilon = 1.0;
  Immersion& imm = s.imm;
  imm.chart_dim = n;
  imm.ambient = Ambient{Signature(n + 2, 1), AmbientConstraint::kSphere, 1.0};
  const double big = std::sqrt(1.0 + r * r);
  imm.exact = [k, r, big](std::span<const Taylor> x) {
    auto a = hyperbolic_chart(x.subspan(0, static_cast<std::size_t>(k)), r);
    auto b = sphere_chart(x.subspan(static_cast<std::size_t>(k)), big);
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  imm.eval = eval_from_exact(imm.exact);
  imm.label = "H^k(r) x S^{n-k}(sqrt(1+r^2)) in de Sitter space";
  ChartLayout l;
  l.add(k, kHypBox, kHypDomain);
  l.add(n - k, kSphBox, kSphDomain);
  apply_layout(s, imm, l);
  s.expected = product_record(k, n, big / r, r / big, 1.0);
  s.expected.branch = Branch::kCylinderS;
  return s;
}

CatalogSurface make_cylinder_flat(int k, int n) {
  require(k >= 1 && k <= n - 1, "cylinder_flat needs 1 <= k <= n-1");
  CatalogSurface s;
  s.id = "cylinder_flat";
  s.params = {{"k", k}, {"n", n}};
  s.epsilon = 0.0;
  Immersion& imm = s.imm;
  imm.chart_dim = n;
  imm.ambient = Ambient{Signature(n + 1, 1), AmbientConstraint::kNone, 1.0};
  imm.exact = [k](std::span<const Taylor> x) {
    auto a = hyperbolic_chart(x.subspan(0, static_cast<std::size_t>(k)), 1.0);
    for (std::size_t i = static_cast<std::size_t>(k); i < x.size(); ++i) a.push_back(x[i]);
    return a;
  };
  imm.eval = eval_from_exact(imm.exact);
  imm.label = "H^k x R^{n-k} in Minkowski space";
  ChartLayout l;
  l.add(k, kHypBox, kHypDomain);
  l.add(n - k, kFlatBox, kFlatDomain);
  apply_layout(s, imm, l);
  s.expected = product_record(k, n, 1.0, 0.0, 0.0);
  s.expected.branch = Branch::kCylinderFlat;
  return s;
}

namespace {

// H^k(r1) x H^{n-k}(r2) with r1^2 + r2^2 = 1 in anti-de Sitter space; both
// time-like coordinates first.
CatalogSurface ads_product(int k, int n, double r1, const std::string& id) {
  CatalogSurface s;
  s.id = id;
  s.epsilon = -1.0;
  const double r2 = std::sqrt(1.0 - r1 * r1);
  Immersion& imm = s.imm;
  imm.chart_dim = n;
  imm.ambient = Ambient{Signature(n + 2, 2), AmbientConstraint::kHyperbolic, 1.0};
  imm.exact = [k, r1, r2](std::span<const Taylor> x) {
    const auto a = hyperbolic_chart(x.subspan(0, static_cast<std::size_t>(k)), r1);
    const auto b = hyperbolic_chart(x.subspan(static_cast<std::size_t>(k)), r2);
    std::vector<Taylor> out{a[0], b[0]};
    out.insert(out.end(), a.begin() + 1, a.end());
    out.insert(out.end(), b.begin() + 1, b.end());
    return out;
  };
  imm.eval = eval_from_exact(imm.exact);
  ChartLayout l;
  l.add(k, kHypBox, kHypDomain);
  l.add(n - k, kHypBox, kHypDomain);
  apply_layout(s, imm, l);
  s.expected = product_record(k, n, r2 / r1, -r1 / r2, -1.0);
  return s;
}

}  // namespace

CatalogSurface make_cylinder_ads(int k, int n, double r) {
  require(k >= 1 && k <= n - 1, "cylinder_ads needs 1 <= k <= n-1");
  require(r > 0.0 && r < 1.0, "cylinder_ads needs 0 < r < 1");
  CatalogSurface s = ads_product(k, n, r, "cylinder_ads");
  s.params = {{"k", k}, {"n", n}, {"r", r}};
  s.imm.label = "H^k(r) x H^{n-k}(sqrt(1-r^2)) in anti-de Sitter space";
  // r^2 = k/n makes the product maximal and the Blaschke tensor isotropic.
  s.expected.branch = s.expected.a.size() == 1 ? Branch::kCase1Isotropic : Branch::kCylinderH;
  return s;
}

CatalogSurface make_maximal_ads_product(int p, int n) {
  require(p >= 1 && p <= n - 1, "maximal_ads_product needs 1 <= p <= n-1");
  CatalogSurface s = ads_product(p, n, std::sqrt(static_cast<double>(p) / n), "maximal_ads_product");
  s.params = {{"p", p}, {"n", n}};
  s.imm.label = "maximal H^p(sqrt(p/n)) x H^{n-p}(sqrt((n-p)/n)) in anti-de Sitter space";
  s.expected.branch = Branch::kCase1Isotropic;
  return s;
}

WarpedConstants warped_constants(int p, int q, int n, double r) {
  WarpedConstants w;
  const double s = std::sqrt(r * r + 1.0);
  w.alpha = s / r;
  w.beta = r / s;
  w.c = (p * w.alpha + q * w.beta) / n;
  w.d = (p * (n - p) * w.alpha * w.alpha + q * (n - q) * w.beta * w.beta - 2.0 * p * q) / (n - 1.0);
  const double c2 = w.c * w.c;
  w.a1 = (c2 - 2.0 * w.c * w.alpha + 1.0) / (2.0 * w.d);
  w.a2 = (c2 - 2.0 * w.c * w.beta + 1.0) / (2.0 * w.d);
  w.a3 = (c2 - 1.0) / (2.0 * w.d);
  const double sd = std::sqrt(w.d);
  w.b1 = (w.alpha - w.c) / sd;
  w.b2 = (w.beta - w.c) / sd;
  w.b3 = -w.c / sd;
  return w;
}

CatalogSurface make_warped(int p, int q, int n, double r) {
  require(p >= 1 && q >= 1 && n - p - q - 1 >= 1, "warped needs p, q >= 1 and n-p-q-1 >= 1");
  require(r > 0.0, "warped needs r > 0");
  CatalogSurface s;
  s.id = "warped";
  s.params = {{"p", p}, {"q", q}, {"n", n}, {"r", r}};
  s.epsilon = 0.0;
  Immersion& imm = s.imm;
  imm.chart_dim = n;
  imm.ambient = Ambient{Signature(n + 1, 1), AmbientConstraint::kNone, 1.0};
  const double big = std::sqrt(r * r + 1.0);
  imm.exact = [p, q, r, big](std::span<const Taylor> x) {
    const auto up = static_cast<std::size_t>(p), uq = static_cast<std::size_t>(q);
    const auto a = hyperbolic_chart(x.subspan(0, up), r);
    const auto b = sphere_chart(x.subspan(up, uq), big);
    const Taylor& t = x[up + uq];
    std::vector<Taylor> out;
    for (const auto& c : a) out.push_back(t * c);
    for (const auto& c : b) out.push_back(t * c);
    for (std::size_t i = up + uq + 1; i < x.size(); ++i) out.push_back(x[i]);
    return out;
  };
  imm.eval = eval_from_exact(imm.exact);
  imm.label = "warped product t (H^p(r) x S^q(sqrt(r^2+1))) x R^{n-p-q-1} in Minkowski space";
  ChartLayout l;
  l.add(p, kHypBox, kHypDomain);
  l.add(q, kSphBox, kSphDomain);
  l.add_interval(0.6, 2.0, 0.2, 20.0);
  l.add(n - p - q - 1, kFlatBox, kFlatDomain);
  apply_layout(s, imm, l);

  const WarpedConstants w = warped_constants(p, q, n, r);
  require(w.d > 0.0, "warped parameters give a non-regular surface");
  ExpectedRecord& e = s.expected;
  e.a = merged({{w.a1, p}, {w.a2, q}, {w.a3, n - p - q}});
  e.b = merged({{w.b1, p}, {w.b2, q}, {w.b3, n - p - q}});
  if (e.a.size() == 3) e.branch = Branch::kWarped;
  const int t_axis = p + q;
  const double d = w.d;
  e.e2tau = [d, t_axis](const Vector& x) { return d / (x(t_axis) * x(t_axis)); };
  std::ostringstream law;
  law.precision(17);
  law << "e^{2tau} t^2 constant = " << d;
  e.tau_law = law.str();
  e.notes = {{"c", w.c}, {"d", w.d}, {"alpha", w.alpha}, {"beta", w.beta}};
  // Same constants with the H^p and S^q normal coefficients swapped, for comparison.
  const double pa = r / big, pb = big / r;
  const double pc = (p * r * r + q * (r * r + 1.0)) / (n * r * big);
  const double pd = (p * (n - p) * std::pow(r, 4) - 2.0 * p * q * r * r * (r * r + 1.0) +
                     q * (n - q) * std::pow(r * r + 1.0, 2)) /
                    (n - 1.0);
  e.notes.emplace_back("swapped_normal_c", pc);
  e.notes.emplace_back("swapped_normal_d", pd);
  e.notes.emplace_back("swapped_normal_a1", (pc * pc - 2.0 * pa - 1.0) / (2.0 * pd));
  e.notes.emplace_back("swapped_normal_a2", (pc * pc - 2.0 * pb - 1.0) / (2.0 * pd));
  e.notes.emplace_back("swapped_normal_a3", (pc * pc - 1.0) / (2.0 * pd));
  return s;
}

namespace {

struct Ex12Radii {
  double r, r1, r2, alpha, beta;
};

Ex12Radii ex12_radii(int k, int p, int n) {
  require(k >= 2 && k <= n - 1, "example12 needs 2 <= k <= n-1");
  require(p >= 1 && p <= k - 1, "example12 needs 1 <= p <= k-1");
  Ex12Radii x;
  const double r2 = static_cast<double>(k) * n / (n - 1.0);
  x.r = std::sqrt(r2);
  x.r1 = std::sqrt(r2 * p / k);
  x.r2 = std::sqrt(r2 * (k - p) / k);
  x.alpha = std::sqrt((k - p) / (p * r2));
  x.beta = -x.alpha * x.r1 * x.r1 / (x.r2 * x.r2);
  return x;
}

// (a0, b0, a_1.., b_1..) for a in H^p(r1), b in H^{k-p}(r2).
std::vector<Taylor> ex12_component_map(std::span<const Taylor> x, int p, int k, const Ex12Radii& rad) {
  const auto a = hyperbolic_chart(x.subspan(0, static_cast<std::size_t>(p)), rad.r1);
  const auto b = hyperbolic_chart(x.subspan(static_cast<std::size_t>(p), static_cast<std::size_t>(k - p)), rad.r2);
  std::vector<Taylor> out{a[0], b[0]};
  out.insert(out.end(), a.begin() + 1, a.end());
  out.insert(out.end(), b.begin() + 1, b.end());
  return out;
}

}  // namespace

Immersion make_example12_component(int k, int p, int n) {
  const Ex12Radii rad = ex12_radii(k, p, n);
  Immersion imm;
  imm.chart_dim = k;
  imm.ambient = Ambient{Signature(k + 2, 2), AmbientConstraint::kHyperbolic, rad.r};
  imm.exact = [p, k, rad](std::span<const Taylor> x) { return ex12_component_map(x, p, k, rad); };
  imm.eval = eval_from_exact(imm.exact);
  imm.domain_lo = Vector::Constant(k, -kHypDomain);
  imm.domain_hi = Vector::Constant(k, kHypDomain);
  imm.label = "maximal H^p(r1) x H^{k-p}(r2) in H^{k+1}_1(r)";
  return imm;
}

CatalogSurface make_example12_instance(int k, int p, int n) {
  const Ex12Radii rad = ex12_radii(k, p, n);
  CatalogSurface s;
  s.id = "example12";
  s.params = {{"k", k}, {"p", p}, {"n", n}};
  s.light_cone = true;
  Immersion& imm = s.lift.imm;
  imm.chart_dim = n;
  imm.ambient = Ambient{Signature(n + 3, 2), AmbientConstraint::kLightCone, 1.0};
  imm.exact = [p, k, rad](std::span<const Taylor> x) {
    auto y = ex12_component_map(x.subspan(0, static_cast<std::size_t>(k)), p, k, rad);
    const auto v = sphere_chart(x.subspan(static_cast<std::size_t>(k)), rad.r);
    y.insert(y.end(), v.begin(), v.end());
    return y;
  };
  imm.eval = eval_from_exact(imm.exact);
  imm.label = "y = (u, v), u maximal in H^{k+1}_1(r), v in S^{n-k}(r)";
  // xi is oriented along (e, 0) with e the unit normal of the component.
  s.lift.orientation = [p, k, n, rad](const Vector& x) {
    const auto vars = chart_variables(x.head(k), 0);
    const auto u = ex12_component_map(vars, p, k, rad);
    Vector hint = Vector::Zero(n + 3);
    hint(0) = rad.alpha * u[0].value();
    hint(1) = rad.beta * u[1].value();
    for (int i = 0; i < p; ++i) hint(2 + i) = rad.alpha * u[static_cast<std::size_t>(2 + i)].value();
    for (int i = p; i < k; ++i) hint(2 + i) = rad.beta * u[static_cast<std::size_t>(2 + i)].value();
    return hint;
  };
  ChartLayout l;
  l.add(k, kHypBox, kHypDomain);
  l.add(n - k, kSphBox, kSphDomain);
  apply_layout(s, imm, l);

  ExpectedRecord& e = s.expected;
  const double a = 1.0 / (2.0 * rad.r * rad.r);
  e.a = merged({{-a, k}, {a, n - k}});
  e.b = merged({{rad.alpha, p}, {rad.beta, k - p}, {0.0, n - k}});
  e.branch = Branch::kEx12Type;
  e.tau_law = "light-cone input: no space-form conformal factor";
  e.notes = {{"r", rad.r}, {"r1", rad.r1}, {"r2", rad.r2}, {"alpha", rad.alpha}, {"beta", rad.beta}};
  return s;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> v;
    v.push_back({"cylinder_desitter",
                 "standard cylinder H^k(r) x S^{n-k}(sqrt(1+r^2)) in de Sitter space",
                 {int_param("k", 1, 31, 1, "1 <= k <= n-1"), int_param("n", 2, 32, 3),
                  real_param("r", 0.0, INFINITY, true, true, 1.0)},
                 [](const ParamMap& p) { return make_cylinder_desitter(as_int(p, "k"), as_int(p, "n"), p.at("r")); }});
    v.push_back({"cylinder_flat",
                 "standard cylinder H^k x R^{n-k} in Minkowski space",
                 {int_param("k", 1, 31, 1, "1 <= k <= n-1"), int_param("n", 2, 32, 3)},
                 [](const ParamMap& p) { return make_cylinder_flat(as_int(p, "k"), as_int(p, "n")); }});
    v.push_back({"cylinder_ads",
                 "standard cylinder H^k(r) x H^{n-k}(sqrt(1-r^2)) in anti-de Sitter space",
                 {int_param("k", 1, 31, 1, "1 <= k <= n-1"), int_param("n", 2, 32, 3),
                  real_param("r", 0.0, 1.0, true, true, 0.5, "r^2 = k/n is the isotropic (maximal) case")},
                 [](const ParamMap& p) { return make_cylinder_ads(as_int(p, "k"), as_int(p, "n"), p.at("r")); }});
    v.push_back({"warped",
                 "warped product (t u', t u'', u''') with u' in H^p(r), u'' in S^q(sqrt(r^2+1))",
                 {int_param("p", 1, 30, 1), int_param("q", 1, 30, 1), int_param("n", 3, 32, 4, "n-p-q-1 >= 1"),
                  real_param("r", 0.0, INFINITY, true, true, 1.0)},
                 [](const ParamMap& p) {
                   return make_warped(as_int(p, "p"), as_int(p, "q"), as_int(p, "n"), p.at("r"));
                 }});
    v.push_back({"example12",
                 "light-cone product y = (u, v): u maximal H^p(r1) x H^{k-p}(r2) in H^{k+1}_1(r), v in S^{n-k}(r), "
                 "r^2 = kn/(n-1)",
                 {int_param("k", 2, 31, 2, "2 <= k <= n-1"), int_param("p", 1, 30, 1, "1 <= p <= k-1"),
                  int_param("n", 3, 32, 4)},
                 [](const ParamMap& p) {
                   return make_example12_instance(as_int(p, "k"), as_int(p, "p"), as_int(p, "n"));
                 }});
    v.push_back({"maximal_ads_product",
                 "maximal H^p(sqrt(p/n)) x H^{n-p}(sqrt((n-p)/n)) in anti-de Sitter space (isotropic)",
                 {int_param("p", 1, 31, 1, "1 <= p <= n-1"), int_param("n", 2, 32, 3)},
                 [](const ParamMap& p) { return make_maximal_ads_product(as_int(p, "p"), as_int(p, "n")); }});
    return v;
  }();
  return entries;
}

const CatalogEntry& catalog_entry(const std::string& id) {
  for (const auto& e : catalog())
    if (e.id == id) return e;
  fail(ErrorCode::kUnknownSurface, "unknown surface id '" + id + "'");
}

ParamMap resolve_params(const CatalogEntry& entry, const ParamMap& given) {
  ParamMap out;
  for (const auto& [name, value] : given) {
    const bool known = std::any_of(entry.params.begin(), entry.params.end(), [&](const auto& p) { return p.name == name; });
    if (!known) fail(ErrorCode::kParameter, "surface '" + entry.id + "' has no parameter '" + name + "'");
  }
  for (const auto& spec : entry.params) {
    const auto it = given.find(spec.name);
    const double v = it == given.end() ? spec.default_value : it->second;
    std::ostringstream msg;
    msg << "parameter " << spec.name << " = " << v << " ";
    if (!std::isfinite(v)) fail(ErrorCode::kParameter, msg.str() + "is not finite");
    if (spec.integer && v != std::round(v)) fail(ErrorCode::kParameter, msg.str() + "must be an integer");
    const bool lo_ok = spec.lo_open ? v > spec.lo : v >= spec.lo;
    const bool hi_ok = spec.hi_open ? v < spec.hi : v <= spec.hi;
    if (!lo_ok || !hi_ok) {
      msg << "outside " << (spec.lo_open ? "(" : "[") << spec.lo << ", " << spec.hi << (spec.hi_open ? ")" : "]");
      fail(ErrorCode::kParameter, msg.str());
    }
    out[spec.name] = v;
  }
  return out;
}

CatalogSurface make_surface(const std::string& id, const ParamMap& params) {
  const CatalogEntry& e = catalog_entry(id);
  return e.build(resolve_params(e, params));
}

LightConeImmersion example11_lift(const Immersion& component, int n, DerivStrategy strategy, const FdOptions& fd) {
  const int k = component.chart_dim;
  const Ambient& amb = component.ambient;
  if (amb.constraint != AmbientConstraint::kSphere || amb.signature.total_dim != k + 2 ||
      amb.signature.time_dims != 1) {
    fail(ErrorCode::kAmbientConstraint,
         "ambient constraint: the component must lie in de Sitter space S^{k+1}_1(r) of signature (k+2, 1)");
  }
  require(n > k, "example11 lift needs n > k");
  const double r = amb.radius;
  LightConeImmersion lift;
  Immersion& imm = lift.imm;
  imm.chart_dim = n;
  imm.ambient = Ambient{Signature(n + 3, 2), AmbientConstraint::kLightCone, 1.0};
  imm.domain_lo = Vector(n);
  imm.domain_hi = Vector(n);
  imm.domain_lo << component.domain_lo, Vector::Constant(n - k, -kHypDomain);
  imm.domain_hi << component.domain_hi, Vector::Constant(n - k, kHypDomain);
  imm.label = component.label + " x H^{n-k}(r) (light-cone lift)";
  lift.max_order = kMaxJetOrder;
  imm.supplied = [component, strategy, fd, k, n, r](const Vector& x, int order) {
    const JetData u = jet(component, x.head(k), order, strategy, fd);
    const auto vars = chart_variables(x, order);
    const auto v = hyperbolic_chart(std::span<const Taylor>(vars).subspan(static_cast<std::size_t>(k)), r);
    const auto& basis = vars[0].basis();
    std::vector<Taylor> uc;
    for (const auto& c : u.components()) uc.push_back(embed(c, basis, 0));
    std::vector<Taylor> y{uc[0], v[0]};
    y.insert(y.end(), uc.begin() + 1, uc.end());
    y.insert(y.end(), v.begin() + 1, v.end());
    return JetData(x, std::move(y));
  };
  imm.eval = [supplied = imm.supplied](const Vector& x) { return supplied(x, 0).value(); };
  return lift;
}

ComponentReport validate_example11_component(const Immersion& component, int n, std::span<const Vector> points,
                                             DerivStrategy strategy, const Tolerances& tol, const FdOptions& fd) {
  const int k = component.chart_dim;
  const LightConeImmersion lift = example11_lift(component, n, strategy, fd);
  if (points.size() < 2) fail(ErrorCode::kParameter, "component validation needs at least 2 points");
  const double r = component.ambient.radius;
  const double target_norm = (n - 1.0) / n;
  // Gauss equation of a maximal space-like hypersurface in de Sitter space:
  // rho = k(k-1)/r^2 + |h|^2 (the time-like normal flips the |h|^2 sign
  // relative to the Riemannian case).
  const double target_rho = k * (k - 1.0) / (r * r) + target_norm;

  ComponentReport rep;
  double h_trace = 0.0, h_norm = 0.0, rho = 0.0, lap = 0.0;
  for (const auto& x : points) {
    const JetData u = jet(component, x, 3, strategy, fd);
    const FundamentalForms ff = fundamental_forms(u, component.ambient);
    const Matrix shape = ff.first.matrix().llt().solve(ff.second.matrix());
    h_trace = std::max(h_trace, std::abs(shape.trace()));
    h_norm = std::max(h_norm, std::abs((shape * shape).trace() - target_norm));
    const std::vector<TVec> du = tangent_jets(u.components(), k);
    const TMat first = induced_metric(du, component.ambient.signature);
    const TMat first_inv = inverse(first);
    const Cube<Taylor> gamma = christoffel_jets(first, first_inv);
    rho = std::max(rho, std::abs(scalar_curvature(riemann_jets(first, gamma), first_inv).value() - target_rho));
    const Vector delta = laplacian_of_immersion(u, component.ambient.signature);
    lap = std::max(lap, (delta + (k / (r * r)) * u.value()).cwiseAbs().maxCoeff());
  }
  const double t = tol.residual;
  rep.checks = {{"mean_curvature_zero", h_trace, t, h_trace <= t},
                {"second_form_norm", h_norm, t, h_norm <= t},
                {"scalar_curvature", rho, t, rho <= t},
                {"laplacian_identity", lap, t, lap <= t}};
  for (const auto& c : rep.checks) {
    if (!c.passed) {
      rep.rejection = c.name;
      return rep;
    }
  }
  rep.accepted = true;

  ResidualSummary summary;
  summary.tolerances = tol;
  std::vector<PointSpectrum> spectra;
  const int order = std::min(4, kMaxJetOrder);
  for (const auto& x : points) {
    Vector full = Vector::Zero(n);
    full.head(k) = x;
    const InvariantJets inv = invariants_of(invariants_from_lift(lift, full, order, strategy, fd));
    summary.absorb(point_residuals(inv));
    const PointSpectrum ps = point_spectrum(frame_invariants(inv), tol.cluster);
    try {
      summary.absorb_pair_relation(pair_relation(ps, tol.cluster));
    } catch (const Error&) {
      summary.absorb_pair_relation(INFINITY);
    }
    spectra.push_back(ps);
  }
  rep.residuals = summary;
  rep.verdict = classify(summary, eigenstructure(spectra, tol.cluster), std::nullopt);
  return rep;
}

}  // namespace blaschke
