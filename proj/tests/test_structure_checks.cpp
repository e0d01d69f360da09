#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "test_support.hpp"
#include "blaschke/structure_checks.hpp"

using namespace blaschke;

namespace {

Matrix diag(std::initializer_list<double> d) {
  Vector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return v.asDiagonal();
}

InvariantJets space_form_invariants(const Immersion& imm, const Vector& x, DerivStrategy s = DerivStrategy::kExact) {
  return invariants_of(spaceform_jets(jet(imm, x, 5, s), imm.ambient));
}

InvariantJets lift_invariants(const CatalogSurface& s, const Vector& x) {
  return invariants_of(invariants_from_lift(s.lift, x, s.lift.max_order, DerivStrategy::kExact));
}

double integrability_max(const PointResiduals& r) {
  double m = 0.0;
  for (double v : {r.codazzi_A, r.codazzi_B, r.ricci_C, r.gauss, r.trace_B, r.norm_B})
    if (!std::isnan(v)) m = std::max(m, v);
  return m;
}

double detector_max(const PointResiduals& r) {
  double m = integrability_max(r);
  for (double v : {r.parallel_A, r.parallel_B})
    if (!std::isnan(v)) m = std::max(m, v);
  return m;
}

ResidualSummary clean_summary() {
  ResidualSummary r;
  r.codazzi_A = r.codazzi_B = r.ricci_C = r.gauss = r.trace_B = r.norm_B = 0.0;
  r.parallel_A = r.parallel_B = r.pair_relation = r.c_norm = 0.0;
  return r;
}

Eigenstructure spectrum(std::vector<double> a, std::vector<int> mult, std::vector<bool> b_zero = {},
                        double block_spread = 0.0) {
  Eigenstructure e;
  e.a.tolerance = 1e-6;
  for (std::size_t i = 0; i < a.size(); ++i) e.a.clusters.push_back({a[i], mult[i], 0.0});
  e.b_zero_on_cluster = b_zero.empty() ? std::vector<bool>(a.size(), false) : b_zero;
  e.b_block_spread = block_spread;
  return e;
}

std::vector<CatalogSurface> catalog_defaults() {
  std::vector<CatalogSurface> out;
  for (const auto& e : catalog()) out.push_back(e.build(resolve_params(e, {})));
  return out;
}

}  // namespace

TEST_CASE("Gauss residual: flat cylinder hand check") {
  const Matrix A = diag({-5.0 / 18, 1.0 / 18, 1.0 / 18}), B = diag({2.0 / 3, -1.0 / 3, -1.0 / 3});
  const Quad<double> flat(3, 0.0);
  CHECK(residual_gauss(flat, A, B) < 1e-16);
  // R_1212 = 1/18 - 5/18 + 2/9 = 0 is the only nontrivial relation; a wrong
  // A breaks it.
  CHECK(residual_gauss(flat, diag({-5.0 / 18, 2.0 / 18, 1.0 / 18}), B) > 1e-2);
}

TEST_CASE("Codazzi residuals") {
  const int n = 3;
  const Matrix B = diag({2.0 / 3, -1.0 / 3, -1.0 / 3});
  Cube<double> zero(n, 0.0);
  const Vector c0 = Vector::Zero(n);
  CHECK(residual_codazzi_A(zero, B, c0) == 0.0);
  CHECK(residual_codazzi_B(zero, c0) == 0.0);

  // A totally symmetric B_{ij,k} passes with C = 0; an asymmetric one fails.
  Cube<double> sym(n, 0.0), asym(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) sym(i, j, k) = 0.1 * (i + j + k) + 0.01 * i * j * k;
  CHECK(residual_codazzi_B(sym, c0) < 1e-16);
  asym(0, 0, 1) = asym(0, 1, 0) = 0.0;
  asym(0, 1, 2) = asym(1, 0, 2) = 0.3;
  CHECK(residual_codazzi_B(asym, c0) == doctest::Approx(0.3));

  // With C != 0 the right-hand sides are B_ij C_k - B_ik C_j and g_ij C_k - g_ik C_j.
  Vector c(3);
  c << 0.2, -0.1, 0.4;
  Cube<double> rhsA(n, 0.0), rhsB(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        rhsA(i, j, k) = B(i, j) * c(k) * 0.5 - B(i, k) * c(j) * 0.5;
        rhsB(i, j, k) = (i == j) * c(k) * 0.5 - (i == k) * c(j) * 0.5;
      }
  CHECK(residual_codazzi_A(rhsA, B, c) < 1e-15);
  CHECK(residual_codazzi_B(rhsB, c) < 1e-15);
}

TEST_CASE("Ricci residual reduces to a commutator when C = 0") {
  const Matrix nabla = Matrix::Zero(3, 3);
  const Matrix A = diag({-5.0 / 18, 1.0 / 18, 1.0 / 18}), B = diag({2.0 / 3, -1.0 / 3, -1.0 / 3});
  CHECK(residual_ricci_C(nabla, A, B) == 0.0);
  CHECK(residual_ricci_C(nabla, 0.7 * Matrix::Identity(3, 3), B) < 1e-16);
  Matrix Bm = B;
  Bm(0, 1) = Bm(1, 0) = 0.1;
  const Matrix comm = Bm * A - A * Bm;
  CHECK(residual_ricci_C(nabla, A, Bm) == doctest::Approx(comm.cwiseAbs().maxCoeff()));
}

TEST_CASE("trace and norm laws") {
  const Matrix B = diag({2.0 / 3, -1.0 / 3, -1.0 / 3});
  const TraceNorm t = check_trace_norm(B);
  CHECK(t.trace < 1e-16);
  CHECK(t.norm < 1e-15);
  const TraceNorm t2 = check_trace_norm(2.0 * B);
  CHECK(t2.norm == doctest::Approx(3.0 * 2.0 / 3.0));
  CHECK(check_trace_norm(B + 0.1 * Matrix::Identity(3, 3)).trace == doctest::Approx(0.3));
}

TEST_CASE("pair relation on the cylinders") {
  for (auto s : {make_cylinder_flat(1, 3), make_cylinder_desitter(1, 3, 1.0)}) {
    const Vector x = testing::sample_surface(s, 1, 31).front();
    const PointSpectrum sp = point_spectrum(frame_invariants(space_form_invariants(s.imm, x)), 1e-6);
    CHECK(sp.a_clusters.count() == 2);
    CHECK(pair_relation(sp, 1e-6) <= 1e-12);
  }
  FrameInvariants one{Matrix::Identity(3, 3) * 0.4, diag({2.0 / 3, -1.0 / 3, -1.0 / 3}), Vector::Zero(3)};
  CHECK(pair_relation(point_spectrum(one, 1e-6), 1e-6) == 0.0);

  // A and B that do not share eigenspaces cannot be paired.
  FrameInvariants mis{diag({-0.3, 0.1, 0.1}), diag({2.0 / 3, -1.0 / 3, -1.0 / 3}), Vector::Zero(3)};
  mis.B(0, 1) = mis.B(1, 0) = 0.2;
  CHECK_THROWS_AS(pair_relation(point_spectrum(mis, 1e-6), 1e-6), Error);
}

TEST_CASE("catalog surfaces satisfy every structure equation") {
  for (const auto& s : catalog_defaults()) {
    for (const auto& x : testing::sample_surface(s, 4, 32)) {
      const InvariantJets inv = s.light_cone ? lift_invariants(s, x) : space_form_invariants(s.imm, x);
      const PointResiduals r = point_residuals(inv);
      INFO(s.id);
      CHECK(integrability_max(r) <= 1e-9);
      CHECK(r.parallel_A <= 1e-9);
      CHECK(r.c_norm <= 1e-9);
      CHECK(!std::isnan(r.codazzi_A));
      CHECK(!std::isnan(r.ricci_C));
    }
  }
}

TEST_CASE("a generic hypersurface satisfies the structure equations but is not parallel") {
  const Immersion g = testing::generic_graph();
  for (const auto& x : testing::sample_box(Vector::Constant(3, -0.3), Vector::Constant(3, 0.3), 5, 33)) {
    const PointResiduals r = point_residuals(space_form_invariants(g, x));
    CHECK(integrability_max(r) <= 1e-9);
    CHECK(r.parallel_A > 1e-3);
    CHECK(r.c_norm > 1e-3);
    // The same holds on the fd path with its own tolerance.
    CHECK(integrability_max(point_residuals(space_form_invariants(g, x, DerivStrategy::kFd))) <= 1e-3);
  }
}

TEST_CASE("B_{ij,k} is totally symmetric when C = 0") {
  // The light-cone product has C = 0 but B not block scalar on A.
  const CatalogSurface s = make_example12_instance(2, 1, 4);
  for (const auto& x : testing::sample_surface(s, 4, 34)) {
    const InvariantJets inv = lift_invariants(s, x);
    const TMat gi = inverse(inv.g);
    const Cube<double> nb = frame_components(values(covariant_derivative(inv.B, christoffel_jets(inv.g, gi))),
                                             orthonormal_frame(SymTensor2(values(inv.g))));
    double asym = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) asym = std::max({asym, std::abs(nb(i, j, k) - nb(i, k, j)), std::abs(nb(i, j, k) - nb(k, j, i))});
    CHECK(asym <= 1e-9);
  }
}

TEST_CASE("perturbations of a single field are detected") {
  std::vector<std::pair<InvariantJets, const char*>> cases;
  for (const auto& s : catalog_defaults()) {
    const Vector x = testing::sample_surface(s, 1, 35).front();
    cases.push_back({s.light_cone ? lift_invariants(s, x) : space_form_invariants(s.imm, x), "catalog"});
  }
  cases.push_back({space_form_invariants(testing::generic_graph(), Vector::Constant(3, 0.1)), "generic"});
  for (auto field : {PerturbField::kA, PerturbField::kB, PerturbField::kC}) {
    for (const auto& [inv, what] : cases) {
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        InvariantJets p = inv;
        apply_perturbation(p, Perturbation{field, 1e-3, seed});
        INFO(perturb_field_name(field) << " " << what << " seed " << seed);
        CHECK(detector_max(point_residuals(p)) >= 1e-4);
      }
    }
  }
  CHECK(parse_perturb_field("B") == PerturbField::kB);
  CHECK_THROWS_AS(parse_perturb_field("D"), Error);
}

TEST_CASE("eigenstructure across samples") {
  struct Case {
    CatalogSurface s;
    std::vector<int> mult;
  };
  std::vector<Case> cases{{make_warped(1, 1, 4, 1.0), {1, 1, 2}},
                          {make_warped(1, 2, 5, 1.0), {}},
                          {make_cylinder_flat(1, 3), {1, 2}},
                          {make_cylinder_desitter(2, 5, 0.7), {}},
                          {make_cylinder_ads(1, 3, 0.5), {}},
                          {make_maximal_ads_product(1, 3), {3}}};
  for (auto& c : cases) {
    std::vector<PointSpectrum> sp;
    for (const auto& x : testing::sample_surface(c.s, 6, 36))
      sp.push_back(point_spectrum(frame_invariants(space_form_invariants(c.s.imm, x)), 1e-6));
    const Eigenstructure e = eigenstructure(sp, 1e-6);
    INFO(c.s.id);
    CHECK(e.isoparametric);
    CHECK(e.a_drift <= 1e-9);
    // With a single A-eigenspace B is trace-free, hence never block scalar.
    if (e.a.count() > 1) CHECK(e.b_block_spread <= 1e-9);
    std::vector<int> expect;
    for (const auto& ec : c.s.expected.a) expect.push_back(ec.multiplicity);
    CHECK(e.a.multiplicities() == expect);
    // Multiplicities listed by value; compare the pattern as a multiset.
    if (!c.mult.empty()) {
      std::sort(expect.begin(), expect.end());
      std::sort(c.mult.begin(), c.mult.end());
      CHECK(c.mult == expect);
    }
  }
}

TEST_CASE("classifier decision tree") {
  const auto two = spectrum({-0.3, 0.1}, {1, 2});
  SUBCASE("cylinder subtypes follow the ambient curvature") {
    CHECK(classify(clean_summary(), two, 0.0).branch == Branch::kCylinderFlat);
    CHECK(classify(clean_summary(), two, 1.0).branch == Branch::kCylinderS);
    CHECK(classify(clean_summary(), two, -0.25).branch == Branch::kCylinderH);
    const auto v = classify(clean_summary(), two, std::nullopt);
    CHECK(v.branch == Branch::kIndeterminate);
    CHECK(v.reasons == std::vector<std::string>{"cylinder_subtype_needs_space_form_ambient"});
  }
  SUBCASE("one and three eigenvalues") {
    CHECK(classify(clean_summary(), spectrum({-0.5}, {3}), -1.0).branch == Branch::kCase1Isotropic);
    CHECK(classify(clean_summary(), spectrum({-0.5, 0.1, 0.4}, {1, 1, 2}), 0.0).branch == Branch::kWarped);
    ResidualSummary r = clean_summary();
    r.parallel_B = 1e-2;
    const auto v = classify(r, spectrum({-0.5, 0.1, 0.4}, {1, 1, 2}), 0.0);
    CHECK(v.branch == Branch::kIndeterminate);
    CHECK(v.reasons.front() == "three_eigenvalues_but_B_not_parallel");
  }
  SUBCASE("product types by the sign of A off the zero-B block") {
    ResidualSummary r = clean_summary();
    r.parallel_B = 1e-2;
    const auto ex12 = classify(r, spectrum({-0.3, 0.3}, {2, 2}, {false, true}), std::nullopt);
    CHECK(ex12.branch == Branch::kEx12Type);
    const auto ex11 = classify(r, spectrum({-0.3, 0.3}, {2, 2}, {true, false}), std::nullopt);
    CHECK(ex11.branch == Branch::kEx11Type);
    // Parallel B that splits an A-eigenspace still lands in the product branch, with notes.
    const auto noted = classify(clean_summary(), spectrum({-0.3, 0.3}, {2, 2}, {false, true}, 0.5), std::nullopt);
    CHECK(noted.branch == Branch::kEx12Type);
    CHECK(std::find(noted.notes.begin(), noted.notes.end(), "B_parallel_in_nonparallel_branch") != noted.notes.end());
    CHECK(std::find(noted.notes.begin(), noted.notes.end(), "B_not_scalar_on_A_eigenspace") != noted.notes.end());
    const auto none = classify(r, two, 0.0);
    CHECK(none.branch == Branch::kIndeterminate);
    CHECK(none.reasons.front() == "nonparallel_B_without_single_zero_B_block");
  }
  SUBCASE("unmet prerequisites never produce a branch") {
    ResidualSummary r = clean_summary();
    r.codazzi_A = 1.0;
    auto v = classify(r, two, 0.0);
    CHECK(v.branch == Branch::kIndeterminate);
    CHECK(v.reasons.front() == "integrability_residual:codazzi_A");

    r = clean_summary();
    r.parallel_A = 1e-3;
    v = classify(r, two, 0.0);
    CHECK(v.branch == Branch::kIndeterminate);
    CHECK(std::find(v.reasons.begin(), v.reasons.end(), "A_not_parallel") != v.reasons.end());

    r = clean_summary();
    r.c_norm = 1e-3;
    CHECK(classify(r, two, 0.0).branch == Branch::kIndeterminate);

    r = clean_summary();
    r.pair_relation = 1e-3;
    CHECK(classify(r, two, 0.0).branch == Branch::kIndeterminate);

    Eigenstructure varying = two;
    varying.isoparametric = false;
    v = classify(clean_summary(), varying, 0.0);
    CHECK(v.branch == Branch::kIndeterminate);
    CHECK(v.s == -1);
  }
  SUBCASE("more than three eigenvalues with parallel A is reported loudly") {
    const auto v = classify(clean_summary(), spectrum({-0.4, -0.1, 0.2, 0.5}, {1, 1, 1, 1}), 0.0);
    CHECK(v.branch == Branch::kIndeterminate);
    CHECK(v.eigenvalue_bound_violated);
    CHECK(v.reasons.front().rfind("eigenvalue_bound_violated", 0) == 0);
    // Without parallel A the bound does not apply.
    ResidualSummary r = clean_summary();
    r.parallel_A = 1.0;
    CHECK_FALSE(classify(r, spectrum({-0.4, -0.1, 0.2, 0.5}, {1, 1, 1, 1}), 0.0).eigenvalue_bound_violated);
  }
  SUBCASE("branch names round-trip") {
    for (auto b : {Branch::kCase1Isotropic, Branch::kCylinderS, Branch::kCylinderFlat, Branch::kCylinderH,
                   Branch::kWarped, Branch::kEx11Type, Branch::kEx12Type, Branch::kIndeterminate})
      CHECK(parse_branch(branch_name(b)) == b);
  }
}

TEST_CASE("residual summary reduction skips NaN") {
  ResidualSummary s;
  PointResiduals a, b;
  a.codazzi_A = 1e-8;
  b.codazzi_A = std::nan("");
  a.gauss = std::nan("");
  b.gauss = 2e-9;
  s.absorb(a);
  s.absorb(b);
  CHECK(s.codazzi_A == 1e-8);
  CHECK(s.gauss == 2e-9);
  s.absorb_pair_relation(3e-13);
  s.absorb_pair_relation(std::nan(""));
  CHECK(s.pair_relation == 3e-13);
  CHECK(s.failed_integrability().empty());
  PointResiduals bad;
  bad.norm_B = 1.0;
  s.absorb(bad);
  CHECK(s.failed_integrability() == std::vector<std::string>{"norm_B"});
}
