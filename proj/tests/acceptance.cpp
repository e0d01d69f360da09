// Acceptance run: one PASS/FAIL line per criterion check, tolerances pinned.
// Exits nonzero when a check fails, except for checks listed as known
// unattainable (see the README).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "blaschke/catalog.hpp"
#include "blaschke/report.hpp"
#include "blaschke/riemannian.hpp"

using namespace blaschke;

namespace {

int failures = 0;
int known_failures = 0;

void line(int criterion, bool pass, const std::string& what, double measured, double tol, bool known = false) {
  std::printf("[%s] C%d %s: measured %.3e, tolerance %.0e%s\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
              measured, tol, !pass && known ? "  (known unattainable)" : "");
  if (!pass) (known ? known_failures : failures) += 1;
}

void flag(int criterion, bool pass, const std::string& what) {
  std::printf("[%s] C%d %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
  if (!pass) ++failures;
}

double nan_max(std::initializer_list<double> v) {
  double m = 0.0;
  for (double x : v)
    if (!std::isnan(x)) m = std::max(m, x);
  return m;
}

double integrability(const ResidualSummary& r) {
  return nan_max({r.codazzi_A, r.codazzi_B, r.ricci_C, r.gauss, r.trace_B, r.norm_B});
}

RunConfig config(const std::string& id, const ParamMap& params, int samples, DerivStrategy d = DerivStrategy::kExact) {
  RunConfig c;
  c.surface = id;
  c.params = params;
  c.samples = samples;
  c.seed = 2024;
  c.deriv = d;
  return c;
}

Vector eig(const Matrix& m) { return Eigen::SelfAdjointEigenSolver<Matrix>(m).eigenvalues(); }

std::vector<int> sorted_ints(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::string describe(const std::string& id, const ParamMap& p) {
  std::string s = id + "(";
  bool first = true;
  for (const auto& [k, v] : p) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%s=%g", first ? "" : ",", k.c_str(), v);
    s += buf;
    first = false;
  }
  return s + ")";
}

std::vector<std::string> family_ids() {
  std::vector<std::string> ids;
  for (const auto& e : catalog()) ids.push_back(e.id);
  return ids;
}

struct Point {
  double tau = 0.0;
  Vector a, b;  // frame eigenvalues
  double c_norm = 0.0;
  FrameInvariants frame;
};

Point at(const Immersion& imm, const Vector& x, bool flip = false) {
  SpaceformOptions opt;
  opt.flip_normal = flip;
  const SpaceformJets j = spaceform_jets(jet(imm, x, 5, DerivStrategy::kExact), imm.ambient, opt);
  Point p;
  p.frame = frame_invariants(invariants_of(j));
  p.tau = j.tau.value();
  p.a = eig(p.frame.A);
  p.b = eig(p.frame.B);
  p.c_norm = p.frame.C.size() ? p.frame.C.norm() : 0.0;
  return p;
}

// B eigenvalues up to the overall sign fixed by the normal convention.
double b_spectrum_diff(const Vector& x, const Vector& y) {
  const Vector neg = testing::sorted(Vector(-y));
  return std::min(testing::max_abs_diff(x, y), testing::max_abs_diff(x, neg));
}

// ---------------------------------------------------------------------------

void trace_norm_laws() {
  for (auto d : {DerivStrategy::kExact, DerivStrategy::kFd}) {
    const double tol = d == DerivStrategy::kExact ? 1e-9 : 1e-4;
    double tr = 0.0, nm = 0.0;
    for (const auto& id : family_ids()) {
      const Report r = run_check(config(id, {}, 20, d));
      tr = std::max(tr, r.residuals.trace_B);
      nm = std::max(nm, r.residuals.norm_B);
    }
    const std::string tag = d == DerivStrategy::kExact ? "exact" : "fd";
    line(1, tr <= tol, "|tr B|, all catalog surfaces, 20 samples, " + tag, tr, tol);
    line(1, nm <= tol, "||B|^2 - (n-1)/n|, all catalog surfaces, 20 samples, " + tag, nm, tol);
  }
}

void integrability_residuals() {
  for (auto d : {DerivStrategy::kExact, DerivStrategy::kFd}) {
    const double tol = d == DerivStrategy::kExact ? 1e-6 : 1e-3;
    double worst = 0.0;
    std::string where;
    for (const auto& id : family_ids()) {
      const Report r = run_check(config(id, {}, 20, d));
      const double m = integrability(r.residuals);
      if (m >= worst) {
        worst = m;
        where = id;
      }
    }
    line(2, worst <= tol,
         std::string("max integrability residual (") + (d == DerivStrategy::kExact ? "exact" : "fd") + ", worst " +
             where + ")",
         worst, tol);
  }
  double weakest = INFINITY;
  std::string where;
  for (const auto& id : family_ids()) {
    for (auto f : {PerturbField::kA, PerturbField::kB, PerturbField::kC}) {
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        RunConfig c = config(id, {}, 6);
        c.perturb = Perturbation{f, 1e-3, seed};
        const double m = integrability(run_check(c).residuals);
        if (m < weakest) {
          weakest = m;
          where = id + " " + perturb_field_name(f);
        }
      }
    }
  }
  line(2, weakest >= 1e-4, "1e-3 perturbations of A, B, C detected (weakest: " + where + ", must be >=)", weakest,
       1e-4);
}

void hand_oracles() {
  struct Case {
    const char* name;
    CatalogSurface s;
    Vector a, b;
  };
  std::vector<Case> cases;
  cases.push_back({"flat cylinder k=1 n=3", make_cylinder_flat(1, 3),
                   (Vector(3) << -5.0 / 18, 1.0 / 18, 1.0 / 18).finished(),
                   (Vector(3) << -1.0 / 3, -1.0 / 3, 2.0 / 3).finished()});
  cases.push_back({"de Sitter cylinder k=1 n=3 r=1", make_cylinder_desitter(1, 3, 1.0),
                   (Vector(3) << -7.0 / 9, 5.0 / 9, 5.0 / 9).finished(),
                   (Vector(3) << -1.0 / 3, -1.0 / 3, 2.0 / 3).finished()});
  for (const auto& c : cases) {
    double da = 0.0, db = 0.0, pr = 0.0;
    for (const auto& x : testing::sample_surface(c.s, 20, 3)) {
      const Point p = at(c.s.imm, x);
      da = std::max(da, testing::max_abs_diff(p.a, c.a));
      db = std::max(db, testing::max_abs_diff(p.b, c.b));
      pr = std::max(pr, pair_relation(point_spectrum(p.frame, 1e-6), 1e-6));
    }
    line(3, da <= 1e-9, std::string(c.name) + ": A eigenvalues vs hand values", da, 1e-9);
    line(3, db <= 1e-9, std::string(c.name) + ": B eigenvalues vs hand values", db, 1e-9);
    line(3, pr <= 1e-12, std::string(c.name) + ": pair relation a_t + a_t' = b b' on cluster values", pr, 1e-12);
  }
}

void warped_products() {
  for (auto [p, q, n, r] : {std::tuple{1, 1, 4, 1.0}, {1, 2, 5, 1.0}, {2, 1, 5, 2.0}}) {
    const ParamMap params{{"p", p}, {"q", q}, {"n", n}, {"r", r}};
    const std::string tag = describe("warped", params);
    const Report rep = run_check(config("warped", params, 20));
    flag(4, rep.eigen.a.count() == 3 && sorted_ints(rep.eigen.a.multiplicities()) ==
                                            sorted_ints({p, q, n - p - q}),
         tag + ": 3 A-clusters with multiplicities {p, q, n-p-q}");
    const double drift = std::max(rep.eigen.a_drift, rep.eigen.b_drift);
    line(4, drift <= 1e-6, tag + ": cross-point eigenvalue drift", drift, 1e-6);
    const double par = std::max(rep.residuals.parallel_A, rep.residuals.parallel_B);
    line(4, par <= 1e-6, tag + ": parallel_A, parallel_B", par, 1e-6);
    line(4, rep.residuals.c_norm <= 1e-6, tag + ": |C|", rep.residuals.c_norm, 1e-6);

    double lo = INFINITY, hi = -INFINITY;
    for (const auto& s : rep.samples) {
      const double t = s.point(p + q);
      lo = std::min(lo, s.e2tau * t * t);
      hi = std::max(hi, s.e2tau * t * t);
    }
    line(4, hi - lo <= 1e-8, tag + ": e^{2tau} t^2 constant", hi - lo, 1e-8);
    const double closed = std::max(rep.expected.a_error, rep.expected.b_error);
    line(4, closed <= 1e-6 && rep.expected.a_pattern_match && rep.expected.b_pattern_match,
         tag + ": eigenvalues vs corrected-normal closed forms", closed, 1e-6);

    const WarpedConstants w = warped_constants(p, q, n, r);
    const double pattern = std::abs(w.a3 - (w.c * w.c - 1) / (2 * w.d));
    double found = INFINITY;
    for (const auto& c : rep.eigen.a.clusters)
      if (c.multiplicity == n - p - q) found = std::min(found, std::abs(c.value - w.a3));
    line(4, pattern <= 1e-12 && found <= 1e-6, tag + ": a3 = (c^2-1)/(2d) on the n-p-q block",
         std::max(pattern, found), 1e-6);
  }
}

void light_cone_product() {
  const int k = 2, p = 1, n = 4;
  const double r2 = k * n / double(n - 1);
  const CatalogSurface s = make_example12_instance(k, p, n);
  const Signature& sig = s.lift.imm.ambient.signature;
  double null = 0.0, frame = 0.0, ea = 0.0, cn = 0.0, norm = 0.0;
  Vector expect(n);
  for (int i = 0; i < n; ++i) expect(i) = i < k ? -1 / (2 * r2) : 1 / (2 * r2);
  for (const auto& x : testing::sample_surface(s, 20, 5)) {
    const JetData y = jet(s.lift.imm, x, 2, DerivStrategy::kExact);
    null = std::max(null, std::abs(inner(y.value(), y.value(), sig)));
    frame = std::max(frame, frame_residual(conformal_frame(y, sig, s.lift.orientation(x)), sig));
    const FrameInvariants f =
        frame_invariants(invariants_of(invariants_from_lift(s.lift, x, s.lift.max_order, DerivStrategy::kExact)));
    ea = std::max(ea, testing::max_abs_diff(eig(f.A), expect));
    cn = std::max(cn, f.C.size() ? f.C.norm() : 0.0);
    norm = std::max(norm, check_trace_norm(f.B).norm);
  }
  line(5, null <= 1e-8, "light-cone product (k,p,n)=(2,1,4): lift null |<y,y>|", null, 1e-8);
  line(5, std::max(frame, norm) <= 1e-8, "light-cone product (2,1,4): lift metric (frame normalizations, |B|^2 scale)",
       std::max(frame, norm), 1e-8);
  line(5, ea <= 1e-6, "light-cone product (2,1,4): A eigenvalues -1/(2r^2) x k, +1/(2r^2) x (n-k)", ea, 1e-6);
  line(5, cn <= 1e-6, "light-cone product (2,1,4): |C|", cn, 1e-6);
  const Report rep = run_check(config("example12", {{"k", k}, {"p", p}, {"n", n}}, 20));
  flag(5, rep.verdict.branch == Branch::kEx12Type,
       std::string("light-cone product (2,1,4): verdict ") + branch_name(rep.verdict.branch) + " (expected " +
           branch_name(Branch::kEx12Type) + ")");

  const Immersion u = make_example12_component(k, p, n);
  double lap = 0.0, h2 = 0.0;
  for (const auto& x : testing::sample_box(Vector::Constant(k, -0.5), Vector::Constant(k, 0.5), 20, 6)) {
    const JetData j = jet(u, x, 2, DerivStrategy::kExact);
    lap = std::max(lap, testing::max_abs_diff(laplacian_of_immersion(j, u.ambient.signature), (k / r2) * j.value()));
    const FundamentalForms ff = fundamental_forms(j, u.ambient);
    const Matrix shape = ff.first.matrix().inverse() * ff.second.matrix();
    h2 = std::max(h2, std::abs((shape * shape).trace() - (n - 1.0) / n));
  }
  line(5, lap <= 1e-8, "light-cone product (2,1,4) component: Laplacian u = k u / r^2", lap, 1e-8);
  line(5, h2 <= 1e-8, "light-cone product (2,1,4) component: sum h^2 = (n-1)/n", h2, 1e-8);
}

void cross_pipeline() {
  for (const auto& id : family_ids()) {
    const Report r = run_check(config(id, {}, 20));
    if (r.pipeline != "space_form") continue;
    const double m = nan_max({r.cross.g, r.cross.A, r.cross.B, r.cross.c_norm});
    line(6, m <= 1e-6, id + ": space-form vs light-cone g, A, B, |C|", m, 1e-6);
  }
}

void classifier() {
  for (const auto& id : family_ids()) {
    const Report r = run_check(config(id, {}, 20));
    const auto expected = make_surface(id, {}).expected.branch;
    flag(7, expected && r.verdict.branch == *expected,
         id + ": verdict " + branch_name(r.verdict.branch) + " (expected " +
             (expected ? branch_name(*expected) : "none") + ")");
  }

  std::vector<std::pair<std::string, ParamMap>> sweep;
  auto add = [&](const std::string& id, const char* name, std::vector<double> vals, ParamMap base) {
    for (double v : vals) {
      ParamMap p = base;
      p[name] = v;
      sweep.push_back({id, p});
    }
  };
  add("cylinder_desitter", "k", {1, 2, 3, 4, 5}, {{"n", 6}});
  add("cylinder_desitter", "n", {2, 3, 4, 5, 6}, {{"k", 1}});
  add("cylinder_desitter", "r", {0.3, 0.7, 1, 1.5, 2.5}, {});
  add("cylinder_flat", "k", {1, 2, 3, 4, 5}, {{"n", 6}});
  add("cylinder_flat", "n", {2, 3, 4, 5, 6}, {{"k", 1}});
  add("cylinder_ads", "k", {1, 2, 3, 4, 5}, {{"n", 6}, {"r", 0.45}});
  add("cylinder_ads", "n", {2, 3, 4, 5, 6}, {{"k", 1}, {"r", 0.45}});
  add("cylinder_ads", "r", {0.2, 0.35, 0.45, 0.6, 0.8}, {});
  add("warped", "p", {1, 2, 3, 4, 5}, {{"n", 8}});
  add("warped", "q", {1, 2, 3, 4, 5}, {{"n", 8}});
  add("warped", "n", {4, 5, 6, 7, 8}, {});
  add("warped", "r", {0.5, 0.8, 1, 1.5, 2, 3}, {});
  add("example12", "k", {2, 3, 4, 5, 6}, {{"n", 7}});
  add("example12", "p", {1, 2, 3, 4, 5}, {{"k", 6}, {"n", 7}});
  add("example12", "n", {3, 4, 5, 6, 7}, {});
  add("maximal_ads_product", "p", {1, 2, 3, 4, 5}, {{"n", 6}});
  add("maximal_ads_product", "n", {2, 3, 4, 5, 6}, {{"p", 1}});

  int mismatched = 0, ceiling = 0, c_vanish = 0, parallel = 0;
  double worst_c = 0.0;
  for (const auto& [id, params] : sweep) {
    const Report r = run_check(config(id, params, 6));
    const auto expected = make_surface(id, params).expected.branch;
    if (!expected || r.verdict.branch != *expected) {
      ++mismatched;
      std::printf("       mismatch: %s -> %s\n", describe(id, params).c_str(), branch_name(r.verdict.branch));
    }
    if (r.residuals.parallel_A <= r.tolerances.residual) {
      ++parallel;
      if (r.eigen.a.count() > 3 || r.verdict.eigenvalue_bound_violated) ++ceiling;
      worst_c = std::max(worst_c, r.residuals.c_norm);
      if (!(r.residuals.c_norm <= r.tolerances.residual)) ++c_vanish;
    }
  }
  const std::string size = std::to_string(sweep.size()) + " runs";
  flag(7, mismatched == 0, "parameter sweep (" + size + ", >= 5 values per parameter): verdicts match, " +
                               std::to_string(mismatched) + " mismatches");
  flag(7, ceiling == 0 && parallel > 0,
       "sweep: s <= 3 whenever A is parallel (" + std::to_string(parallel) + " parallel runs, " +
           std::to_string(ceiling) + " violations)");
  line(7, c_vanish == 0, "sweep: A parallel implies C = 0 (max |C| over parallel runs)", worst_c, 1e-6);
}

void symmetry() {
  std::vector<std::pair<Immersion, std::vector<Vector>>> cases;
  for (const auto& id : family_ids()) {
    const CatalogSurface s = make_surface(id, {});
    if (!s.light_cone) cases.push_back({s.imm, testing::sample_surface(s, 5, 7)});
  }
  cases.push_back({testing::generic_graph(),
                   testing::sample_box(Vector::Constant(3, -0.3), Vector::Constant(3, 0.3), 5, 7)});
  double flip = 0.0;
  for (const auto& [imm, pts] : cases)
    for (const auto& x : pts) {
      const Point a = at(imm, x), b = at(imm, x, true);
      flip = std::max({flip, testing::max_abs_diff(a.frame.A, b.frame.A),
                       testing::max_abs_diff(a.frame.B, Matrix(-b.frame.B)),
                       a.frame.C.size() ? testing::max_abs_diff(a.frame.C, Vector(-b.frame.C)) : 0.0});
    }
  line(8, flip <= 1e-12, "normal flip: A unchanged, B and C negated (componentwise)", flip, 1e-12);

  double iso = 0.0;
  auto compare = [&](const Immersion& a, const Immersion& b, const std::vector<Vector>& pts) {
    for (const auto& x : pts) {
      const Point p = at(a, x), q = at(b, x);
      iso = std::max({iso, std::abs(p.tau - q.tau), testing::max_abs_diff(p.a, q.a), b_spectrum_diff(p.b, q.b),
                      std::abs(p.c_norm - q.c_norm)});
    }
  };
  {
    const Immersion g = testing::generic_graph();
    const Matrix L = testing::boost(4, 0, 1, 0.4) * testing::rotation(4, 2, 3, 0.9) * testing::boost(4, 0, 3, -0.25);
    compare(g, testing::transformed(g, L, (Vector(4) << 0.5, -1.0, 2.0, 0.3).finished()), cases.back().second);
  }
  for (const auto& id : family_ids()) {
    const CatalogSurface s = make_surface(id, {});
    if (s.light_cone || !s.epsilon || *s.epsilon == 0.0) continue;
    const Signature& sig = s.imm.ambient.signature;
    const int N = sig.total_dim;
    Matrix L = testing::boost(N, 0, N - 1, 0.3) * testing::rotation(N, N - 2, N - 1, 0.7);
    if (sig.time_dims == 2) L = testing::rotation(N, 0, 1, 0.5) * L;
    compare(s.imm, testing::transformed(s.imm, L, Vector::Zero(N)), testing::sample_surface(s, 5, 8));
  }
  line(8, iso <= 1e-8, "ambient isometries: tau, A/B eigenvalues, |C| unchanged", iso, 1e-8);

  double shape = 0.0, tau = 0.0;
  const Immersion g = testing::generic_graph();
  const auto pts = testing::sample_box(Vector::Constant(3, -0.3), Vector::Constant(3, 0.3), 5, 9);
  for (double lambda : {0.5, 2.0, 3.7}) {
    const Immersion gl = testing::transformed(g, lambda * Matrix::Identity(4, 4), Vector::Zero(4));
    for (const auto& x : pts) {
      const Point p = at(g, x), q = at(gl, x);
      shape = std::max({shape, testing::max_abs_diff(p.a, q.a), testing::max_abs_diff(p.b, q.b),
                        std::abs(p.c_norm - q.c_norm)});
      tau = std::max(tau, std::abs(p.tau - q.tau));
    }
  }
  line(8, shape <= 1e-8, "dilations (flat ambient): A/B eigenvalues, |C| unchanged", shape, 1e-8);
  // tau shifts by -log(lambda) under u -> lambda u; only g = e^{2tau} I is
  // dilation invariant.
  line(8, tau <= 1e-8, "dilations (flat ambient): tau unchanged", tau, 1e-8, true);
}

void determinism() {
  bool same = true;
  for (const auto& id : family_ids()) {
    std::string first;
    for (int threads : {1, 2, 8, 1}) {
      RunConfig c = config(id, {}, 16);
      c.threads = threads;
      const std::string j = report_json(run_check(c));
      if (first.empty()) first = j;
      same = same && j == first;
    }
  }
  flag(9, same, "byte-identical JSON for threads 1, 2, 8 and a repeat, all catalog surfaces");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void()>>> steps{
      {"trace/norm laws", trace_norm_laws},   {"integrability", integrability_residuals},
      {"hand oracles", hand_oracles},         {"warped products", warped_products},
      {"light-cone product", light_cone_product}, {"cross-pipeline", cross_pipeline},
      {"classifier", classifier},             {"symmetry", symmetry},
      {"determinism", determinism}};
  for (const auto& [name, step] : steps) {
    try {
      step();
    } catch (const std::exception& e) {
      std::printf("[FAIL] %s aborted: %s\n", name, e.what());
      ++failures;
    }
  }
  std::printf("%d failed, %d known unattainable\n", failures, known_failures);
  return failures == 0 ? 0 : 1;
}
