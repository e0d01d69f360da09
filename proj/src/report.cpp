#include "blaschke/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <random>
#include <sstream>
#include <thread>

#include "blaschke/error.hpp"
#include "blaschke/riemannian.hpp"
#include "json_writer.hpp"

namespace blaschke {

namespace {

constexpr double kNaN = ResidualSummary::kUnset;

void need(bool ok, const std::string& msg) {
  if (!ok) fail(ErrorCode::kConfig, msg);
}

bool positive(const std::optional<double>& v) { return !v || (std::isfinite(*v) && *v > 0.0); }

}  // namespace

Tolerances RunConfig::tolerances() const {
  Tolerances t = Tolerances::for_strategy(grid_path.empty() ? deriv : DerivStrategy::kFd);
  if (tol_cluster) t.cluster = *tol_cluster;
  if (tol_residual) t.residual = *tol_residual;
  if (tol_regularity) t.regularity = *tol_regularity;
  return t;
}

void RunConfig::validate() const {
  need(surface.empty() != grid_path.empty(), "exactly one of a surface id or a grid file is required");
  need(grid_path.empty() || params.empty(), "surface parameters do not apply to grid input");
  need(samples >= 2, "sample count must be >= 2");
  need(std::isfinite(fd_step) && fd_step > 0.0, "fd step must be positive");
  need(positive(tol_cluster) && positive(tol_residual) && positive(tol_regularity), "tolerances must be positive");
  need(std::isfinite(perturb.amplitude) && perturb.amplitude >= 0.0, "perturbation amplitude must be >= 0");
  need(threads >= 0, "thread count must be >= 0");
}

namespace {

int thread_count(const RunConfig& c, int jobs) {
  int t = c.threads;
  if (t == 0) {
    if (const char* env = std::getenv("BLASCHKE_THREADS"); env && *env) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      need(*end == '\0' && v >= 1, std::string("BLASCHKE_THREADS must be a positive integer, got '") + env + "'");
      t = static_cast<int>(std::min<long>(v, 1024));
    } else {
      t = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }
  }
  return std::max(1, std::min(t, jobs));
}

// Uniform [0, 1) from the top 53 bits; independent of the standard library's
// distribution implementation.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Input {
  std::string source;
  bool light_cone = false;
  Immersion imm;
  LightConeImmersion lift;   // light-cone input
  LightConeImmersion canon;  // canonical lift of a space-form input
  std::optional<double> epsilon;
  std::vector<Vector> points;
  const ExpectedRecord* expected = nullptr;
  std::string label;
  ParamMap params;
};

std::vector<Vector> box_points(const Vector& lo, const Vector& hi, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vector> pts;
  for (int s = 0; s < count; ++s) {
    Vector x(lo.size());
    for (Eigen::Index d = 0; d < lo.size(); ++d) x(d) = lo(d) + (hi(d) - lo(d)) * unit(rng);
    pts.push_back(x);
  }
  return pts;
}

// Seeded choice of up to `count` interior nodes, kept in lattice order.
std::vector<Vector> node_points(const GridImmersion& g, int count, std::uint64_t seed) {
  std::vector<int> pick = g.interior;
  if (pick.size() < 2) {
    fail(ErrorCode::kGridFormat, "grid file needs at least 2 interior nodes (order-5 jets need neighbours on both sides)");
  }
  if (static_cast<int>(pick.size()) > count) {
    std::mt19937_64 rng(seed);
    for (int i = 0; i < count; ++i) {
      const auto j = i + static_cast<std::size_t>(unit(rng) * static_cast<double>(pick.size() - i));
      std::swap(pick[static_cast<std::size_t>(i)], pick[j]);
    }
    pick.resize(static_cast<std::size_t>(count));
    std::sort(pick.begin(), pick.end());
  }
  std::vector<Vector> pts;
  for (int f : pick) pts.push_back(g.lattice.node(f));
  return pts;
}

double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

struct SampleOutcome {
  SampleRecord rec;
  std::optional<PointSpectrum> spectrum;
  bool alignment_failed = false;
  ErrorCode failure = ErrorCode::kParameter;
};

void finish_invariants(SampleOutcome& out, InvariantJets inv, const RunConfig& c, const Tolerances& tol) {
  Perturbation p = c.perturb;
  p.seed += 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(out.rec.index + 1);
  apply_perturbation(inv, p);
  out.rec.residuals = point_residuals(inv);
  out.rec.c_norm = out.rec.residuals.c_norm;
  const FrameInvariants fi = frame_invariants(inv);
  const PointSpectrum ps = point_spectrum(fi, tol.cluster);
  out.rec.a_values = ps.a_values;
  out.rec.b_values = ps.b_values;
  try {
    out.rec.pair_relation = pair_relation(ps, tol.cluster);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kAlignment) throw;
    out.alignment_failed = true;
    out.rec.pair_relation = INFINITY;
  }
  out.spectrum = ps;
}

SampleOutcome run_sample(const Input& in, const RunConfig& c, const Tolerances& tol, int index) {
  SampleOutcome out;
  SampleRecord& rec = out.rec;
  rec.index = index;
  rec.point = in.points[static_cast<std::size_t>(index)];
  const FdOptions fd{c.fd_step};
  try {
    if (in.light_cone) {
      const int order = std::min(kMaxJetOrder, in.lift.max_order);
      const LiftJets lj = invariants_from_lift(in.lift, rec.point, order, c.deriv, fd);
      const Signature& sig = in.lift.imm.ambient.signature;
      Taylor yy = lj.y[0].constant_like(0.0);
      for (int a = 0; a < sig.total_dim; ++a) yy += sig.eta(a) * lj.y[static_cast<std::size_t>(a)] * lj.y[static_cast<std::size_t>(a)];
      rec.lift_null = 0.0;
      for (double v : yy.coeffs()) rec.lift_null = std::max(rec.lift_null, std::abs(v));
      finish_invariants(out, invariants_of(lj), c, tol);
    } else {
      const JetData u = jet(in.imm, rec.point, kMaxJetOrder, c.deriv, fd);
      const SpaceformJets sj = spaceform_jets(u, in.imm.ambient, SpaceformOptions{false, tol.regularity, false});
      rec.tau = sj.tau.value();
      rec.e2tau = sj.e2tau.value();
      if (in.expected && in.expected->e2tau) rec.e2tau_expected = in.expected->e2tau(rec.point);
      finish_invariants(out, invariants_of(sj), c, tol);

      const InvariantJets lift = invariants_of(invariants_from_lift(in.canon, rec.point, 3, c.deriv, fd));
      rec.cross_g = max_abs_diff(values(sj.g), values(lift.g));
      rec.cross_A = max_abs_diff(values(sj.A), values(lift.A));
      rec.cross_B = max_abs_diff(values(sj.B), values(lift.B));
      const InvariantJets prim = invariants_of(sj);
      rec.cross_c_norm = std::abs(frame_invariants(prim).C.norm() - frame_invariants(lift).C.norm());
      const LiftResiduals lr = lift_residuals(in.imm, in.canon, rec.point, c.deriv, fd);
      rec.lift_null = lr.null;
      rec.lift_metric = lr.metric;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNonRegular && e.code() != ErrorCode::kClusterAmbiguity) throw;
    rec.usable = false;
    rec.error = error_code_name(e.code());
    out.failure = e.code();
    out.spectrum.reset();
  }
  return out;
}

Input make_input(const RunConfig& c, const CatalogSurface* keep) {
  Input in;
  if (!c.grid_path.empty()) {
    const GridImmersion g = load_grid_immersion(c.grid_path);
    in.source = c.grid_path;
    in.label = g.imm.label;
    in.points = node_points(g, c.samples, c.seed);
    if (g.imm.ambient.constraint == AmbientConstraint::kLightCone) {
      in.light_cone = true;
      check_lift_signature(g.imm.ambient.signature, g.imm.chart_dim);
      in.lift.imm = g.imm;
    } else {
      in.imm = g.imm;
      in.epsilon = spaceform_epsilon(g.imm.ambient, g.imm.chart_dim);
    }
  } else {
    const CatalogSurface& s = *keep;
    in.source = s.id;
    in.params = s.params;
    in.light_cone = s.light_cone;
    in.expected = &s.expected;
    in.epsilon = s.epsilon;
    in.points = box_points(s.box_lo, s.box_hi, c.samples, c.seed);
    if (s.light_cone) {
      in.lift = s.lift;
      in.label = s.lift.imm.label;
    } else {
      in.imm = s.imm;
      in.label = s.imm.label;
    }
  }
  if (!in.light_cone) in.canon = canonical_lift(in.imm, c.deriv, FdOptions{c.fd_step});
  return in;
}

void absorb(double& acc, double v) {
  if (std::isnan(v)) return;
  acc = std::isnan(acc) ? v : std::max(acc, v);
}

// Max |value difference| between matching clusters; NaN when patterns differ.
double cluster_error(const EigenClusterSet& got, const std::vector<ExpectedCluster>& want, bool& pattern) {
  pattern = got.count() == static_cast<int>(want.size());
  for (std::size_t t = 0; pattern && t < want.size(); ++t)
    pattern = got.clusters[t].multiplicity == want[t].multiplicity;
  if (!pattern) return kNaN;
  double e = 0.0;
  for (std::size_t t = 0; t < want.size(); ++t) e = std::max(e, std::abs(got.clusters[t].value - want[t].value));
  return e;
}

bool expected_matches(const Report& r) {
  const ExpectedCheck& e = r.expected;
  if (!e.present) return true;
  const double tol = r.tolerances.cluster;
  auto ok = [tol](double v) { return std::isnan(v) || v <= tol; };
  return e.branch_match && e.a_pattern_match && e.b_pattern_match && ok(e.a_error) && ok(e.b_error) &&
         ok(e.e2tau_error);
}

}  // namespace

Report run_check(const RunConfig& c) {
  const auto t0 = std::chrono::steady_clock::now();
  c.validate();
  Report r;
  r.config = c;
  r.tolerances = c.tolerances();
  const Tolerances& tol = r.tolerances;

  std::optional<CatalogSurface> surface;
  if (c.grid_path.empty()) surface = make_surface(c.surface, c.params);
  const CatalogSurface* keep = surface ? &*surface : nullptr;
  const Input in = make_input(c, keep);
  r.source = in.source;
  r.label = in.label;
  r.params = in.params;
  r.pipeline = in.light_cone ? "light_cone" : "space_form";
  r.epsilon = in.epsilon;
  r.n = in.light_cone ? in.lift.imm.chart_dim : in.imm.chart_dim;

  // Parallel map over samples; results land in index order.
  const int count = static_cast<int>(in.points.size());
  std::vector<SampleOutcome> outcomes(static_cast<std::size_t>(count));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next++; i < count; i = next++) {
      try {
        outcomes[static_cast<std::size_t>(i)] = run_sample(in, c, tol, i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int nthreads = thread_count(c, count);
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  // Reductions in sample order.
  std::vector<PointSpectrum> spectra;
  int irregular = 0, ambiguous = 0, misaligned = 0;
  for (auto& o : outcomes) {
    r.samples.push_back(o.rec);
    if (!o.rec.usable) {
      ++r.unusable;
      (o.failure == ErrorCode::kNonRegular ? irregular : ambiguous) += 1;
      continue;
    }
    misaligned += o.alignment_failed ? 1 : 0;
    r.residuals.absorb(o.rec.residuals);
    r.residuals.absorb_pair_relation(o.rec.pair_relation);
    spectra.push_back(*o.spectrum);
    absorb(r.cross.g, o.rec.cross_g);
    absorb(r.cross.A, o.rec.cross_A);
    absorb(r.cross.B, o.rec.cross_B);
    absorb(r.cross.c_norm, o.rec.cross_c_norm);
    absorb(r.cross.lift_null, o.rec.lift_null);
    absorb(r.cross.lift_metric, o.rec.lift_metric);
  }
  r.residuals.tolerances = tol;
  if (2 * irregular > count) {
    std::ostringstream msg;
    msg << irregular << " of " << count << " samples are not regular (e^{2tau} <= " << tol.regularity
        << "); first at sample ";
    for (const auto& s : r.samples)
      if (!s.usable) {
        msg << s.index;
        break;
      }
    fail(ErrorCode::kRegularityAbort, msg.str());
  }
  if (spectra.size() < 2) fail(ErrorCode::kRegularityAbort, "fewer than 2 usable samples");

  r.eigen = eigenstructure(spectra, tol.cluster);
  r.verdict = classify(r.residuals, r.eigen, in.epsilon);
  auto block = [&](const std::string& why) {
    r.verdict.reasons.push_back(why);
    r.verdict.branch = Branch::kIndeterminate;
  };
  if (irregular) block("irregular_samples:" + std::to_string(irregular));
  if (ambiguous) block("cluster_ambiguity_samples:" + std::to_string(ambiguous));
  if (misaligned) r.verdict.notes.push_back("A_B_not_simultaneously_block_diagonal_samples:" + std::to_string(misaligned));

  if (in.expected) {
    ExpectedCheck& e = r.expected;
    const ExpectedRecord& x = *in.expected;
    e.present = true;
    e.branch = x.branch;
    e.branch_match = !x.branch || *x.branch == r.verdict.branch;
    e.a = x.a;
    e.b = x.b;
    e.tau_law = x.tau_law;
    e.notes = x.notes;
    if (r.eigen.isoparametric) {
      e.a_error = cluster_error(r.eigen.a, x.a, e.a_pattern_match);
      if (std::isnan(r.eigen.b_drift)) {
        e.b_pattern_match = false;
      } else {
        e.b_error = cluster_error(r.eigen.b, x.b, e.b_pattern_match);
      }
    } else {
      e.a_pattern_match = e.b_pattern_match = false;
    }
    for (const auto& s : r.samples)
      if (s.usable && !std::isnan(s.e2tau_expected))
        absorb(e.e2tau_error, std::abs(s.e2tau - s.e2tau_expected) / std::abs(s.e2tau_expected));
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

int exit_code(const Report& r) {
  if (!r.residuals.failed_integrability().empty()) return 3;
  if (r.verdict.branch == Branch::kIndeterminate) return 2;
  if (!expected_matches(r)) return 3;
  return 0;
}

namespace {

ojson vec_json(const Vector& v) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

ojson clusters_json(const EigenClusterSet& s) {
  ojson a = ojson::array();
  for (const auto& c : s.clusters) a.push_back({{"value", num(c.value)}, {"multiplicity", c.multiplicity}, {"spread", num(c.spread)}});
  return a;
}

ojson expected_clusters_json(const std::vector<ExpectedCluster>& s) {
  ojson a = ojson::array();
  for (const auto& c : s) a.push_back({{"value", num(c.value)}, {"multiplicity", c.multiplicity}});
  return a;
}

ojson point_residuals_json(const PointResiduals& p) {
  return {{"codazzi_A", num(p.codazzi_A)}, {"codazzi_B", num(p.codazzi_B)}, {"ricci_C", num(p.ricci_C)},
          {"gauss", num(p.gauss)},         {"trace_B", num(p.trace_B)},     {"norm_B", num(p.norm_B)},
          {"parallel_A", num(p.parallel_A)}, {"parallel_B", num(p.parallel_B)}};
}

ojson tolerances_json(const Tolerances& t) {
  return {{"cluster", num(t.cluster)}, {"residual", num(t.residual)}, {"regularity", num(t.regularity)}};
}

ojson summary_json(const ResidualSummary& s) {
  return {{"codazzi_A", num(s.codazzi_A)},   {"codazzi_B", num(s.codazzi_B)},
          {"ricci_C", num(s.ricci_C)},       {"gauss", num(s.gauss)},
          {"trace_B", num(s.trace_B)},       {"norm_B", num(s.norm_B)},
          {"parallel_A", num(s.parallel_A)}, {"parallel_B", num(s.parallel_B)},
          {"pair_relation", num(s.pair_relation)}, {"c_norm", num(s.c_norm)},
          {"failed", s.failed_integrability()}};
}

ojson params_json(const ParamMap& p) {
  ojson o = ojson::object();
  for (const auto& [k, v] : p) o[k] = num(v);
  return o;
}

ojson verdict_json(const ClassificationVerdict& v) {
  return {{"branch", branch_name(v.branch)},
          {"s", v.s},
          {"multiplicities", v.multiplicities},
          {"reasons", v.reasons},
          {"notes", v.notes},
          {"eigenvalue_bound_violated", v.eigenvalue_bound_violated}};
}

}  // namespace

std::string report_json(const Report& r) {
  const RunConfig& c = r.config;
  ojson j;
  j["format_version"] = kReportFormatVersion;
  j["tool"] = "blaschke";
  j["version"] = r.version;
  ojson cfg;
  if (c.grid_path.empty()) {
    cfg["surface"] = c.surface;
    cfg["params"] = params_json(r.params);
  } else {
    cfg["grid"] = c.grid_path;
  }
  cfg["samples"] = c.samples;
  cfg["seed"] = c.seed;
  cfg["deriv"] = strategy_name(c.deriv);
  cfg["fd_step"] = num(c.fd_step);
  cfg["tolerances"] = tolerances_json(r.tolerances);
  cfg["perturbation"] = {{"field", perturb_field_name(c.perturb.field)},
                         {"amplitude", num(c.perturb.amplitude)},
                         {"seed", c.perturb.seed}};
  j["config"] = std::move(cfg);
  j["input"] = {{"source", r.source},
                {"pipeline", r.pipeline},
                {"label", r.label},
                {"n", r.n},
                {"epsilon", r.epsilon ? num(*r.epsilon) : ojson(nullptr)}};
  ojson samples = ojson::array();
  for (const auto& s : r.samples) {
    samples.push_back({{"index", s.index},
                       {"point", vec_json(s.point)},
                       {"usable", s.usable},
                       {"error", s.error},
                       {"tau", num(s.tau)},
                       {"e2tau", num(s.e2tau)},
                       {"e2tau_expected", num(s.e2tau_expected)},
                       {"a_eigenvalues", vec_json(s.a_values)},
                       {"b_eigenvalues", vec_json(s.b_values)},
                       {"c_norm", num(s.c_norm)},
                       {"residuals", point_residuals_json(s.residuals)},
                       {"pair_relation", num(s.pair_relation)},
                       {"cross_pipeline",
                        {{"g", num(s.cross_g)}, {"A", num(s.cross_A)}, {"B", num(s.cross_B)}, {"c_norm", num(s.cross_c_norm)}}},
                       {"lift", {{"null", num(s.lift_null)}, {"metric", num(s.lift_metric)}}}});
  }
  j["samples"] = std::move(samples);
  j["unusable_samples"] = r.unusable;
  j["residual_summary"] = summary_json(r.residuals);
  const Eigenstructure& e = r.eigen;
  std::vector<bool> zero = e.b_zero_on_cluster;
  j["eigenstructure"] = {{"isoparametric", e.isoparametric},
                         {"a_clusters", clusters_json(e.a)},
                         {"b_clusters", clusters_json(e.b)},
                         {"a_drift", num(e.a_drift)},
                         {"b_drift", num(e.b_drift)},
                         {"b_block_spread", num(e.b_block_spread)},
                         {"b_zero_on_cluster", zero},
                         {"cluster_counts", e.cluster_counts}};
  j["cross_pipeline"] = {{"g", num(r.cross.g)},
                         {"A", num(r.cross.A)},
                         {"B", num(r.cross.B)},
                         {"c_norm", num(r.cross.c_norm)},
                         {"lift_null", num(r.cross.lift_null)},
                         {"lift_metric", num(r.cross.lift_metric)}};
  const ExpectedCheck& x = r.expected;
  if (x.present) {
    ojson notes = ojson::object();
    for (const auto& [k, v] : x.notes) notes[k] = num(v);
    j["expected"] = {{"branch", x.branch ? ojson(branch_name(*x.branch)) : ojson(nullptr)},
                     {"branch_match", x.branch_match},
                     {"a_clusters", expected_clusters_json(x.a)},
                     {"b_clusters", expected_clusters_json(x.b)},
                     {"a_pattern_match", x.a_pattern_match},
                     {"b_pattern_match", x.b_pattern_match},
                     {"a_error", num(x.a_error)},
                     {"b_error", num(x.b_error)},
                     {"e2tau_relative_error", num(x.e2tau_error)},
                     {"tau_law", x.tau_law},
                     {"notes", std::move(notes)},
                     {"matches", expected_matches(r)}};
  } else {
    j["expected"] = nullptr;
  }
  j["verdict"] = verdict_json(r.verdict);
  j["exit_code"] = exit_code(r);
  return write_json(j);
}

std::string report_csv(const Report& r) {
  std::ostringstream out;
  const int n = r.n;
  auto field = [](double v) { return std::isnan(v) ? std::string() : format_double(v); };
  out << "index";
  for (int i = 0; i < n; ++i) out << ",x" << i;
  out << ",usable,tau";
  for (int i = 0; i < n; ++i) out << ",a" << i;
  for (int i = 0; i < n; ++i) out << ",b" << i;
  out << ",c_norm,codazzi_A,codazzi_B,ricci_C,gauss,trace_B,norm_B,parallel_A,parallel_B,pair_relation\n";
  for (const auto& s : r.samples) {
    out << s.index;
    for (int i = 0; i < n; ++i) out << "," << field(s.point(i));
    out << "," << (s.usable ? 1 : 0) << "," << field(s.tau);
    for (int i = 0; i < n; ++i) out << "," << (i < s.a_values.size() ? field(s.a_values(i)) : "");
    for (int i = 0; i < n; ++i) out << "," << (i < s.b_values.size() ? field(s.b_values(i)) : "");
    const PointResiduals& p = s.residuals;
    const bool u = s.usable;
    for (double v : {s.c_norm, p.codazzi_A, p.codazzi_B, p.ricci_C, p.gauss, p.trace_B, p.norm_B, p.parallel_A,
                     p.parallel_B, s.pair_relation})
      out << "," << (u ? field(v) : "");
    out << "\n";
  }
  return out.str();
}

std::string canonical_json(const std::string& text) {
  try {
    return write_json(ojson::parse(text));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kIo, std::string("invalid JSON: ") + e.what());
  }
}

std::string component_report_json(const ComponentReport& rep, const std::string& source, int n,
                                  const Tolerances& tol) {
  ojson j;
  j["format_version"] = kReportFormatVersion;
  j["tool"] = "blaschke";
  j["version"] = kToolVersion;
  j["source"] = source;
  j["n"] = n;
  j["tolerances"] = tolerances_json(tol);
  ojson checks = ojson::array();
  for (const auto& c : rep.checks)
    checks.push_back({{"name", c.name}, {"residual", num(c.residual)}, {"tolerance", num(c.tolerance)}, {"passed", c.passed}});
  j["checks"] = std::move(checks);
  j["accepted"] = rep.accepted;
  j["rejection"] = rep.rejection;
  j["residual_summary"] = rep.residuals ? summary_json(*rep.residuals) : ojson(nullptr);
  j["verdict"] = rep.verdict ? verdict_json(*rep.verdict) : ojson(nullptr);
  j["exit_code"] = exit_code(rep);
  return write_json(j);
}

int exit_code(const ComponentReport& r) {
  if (!r.accepted) return 3;
  if (r.residuals && !r.residuals->failed_integrability().empty()) return 3;
  if (!r.verdict || r.verdict->branch == Branch::kIndeterminate) return 2;
  return 0;
}

}  // namespace blaschke
