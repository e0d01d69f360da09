#include "blaschke/structure_checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "blaschke/error.hpp"
#include "blaschke/riemannian.hpp"

namespace blaschke {

InvariantJets invariants_of(const SpaceformJets& s) {
  if (!s.has_A) fail(ErrorCode::kParameter, "space-form jets lack A (need a jet of order >= 4)");
  return InvariantJets{s.n, s.g, s.A, s.B, s.C, s.has_C};
}

InvariantJets invariants_of(const LiftJets& l) { return InvariantJets{l.n, l.g, l.A, l.B, l.C, l.has_C}; }

const char* perturb_field_name(PerturbField f) {
  switch (f) {
    case PerturbField::kA: return "A";
    case PerturbField::kB: return "B";
    case PerturbField::kC: return "C";
    default: return "none";
  }
}

PerturbField parse_perturb_field(const std::string& name) {
  if (name == "A") return PerturbField::kA;
  if (name == "B") return PerturbField::kB;
  if (name == "C") return PerturbField::kC;
  if (name == "none") return PerturbField::kNone;
  fail(ErrorCode::kConfig, "unknown perturbation field '" + name + "' (A, B, C or none)");
}

void apply_perturbation(InvariantJets& inv, const Perturbation& p) {
  if (p.field == PerturbField::kNone || p.amplitude == 0.0) return;
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const int n = inv.n;
  const Taylor& ref = inv.g(0, 0);
  std::vector<Taylor> dx;
  for (int k = 0; k < n; ++k) dx.push_back(Taylor::variable(ref.basis(), ref.order(), k, 0.0));
  auto field = [&]() {
    Taylor t = ref.constant_like(unit(rng));
    for (int k = 0; k < n; ++k) t += unit(rng) * dx[static_cast<std::size_t>(k)];
    return p.amplitude * t;
  };
  if (p.field == PerturbField::kC) {
    if (!inv.has_C) return;
    for (auto& c : inv.C) c += field();
    return;
  }
  TMat& m = p.field == PerturbField::kA ? inv.A : inv.B;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const Taylor d = field();
      m(i, j) += d;
      if (j != i) m(j, i) += d;
    }
}

namespace {

Matrix frame_of(const InvariantJets& inv) { return orthonormal_frame(SymTensor2(values(inv.g))); }

double max_abs(const Cube<double>& c) {
  double r = 0.0;
  const int n = c.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) r = std::max(r, std::abs(c(i, j, k)));
  return r;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

FrameInvariants frame_invariants(const InvariantJets& inv) {
  const Matrix f = frame_of(inv);
  FrameInvariants out;
  out.A = frame_components(values(inv.A), f);
  out.B = frame_components(values(inv.B), f);
  if (inv.has_C) out.C = f.transpose() * values(inv.C);
  return out;
}

double residual_codazzi_A(const Cube<double>& nabla_A, const Matrix& B, const Vector& C) {
  const int n = nabla_A.dim();
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        r = std::max(r, std::abs(nabla_A(i, j, k) - nabla_A(i, k, j) - B(i, j) * C(k) + B(i, k) * C(j)));
  return r;
}

double residual_codazzi_B(const Cube<double>& nabla_B, const Vector& C) {
  const int n = nabla_B.dim();
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double rhs = (i == j ? C(k) : 0.0) - (i == k ? C(j) : 0.0);
        r = std::max(r, std::abs(nabla_B(i, j, k) - nabla_B(i, k, j) - rhs));
      }
  return r;
}

double residual_ricci_C(const Matrix& nabla_C, const Matrix& A, const Matrix& B) {
  const Matrix ba = B * A;
  const Matrix rhs = ba - ba.transpose();
  return (nabla_C - nabla_C.transpose() - rhs).cwiseAbs().maxCoeff();
}

double residual_gauss(const Quad<double>& R, const Matrix& A, const Matrix& B) {
  const int n = R.dim();
  auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double rhs = d(i, k) * A(j, l) - d(i, l) * A(j, k) + A(i, k) * d(j, l) - A(i, l) * d(j, k) -
                             (B(i, k) * B(j, l) - B(i, l) * B(j, k));
          r = std::max(r, std::abs(R(i, j, k, l) - rhs));
        }
  return r;
}

TraceNorm check_trace_norm(const Matrix& B) {
  const double n = static_cast<double>(B.rows());
  return TraceNorm{std::abs(B.trace()), std::abs(B.squaredNorm() - (n - 1.0) / n)};
}

PointResiduals point_residuals(const InvariantJets& inv) {
  const Matrix f = frame_of(inv);
  const FrameInvariants fi = frame_invariants(inv);
  PointResiduals r;
  const TraceNorm tn = check_trace_norm(fi.B);
  r.trace_B = tn.trace;
  r.norm_B = tn.norm;
  r.c_norm = inv.has_C ? fi.C.norm() : kNaN;

  const int g_order = inv.g(0, 0).order();
  if (g_order < 1) {
    r.codazzi_A = r.codazzi_B = r.ricci_C = r.gauss = r.parallel_A = r.parallel_B = kNaN;
    return r;
  }
  const TMat g_inv = inverse(inv.g);
  const Cube<Taylor> gamma = christoffel_jets(inv.g, g_inv);

  Cube<double> nabla_A, nabla_B;
  const bool have_dA = inv.A(0, 0).order() >= 1;
  const bool have_dB = inv.B(0, 0).order() >= 1;
  if (have_dA) nabla_A = frame_components(values(covariant_derivative(inv.A, gamma)), f);
  if (have_dB) nabla_B = frame_components(values(covariant_derivative(inv.B, gamma)), f);
  r.parallel_A = have_dA ? max_abs(nabla_A) : kNaN;
  r.parallel_B = have_dB ? max_abs(nabla_B) : kNaN;
  r.codazzi_A = have_dA && inv.has_C ? residual_codazzi_A(nabla_A, fi.B, fi.C) : kNaN;
  r.codazzi_B = have_dB && inv.has_C ? residual_codazzi_B(nabla_B, fi.C) : kNaN;
  if (inv.has_C && inv.C[0].order() >= 1) {
    const Matrix dC = frame_components(values(covariant_derivative(inv.C, gamma)), f);
    r.ricci_C = residual_ricci_C(dC, fi.A, fi.B);
  } else {
    r.ricci_C = kNaN;
  }
  if (g_order >= 2) {
    r.gauss = residual_gauss(frame_components(values(riemann_jets(inv.g, gamma)), f), fi.A, fi.B);
  } else {
    r.gauss = kNaN;
  }
  return r;
}

Tolerances Tolerances::for_strategy(DerivStrategy s) {
  Tolerances t;
  if (s == DerivStrategy::kFd) {
    t.cluster = 1e-3;
    t.residual = 1e-3;
  }
  return t;
}

namespace {

void absorb_max(double& acc, double v) {
  if (std::isnan(v)) return;
  acc = std::isnan(acc) ? v : std::max(acc, v);
}

}  // namespace

void ResidualSummary::absorb(const PointResiduals& r) {
  absorb_max(codazzi_A, r.codazzi_A);
  absorb_max(codazzi_B, r.codazzi_B);
  absorb_max(ricci_C, r.ricci_C);
  absorb_max(gauss, r.gauss);
  absorb_max(trace_B, r.trace_B);
  absorb_max(norm_B, r.norm_B);
  absorb_max(parallel_A, r.parallel_A);
  absorb_max(parallel_B, r.parallel_B);
  absorb_max(c_norm, r.c_norm);
}

void ResidualSummary::absorb_pair_relation(double r) { absorb_max(pair_relation, r); }

std::vector<std::string> ResidualSummary::failed_integrability() const {
  std::vector<std::string> out;
  const std::pair<const char*, double> items[] = {
      {"codazzi_A", codazzi_A}, {"codazzi_B", codazzi_B}, {"ricci_C", ricci_C},
      {"gauss", gauss},         {"trace_B", trace_B},     {"norm_B", norm_B},
  };
  for (const auto& [name, v] : items) {
    if (!std::isnan(v) && v > tolerances.residual) out.emplace_back(name);
  }
  return out;
}

PointSpectrum point_spectrum(const FrameInvariants& f, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> ea(f.A);
  Eigen::SelfAdjointEigenSolver<Matrix> eb(f.B);
  if (ea.info() != Eigen::Success || eb.info() != Eigen::Success) {
    fail(ErrorCode::kNonFinite, "eigen-decomposition of A or B failed");
  }
  PointSpectrum s;
  s.a_values = ea.eigenvalues();
  s.b_values = eb.eigenvalues();
  s.a_clusters = cluster(std::span<const double>(s.a_values.data(), static_cast<std::size_t>(s.a_values.size())), tol);
  s.b_clusters = cluster(std::span<const double>(s.b_values.data(), static_cast<std::size_t>(s.b_values.size())), tol);

  std::vector<Matrix> bases;
  int start = 0;
  for (const auto& c : s.a_clusters.clusters) {
    bases.push_back(ea.eigenvectors().middleCols(start, c.multiplicity));
    start += c.multiplicity;
  }
  for (std::size_t t = 0; t < bases.size(); ++t) {
    const Matrix block = bases[t].transpose() * f.B * bases[t];
    s.b_blocks.push_back(Eigen::SelfAdjointEigenSolver<Matrix>(block).eigenvalues());
    for (std::size_t u = t + 1; u < bases.size(); ++u) {
      const Matrix off = bases[t].transpose() * f.B * bases[u];
      s.alignment = std::max(s.alignment, off.cwiseAbs().maxCoeff());
    }
  }
  return s;
}

double pair_relation(const PointSpectrum& s, double tol) {
  if (s.alignment > tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "A and B are not simultaneously block diagonal: off-block entry " << s.alignment;
    fail(ErrorCode::kAlignment, msg.str());
  }
  const auto& cl = s.a_clusters.clusters;
  double r = 0.0;
  for (std::size_t t = 0; t < cl.size(); ++t)
    for (std::size_t u = t + 1; u < cl.size(); ++u)
      for (Eigen::Index a = 0; a < s.b_blocks[t].size(); ++a)
        for (Eigen::Index b = 0; b < s.b_blocks[u].size(); ++b)
          r = std::max(r, std::abs(cl[t].value + cl[u].value - s.b_blocks[t](a) * s.b_blocks[u](b)));
  return r;
}

namespace {

bool same_pattern(const EigenClusterSet& a, const EigenClusterSet& b) { return a.multiplicities() == b.multiplicities(); }

// Averages matching clusters over samples; returns false when the patterns
// differ. drift = max over clusters of (max - min) of the cluster value.
bool merge_clusters(const std::vector<const EigenClusterSet*>& sets, double tol, EigenClusterSet& out,
                    double& drift) {
  out = EigenClusterSet{};
  out.tolerance = tol;
  drift = 0.0;
  for (const auto* s : sets)
    if (!same_pattern(*s, *sets.front())) return false;
  for (std::size_t t = 0; t < sets.front()->clusters.size(); ++t) {
    double lo = INFINITY, hi = -INFINITY, sum = 0.0, spread = 0.0;
    for (const auto* s : sets) {
      const EigenCluster& c = s->clusters[t];
      lo = std::min(lo, c.value);
      hi = std::max(hi, c.value);
      sum += c.value;
      spread = std::max(spread, c.spread);
    }
    out.clusters.push_back({sum / static_cast<double>(sets.size()), sets.front()->clusters[t].multiplicity, spread});
    drift = std::max(drift, hi - lo);
  }
  return true;
}

}  // namespace

Eigenstructure eigenstructure(const std::vector<PointSpectrum>& samples, double tol) {
  if (samples.size() < 2) fail(ErrorCode::kParameter, "eigenstructure needs at least 2 sample points");
  Eigenstructure e;
  std::vector<const EigenClusterSet*> a_sets, b_sets;
  for (const auto& s : samples) {
    e.cluster_counts.push_back(s.a_clusters.count());
    a_sets.push_back(&s.a_clusters);
    b_sets.push_back(&s.b_clusters);
  }
  e.isoparametric = merge_clusters(a_sets, tol, e.a, e.a_drift);
  if (!merge_clusters(b_sets, tol, e.b, e.b_drift)) e.b_drift = kNaN;
  for (const auto& s : samples)
    for (const auto& blk : s.b_blocks)
      if (blk.size() > 0) e.b_block_spread = std::max(e.b_block_spread, blk.maxCoeff() - blk.minCoeff());
  if (e.isoparametric) {
    e.b_zero_on_cluster.assign(e.a.clusters.size(), true);
    for (const auto& s : samples)
      for (std::size_t t = 0; t < s.b_blocks.size(); ++t)
        if (s.b_blocks[t].cwiseAbs().maxCoeff() > tol) e.b_zero_on_cluster[t] = false;
  }
  return e;
}

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::kCase1Isotropic: return "case1_isotropic";
    case Branch::kCylinderS: return "case2_parallel_B.cylinder_s";
    case Branch::kCylinderFlat: return "case2_parallel_B.cylinder_flat";
    case Branch::kCylinderH: return "case2_parallel_B.cylinder_h";
    case Branch::kWarped: return "case2_parallel_B.warped";
    case Branch::kEx11Type: return "case3_nonparallel_B.ex11_type";
    case Branch::kEx12Type: return "case3_nonparallel_B.ex12_type";
    case Branch::kIndeterminate: return "indeterminate";
  }
  return "indeterminate";
}

std::optional<Branch> parse_branch(const std::string& name) {
  for (Branch b : {Branch::kCase1Isotropic, Branch::kCylinderS, Branch::kCylinderFlat, Branch::kCylinderH,
                   Branch::kWarped, Branch::kEx11Type, Branch::kEx12Type, Branch::kIndeterminate}) {
    if (name == branch_name(b)) return b;
  }
  return std::nullopt;
}

ClassificationVerdict classify(const ResidualSummary& res, const Eigenstructure& eig, std::optional<double> epsilon) {
  ClassificationVerdict v;
  v.diagnostics = res;
  v.s = eig.a.count();
  v.multiplicities = eig.a.multiplicities();
  const double tol = res.tolerances.cluster;
  auto& why = v.reasons;

  for (const auto& name : res.failed_integrability()) why.push_back("integrability_residual:" + name);
  const bool a_parallel = !std::isnan(res.parallel_A) && res.parallel_A <= tol;
  if (std::isnan(res.parallel_A)) {
    why.emplace_back("A_parallelism_unavailable");
  } else if (!a_parallel) {
    why.emplace_back("A_not_parallel");
  }
  if (std::isnan(res.c_norm)) {
    why.emplace_back("conformal_form_unavailable");
  } else if (res.c_norm > tol) {
    why.emplace_back("conformal_form_nonzero_with_parallel_A");
  }
  if (!eig.isoparametric) {
    why.emplace_back("non_isoparametric:A_cluster_pattern_varies");
    v.s = -1;
    v.multiplicities.clear();
  }
  if (a_parallel && eig.isoparametric && v.s > 3) {
    v.eigenvalue_bound_violated = true;
    why.push_back("eigenvalue_bound_violated:s=" + std::to_string(v.s) + ">3_with_parallel_A");
  }
  if (a_parallel && v.s >= 2 && !std::isnan(res.pair_relation) && res.pair_relation > res.tolerances.residual) {
    why.emplace_back("pair_relation_violated");
  }
  if (!why.empty()) return v;

  const bool b_parallel = !std::isnan(res.parallel_B) && res.parallel_B <= tol;
  switch (v.s) {
    case 1: v.branch = Branch::kCase1Isotropic; break;
    case 2: {
      // Cylinders carry one B value per A-eigenspace; a B that splits an
      // A-eigenspace but vanishes on the other one is the light-cone product
      // type, told apart by the sign of A where B is nonzero.
      const bool block_scalar = eig.b_block_spread <= tol;
      const auto& z = eig.b_zero_on_cluster;
      const bool one_zero_block = z.size() == 2 && z[0] != z[1];
      if (b_parallel && block_scalar) {
        if (!epsilon) {
          why.emplace_back("cylinder_subtype_needs_space_form_ambient");
        } else if (*epsilon > 0.0) {
          v.branch = Branch::kCylinderS;
        } else if (*epsilon < 0.0) {
          v.branch = Branch::kCylinderH;
        } else {
          v.branch = Branch::kCylinderFlat;
        }
      } else if (one_zero_block) {
        const double a = eig.a.clusters[z[0] ? 1 : 0].value;
        if (a > tol) {
          v.branch = Branch::kEx11Type;
        } else if (a < -tol) {
          v.branch = Branch::kEx12Type;
        } else {
          why.emplace_back("product_type_A_sign_undetermined");
        }
        if (b_parallel) v.notes.emplace_back("B_parallel_in_nonparallel_branch");
        if (!block_scalar) v.notes.emplace_back("B_not_scalar_on_A_eigenspace");
      } else if (!b_parallel) {
        why.emplace_back("nonparallel_B_without_single_zero_B_block");
      } else {
        why.emplace_back("parallel_B_not_scalar_on_A_eigenspaces");
      }
      break;
    }
    case 3:
      if (b_parallel) {
        v.branch = Branch::kWarped;
      } else {
        why.emplace_back("three_eigenvalues_but_B_not_parallel");
      }
      break;
    default: why.emplace_back("no_eigenvalue_clusters"); break;
  }
  return v;
}

}  // namespace blaschke
