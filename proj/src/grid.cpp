// Lattice interchange files: per-node partials of an immersion up to order 4.
//
// {
//   "format_version": 1,
//   "chart_dim": n,
//   "ambient": {"dim": N, "time_dims": s, "constraint": "sphere", "radius": r},
//   "lattice": {"origin": [...], "spacing": [...], "shape": [...]},
//   "jet_order": 4,
//   "nodes": [{"index": [i0, ...], "partials": {"": u, "0": u_0, "0,1": u_01, ...}}, ...]
// }
//
// Nodes are listed with the last axis fastest. Partial keys are axis lists;
// any ordering is accepted, repeated orderings must agree within 1e-8.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "blaschke/error.hpp"
#include "blaschke/report.hpp"
#include "json_writer.hpp"

namespace blaschke {

int GridLattice::node_count() const {
  int c = 1;
  for (int s : shape) c *= s;
  return c;
}

std::vector<int> GridLattice::multi_index(int flat) const {
  std::vector<int> idx(shape.size());
  for (std::size_t d = shape.size(); d-- > 0;) {
    idx[d] = flat % shape[d];
    flat /= shape[d];
  }
  return idx;
}

int GridLattice::flat_index(const std::vector<int>& idx) const {
  int f = 0;
  for (std::size_t d = 0; d < shape.size(); ++d) f = f * shape[d] + idx[d];
  return f;
}

Vector GridLattice::node(int flat) const {
  const auto idx = multi_index(flat);
  Vector x = origin;
  for (int d = 0; d < dim(); ++d) x(d) += spacing(d) * idx[static_cast<std::size_t>(d)];
  return x;
}

namespace {

using Axes = std::vector<int>;
using NodePartials = std::map<Axes, Vector>;

constexpr double kSymmetryTol = 1e-8;

// All nondecreasing axis lists of length <= order.
std::vector<Axes> multisets(int dim, int order) {
  std::vector<Axes> out{Axes{}};
  std::vector<Axes> level{Axes{}};
  for (int k = 1; k <= order; ++k) {
    std::vector<Axes> next;
    for (const auto& a : level) {
      for (int v = a.empty() ? 0 : a.back(); v < dim; ++v) {
        Axes b = a;
        b.push_back(v);
        next.push_back(b);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    level = std::move(next);
  }
  return out;
}

std::string key_of(const Axes& a) {
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a[i]);
  }
  return s;
}

[[noreturn]] void bad(const std::string& msg) { fail(ErrorCode::kGridFormat, "grid file: " + msg); }

const ojson& field(const ojson& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) bad(std::string("missing field '") + name + "'");
  return j.at(name);
}

int int_field(const ojson& j, const char* name) {
  const ojson& v = field(j, name);
  if (!v.is_number_integer()) bad(std::string("field '") + name + "' must be an integer");
  return v.get<int>();
}

double real_of(const ojson& v, const std::string& what) {
  if (!v.is_number()) bad(what + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) bad(what + " is not finite");
  return d;
}

Vector real_array(const ojson& v, int len, const std::string& what) {
  if (!v.is_array() || static_cast<int>(v.size()) != len) {
    bad(what + " must be an array of length " + std::to_string(len));
  }
  Vector out(len);
  for (int i = 0; i < len; ++i) out(i) = real_of(v[static_cast<std::size_t>(i)], what);
  return out;
}

Axes parse_key(const std::string& key, int dim, const std::string& where) {
  Axes a;
  if (key.empty()) return a;
  std::stringstream ss(key);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    int v = -1;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || v < 0 || v >= dim) bad(where + ": bad partial key '" + key + "'");
    a.push_back(v);
  }
  return a;
}

std::string node_label(int flat, const std::vector<int>& idx) {
  std::string s = "node " + std::to_string(flat) + " [";
  for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + std::to_string(idx[i]);
  return s + "]";
}

struct GridData {
  GridLattice lattice;
  int ambient_dim = 0;
  std::vector<NodePartials> nodes;
};

// Locates the node at `x`; evaluation between nodes is unsupported.
std::vector<int> locate(const GridLattice& l, const Vector& x) {
  if (x.size() != l.dim()) fail(ErrorCode::kDimensionMismatch, "grid point has wrong chart dimension");
  std::vector<int> idx(static_cast<std::size_t>(l.dim()));
  for (int d = 0; d < l.dim(); ++d) {
    const double t = (x(d) - l.origin(d)) / l.spacing(d);
    const double r = std::round(t);
    if (std::abs(t - r) > 1e-9 || r < 0 || r >= l.shape[static_cast<std::size_t>(d)]) {
      fail(ErrorCode::kChartBoundary, "lattice immersion is only defined at its nodes");
    }
    idx[static_cast<std::size_t>(d)] = static_cast<int>(r);
  }
  return idx;
}

JetData node_jet(const GridData& g, const Vector& x, int order) {
  if (order > kMaxJetOrder) fail(ErrorCode::kParameter, "jet order must be in [0, 5]");
  const auto idx = locate(g.lattice, x);
  const NodePartials& here = g.nodes[static_cast<std::size_t>(g.lattice.flat_index(idx))];
  return JetData::from_partials(x, order, g.ambient_dim, [&](std::span<const int> axes) -> Vector {
    const Axes a(axes.begin(), axes.end());
    if (static_cast<int>(a.size()) <= kGridJetOrder) return here.at(a);
    // Order 5: central difference of the stored order-4 partial along the
    // first axis.
    const int d = a.front();
    const Axes rest(a.begin() + 1, a.end());
    auto lo = idx, hi = idx;
    --lo[static_cast<std::size_t>(d)];
    ++hi[static_cast<std::size_t>(d)];
    if (lo[static_cast<std::size_t>(d)] < 0 || hi[static_cast<std::size_t>(d)] >= g.lattice.shape[static_cast<std::size_t>(d)]) {
      fail(ErrorCode::kChartBoundary, "order-5 jets need lattice neighbours on both sides");
    }
    const Vector& up = g.nodes[static_cast<std::size_t>(g.lattice.flat_index(hi))].at(rest);
    const Vector& dn = g.nodes[static_cast<std::size_t>(g.lattice.flat_index(lo))].at(rest);
    return (up - dn) / (2.0 * g.lattice.spacing(d));
  });
}

}  // namespace

GridImmersion parse_grid(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const std::exception& e) {
    bad(std::string("not valid JSON (") + e.what() + ")");
  }
  if (int_field(j, "format_version") != kGridFormatVersion) {
    bad("unsupported format_version (expected " + std::to_string(kGridFormatVersion) + ")");
  }
  const int n = int_field(j, "chart_dim");
  if (n < 1) bad("chart_dim must be >= 1");
  if (int_field(j, "jet_order") != kGridJetOrder) bad("jet_order must be " + std::to_string(kGridJetOrder));

  const ojson& amb = field(j, "ambient");
  const int dim = int_field(amb, "dim");
  const int time_dims = int_field(amb, "time_dims");
  if (dim < n + 1 || time_dims < 0 || time_dims > dim) bad("ambient dim/time_dims inconsistent with chart_dim");
  const ojson& cname = field(amb, "constraint");
  if (!cname.is_string()) bad("ambient constraint must be a string");
  Ambient ambient;
  ambient.signature = Signature(dim, time_dims);
  try {
    ambient.constraint = parse_constraint(cname.get<std::string>());
  } catch (const Error& e) {
    bad(e.what());
  }
  ambient.radius = real_of(field(amb, "radius"), "ambient radius");
  if (ambient.radius <= 0.0) bad("ambient radius must be positive");

  auto data = std::make_shared<GridData>();
  data->ambient_dim = dim;
  GridLattice& l = data->lattice;
  const ojson& lat = field(j, "lattice");
  l.origin = real_array(field(lat, "origin"), n, "lattice origin");
  l.spacing = real_array(field(lat, "spacing"), n, "lattice spacing");
  const ojson& shape = field(lat, "shape");
  if (!shape.is_array() || static_cast<int>(shape.size()) != n) bad("lattice shape must have chart_dim entries");
  for (const auto& s : shape) {
    if (!s.is_number_integer() || s.get<int>() < 1) bad("lattice shape entries must be positive integers");
    l.shape.push_back(s.get<int>());
  }
  for (int d = 0; d < n; ++d)
    if (l.spacing(d) <= 0.0) bad("lattice spacing must be positive");

  const ojson& nodes = field(j, "nodes");
  if (!nodes.is_array() || static_cast<int>(nodes.size()) != l.node_count()) {
    bad("nodes must be an array of " + std::to_string(l.node_count()) + " entries");
  }
  const auto required = multisets(n, kGridJetOrder);
  for (int f = 0; f < l.node_count(); ++f) {
    const ojson& node = nodes[static_cast<std::size_t>(f)];
    const auto idx = l.multi_index(f);
    const std::string where = node_label(f, idx);
    if (node.contains("index")) {
      const ojson& ji = node.at("index");
      if (!ji.is_array() || ji.size() != idx.size()) bad(where + ": bad index");
      for (std::size_t d = 0; d < idx.size(); ++d)
        if (!ji[d].is_number_integer() || ji[d].get<int>() != idx[d]) bad(where + ": index out of lattice order");
    }
    const ojson& parts = field(node, "partials");
    if (!parts.is_object()) bad(where + ": partials must be an object");
    NodePartials np;
    for (auto it = parts.begin(); it != parts.end(); ++it) {
      Axes a = parse_key(it.key(), n, where);
      if (static_cast<int>(a.size()) > kGridJetOrder) bad(where + ": partial '" + it.key() + "' exceeds jet order");
      std::sort(a.begin(), a.end());
      const Vector v = real_array(it.value(), dim, where + " partial '" + it.key() + "'");
      const auto found = np.find(a);
      if (found == np.end()) {
        np.emplace(a, v);
      } else {
        const double diff = (found->second - v).cwiseAbs().maxCoeff();
        if (diff > kSymmetryTol) {
          std::ostringstream msg;
          msg.precision(17);
          msg << "grid file: " << where << ": mixed partial '" << it.key() << "' differs from its permutation '"
              << key_of(a) << "' by " << diff;
          fail(ErrorCode::kGridSymmetry, msg.str());
        }
      }
    }
    for (const auto& a : required)
      if (!np.count(a)) bad(where + ": missing partial '" + key_of(a) + "'");
    try {
      check_ambient(ambient, np.at(Axes{}));
    } catch (const Error& e) {
      fail(ErrorCode::kGridConstraint, "grid file: " + where + ": " + e.what());
    }
    data->nodes.push_back(std::move(np));
  }

  GridImmersion out;
  out.lattice = l;
  Immersion& imm = out.imm;
  imm.chart_dim = n;
  imm.ambient = ambient;
  imm.supplied = [data](const Vector& x, int order) { return node_jet(*data, x, order); };
  imm.eval = [data](const Vector& x) { return node_jet(*data, x, 0).value(); };
  imm.domain_lo = l.origin;
  imm.domain_hi = l.node(l.node_count() - 1);
  imm.label = "lattice immersion";
  for (int f = 0; f < l.node_count(); ++f) {
    const auto idx = l.multi_index(f);
    bool inner = true;
    for (int d = 0; d < n; ++d)
      inner = inner && idx[static_cast<std::size_t>(d)] > 0 && idx[static_cast<std::size_t>(d)] + 1 < l.shape[static_cast<std::size_t>(d)];
    if (inner) out.interior.push_back(f);
  }
  return out;
}

GridImmersion load_grid_immersion(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open grid file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_grid(ss.str());
}

std::string export_grid(const Immersion& imm, const GridLattice& lattice) {
  const int n = imm.chart_dim;
  if (lattice.dim() != n) fail(ErrorCode::kDimensionMismatch, "lattice dimension != chart dimension");
  ojson j;
  j["format_version"] = kGridFormatVersion;
  j["chart_dim"] = n;
  j["ambient"] = {{"dim", imm.ambient.signature.total_dim},
                  {"time_dims", imm.ambient.signature.time_dims},
                  {"constraint", constraint_name(imm.ambient.constraint)},
                  {"radius", imm.ambient.radius}};
  auto arr = [](const Vector& v) {
    ojson a = ojson::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
  };
  j["lattice"] = {{"origin", arr(lattice.origin)}, {"spacing", arr(lattice.spacing)}, {"shape", lattice.shape}};
  j["jet_order"] = kGridJetOrder;
  const auto sets = multisets(n, kGridJetOrder);
  ojson nodes = ojson::array();
  for (int f = 0; f < lattice.node_count(); ++f) {
    const JetData u = jet(imm, lattice.node(f), kGridJetOrder, DerivStrategy::kExact);
    ojson parts = ojson::object();
    for (const auto& a : sets) parts[key_of(a)] = arr(u.partial(std::span<const int>(a)));
    nodes.push_back({{"index", lattice.multi_index(f)}, {"partials", std::move(parts)}});
  }
  j["nodes"] = std::move(nodes);
  return write_json(j);
}

GridLattice centered_lattice(const CatalogSurface& s, int shape, double spacing) {
  if (shape < 1 || !(spacing > 0.0)) fail(ErrorCode::kConfig, "lattice needs shape >= 1 and spacing > 0");
  GridLattice l;
  const int n = static_cast<int>(s.box_lo.size());
  const Vector centre = 0.5 * (s.box_lo + s.box_hi);
  l.spacing = Vector::Constant(n, spacing);
  l.origin = centre - Vector::Constant(n, 0.5 * spacing * (shape - 1));
  l.shape.assign(static_cast<std::size_t>(n), shape);
  return l;
}

}  // namespace blaschke
