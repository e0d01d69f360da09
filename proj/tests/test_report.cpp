#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "test_support.hpp"
#include "blaschke/report.hpp"

using namespace blaschke;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

ErrorCode code_of(auto&& f, std::string* message = nullptr) {
  try {
    f();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kConfig;
}

RunConfig flat_config(int samples = 6) {
  RunConfig c;
  c.surface = "cylinder_flat";
  c.samples = samples;
  c.seed = 7;
  c.threads = 1;
  return c;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "blaschke_test_report";
  fs::create_directories(dir);
  return dir / name;
}

std::string write(const std::string& name, const std::string& text) {
  const fs::path p = scratch(name);
  std::ofstream(p) << text;
  return p.string();
}

std::string flat_grid() {
  const CatalogSurface s = make_cylinder_flat(1, 3);
  return export_grid(s.imm, centered_lattice(s, 4, 0.05));
}

}  // namespace

TEST_CASE("report JSON is canonical and carries the verdict") {
  const Report r = run_check(flat_config());
  CHECK(exit_code(r) == 0);
  const std::string text = report_json(r);
  CHECK(canonical_json(text) == text);
  const json j = json::parse(text);
  CHECK(j.contains("verdict"));
  CHECK(text.find("wall") == std::string::npos);
  CHECK(text.find(branch_name(Branch::kCylinderFlat)) != std::string::npos);
  // A reformatted document canonicalizes back to the same bytes.
  CHECK(canonical_json(nlohmann::ordered_json::parse(text).dump(2)) == text);
}

TEST_CASE("CSV has one row per sample") {
  const Report r = run_check(flat_config(9));
  const std::string csv = report_csv(r);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
  CHECK(csv.rfind("index,x0,x1,x2,usable,tau,", 0) == 0);
}

TEST_CASE("thread count does not change the report") {
  RunConfig one = flat_config(12), many = flat_config(12);
  one.surface = many.surface = "warped";
  many.threads = 8;
  CHECK(report_json(run_check(one)) == report_json(run_check(many)));
  one.surface = many.surface = "example12";
  CHECK(report_json(run_check(one)) == report_json(run_check(many)));
}

TEST_CASE("configuration errors") {
  RunConfig c = flat_config();
  c.samples = 1;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::kConfig);
  c = flat_config();
  c.tol_residual = -1.0;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::kConfig);
  c = flat_config();
  c.grid_path = "x.json";
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::kConfig);
  c = flat_config();
  c.surface = "no_such_surface";
  CHECK(code_of([&] { run_check(c); }) == ErrorCode::kUnknownSurface);
  c = flat_config();
  c.params["k"] = 9;
  CHECK(code_of([&] { run_check(c); }) == ErrorCode::kParameter);
}

TEST_CASE("perturbed invariants fail the integrability checks") {
  RunConfig c = flat_config();
  c.perturb = Perturbation{PerturbField::kA, 1e-3, 3};
  CHECK(exit_code(run_check(c)) == 3);
}

TEST_CASE("regularity abort") {
  RunConfig c = flat_config();
  c.tol_regularity = 1e6;
  CHECK(code_of([&] { run_check(c); }) == ErrorCode::kRegularityAbort);

  // Totally geodesic space-like hyperplane: e^{2tau} = 0 everywhere.
  const Immersion plane = testing::from_exact(
      3, Ambient{Signature(4, 1), AmbientConstraint::kNone, 1.0},
      [](std::span<const Taylor> x) { return std::vector<Taylor>{x[0] * 0.0, x[0], x[1], x[2]}; }, 1.0, "plane");
  GridLattice l{Vector::Constant(3, -0.1), Vector::Constant(3, 0.1), {4, 4, 4}};
  RunConfig g;
  g.grid_path = write("plane.json", export_grid(plane, l));
  g.threads = 1;
  CHECK(code_of([&] { run_check(g); }) == ErrorCode::kRegularityAbort);
}

TEST_CASE("lattice round trip reproduces the verdict") {
  const std::string text = flat_grid();
  const GridImmersion g = parse_grid(text);
  CHECK(g.lattice.node_count() == 64);
  CHECK(g.interior.size() == 8);
  // Stored order-4 data is exact; order 5 comes from differencing interior nodes.
  const CatalogSurface s = make_cylinder_flat(1, 3);
  const Vector x = g.lattice.node(g.interior.front());
  const JetData a = jet(g.imm, x, 4, DerivStrategy::kExact), b = jet(s.imm, x, 4, DerivStrategy::kExact);
  const int ax[] = {0, 1, 2, 2};
  CHECK((a.value() - b.value()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((a.partial(ax) - b.partial(ax)).cwiseAbs().maxCoeff() < 1e-9);
  CHECK_NOTHROW(jet(g.imm, x, 5, DerivStrategy::kExact));
  CHECK(code_of([&] { jet(g.imm, g.lattice.node(0), 5, DerivStrategy::kExact); }) == ErrorCode::kChartBoundary);

  RunConfig c;
  c.grid_path = write("flat.json", text);
  c.threads = 1;
  const Report r = run_check(c);
  CHECK(r.samples.size() == 8);
  CHECK(r.verdict.branch == Branch::kCylinderFlat);
  CHECK(exit_code(r) == 0);
}

TEST_CASE("lattice file errors") {
  const json base = json::parse(flat_grid());
  auto run = [](const json& j, std::string* msg = nullptr) {
    return code_of([&] { parse_grid(j.dump()); }, msg);
  };

  CHECK(code_of([] { parse_grid("{"); }) == ErrorCode::kGridFormat);
  json j = base;
  j["format_version"] = 2;
  CHECK(run(j) == ErrorCode::kGridFormat);
  j = base;
  j["jet_order"] = 3;
  CHECK(run(j) == ErrorCode::kGridFormat);
  j = base;
  j["nodes"].erase(j["nodes"].size() - 1);
  CHECK(run(j) == ErrorCode::kGridFormat);
  j = base;
  j["nodes"][5]["partials"].erase("0,1");
  CHECK(run(j) == ErrorCode::kGridFormat);

  SUBCASE("asymmetric mixed partial") {
    j = base;
    json bent = j["nodes"][5]["partials"]["0,1"];
    bent[1] = bent[1].get<double>() + 1e-3;
    j["nodes"][5]["partials"]["1,0"] = bent;
    std::string msg;
    CHECK(run(j, &msg) == ErrorCode::kGridSymmetry);
    CHECK(msg.find("node 5") != std::string::npos);
  }
  SUBCASE("de Sitter lattice violating <u,u> = r^2") {
    const CatalogSurface s = make_cylinder_desitter(1, 3, 1.0);
    j = json::parse(export_grid(s.imm, centered_lattice(s, 3, 0.05)));
    json v = j["nodes"][3]["partials"][""];
    v[0] = v[0].get<double>() + 1e-3;
    j["nodes"][3]["partials"][""] = v;
    std::string msg;
    CHECK(run(j, &msg) == ErrorCode::kGridConstraint);
    CHECK(msg.find("node 3") != std::string::npos);
  }
  CHECK(code_of([] { load_grid_immersion("/nonexistent/grid.json"); }) == ErrorCode::kIo);
}

TEST_CASE("lattice needs interior nodes") {
  const CatalogSurface s = make_cylinder_flat(1, 3);
  RunConfig c;
  c.grid_path = write("tiny.json", export_grid(s.imm, centered_lattice(s, 2, 0.05)));
  CHECK(code_of([&] { run_check(c); }) == ErrorCode::kGridFormat);
}

#ifdef BLASCHKE_GOLDEN_DIR
TEST_CASE("committed golden reports are current") {
  struct Case {
    const char* file;
    RunConfig config;
  };
  std::vector<Case> cases;
  RunConfig flat = flat_config(5);
  flat.params = {{"k", 1}, {"n", 3}};
  cases.push_back({"cylinder_flat.json", flat});
  RunConfig warped = flat_config(5);
  warped.surface = "warped";
  warped.params = {{"p", 1}, {"q", 1}, {"n", 4}, {"r", 1}};
  cases.push_back({"warped.json", warped});
  RunConfig ex = flat_config(5);
  ex.surface = "example12";
  cases.push_back({"example12.json", ex});
  for (const auto& c : cases) {
    const fs::path p = fs::path(BLASCHKE_GOLDEN_DIR) / c.file;
    INFO(p.string());
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(report_json(run_check(c.config)) == ss.str());
  }
}
#endif
