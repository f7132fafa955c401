#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "test_util.hpp"

using namespace asymptopt;
namespace fs = std::filesystem;

namespace {

bool near(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return a.rows() == 0 || (a - b).cwiseAbs().maxCoeff() < 1e-14;
}

// Row renormalization is only idempotent up to float rounding.
bool polyhedra_equal(const Polyhedron& a, const Polyhedron& b) {
  return near(a.A(), b.A()) && near(Mat(a.b()), Mat(b.b())) && near(a.E(), b.E()) &&
         near(Mat(a.d()), Mat(b.d()));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

RunConfig small_42_config() {
  RunConfig cfg = default_config(1);
  cfg.grid = testutil::grid1d(-2, 4, 0.05);
  cfg.simplex_resolution = 10;
  return cfg;
}

}  // namespace

TEST_CASE("bundled corpus parses with the documented shapes") {
  auto e31 = testutil::load_problem("example-3.1");
  CHECK(e31.name == "example-3.1");
  CHECK(e31.n == 2);
  CHECK(e31.m == 2);
  CHECK(e31.feasible.pieces().size() == 3);

  auto e41 = testutil::load_problem("example-4.1");
  CHECK(e41.n == 1);
  CHECK(e41.m == 2);
  CHECK(e41.feasible.pieces().size() == 1);

  auto e42 = testutil::load_problem("example-4.2");
  REQUIRE(e42.closed_form.has_value());
  CHECK(*e42.closed_form == "example-4.2");

  auto root = testutil::load_problem("sqrt-abs");
  REQUIRE(root.alpha.has_value());
  CHECK(*root.alpha == doctest::Approx(1.0));
  CHECK(root.m == 1);
}

TEST_CASE("schema violations carry JSON pointers") {
  json j;
  j["name"] = "bad";
  j["n"] = 1;
  j["m"] = 0;
  j["objectives"] = json::array();
  j["feasible_set"] = json::array({json::object()});
  CHECK_THROWS_WITH_AS(parse_problem_json(j, "test"), doctest::Contains("/m"), SchemaError);

  j["m"] = 1;
  j["objectives"] = json::array({json{{"op", "affine"}, {"a", {1, 2}}, {"b", 0}}});
  CHECK_THROWS_WITH_AS(parse_problem_json(j, "test"), doctest::Contains("/objectives/0"),
                       SchemaError);

  j["objectives"] = json::array({json{{"op", "frobnicate"}}});
  CHECK_THROWS_WITH_AS(parse_problem_json(j, "test"), doctest::Contains("unknown operator"),
                       SchemaError);

  j["objectives"] = json::array({json{{"op", "coord"}, {"j", 0}}});
  j["feasible_set"] = json::array({json{{"A", {{1.0}}}}});
  CHECK_THROWS_WITH_AS(parse_problem_json(j, "test"), doctest::Contains("/b"), SchemaError);
}

TEST_CASE("improper objectives are rejected") {
  json j;
  j["name"] = "improper";
  j["n"] = 1;
  j["m"] = 1;
  j["objectives"] = json::array(
      {json{{"op", "scale"}, {"k", -1.0}, {"arg", json{{"op", "quad"}, {"Q", {{2.0}}}, {"c", {0.0}}, {"b", 0.0}}}}});
  j["feasible_set"] = json::array({json::object()});
  CHECK_THROWS_WITH_AS(parse_problem_json(j, "test"), doctest::Contains("improper"), SchemaError);
}

TEST_CASE("emit and parse round-trip structurally") {
  for (const std::string name : {"example-3.1", "example-4.1", "example-4.2", "sqrt-abs"}) {
    auto spec = testutil::load_problem(name);
    auto spec2 = parse_problem_json(emit_problem(spec), "round-trip");
    CHECK(spec2.name == spec.name);
    CHECK(spec2.n == spec.n);
    CHECK(spec2.m == spec.m);
    REQUIRE(spec2.objectives.components.size() == spec.objectives.components.size());
    for (size_t i = 0; i < spec.objectives.components.size(); ++i)
      CHECK(structurally_equal(spec2.objectives.components[i], spec.objectives.components[i]));
    REQUIRE(spec2.feasible.pieces().size() == spec.feasible.pieces().size());
    for (size_t p = 0; p < spec.feasible.pieces().size(); ++p)
      CHECK(polyhedra_equal(spec2.feasible.pieces()[p], spec.feasible.pieces()[p]));
    CHECK(spec2.closed_form == spec.closed_form);
    CHECK(spec2.alpha.has_value() == spec.alpha.has_value());
  }
}

TEST_CASE("config files parse with defaults") {
  auto cfg = testutil::load_config("example-3.1", 2);
  CHECK(cfg.grid.h == doctest::Approx(0.01));
  CHECK(cfg.grid.box.lo[0] == doctest::Approx(-2.0));
  CHECK(cfg.grid.box.hi[1] == doctest::Approx(4.0));
  CHECK(cfg.simplex_resolution == 20);
  CHECK(cfg.sweep.radii.size() == 5);

  auto root = testutil::load_config("sqrt-abs", 1);
  CHECK(root.asym.t_max == doctest::Approx(1e14));
}

TEST_CASE("command pipeline writes deterministic artifacts") {
  auto spec = testutil::load_problem("example-4.2");
  RunConfig cfg = small_42_config();
  fs::path base = fs::temp_directory_path() / "asymptopt_det";
  fs::remove_all(base);
  int code1 = run_command("all", spec, cfg, (base / "a").string());
  int code2 = run_command("all", spec, cfg, (base / "b").string());
  CHECK(code1 == code2);
  CHECK(code1 == 0);

  int files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(base / "a")) {
    if (!entry.is_regular_file()) continue;
    ++files;
    fs::path rel = fs::relative(entry.path(), base / "a");
    CHECK(slurp(entry.path()) == slurp(base / "b" / rel));
  }
  CHECK(files > 5);
  fs::remove_all(base);
}

TEST_CASE("exit codes follow the contract") {
  fs::path base = fs::temp_directory_path() / "asymptopt_codes";
  fs::remove_all(base);

  auto e41 = testutil::load_problem("example-4.1");
  RunConfig cfg41 = default_config(1);
  cfg41.grid = testutil::grid1d(-10, 10, 0.1);
  CHECK(run_command("check-existence", e41, cfg41, (base / "e41").string()) == kVerdictFailure);
  CHECK(run_command("sharp", e41, cfg41, (base / "e41s").string()) == kPrecondition);

  auto e42 = testutil::load_problem("example-4.2");
  RunConfig cfg42 = small_42_config();
  CHECK(run_command("check-existence", e42, cfg42, (base / "e42").string()) == kOk);
  CHECK(run_command("psi", e42, cfg42, (base / "e42p").string()) == kOk);
  CHECK(run_command("stability", e42, cfg42, (base / "e42st").string()) == kOk);

  CHECK_THROWS_AS(run_command("bogus", e42, cfg42, (base / "x").string()), std::invalid_argument);
  fs::remove_all(base);
}

TEST_CASE("existence artifact records the sampled witness") {
  fs::path base = fs::temp_directory_path() / "asymptopt_wit";
  fs::remove_all(base);
  auto e41 = testutil::load_problem("example-4.1");
  RunConfig cfg = default_config(1);
  cfg.grid = testutil::grid1d(-10, 10, 0.1);
  run_command("check-existence", e41, cfg, base.string());
  std::ifstream in(base / "existence.json");
  json j;
  in >> j;
  CHECK(j["holds"] == false);
  CHECK(j["label"] == "sampled verdict");
  CHECK(j["witness"]["objective"] == 0);
  CHECK(std::abs(j["witness"]["direction"][0].get<double>() - 1.0) < 1e-12);
  fs::remove_all(base);
}
