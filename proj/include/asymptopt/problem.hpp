#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "asymptopt/stability.hpp"

namespace asymptopt {

using json = nlohmann::ordered_json;

// Input-validation failure with a JSON-pointer-like location.
struct SchemaError : std::runtime_error {
  std::string pointer;
  SchemaError(std::string ptr, const std::string& what)
      : std::runtime_error(ptr + ": " + what), pointer(std::move(ptr)) {}
};

struct ProblemSpec {
  std::string name;
  int n = 0, m = 0;
  VectorObjective objectives;
  PolyUnion feasible = PolyUnion::whole_space(1);
  std::optional<std::string> closed_form;
  std::optional<double> alpha;
};

ProblemSpec parse_problem(const std::string& path);
ProblemSpec parse_problem_json(const json& j, const std::string& origin);
json emit_problem(const ProblemSpec& spec);

ScalarExpr parse_expr(const json& j, int dim, const std::string& ptr);
json emit_expr(const ScalarExpr& e);

struct RunConfig {
  GridSpec grid;
  AsymConfig asym;
  SweepConfig sweep;
  int simplex_resolution = 20;
  std::vector<double> sharp_radii = {3.0};
  std::vector<double> asym_levels = {1.0};
  std::uint64_t seed = 20240501;
};

RunConfig default_config(int n);
RunConfig parse_config(const std::string& path, int n);
RunConfig parse_config_json(const json& j, int n);

std::string format_double(double v);
void write_cloud_csv(const std::string& path, const PointCloud& cloud);

}  // namespace asymptopt
