#include "asymptopt/problem.hpp"

#include <cstdio>
#include <fstream>

namespace asymptopt {

namespace {

double num_at(const json& j, const char* key, const std::string& ptr, bool required,
              double fallback = 0.0) {
  if (!j.contains(key)) {
    if (required) throw SchemaError(ptr + "/" + key, "missing required number");
    return fallback;
  }
  if (!j[key].is_number()) throw SchemaError(ptr + "/" + key, "expected a number");
  return j[key].get<double>();
}

Vec vec_at(const json& j, const char* key, const std::string& ptr, int expect_dim = -1) {
  if (!j.contains(key) || !j[key].is_array())
    throw SchemaError(ptr + "/" + key, "expected an array of numbers");
  const auto& arr = j[key];
  Vec v(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number())
      throw SchemaError(ptr + "/" + key + "/" + std::to_string(i), "expected a number");
    v[i] = arr[i].get<double>();
  }
  if (expect_dim >= 0 && v.size() != expect_dim)
    throw SchemaError(ptr + "/" + key, "expected length " + std::to_string(expect_dim));
  return v;
}

Mat mat_at(const json& j, const char* key, const std::string& ptr, int cols) {
  if (!j.contains(key)) return Mat(0, cols);
  if (!j[key].is_array()) throw SchemaError(ptr + "/" + key, "expected an array of rows");
  const auto& arr = j[key];
  Mat M(arr.size(), cols);
  for (size_t r = 0; r < arr.size(); ++r) {
    if (!arr[r].is_array() || static_cast<int>(arr[r].size()) != cols)
      throw SchemaError(ptr + "/" + key + "/" + std::to_string(r),
                        "expected a row of length " + std::to_string(cols));
    for (int c = 0; c < cols; ++c) {
      if (!arr[r][c].is_number())
        throw SchemaError(ptr + "/" + key + "/" + std::to_string(r) + "/" + std::to_string(c),
                          "expected a number");
      M(r, c) = arr[r][c].get<double>();
    }
  }
  return M;
}

}  // namespace

ScalarExpr parse_expr(const json& j, int dim, const std::string& ptr) {
  if (!j.is_object() || !j.contains("op") || !j["op"].is_string())
    throw SchemaError(ptr, "expected an expression object with an \"op\" field");
  const std::string op = j["op"].get<std::string>();
  try {
    if (op == "const") return ScalarExpr::constant(dim, num_at(j, "c", ptr, true));
    if (op == "coord") {
      int idx = static_cast<int>(num_at(j, "j", ptr, true));
      return ScalarExpr::coordinate(dim, idx);
    }
    if (op == "affine") return ScalarExpr::affine(vec_at(j, "a", ptr, dim), num_at(j, "b", ptr, false));
    if (op == "quad")
      return ScalarExpr::quadratic(mat_at(j, "Q", ptr, dim), vec_at(j, "c", ptr, dim),
                                   num_at(j, "b", ptr, false));
    if (op == "pow") {
      long num = static_cast<long>(num_at(j, "num", ptr, true));
      long den = static_cast<long>(num_at(j, "den", ptr, false, 1.0));
      if (!j.contains("arg")) throw SchemaError(ptr + "/arg", "missing power argument");
      return ScalarExpr::abs_power(parse_expr(j["arg"], dim, ptr + "/arg"), num, den);
    }
    if (op == "abs") {
      if (!j.contains("arg")) throw SchemaError(ptr + "/arg", "missing abs argument");
      return ScalarExpr::abs_of(parse_expr(j["arg"], dim, ptr + "/arg"));
    }
    if (op == "scale") {
      if (!j.contains("arg")) throw SchemaError(ptr + "/arg", "missing scale argument");
      return ScalarExpr::scale(num_at(j, "k", ptr, true), parse_expr(j["arg"], dim, ptr + "/arg"));
    }
    if (op == "sum" || op == "min" || op == "max") {
      if (!j.contains("terms") || !j["terms"].is_array() || j["terms"].empty())
        throw SchemaError(ptr + "/terms", "expected a nonempty array of expressions");
      std::vector<ScalarExpr> terms;
      for (size_t i = 0; i < j["terms"].size(); ++i)
        terms.push_back(parse_expr(j["terms"][i], dim, ptr + "/terms/" + std::to_string(i)));
      if (op == "sum") return ScalarExpr::sum(terms);
      if (op == "min") return ScalarExpr::min_of(terms);
      return ScalarExpr::max_of(terms);
    }
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaError(ptr, e.what());
  }
  throw SchemaError(ptr + "/op", "unknown operator \"" + op + "\"");
}

namespace {

json emit_expr_node(const ExprNode& n);

json emit_kids_array(const ExprNode& n) {
  json arr = json::array();
  for (const auto& k : n.kids) arr.push_back(emit_expr_node(*k));
  return arr;
}

json emit_expr_node(const ExprNode& n) {
  json j;
  switch (n.kind) {
    case ExprKind::Constant:
      j["op"] = "const";
      j["c"] = n.scalar;
      return j;
    case ExprKind::Coordinate:
      j["op"] = "coord";
      j["j"] = n.coord;
      return j;
    case ExprKind::Affine:
      j["op"] = "affine";
      j["a"] = std::vector<double>(n.a.data(), n.a.data() + n.a.size());
      j["b"] = n.scalar;
      return j;
    case ExprKind::Quadratic: {
      j["op"] = "quad";
      std::vector<std::vector<double>> Q;
      for (Eigen::Index r = 0; r < n.Q.rows(); ++r) {
        std::vector<double> row(n.Q.cols());
        for (Eigen::Index c = 0; c < n.Q.cols(); ++c) row[c] = n.Q(r, c);
        Q.push_back(std::move(row));
      }
      j["Q"] = Q;
      j["c"] = std::vector<double>(n.a.data(), n.a.data() + n.a.size());
      j["b"] = n.scalar;
      return j;
    }
    case ExprKind::AbsPower:
      j["op"] = "pow";
      j["num"] = n.p_num;
      j["den"] = n.p_den;
      j["arg"] = emit_expr_node(*n.kids[0]);
      return j;
    case ExprKind::Scale:
      j["op"] = "scale";
      j["k"] = n.scalar;
      j["arg"] = emit_expr_node(*n.kids[0]);
      return j;
    case ExprKind::Sum:
      j["op"] = "sum";
      j["terms"] = emit_kids_array(n);
      return j;
    case ExprKind::Min:
      j["op"] = "min";
      j["terms"] = emit_kids_array(n);
      return j;
    case ExprKind::Max:
      j["op"] = "max";
      j["terms"] = emit_kids_array(n);
      return j;
  }
  return j;
}

// Reject objectives that dive below the representable range (improper).
void check_proper(const VectorObjective& f, const std::string& origin) {
  const int n = f.dim;
  std::vector<Vec> probes;
  probes.push_back(Vec::Zero(n));
  for (double mag : {1e120, 1e200}) {
    for (int j = 0; j < n; ++j) {
      probes.push_back(Vec(mag * Vec::Unit(n, j)));
      probes.push_back(Vec(-mag * Vec::Unit(n, j)));
    }
    probes.push_back(Vec::Constant(n, mag));
    probes.push_back(Vec::Constant(n, -mag));
  }
  for (int i = 0; i < f.objectives(); ++i)
    for (const auto& p : probes)
      if (f.components[i](p) <= std::numeric_limits<double>::lowest() / 2)
        throw SchemaError("/objectives/" + std::to_string(i),
                          origin + ": improper objective (unbounded below beyond range)");
}

}  // namespace

json emit_expr(const ScalarExpr& e) { return emit_expr_node(e.node()); }

ProblemSpec parse_problem_json(const json& j, const std::string& origin) {
  if (!j.is_object()) throw SchemaError("/", "expected a problem object");
  ProblemSpec spec;
  if (!j.contains("name") || !j["name"].is_string())
    throw SchemaError("/name", "expected a string");
  spec.name = j["name"].get<std::string>();
  spec.n = static_cast<int>(num_at(j, "n", "", true));
  spec.m = static_cast<int>(num_at(j, "m", "", true));
  if (spec.n < 1) throw SchemaError("/n", "dimension must be >= 1");
  if (spec.m < 1) throw SchemaError("/m", "need at least one objective");

  if (!j.contains("objectives") || !j["objectives"].is_array())
    throw SchemaError("/objectives", "expected an array of expressions");
  if (static_cast<int>(j["objectives"].size()) != spec.m)
    throw SchemaError("/objectives", "expected exactly m = " + std::to_string(spec.m) + " entries");
  std::vector<ScalarExpr> comps;
  for (int i = 0; i < spec.m; ++i)
    comps.push_back(parse_expr(j["objectives"][i], spec.n, "/objectives/" + std::to_string(i)));
  spec.objectives = VectorObjective(std::move(comps));

  if (!j.contains("feasible_set") || !j["feasible_set"].is_array() || j["feasible_set"].empty())
    throw SchemaError("/feasible_set", "expected a nonempty array of polyhedra");
  std::vector<Polyhedron> pieces;
  for (size_t p = 0; p < j["feasible_set"].size(); ++p) {
    const std::string ptr = "/feasible_set/" + std::to_string(p);
    const auto& pj = j["feasible_set"][p];
    if (!pj.is_object()) throw SchemaError(ptr, "expected a polyhedron object");
    Mat A = mat_at(pj, "A", ptr, spec.n);
    Mat E = mat_at(pj, "E", ptr, spec.n);
    Vec b = pj.contains("b") ? vec_at(pj, "b", ptr, static_cast<int>(A.rows())) : Vec(A.rows());
    Vec d = pj.contains("d") ? vec_at(pj, "d", ptr, static_cast<int>(E.rows())) : Vec(E.rows());
    if (A.rows() > 0 && !pj.contains("b")) throw SchemaError(ptr + "/b", "missing rhs for A");
    if (E.rows() > 0 && !pj.contains("d")) throw SchemaError(ptr + "/d", "missing rhs for E");
    if (A.rows() == 0 && E.rows() == 0) {
      pieces.push_back(Polyhedron::whole_space(spec.n));
      continue;
    }
    try {
      pieces.push_back(Polyhedron::make(A, b, E, d));
    } catch (const std::exception& e) {
      throw SchemaError(ptr, e.what());
    }
  }
  try {
    spec.feasible = PolyUnion::make(std::move(pieces));
  } catch (const std::exception& e) {
    throw SchemaError("/feasible_set", e.what());
  }

  if (j.contains("closed_form")) {
    if (!j["closed_form"].is_string()) throw SchemaError("/closed_form", "expected a string id");
    spec.closed_form = j["closed_form"].get<std::string>();
  }
  if (j.contains("alpha")) spec.alpha = num_at(j, "alpha", "", true);

  check_proper(spec.objectives, origin);
  return spec;
}

ProblemSpec parse_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("problem file not found: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw SchemaError("/", std::string("invalid JSON: ") + e.what());
  }
  return parse_problem_json(j, path);
}

json emit_problem(const ProblemSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["n"] = spec.n;
  j["m"] = spec.m;
  j["objectives"] = json::array();
  for (const auto& c : spec.objectives.components) j["objectives"].push_back(emit_expr_node(c.node()));
  j["feasible_set"] = json::array();
  for (const auto& p : spec.feasible.pieces()) {
    json pj = json::object();
    auto mat_to_json = [](const Mat& M) {
      std::vector<std::vector<double>> rows;
      for (Eigen::Index r = 0; r < M.rows(); ++r) {
        std::vector<double> row(M.cols());
        for (Eigen::Index c = 0; c < M.cols(); ++c) row[c] = M(r, c);
        rows.push_back(std::move(row));
      }
      return rows;
    };
    if (p.A().rows() > 0) {
      pj["A"] = mat_to_json(p.A());
      pj["b"] = std::vector<double>(p.b().data(), p.b().data() + p.b().size());
    }
    if (p.E().rows() > 0) {
      pj["E"] = mat_to_json(p.E());
      pj["d"] = std::vector<double>(p.d().data(), p.d().data() + p.d().size());
    }
    j["feasible_set"].push_back(pj);
  }
  if (spec.closed_form) j["closed_form"] = *spec.closed_form;
  if (spec.alpha) j["alpha"] = *spec.alpha;
  return j;
}

RunConfig default_config(int n) {
  RunConfig cfg;
  cfg.grid.box.lo = Vec::Constant(n, -10.0);
  cfg.grid.box.hi = Vec::Constant(n, 10.0);
  cfg.grid.h = n <= 1 ? 0.01 : (n == 2 ? 0.05 : 0.25);
  return cfg;
}

RunConfig parse_config_json(const json& j, int n) {
  RunConfig cfg = default_config(n);
  if (!j.is_object()) throw SchemaError("/", "expected a config object");
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    if (g.contains("box")) {
      const auto& box = g["box"];
      if (!box.is_array() || static_cast<int>(box.size()) != n)
        throw SchemaError("/grid/box", "expected one [lo, hi] pair per coordinate");
      cfg.grid.box.lo.resize(n);
      cfg.grid.box.hi.resize(n);
      for (int i = 0; i < n; ++i) {
        if (!box[i].is_array() || box[i].size() != 2)
          throw SchemaError("/grid/box/" + std::to_string(i), "expected [lo, hi]");
        cfg.grid.box.lo[i] = box[i][0].get<double>();
        cfg.grid.box.hi[i] = box[i][1].get<double>();
      }
    }
    cfg.grid.h = num_at(g, "h", "/grid", false, cfg.grid.h);
    cfg.grid.snap_radius = num_at(g, "snap_radius", "/grid", false, -1.0);
    if (cfg.grid.h <= 0) throw SchemaError("/grid/h", "step must be positive");
  }
  if (j.contains("asym")) {
    const auto& a = j["asym"];
    cfg.asym.t_max = num_at(a, "t_max", "/asym", false, cfg.asym.t_max);
    cfg.asym.t_points = static_cast<int>(num_at(a, "t_points", "/asym", false, cfg.asym.t_points));
    cfg.asym.t_min_q = num_at(a, "t_min_q", "/asym", false, cfg.asym.t_min_q);
    cfg.asym.t_points_q =
        static_cast<int>(num_at(a, "t_points_q", "/asym", false, cfg.asym.t_points_q));
    cfg.asym.jitter_count =
        static_cast<int>(num_at(a, "jitter_count", "/asym", false, cfg.asym.jitter_count));
    cfg.asym.jitter_radius = num_at(a, "jitter_radius", "/asym", false, cfg.asym.jitter_radius);
    cfg.asym.zero_tol = num_at(a, "zero_tol", "/asym", false, cfg.asym.zero_tol);
    cfg.asym.inf_threshold = num_at(a, "inf_threshold", "/asym", false, cfg.asym.inf_threshold);
    cfg.asym.dirs_per_cone =
        static_cast<int>(num_at(a, "dirs_per_cone", "/asym", false, cfg.asym.dirs_per_cone));
    cfg.asym.probe_norm_cap = num_at(a, "probe_norm_cap", "/asym", false, cfg.asym.probe_norm_cap);
    cfg.asym.max_probes =
        static_cast<int>(num_at(a, "max_probes", "/asym", false, cfg.asym.max_probes));
    if (cfg.asym.t_max <= 1 || cfg.asym.zero_tol <= 0 || cfg.asym.inf_threshold <= 0)
      throw SchemaError("/asym", "tolerances must be positive and t_max > 1");
  }
  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    if (s.contains("radii")) {
      cfg.sweep.radii.clear();
      for (const auto& r : s["radii"]) cfg.sweep.radii.push_back(r.get<double>());
      for (size_t i = 1; i < cfg.sweep.radii.size(); ++i)
        if (cfg.sweep.radii[i] >= cfg.sweep.radii[i - 1])
          throw SchemaError("/sweep/radii", "radii must be strictly decreasing");
    }
    cfg.sweep.directions_per_radius = static_cast<int>(
        num_at(s, "directions_per_radius", "/sweep", false, cfg.sweep.directions_per_radius));
  }
  if (j.contains("simplex_resolution"))
    cfg.simplex_resolution = static_cast<int>(num_at(j, "simplex_resolution", "", true));
  if (j.contains("sharp_radii")) {
    cfg.sharp_radii.clear();
    for (const auto& r : j["sharp_radii"]) cfg.sharp_radii.push_back(r.get<double>());
  }
  if (j.contains("asym_levels")) {
    cfg.asym_levels.clear();
    for (const auto& l : j["asym_levels"]) cfg.asym_levels.push_back(l.get<double>());
  }
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  return cfg;
}

RunConfig parse_config(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config file not found: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw SchemaError("/", std::string("invalid JSON: ") + e.what());
  }
  return parse_config_json(j, n);
}

std::string format_double(double v) {
  if (is_pinf(v)) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_cloud_csv(const std::string& path, const PointCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  const int n = cloud.dim();
  for (int i = 0; i < n; ++i) out << (i ? "," : "") << "x" << (i + 1);
  out << "\n";
  for (const auto& p : cloud.points) {
    for (int i = 0; i < n; ++i) out << (i ? "," : "") << format_double(p[i]);
    out << "\n";
  }
}

}  // namespace asymptopt
