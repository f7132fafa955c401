#include "asymptopt/cli_run.hpp"

#include <filesystem>
#include <fstream>

#include "asymptopt/kernels.hpp"

namespace asymptopt {

namespace fs = std::filesystem;

namespace {

struct Session {
  const ProblemSpec& spec;
  RunConfig cfg;  // asym probes filled from the feasible grid
  fs::path out;
  PointCloud feasible;

  Session(const ProblemSpec& s, const RunConfig& c, const std::string& out_dir)
      : spec(s), cfg(c), out(out_dir) {
    fs::create_directories(out);
    feasible = grid_points(spec.feasible, cfg.grid);
    set_probes(cfg.asym, feasible);
  }
};

void write_json(const fs::path& path, const json& j) {
  std::ofstream o(path);
  if (!o) throw std::runtime_error("cannot write " + path.string());
  o << j.dump(2) << "\n";
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json mat_json(const Mat& M) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) rows.push_back(vec_json(M.row(r).transpose()));
  return rows;
}

json condition_json(const ConditionVerdict& v) {
  json j;
  j["holds"] = v.holds;
  j["label"] = v.label;
  j["sampled_directions"] = v.sampled_directions;
  j["probe_count"] = v.probe_count;
  j["margin"] = is_pinf(v.margin) ? json("inf") : json(v.margin);
  if (!v.holds) {
    j["witness"] = {{"direction", vec_json(v.witness)}, {"objective", v.witness_index}};
  }
  return j;
}

int cmd_check_existence(Session& s) {
  auto v = check_condition(s.spec.feasible, s.spec.objectives, KVariant::Plain, nullptr, s.cfg.asym);
  write_json(s.out / "existence.json", condition_json(v));
  return v.holds ? kOk : kVerdictFailure;
}

int cmd_asym(Session& s) {
  const int n = s.spec.n;
  std::vector<Vec> dirs;
  for (int j = 0; j < n; ++j) {
    dirs.push_back(Vec(Vec::Unit(n, j)));
    dirs.push_back(Vec(-Vec::Unit(n, j)));
  }
  ConeRep cone = asymptotic_cone(s.spec.feasible);
  for (const auto& d : cone.sphere_sample(8)) {
    bool dup = false;
    for (const auto& e : dirs)
      if ((e - d).norm() < 1e-12) dup = true;
    if (!dup) dirs.push_back(d);
  }

  std::ofstream csv(s.out / "asym_table.csv");
  for (int i = 0; i < n; ++i) csv << "d" << (i + 1) << ",";
  csv << "objective,variant,value,margin\n";
  json warnings = json::array();
  for (const auto& d : dirs) {
    for (int i = 0; i < s.spec.m; ++i) {
      const auto& fi = s.spec.objectives.components[i];
      auto emit_row = [&](const std::string& variant, double value) {
        for (int c = 0; c < n; ++c) csv << format_double(d[c]) << ",";
        csv << (i + 1) << "," << variant << "," << format_double(value) << ","
            << format_double(is_pinf(value) ? kPosInf : value - s.cfg.asym.zero_tol) << "\n";
      };
      emit_row("plain", asym_value(fi, d, s.cfg.asym));
      emit_row("q", q_asym_value(fi, d, s.cfg.asym));
      for (double level : s.cfg.asym_levels) {
        try {
          emit_row("level:" + format_double(level), level_asym_value(fi, level, d, s.cfg.asym));
        } catch (const std::exception& e) {
          warnings.push_back(std::string(e.what()));
        }
      }
    }
  }
  write_json(s.out / "asym.json", json{{"warnings", warnings}});
  return kOk;
}

int cmd_solve(Session& s) {
  const auto& f = s.spec.objectives;
  PointCloud solw = solve_weak_front(f, s.feasible);
  PointCloud sol = solve_front(f, s.feasible);
  write_cloud_csv((s.out / "solw.csv").string(), solw);
  write_cloud_csv((s.out / "sol.csv").string(), sol);

  SimplexGrid simplex = SimplexGrid::make(s.spec.m, s.cfg.simplex_resolution);
  PointCloud scal;
  scal.grid = s.cfg.grid;
  scal.kind = CloudKind::ScalarArgmin;
  json lambdas = json::array();
  int escapes = 0;
  for (size_t li = 0; li < simplex.lambdas.size(); ++li) {
    auto solve = solve_scalar(scalarize(f, simplex.lambdas[li]), s.spec.feasible, s.feasible);
    if (solve.escape) ++escapes;
    json lj;
    lj["lambda"] = vec_json(simplex.lambdas[li]);
    lj["interior"] = simplex.interior[li] != 0;
    lj["escape"] = solve.escape;
    lj["argmin_count"] = solve.argmin.size();
    lambdas.push_back(lj);
    if (!solve.escape)
      for (const auto& p : solve.argmin.points) scal.points.push_back(p);
  }
  write_cloud_csv((s.out / "scalarized.csv").string(), scal);

  auto flags = front_flags(solw, f, s.spec.feasible, s.feasible);
  auto bounded = front_boundedness(f, s.spec.feasible, s.cfg.grid);
  json j;
  j["feasible_points"] = s.feasible.size();
  j["weak_front_points"] = solw.size();
  j["front_points"] = sol.size();
  j["weak_front_empty"] = flags.empty;
  j["weak_front_escape"] = flags.escape;
  j["weak_front_boundary_touch"] = flags.boundary_touch;
  j["bounded"] = bounded.bounded;
  j["bounded_check_grew_box"] = bounded.grew_box;
  j["scalarizations"] = lambdas;
  j["scalarization_escapes"] = escapes;
  write_json(s.out / "solve.json", j);
  return kOk;
}

int cmd_psi(Session& s) {
  const auto& f = s.spec.objectives;
  auto vals = kernels::eval_objectives(f, s.feasible.points);
  auto mask = kernels::weak_front_mask(vals);
  auto psi = kernels::psi_values(vals, vals);
  auto rep = verify_psi_characterization(f, s.feasible);

  std::ofstream csv(s.out / "psi.csv");
  for (int i = 0; i < s.spec.n; ++i) csv << "x" << (i + 1) << ",";
  csv << "psi,front_member,psi_member\n";
  for (int i = 0; i < s.feasible.size(); ++i) {
    for (int c = 0; c < s.spec.n; ++c) csv << format_double(s.feasible.points[i][c]) << ",";
    csv << format_double(psi[i]) << "," << int(mask[i]) << ","
        << int(psi[i] <= rep.tau_psi) << "\n";
  }
  json j;
  j["disagreements"] = rep.disagreements;
  j["tau_psi"] = rep.tau_psi;
  j["max_psi_on_front"] = rep.max_psi_on_front;
  j["min_psi_off_front"] =
      is_pinf(rep.min_psi_off_front) ? json("inf") : json(rep.min_psi_off_front);
  write_json(s.out / "psi.json", j);
  return rep.disagreements == 0 ? kOk : kVerdictFailure;
}

int cmd_sharp(Session& s) {
  std::vector<SharpCertificate> certs;
  try {
    certs = sharp_certificates(s.spec.objectives, s.spec.feasible, s.feasible, s.cfg.sharp_radii,
                               s.cfg.asym);
  } catch (const std::exception& e) {
    write_json(s.out / "sharp.json", json{{"error", e.what()}});
    return kPrecondition;
  }
  json arr = json::array();
  bool all_valid = true;
  for (const auto& c : certs) {
    json j;
    j["R"] = c.R;
    j["c_hat"] = c.c_hat;
    j["samples"] = c.samples;
    j["valid"] = c.valid;
    if (!c.error.empty()) j["error"] = c.error;
    if (c.samples > 0) {
      j["claims"] = {{"growth", {{"stat", c.growth.stat}, {"pass", c.growth.pass}}},
                     {"psi_vs_image",
                      {{"stat", c.psi_vs_image.stat}, {"pass", c.psi_vs_image.pass}}},
                     {"norm_vs_distance",
                      {{"stat", c.norm_vs_distance.stat}, {"pass", c.norm_vs_distance.pass}}}};
      if (c.worst_ratio_point.size() > 0) j["worst_ratio_point"] = vec_json(c.worst_ratio_point);
    }
    all_valid = all_valid && c.valid;
    arr.push_back(j);
  }
  write_json(s.out / "sharp.json", json{{"certificates", arr}});
  return all_valid ? kOk : kVerdictFailure;
}

json verdict_json(VerdictState st) {
  switch (st) {
    case VerdictState::Pass:
      return "pass";
    case VerdictState::Fail:
      return "fail";
    case VerdictState::Vacuous:
      return "vacuous";
  }
  return "unknown";
}

int cmd_stability(Session& s) {
  const auto& f = s.spec.objectives;
  StabilityReport rep;
  if (s.spec.alpha) {
    rep = quasiconvex_stability_run(f, s.spec.feasible, *s.spec.alpha, s.feasible, s.cfg.sweep,
                                    s.cfg.asym, s.cfg.seed);
  } else {
    rep = stability_run(f, s.spec.feasible, s.feasible, s.cfg.sweep, s.cfg.asym, KVariant::Plain);
  }

  fs::create_directories(s.out / "clouds");
  json runs = json::array();
  char name[64];
  for (size_t i = 0; i < rep.runs.size(); ++i) {
    const auto& r = rep.runs[i];
    std::snprintf(name, sizeof(name), "u_%03zu.csv", i);
    write_cloud_csv((s.out / "clouds" / name).string(), r.cloud);
    json rj;
    rj["u"] = mat_json(r.u.rows);
    rj["radius"] = r.radius;
    rj["direction_index"] = r.dir_idx;
    rj["cloud_file"] = std::string("clouds/") + name;
    rj["empty"] = r.effective_empty;
    rj["escape"] = r.flags.escape;
    rj["boundary_touch"] = r.flags.boundary_touch;
    rj["points"] = r.cloud.size();
    runs.push_back(rj);
  }

  json j;
  j["variant"] = rep.variant == KVariant::Plain ? "plain" : "q";
  j["condition"] = condition_json(rep.condition);
  if (rep.epsilon) {
    j["epsilon_estimate"] = {{"value", rep.epsilon->value},
                             {"perturbations_tested", rep.epsilon->perturbations_tested},
                             {"note", rep.epsilon->note}};
  }
  j["verdicts"] = {
      {"closedness",
       {{"state", verdict_json(rep.closedness.state)},
        {"emptiness_events", rep.closedness.emptiness_events},
        {"worst_match", rep.closedness.worst_match}}},
      {"usc",
       {{"state", verdict_json(rep.usc.state)},
        {"emptiness_dominated", rep.usc.emptiness_dominated}}},
      {"lsc", {{"state", verdict_json(rep.lsc.state)}, {"emptiness", rep.lsc.emptiness}}}};
  if (rep.closedness.witness) j["verdicts"]["closedness"]["witness"] = vec_json(*rep.closedness.witness);
  json rstar = json::array();
  for (auto [eps, r] : rep.usc.r_star) rstar.push_back(json{{"eps", eps}, {"r_star", r}});
  j["verdicts"]["usc"]["r_star"] = rstar;
  if (rep.lsc.witness_point) j["verdicts"]["lsc"]["witness"] = vec_json(*rep.lsc.witness_point);

  j["equivalence"] = {{"applicable", rep.equivalence.applicable},
                      {"reason", rep.equivalence.reason},
                      {"bounded", rep.equivalence.bounded},
                      {"condition_holds", rep.equivalence.condition_holds},
                      {"agree", rep.equivalence.agree},
                      {"lsc_passed", rep.equivalence.lsc_passed}};
  if (rep.intersection_q) j["intersection_condition_q"] = condition_json(*rep.intersection_q);
  j["warnings"] = rep.warnings;

  if (s.spec.closed_form) {
    auto form = closed_form_interval(*s.spec.closed_form);
    if (form) {
      auto conf = closed_form_conformance(rep, *form);
      json per = json::array();
      for (double dd : conf.per_run) per.push_back(dd);
      j["closed_form"] = {{"id", form->id},
                          {"worst_hausdorff", conf.worst},
                          {"per_run_hausdorff", per},
                          {"tolerance_2h", 2.0 * s.cfg.grid.h},
                          {"within_tolerance", conf.worst <= 2.0 * s.cfg.grid.h}};
    }
  }
  j["runs"] = runs;
  write_json(s.out / "stability.json", j);

  if (!rep.warnings.empty()) return kPrecondition;
  bool failed = rep.closedness.state == VerdictState::Fail ||
                rep.usc.state == VerdictState::Fail || rep.lsc.state == VerdictState::Fail;
  return failed ? kVerdictFailure : kOk;
}

}  // namespace

int run_command(const std::string& command, const ProblemSpec& spec, const RunConfig& cfg,
                const std::string& out_dir) {
  apply_thread_cap();
  Session s(spec, cfg, out_dir);
  if (command == "check-existence") return cmd_check_existence(s);
  if (command == "asym") return cmd_asym(s);
  if (command == "solve") return cmd_solve(s);
  if (command == "psi") return cmd_psi(s);
  if (command == "sharp") return cmd_sharp(s);
  if (command == "stability") return cmd_stability(s);
  if (command == "all") {
    int code = kOk;
    code = std::max(code, cmd_check_existence(s));
    code = std::max(code, cmd_solve(s));
    code = std::max(code, cmd_psi(s));
    code = std::max(code, cmd_sharp(s));
    code = std::max(code, cmd_stability(s));
    return code;
  }
  throw std::invalid_argument("unknown command: " + command);
}

}  // namespace asymptopt
