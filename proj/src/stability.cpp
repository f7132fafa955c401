#include "asymptopt/stability.hpp"

#include <algorithm>

#include "asymptopt/kernels.hpp"

namespace asymptopt {

PerturbationSweep PerturbationSweep::make(const SweepConfig& cfg, const PolyUnion& X, int m) {
  const int n = X.dim();
  ConeRep cone = asymptotic_cone(X);

  std::vector<Vec> gen_dirs;
  auto add_dir = [&](const Vec& v) {
    if (v.norm() < 1e-12) return;
    Vec vn = v / v.norm();
    for (const auto& e : gen_dirs)
      if ((e - vn).norm() < 1e-9) return;
    gen_dirs.push_back(vn);
  };
  for (const auto& g : cone.all_generators()) add_dir(g);
  for (const auto& piece : cone.pieces)
    for (const auto& l : piece.lineality) add_dir(l);

  // unit templates in perturbation space, max-of-row-norms normalization
  std::vector<Mat> templates;
  for (const auto& g : gen_dirs) {
    Mat all(m, n);
    for (int i = 0; i < m; ++i) all.row(i) = g.transpose();
    templates.push_back(all);
    templates.push_back(-all);
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      for (double sgn : {1.0, -1.0}) {
        Mat one = Mat::Zero(m, n);
        one(i, j) = sgn;
        templates.push_back(one);
      }
  for (const auto& g : gen_dirs) {
    Mat mixed(m, n);
    for (int i = 0; i < m; ++i) mixed.row(i) = ((i % 2 == 0) ? g : Vec(-g)).transpose();
    if (m > 1) {
      templates.push_back(mixed);
      templates.push_back(-mixed);
    }
  }
  for (const auto& extra : unit_sphere_directions(n, cfg.directions_per_radius)) {
    Mat all(m, n);
    for (int i = 0; i < m; ++i) all.row(i) = extra.transpose();
    templates.push_back(all);
  }

  // drop duplicates, keep order
  std::vector<Mat> uniq;
  for (const auto& t : templates) {
    bool dup = false;
    for (const auto& e : uniq)
      if ((e - t).cwiseAbs().maxCoeff() < 1e-9) dup = true;
    if (!dup) uniq.push_back(t);
  }
  if (static_cast<int>(uniq.size()) > cfg.directions_per_radius)
    uniq.resize(cfg.directions_per_radius);

  PerturbationSweep sweep;
  sweep.config = cfg;
  for (size_t r = 0; r < cfg.radii.size(); ++r)
    for (size_t d = 0; d < uniq.size(); ++d) {
      sweep.perturbations.emplace_back(Mat(cfg.radii[r] * uniq[d]));
      sweep.radius_index.push_back(static_cast<int>(r));
      sweep.direction_index.push_back(static_cast<int>(d));
    }
  return sweep;
}

PerturbedSolve sol_w_perturbed(const VectorObjective& f, const PolyUnion& X,
                               const PerturbationMatrix& u, const PointCloud& feasible) {
  PerturbedSolve out;
  out.u = u;
  VectorObjective fu = u.zero() ? f : perturb(f, u);
  out.cloud = solve_weak_front(fu, feasible);
  out.flags = front_flags(out.cloud, fu, X, feasible);
  out.effective_empty = out.flags.empty;
  return out;
}

namespace {

double dist_or_inf(const Vec& p, const PointCloud& c) { return dist_point_to_cloud(p, c); }

}  // namespace

ClosednessVerdict closedness_verdict(const std::vector<PerturbedSolve>& runs,
                                     const PointCloud& solw0, double h) {
  ClosednessVerdict v;
  int max_radius_idx = 0, max_dir_idx = 0;
  for (const auto& r : runs) {
    max_radius_idx = std::max(max_radius_idx, r.radius_idx);
    max_dir_idx = std::max(max_dir_idx, r.dir_idx);
    if (r.effective_empty) ++v.emptiness_events;
  }
  const int tiers = max_radius_idx + 1;
  const int small_tiers = (tiers + 1) / 2;
  const int first_small = tiers - small_tiers;
  const double cluster_tol = 2.0 * h, match_tol = 2.0 * h;

  bool any_candidates = false;
  for (int dir = 0; dir <= max_dir_idx; ++dir) {
    std::vector<const PerturbedSolve*> small;
    bool usable = true;
    for (const auto& r : runs)
      if (r.dir_idx == dir && r.radius_idx >= first_small) {
        if (r.effective_empty) usable = false;
        small.push_back(&r);
      }
    if (!usable || small.empty()) continue;
    // candidates: points of the smallest-radius cloud persisting through
    // every small tier of this direction
    const PerturbedSolve* smallest = small.front();
    for (const auto* s : small)
      if (s->radius_idx > smallest->radius_idx) smallest = s;
    for (const auto& p : smallest->cloud.points) {
      bool persists = true;
      for (const auto* s : small) {
        if (s == smallest) continue;
        if (dist_or_inf(p, s->cloud) > cluster_tol) {
          persists = false;
          break;
        }
      }
      if (!persists) continue;
      any_candidates = true;
      double d0 = dist_or_inf(p, solw0);
      v.worst_match = std::max(v.worst_match, d0);
      if (d0 > match_tol && v.state == VerdictState::Pass) {
        v.state = VerdictState::Fail;
        v.witness = p;
        v.witness_dir = dir;
      }
    }
  }
  if (!any_candidates && v.state == VerdictState::Pass) v.state = VerdictState::Vacuous;
  return v;
}

UscVerdict usc_verdict(const std::vector<PerturbedSolve>& runs, const PointCloud& solw0,
                       const std::vector<double>& eps_list) {
  UscVerdict v;
  int tiers = 0;
  for (const auto& r : runs) tiers = std::max(tiers, r.radius_idx + 1);

  std::vector<double> tier_radius(tiers, 0.0);
  std::vector<double> tier_excess(tiers, 0.0);
  std::vector<const PerturbedSolve*> tier_worst(tiers, nullptr);
  for (const auto& r : runs) {
    tier_radius[r.radius_idx] = r.radius;
    if (r.effective_empty) {
      v.emptiness_dominated = true;
      continue;  // excess of the empty set is 0
    }
    double ex = hausdorff_excess(r.cloud, solw0);
    if (ex > tier_excess[r.radius_idx]) {
      tier_excess[r.radius_idx] = ex;
      tier_worst[r.radius_idx] = &r;
    }
  }

  for (double eps : eps_list) {
    double r_star = 0.0;
    for (int t = tiers - 1; t >= 0; --t) {  // smallest radius last in config order
      if (tier_excess[t] <= eps)
        r_star = tier_radius[t];
      else
        break;
    }
    v.r_star.emplace_back(eps, r_star);
    if (r_star == 0.0) {
      v.state = VerdictState::Fail;
      int t = tiers - 1;
      if (tier_worst[t]) {
        v.witness_run = static_cast<int>(tier_worst[t] - runs.data());
        // farthest escaping point
        double best = -1.0;
        for (const auto& p : tier_worst[t]->cloud.points) {
          double d = dist_point_to_cloud(p, solw0);
          if (d > best) {
            best = d;
            v.witness_point = p;
          }
        }
      }
    }
  }
  return v;
}

LscVerdict lsc_verdict(const std::vector<PerturbedSolve>& runs, const PointCloud& solw0) {
  LscVerdict v;
  int max_tier = 0;
  for (const auto& r : runs) max_tier = std::max(max_tier, r.radius_idx);
  const double tol = 5.0 * solw0.grid.h;

  for (const auto& r : runs) {
    if (r.radius_idx != max_tier) continue;  // smallest radius tier only
    if (r.effective_empty) {
      v.state = VerdictState::Fail;
      v.emptiness = true;
      v.witness_run = static_cast<int>(&r - runs.data());
      return v;
    }
    for (const auto& p : solw0.points) {
      if (dist_point_to_cloud(p, r.cloud) > tol) {
        v.state = VerdictState::Fail;
        v.witness_point = p;
        v.witness_run = static_cast<int>(&r - runs.data());
        return v;
      }
    }
  }
  return v;
}

EquivalenceReport boundedness_equivalence_check(const VectorObjective& f, const PolyUnion& X,
                                                const GridSpec& g, const AsymConfig& cfg,
                                                bool lsc_passed) {
  EquivalenceReport rep;
  rep.lsc_passed = lsc_passed;
  for (const auto& c : f.components)
    if (c.curvature() == Curvature::General) {
      rep.reason = "objective not certifiably convex";
      return rep;
    }
  if (X.pieces().size() != 1) {
    rep.reason = "feasible set is not a single convex polyhedron";
    return rep;
  }
  rep.applicable = true;
  rep.bounded = front_boundedness(f, X, g).bounded;
  rep.condition_holds = check_condition(X, f, KVariant::Plain, nullptr, cfg).holds;
  rep.agree = rep.bounded == rep.condition_holds;
  return rep;
}

StabilityReport stability_run(const VectorObjective& f, const PolyUnion& X,
                              const PointCloud& feasible, const SweepConfig& sweep,
                              const AsymConfig& cfg, KVariant variant) {
  StabilityReport rep;
  rep.variant = variant;
  rep.solw0 = solve_weak_front(f, feasible);
  rep.solw0_flags = front_flags(rep.solw0, f, X, feasible);
  rep.condition = check_condition(X, f, variant, nullptr, cfg);
  if (rep.condition.holds) {
    try {
      rep.epsilon = epsilon_threshold(X, f, variant, cfg, 2.0, 16);
    } catch (const std::exception& e) {
      rep.warnings.emplace_back(e.what());
    }
  }

  auto ps = PerturbationSweep::make(sweep, X, f.objectives());
  for (size_t i = 0; i < ps.perturbations.size(); ++i) {
    auto run = sol_w_perturbed(f, X, ps.perturbations[i], feasible);
    run.radius_idx = ps.radius_index[i];
    run.dir_idx = ps.direction_index[i];
    run.radius = sweep.radii[ps.radius_index[i]];
    rep.runs.push_back(std::move(run));
  }

  const double h = feasible.grid.h;
  rep.closedness = closedness_verdict(rep.runs, rep.solw0, h);
  rep.usc = usc_verdict(rep.runs, rep.solw0, {5.0 * h, 10.0 * h});
  rep.lsc = lsc_verdict(rep.runs, rep.solw0);
  rep.equivalence = boundedness_equivalence_check(f, X, feasible.grid, cfg,
                                                  rep.lsc.state == VerdictState::Pass);
  return rep;
}

StabilityReport quasiconvex_stability_run(const VectorObjective& f, const PolyUnion& X,
                                          double alpha, const PointCloud& feasible,
                                          const SweepConfig& sweep, const AsymConfig& cfg,
                                          std::uint64_t seed) {
  StabilityReport rep;
  {
    Box region = feasible.grid.box;
    auto robust = robust_quasiconvex_sample_check(f, alpha, region, 32, 2000, seed);
    if (!robust.pass)
      rep.warnings.push_back("precondition: robust quasiconvexity check failed on component " +
                             std::to_string(robust.component));
  }
  if (X.pieces().size() != 1)
    rep.warnings.emplace_back("precondition: feasible set is not convex");

  StabilityReport inner = stability_run(f, X, feasible, sweep, cfg, KVariant::Q);
  inner.warnings.insert(inner.warnings.begin(), rep.warnings.begin(), rep.warnings.end());
  if (inner.lsc.state == VerdictState::Pass)
    inner.intersection_q = check_intersection_condition_q(X, f, cfg);
  return inner;
}

std::optional<ClosedFormInterval> closed_form_interval(const std::string& id) {
  if (id == "example-4.2") {
    ClosedFormInterval form;
    form.id = id;
    form.interval = [](const PerturbationMatrix& u) {
      double u1 = u.rows.size() > 0 ? u.rows(0, 0) : 0.0;
      double u2 = u.rows.rows() > 1 ? u.rows(1, 0) : 0.0;
      if (u1 >= 1.0) throw std::domain_error("closed form undefined for u1 >= 1");
      double hi = u2 / (2.0 * (1.0 - u1));
      return std::make_pair(-1.0, std::max(-1.0, hi));
    };
    return form;
  }
  return std::nullopt;
}

PointCloud sample_interval(double lo, double hi, const GridSpec& g) {
  PointCloud c;
  c.grid = g;
  c.kind = CloudKind::Custom;
  for (long long k = 0; lo + k * g.h <= hi + 1e-12; ++k)
    c.points.push_back(Vec::Constant(1, lo + k * g.h));
  if (c.points.empty()) c.points.push_back(Vec::Constant(1, lo));
  return c;
}

ClosedFormConformance closed_form_conformance(const StabilityReport& rep,
                                              const ClosedFormInterval& form) {
  ClosedFormConformance conf;
  for (const auto& run : rep.runs) {
    auto [lo, hi] = form.interval(run.u);
    PointCloud target = sample_interval(lo, hi, run.cloud.grid);
    double d = hausdorff_distance(run.cloud, target);
    conf.per_run.push_back(d);
    conf.worst = std::max(conf.worst, d);
    ++conf.runs_checked;
  }
  return conf;
}

}  // namespace asymptopt
