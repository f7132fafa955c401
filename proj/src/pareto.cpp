#include "asymptopt/pareto.hpp"

#include <algorithm>

#include "asymptopt/kernels.hpp"

namespace asymptopt {

namespace {

void compositions(int total, int parts, std::vector<int>& cur,
                  const std::function<void(const std::vector<int>&)>& fn) {
  if (parts == 1) {
    cur.push_back(total);
    fn(cur);
    cur.pop_back();
    return;
  }
  for (int k = 0; k <= total; ++k) {
    cur.push_back(k);
    compositions(total - k, parts - 1, cur, fn);
    cur.pop_back();
  }
}

// Recession directions attached to the pieces containing p.
std::vector<Vec> recession_dirs_at(const PolyUnion& X, const Vec& p) {
  std::vector<Vec> dirs;
  for (const auto& piece : X.pieces()) {
    if (!piece.contains(p, 1e-7)) continue;
    ConePiece c = recession_cone_piece(piece);
    for (const auto& g : c.generators) dirs.push_back(g);
    for (const auto& l : c.lineality) {
      dirs.push_back(l);
      dirs.push_back(-l);
    }
  }
  return dirs;
}

bool on_truncation_boundary(const Vec& p, const GridSpec& g) {
  for (int i = 0; i < g.dim(); ++i)
    if (p[i] <= g.box.lo[i] + 0.5 * g.h || p[i] >= g.box.hi[i] - 0.5 * g.h) return true;
  return false;
}

bool descends_along_recession(const ScalarExpr& phi, const PolyUnion& X, const Vec& p, double h) {
  double fp = phi(p);
  for (const auto& d : recession_dirs_at(X, p)) {
    for (double step : {h, 10.0 * h}) {
      double fq = phi(p + step * d);
      if (fq < fp - noise_tol(fq, fp)) return true;
    }
  }
  return false;
}

}  // namespace

SimplexGrid SimplexGrid::make(int m, int resolution) {
  if (m < 1 || resolution < 1) throw std::invalid_argument("simplex grid: m and resolution >= 1");
  SimplexGrid g;
  g.m = m;
  g.resolution = resolution;
  std::vector<int> cur;
  compositions(resolution, m, cur, [&](const std::vector<int>& parts) {
    Vec l(m);
    bool inner = true;
    for (int i = 0; i < m; ++i) {
      l[i] = static_cast<double>(parts[i]) / resolution;
      if (parts[i] == 0) inner = false;
    }
    g.lambdas.push_back(l);
    g.interior.push_back(inner ? 1 : 0);
  });
  return g;
}

ScalarExpr scalarize(const VectorObjective& f, VecRef lambda) {
  if (lambda.size() != f.objectives()) throw std::invalid_argument("scalarize: weight count mismatch");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] < -1e-12) throw std::invalid_argument("scalarize: weights must be nonnegative");
    sum += lambda[i];
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("scalarize: weights must sum to 1");
  std::vector<ScalarExpr> terms;
  for (int i = 0; i < f.objectives(); ++i)
    terms.push_back(ScalarExpr::scale(lambda[i], f.components[i]));
  return ScalarExpr::sum(terms);
}

ScalarSolve solve_scalar(const ScalarExpr& phi, const PolyUnion& X, const PointCloud& feasible) {
  if (feasible.empty()) throw std::invalid_argument("solve scalar: empty grid");
  auto vals = kernels::eval_objectives(VectorObjective({phi}), feasible.points);
  double vmin = kPosInf;
  for (int i = 0; i < vals.n; ++i) vmin = std::min(vmin, vals.at(i, 0));

  ScalarSolve out;
  out.min_value = vmin;
  out.argmin.grid = feasible.grid;
  out.argmin.kind = CloudKind::ScalarArgmin;
  for (int i = 0; i < vals.n; ++i)
    if (vals.at(i, 0) <= vmin + noise_tol(vals.at(i, 0), vmin))
      out.argmin.points.push_back(feasible.points[i]);

  for (const auto& p : out.argmin.points) {
    if (!on_truncation_boundary(p, feasible.grid)) continue;
    if (descends_along_recession(phi, X, p, feasible.grid.h)) {
      out.escape = true;
      break;
    }
  }
  return out;
}

namespace {

bool member_against(const Vec& fx, const kernels::ValueMatrix& cloud_vals, bool weak) {
  const int m = static_cast<int>(fx.size());
  for (int y = 0; y < cloud_vals.n; ++y) {
    if (weak) {
      bool all_strict = true;
      for (int k = 0; k < m && all_strict; ++k)
        all_strict = kernels::strictly_below(cloud_vals.at(y, k), fx[k]);
      if (all_strict) return false;
    } else {
      bool leq_all = true, strict_some = false;
      for (int k = 0; k < m && leq_all; ++k) {
        leq_all = kernels::weakly_below(cloud_vals.at(y, k), fx[k]);
        if (kernels::strictly_below(cloud_vals.at(y, k), fx[k])) strict_some = true;
      }
      if (leq_all && strict_some) return false;
    }
  }
  return true;
}

}  // namespace

bool weak_pareto_member(VecRef x, const VectorObjective& f, const PointCloud& feasible) {
  auto vals = kernels::eval_objectives(f, feasible.points);
  return member_against(f(x), vals, /*weak=*/true);
}

bool pareto_member(VecRef x, const VectorObjective& f, const PointCloud& feasible) {
  auto vals = kernels::eval_objectives(f, feasible.points);
  return member_against(f(x), vals, /*weak=*/false);
}

namespace {

PointCloud filter_by_mask(const PointCloud& cloud, const std::vector<std::uint8_t>& mask,
                          CloudKind kind) {
  PointCloud out;
  out.grid = cloud.grid;
  out.kind = kind;
  for (size_t i = 0; i < cloud.points.size(); ++i)
    if (mask[i]) out.points.push_back(cloud.points[i]);
  return out;
}

}  // namespace

PointCloud solve_weak_front(const VectorObjective& f, const PointCloud& feasible) {
  auto vals = kernels::eval_objectives(f, feasible.points);
  return filter_by_mask(feasible, kernels::weak_front_mask(vals), CloudKind::WeakPareto);
}

PointCloud solve_front(const VectorObjective& f, const PointCloud& feasible) {
  auto vals = kernels::eval_objectives(f, feasible.points);
  return filter_by_mask(feasible, kernels::pareto_front_mask(vals), CloudKind::Pareto);
}

double achievement_psi(VecRef x, const VectorObjective& f, const PointCloud& feasible) {
  auto cloud_vals = kernels::eval_objectives(f, feasible.points);
  kernels::ValueMatrix at_x;
  at_x.n = 1;
  at_x.m = f.objectives();
  Vec fx = f(x);
  at_x.v.assign(fx.data(), fx.data() + fx.size());
  return kernels::psi_values(at_x, cloud_vals)[0];
}

std::vector<double> achievement_psi_all(const VectorObjective& f, const PointCloud& feasible) {
  auto vals = kernels::eval_objectives(f, feasible.points);
  return kernels::psi_values(vals, vals);
}

PsiReport verify_psi_characterization(const VectorObjective& f, const PointCloud& feasible) {
  auto vals = kernels::eval_objectives(f, feasible.points);
  auto mask = kernels::weak_front_mask(vals);
  auto psi = kernels::psi_values(vals, vals);

  PsiReport rep;
  double vmax = 0.0;
  for (double v : vals.v)
    if (std::isfinite(v)) vmax = std::max(vmax, std::abs(v));
  rep.tau_psi = 1e-9 * (1.0 + vmax);
  for (int i = 0; i < vals.n; ++i) {
    bool member_scan = mask[i] != 0;
    bool member_psi = psi[i] <= rep.tau_psi;
    if (member_scan != member_psi) {
      ++rep.disagreements;
      rep.disagreeing_indices.push_back(i);
    }
    if (member_scan) rep.max_psi_on_front = std::max(rep.max_psi_on_front, psi[i]);
    else rep.min_psi_off_front = std::min(rep.min_psi_off_front, psi[i]);
  }
  return rep;
}

std::vector<SharpCertificate> sharp_certificates(const VectorObjective& f, const PolyUnion& X,
                                                 const PointCloud& feasible,
                                                 const std::vector<double>& R_list,
                                                 const AsymConfig& cfg) {
  auto cond = check_condition(X, f, KVariant::Plain, nullptr, cfg);
  if (!cond.holds)
    throw std::runtime_error("sharp certificate: existence condition fails, no certificate");

  PointCloud front = solve_weak_front(f, feasible);
  if (front.empty()) throw std::runtime_error("sharp certificate: empty weak front");

  // image of the front under f
  std::vector<Vec> image;
  image.reserve(front.points.size());
  for (const auto& p : front.points) image.push_back(f(p));

  auto vals = kernels::eval_objectives(f, feasible.points);
  auto psi = kernels::psi_values(vals, vals);
  auto dist_front = kernels::min_dist_to_cloud(feasible.points, front.points);

  std::vector<Vec> image_at;
  image_at.reserve(feasible.points.size());
  for (int i = 0; i < vals.n; ++i) {
    Vec fi(vals.m);
    for (int k = 0; k < vals.m; ++k) fi[k] = vals.at(i, k);
    image_at.push_back(fi);
  }
  auto dist_image = kernels::min_dist_to_cloud(image_at, image);

  std::vector<SharpCertificate> out;
  for (double R : R_list) {
    SharpCertificate cert;
    cert.R = R;
    cert.c_hat = kPosInf;
    cert.growth.stat = kPosInf;
    cert.psi_vs_image.stat = kPosInf;
    cert.norm_vs_distance.stat = kPosInf;
    for (size_t i = 0; i < feasible.points.size(); ++i) {
      const Vec& x = feasible.points[i];
      if (x.norm() <= R) continue;
      ++cert.samples;
      cert.growth.stat = std::min(cert.growth.stat, psi[i] / x.norm());
      cert.psi_vs_image.stat = std::min(cert.psi_vs_image.stat, dist_image[i] - psi[i]);
      cert.norm_vs_distance.stat = std::min(cert.norm_vs_distance.stat, x.norm() - 0.5 * dist_front[i]);
      if (dist_front[i] > 0.5 * feasible.grid.h) {
        double ratio = dist_image[i] / dist_front[i];
        if (ratio < cert.c_hat) {
          cert.c_hat = ratio;
          cert.worst_ratio_point = x;
        }
      }
    }
    if (cert.samples == 0) {
      cert.error = "no far samples";
      cert.valid = false;
      cert.c_hat = 0.0;
    } else {
      cert.growth.pass = cert.growth.stat > cfg.zero_tol;
      cert.psi_vs_image.pass = cert.psi_vs_image.stat >= -1e-6;
      cert.norm_vs_distance.pass = cert.norm_vs_distance.stat >= -1e-6;
      if (!std::isfinite(cert.c_hat)) cert.c_hat = 0.0;  // every far point on the front
      cert.valid = cert.c_hat > 0.0;
    }
    out.push_back(std::move(cert));
  }
  return out;
}

EmptinessFlags front_flags(const PointCloud& front, const VectorObjective& f, const PolyUnion& X,
                           const PointCloud& feasible) {
  EmptinessFlags flags;
  if (front.empty()) {
    flags.empty = true;
    return flags;
  }
  bool all_boundary = true;
  for (const auto& p : front.points) {
    bool touch = on_truncation_boundary(p, front.grid);
    flags.boundary_touch = flags.boundary_touch || touch;
    all_boundary = all_boundary && touch;
  }
  bool all_vertex_escape = true;
  for (int i = 0; i < f.objectives(); ++i) {
    Vec lambda = Vec::Zero(f.objectives());
    lambda[i] = 1.0;
    auto solve = solve_scalar(scalarize(f, lambda), X, feasible);
    flags.escape = flags.escape || solve.escape;
    all_vertex_escape = all_vertex_escape && solve.escape;
  }
  flags.empty = all_boundary && all_vertex_escape;
  return flags;
}

BoundednessVerdict front_boundedness(const VectorObjective& f, const PolyUnion& X,
                                     const GridSpec& g) {
  BoundednessVerdict v;
  PointCloud feasible = grid_points(X, g);
  PointCloud front = solve_weak_front(f, feasible);
  bool touch = false;
  for (const auto& p : front.points) touch = touch || on_truncation_boundary(p, g);
  v.touched_initial = touch;
  if (!touch) return v;

  GridSpec grown = g;
  Vec center = 0.5 * (g.box.lo + g.box.hi);
  grown.box.lo = center + 2.0 * (g.box.lo - center);
  grown.box.hi = center + 2.0 * (g.box.hi - center);
  grown.h = g.h * 2.0;  // keep the lattice count comparable
  v.grew_box = true;
  PointCloud feas2 = grid_points(X, grown);
  PointCloud front2 = solve_weak_front(f, feas2);
  bool touch2 = false;
  for (const auto& p : front2.points) touch2 = touch2 || on_truncation_boundary(p, grown);
  v.bounded = !touch2;
  return v;
}

}  // namespace asymptopt
