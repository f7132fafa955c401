#include "asymptopt/asymptotic.hpp"

#include <algorithm>
#include <cmath>

namespace asymptopt {

namespace {

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> t(points);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < points; ++i)
    t[i] = std::exp(llo + (lhi - llo) * i / std::max(1, points - 1));
  return t;
}

// Deterministic jitter directions around a unit dn: cycle +-axis offsets.
std::vector<Vec> jitter_dirs(const Vec& dn, const AsymConfig& cfg) {
  std::vector<Vec> dirs{dn};
  const int n = static_cast<int>(dn.size());
  for (int j = 0; j < cfg.jitter_count; ++j) {
    Vec v = dn;
    int axis = (j / 2) % n;
    double sgn = (j % 2 == 0) ? 1.0 : -1.0;
    v[axis] += sgn * cfg.jitter_radius;
    double nrm = v.norm();
    if (nrm > 1e-12) dirs.push_back(v / nrm);
  }
  return dirs;
}

bool has_analytic_recession(const ScalarExpr& e) {
  return e.quadratic_form().has_value() &&
         (e.curvature() == Curvature::Affine || e.curvature() == Curvature::ConvexQuadratic);
}

// Recession function of an affine / convex-quadratic expression at a unit
// direction: <c, d> when Qd = 0, +inf otherwise.
double analytic_recession(const ScalarExpr& e, const Vec& dn) {
  const QuadForm& qf = *e.quadratic_form();
  if (qf.Q.size() > 0 && (qf.Q * dn).norm() > 1e-9 * (1.0 + qf.Q.cwiseAbs().maxCoeff()))
    return kPosInf;
  return qf.c.dot(dn);
}

Vec normalized_or_throw(VecRef d) {
  double nrm = d.norm();
  if (!(nrm > 0)) throw std::invalid_argument("asymptotic value: zero direction");
  return d / nrm;
}

// Difference quotients below float noise carry no signal; skip them. The
// factor bounds the relative error of accepted quotients by 2^-12.
bool trustworthy(double diff, double a, double b) {
  return std::abs(diff) > 4096.0 * std::numeric_limits<double>::epsilon() *
                              std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

void set_probes(AsymConfig& cfg, const PointCloud& cloud) {
  cfg.probes.clear();
  std::vector<const Vec*> eligible;
  for (const auto& p : cloud.points)
    if (p.norm() <= cfg.probe_norm_cap) eligible.push_back(&p);
  size_t stride = std::max<size_t>(1, eligible.size() / std::max(1, cfg.max_probes));
  for (size_t i = 0; i < eligible.size(); i += stride) cfg.probes.push_back(*eligible[i]);
}

double asym_value(const ScalarExpr& e, VecRef d, const AsymConfig& cfg) {
  Vec dn = normalized_or_throw(d);
  double raw;
  if (has_analytic_recession(e)) {
    raw = analytic_recession(e, dn);
  } else {
    auto ts = log_grid(1.0, cfg.t_max, cfg.t_points);
    double best = kPosInf;
    for (const auto& dir : jitter_dirs(dn, cfg)) {
      // running liminf proxy: minimum of e(t dir)/t over the tail half
      double tail_min = kPosInf;
      for (int i = cfg.t_points / 2; i < cfg.t_points; ++i) {
        double ft = e(ts[i] * dir);
        double q = is_pinf(ft) ? kPosInf : ft / ts[i];
        tail_min = std::min(tail_min, q);
      }
      best = std::min(best, tail_min);
    }
    raw = (best > cfg.inf_threshold) ? kPosInf : best;
  }
  return xscale(d.norm(), raw);
}

double q_asym_value(const ScalarExpr& e, VecRef d, const AsymConfig& cfg,
                    const ConeRep* restrict_cone) {
  Vec dn = normalized_or_throw(d);
  if (restrict_cone && !restrict_cone->member(dn)) return kPosInf;  // indicator term
  double raw;
  if (has_analytic_recession(e)) {
    raw = analytic_recession(e, dn);
  } else {
    if (cfg.probes.empty())
      throw std::invalid_argument("q asymptotic value: no base-point probes configured");
    auto ts = log_grid(cfg.t_min_q, cfg.t_max, cfg.t_points_q);
    double sup = -kPosInf;
    bool any = false;
    for (const auto& x : cfg.probes) {
      double fx = e(x);
      if (is_pinf(fx)) continue;  // outside dom
      for (double t : ts) {
        double ft = e(x + t * dn);
        if (is_pinf(ft)) return xscale(d.norm(), kPosInf);
        double diff = ft - fx;
        if (!trustworthy(diff, fx, ft)) continue;
        double q = diff / t;
        if (q > cfg.inf_threshold) return xscale(d.norm(), kPosInf);
        sup = std::max(sup, q);
        any = true;
      }
    }
    // nothing above the noise floor means the quotients vanish
    raw = any ? sup : 0.0;
    if (raw > cfg.inf_threshold) raw = kPosInf;
  }
  return xscale(d.norm(), raw);
}

double level_asym_value(const ScalarExpr& e, double level, VecRef d, const AsymConfig& cfg) {
  Vec dn = normalized_or_throw(d);
  if (cfg.probes.empty())
    throw std::invalid_argument("level asymptotic value: no base-point probes configured");
  std::vector<const Vec*> lev;
  for (const auto& x : cfg.probes)
    if (e(x) <= level + cfg.zero_tol) lev.push_back(&x);
  if (lev.empty()) throw std::runtime_error("level asymptotic value: level set not sampled");

  auto ts = log_grid(cfg.t_min_q, cfg.t_max, cfg.t_points_q);
  double sup = -kPosInf;
  bool any = false;
  for (const Vec* x : lev) {
    for (double t : ts) {
      double ft = e(*x + t * dn);
      if (is_pinf(ft)) return xscale(d.norm(), kPosInf);
      double num = ft - level;
      if (!trustworthy(num, level, ft)) continue;
      double q = num / t;
      if (q > cfg.inf_threshold) return xscale(d.norm(), kPosInf);
      sup = std::max(sup, q);
      any = true;
    }
  }
  double raw = any ? sup : 0.0;
  return xscale(d.norm(), raw);
}

double KCone::value(VecRef d) const {
  switch (variant) {
    case KVariant::Plain:
      return asym_value(base, d, cfg);
    case KVariant::Q:
      return q_asym_value(base, d, cfg);
    case KVariant::QRestricted:
      return q_asym_value(base, d, cfg, xcone ? &*xcone : nullptr);
    case KVariant::Level:
      return level_asym_value(base, level, d, cfg);
  }
  return kPosInf;
}

KCone k_cone(const ScalarExpr& e, KVariant variant, const AsymConfig& cfg,
             std::optional<ConeRep> xcone, double level) {
  if (variant == KVariant::QRestricted && !xcone)
    throw std::invalid_argument("k cone: restricted variant needs the feasible-set cone");
  return KCone{e, variant, level, cfg, std::move(xcone)};
}

KMembership in_k_cone(const KCone& k, VecRef d) {
  Vec dn = normalized_or_throw(d);
  double v = k.value(dn);
  return {v <= k.cfg.zero_tol, v, v - k.cfg.zero_tol};
}

ConeRep as_cone_rep(const KCone& k) {
  ConeRep c;
  c.predicate_kind = true;
  const int n = k.base.dim();
  auto kc = std::make_shared<KCone>(k);
  c.member_fn = [kc](const Vec& d) { return in_k_cone(*kc, d).member; };
  c.sampler_fn = [n](int count) { return unit_sphere_directions(n, count); };
  return c;
}

namespace {

double variant_value(const ScalarExpr& e, KVariant variant, const Vec& d, const AsymConfig& cfg) {
  return variant == KVariant::Plain ? asym_value(e, d, cfg) : q_asym_value(e, d, cfg);
}

}  // namespace

ConditionVerdict check_condition(const PolyUnion& X, const VectorObjective& f, KVariant variant,
                                 const PerturbationMatrix* u, const AsymConfig& cfg) {
  ConditionVerdict verdict;
  verdict.probe_count = static_cast<int>(cfg.probes.size());
  ConeRep cone = asymptotic_cone(X);
  if (cone.is_zero()) return verdict;  // bounded X: holds vacuously

  auto dirs = cone.sphere_sample(cfg.dirs_per_cone);
  verdict.sampled_directions = static_cast<int>(dirs.size());
  for (const auto& d : dirs) {
    for (int i = 0; i < f.objectives(); ++i) {
      double v = variant_value(f.components[i], variant, d, cfg);
      if (u) v = xadd(v, -u->rows.row(i).dot(d));  // perturbation identity
      if (v <= cfg.zero_tol) {
        verdict.holds = false;
        verdict.witness = d;
        verdict.witness_index = i;
        verdict.margin = v;
        return verdict;
      }
      verdict.margin = std::min(verdict.margin, v);
    }
  }
  return verdict;
}

ConditionVerdict check_intersection_condition_q(const PolyUnion& X, const VectorObjective& f,
                                                const AsymConfig& cfg) {
  ConditionVerdict verdict;
  verdict.probe_count = static_cast<int>(cfg.probes.size());
  ConeRep cone = asymptotic_cone(X);
  if (cone.is_zero()) return verdict;

  auto dirs = cone.sphere_sample(cfg.dirs_per_cone);
  verdict.sampled_directions = static_cast<int>(dirs.size());
  for (const auto& d : dirs) {
    bool in_all = true;
    double worst = -kPosInf;
    for (int i = 0; i < f.objectives() && in_all; ++i) {
      double v = q_asym_value(f.components[i], d, cfg);
      worst = std::max(worst, v);
      if (v > cfg.zero_tol) in_all = false;
    }
    if (in_all) {
      verdict.holds = false;
      verdict.witness = d;
      verdict.witness_index = f.objectives() - 1;
      verdict.margin = worst;
      return verdict;
    }
  }
  return verdict;
}

double verify_perturbation_identity(const ScalarExpr& e, const Vec& u,
                                    const std::vector<Vec>& dirs, const AsymConfig& cfg) {
  ScalarExpr ep = e.perturbed(u);
  double worst = 0.0;
  for (const auto& d : dirs) {
    for (KVariant variant : {KVariant::Plain, KVariant::Q}) {
      double lhs = variant_value(ep, variant, d, cfg);
      double rhs = xadd(variant_value(e, variant, d, cfg), -u.dot(d));
      double dev;
      if (is_pinf(lhs) && is_pinf(rhs))
        dev = 0.0;
      else if (is_pinf(lhs) || is_pinf(rhs))
        dev = kPosInf;
      else
        dev = std::abs(lhs - rhs);
      worst = std::max(worst, dev);
    }
  }
  return worst;
}

namespace {

// Deterministic perturbation set of norm r: every row aligned or
// anti-aligned with cone generators, lineality directions, and axes,
// applied to all rows at once and to one row at a time.
std::vector<PerturbationMatrix> perturbation_set(const PolyUnion& X, int m, double r) {
  const int n = X.dim();
  ConeRep cone = asymptotic_cone(X);
  std::vector<Vec> dirs;
  auto add = [&](const Vec& v) {
    if (v.norm() < 1e-12) return;
    Vec vn = v / v.norm();
    for (const auto& e : dirs)
      if ((e - vn).norm() < 1e-9) return;
    dirs.push_back(vn);
  };
  for (const auto& g : cone.all_generators()) {
    add(g);
    add(Vec(-g));
  }
  for (const auto& piece : cone.pieces)
    for (const auto& l : piece.lineality) {
      add(l);
      add(Vec(-l));
    }
  for (int j = 0; j < n; ++j) {
    add(Vec(Vec::Unit(n, j)));
    add(Vec(-Vec::Unit(n, j)));
  }

  std::vector<PerturbationMatrix> us;
  for (const auto& dir : dirs) {
    Mat all(m, n);
    for (int i = 0; i < m; ++i) all.row(i) = (r * dir).transpose();
    us.emplace_back(std::move(all));
    for (int i = 0; i < m; ++i) {
      Mat one = Mat::Zero(m, n);
      one.row(i) = (r * dir).transpose();
      us.emplace_back(std::move(one));
    }
  }
  return us;
}

}  // namespace

EpsilonEstimate epsilon_threshold(const PolyUnion& X, const VectorObjective& f, KVariant variant,
                                  const AsymConfig& cfg, double r_max, int bisect_iters) {
  auto base = check_condition(X, f, variant, nullptr, cfg);
  if (!base.holds) throw std::runtime_error("epsilon threshold: no threshold, condition fails at u = 0");

  int tested = 0;
  auto holds_at = [&](double r) {
    auto us = perturbation_set(X, f.objectives(), r);
    tested += static_cast<int>(us.size());
    for (const auto& u : us)
      if (!check_condition(X, f, variant, &u, cfg).holds) return false;
    return true;
  };

  if (holds_at(r_max)) return {r_max, tested};
  double lo = 0.0, hi = r_max;
  for (int it = 0; it < bisect_iters; ++it) {
    double mid = 0.5 * (lo + hi);
    if (holds_at(mid))
      lo = mid;
    else
      hi = mid;
  }
  return {lo, tested};
}

}  // namespace asymptopt
