#pragma once

#include <optional>
#include <string>

#include "asymptopt/expr.hpp"
#include "asymptopt/geometry.hpp"

namespace asymptopt {

// Numeric apparatus for growth-at-infinity evaluations: log t-grids, jitter
// directions, base-point probes, the <= 0 membership tolerance and the
// +inf cutoff.
struct AsymConfig {
  double t_max = 1e6;
  int t_points = 60;
  double t_min_q = 1e-20;  // difference-quotient sups also probe small steps
  int t_points_q = 100;
  int jitter_count = 8;
  double jitter_radius = 1e-3;
  double zero_tol = 1e-6;        // tau_0: "<= 0" membership slack
  double inf_threshold = 1e9;    // M: quotients above this report +inf
  int dirs_per_cone = 256;
  double probe_norm_cap = 100.0;
  int max_probes = 4096;
  std::vector<Vec> probes;  // base points for q/level variants
};

// Fill cfg.probes from a feasible cloud: cap by norm, subsample by stride.
void set_probes(AsymConfig& cfg, const PointCloud& cloud);

// Growth rate of e at infinity along d (liminf of e(t d_k)/t over a log
// grid with jittered directions; affine/convex-quadratic take the exact
// recession formula). Positively homogeneous by construction.
double asym_value(const ScalarExpr& e, VecRef d, const AsymConfig& cfg);

// sup over base points and step lengths of the difference quotient; the
// restricted form adds +inf outside the feasible set's asymptotic cone.
double q_asym_value(const ScalarExpr& e, VecRef d, const AsymConfig& cfg,
                    const ConeRep* restrict_cone = nullptr);

// sup over sublevel-set probes of (e(x + t d) - level)/t.
// Throws when no probe lies in the sublevel set.
double level_asym_value(const ScalarExpr& e, double level, VecRef d, const AsymConfig& cfg);

enum class KVariant { Plain, Q, QRestricted, Level };

// {d : value(d) <= tau_0} for one objective, under the chosen variant.
struct KCone {
  ScalarExpr base;
  KVariant variant = KVariant::Plain;
  double level = 0.0;
  AsymConfig cfg;
  std::optional<ConeRep> xcone;  // QRestricted only
  double value(VecRef d) const;
};

KCone k_cone(const ScalarExpr& e, KVariant variant, const AsymConfig& cfg,
             std::optional<ConeRep> xcone = std::nullopt, double level = 0.0);

struct KMembership {
  bool member = false;
  double value = 0.0;   // at d/||d||
  double margin = 0.0;  // value - tau_0
};

KMembership in_k_cone(const KCone& k, VecRef d);

ConeRep as_cone_rep(const KCone& k);

struct ConditionVerdict {
  bool holds = true;
  Vec witness;             // failing direction when !holds
  int witness_index = -1;  // objective index of the failure
  double margin = kPosInf; // min sampled value (failure: value at witness)
  int sampled_directions = 0;
  int probe_count = 0;
  std::string label = "sampled verdict";
};

// X^inf cap union_i {d : value_i(d) <= tau_0} == {0}, sampled over unit
// directions of the cone pieces. `u` applies the linear-perturbation
// identity value_i(d) - <u_i, d> before testing.
ConditionVerdict check_condition(const PolyUnion& X, const VectorObjective& f, KVariant variant,
                                 const PerturbationMatrix* u, const AsymConfig& cfg);

// Intersection flavor: fails only when some sampled direction lies in
// every K_q(f_i).
ConditionVerdict check_intersection_condition_q(const PolyUnion& X, const VectorObjective& f,
                                                const AsymConfig& cfg);

// Worst |value(perturbed e) - (value(e) - <u,d>)| over dirs, for both the
// plain and q variants; +inf only matches +inf.
double verify_perturbation_identity(const ScalarExpr& e, const Vec& u,
                                    const std::vector<Vec>& dirs, const AsymConfig& cfg);

struct EpsilonEstimate {
  double value = 0.0;
  int perturbations_tested = 0;
  std::string note = "sampled lower estimate";
};

// Largest tested radius r such that the condition holds for the whole
// deterministic perturbation set of norm r (bisection over (0, r_max]).
// Throws when the condition already fails at u = 0.
EpsilonEstimate epsilon_threshold(const PolyUnion& X, const VectorObjective& f, KVariant variant,
                                  const AsymConfig& cfg, double r_max = 2.0, int bisect_iters = 24);

}  // namespace asymptopt
