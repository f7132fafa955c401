#pragma once

#include <functional>
#include <optional>

#include "asymptopt/asymptotic.hpp"
#include "asymptopt/pareto.hpp"

namespace asymptopt {

struct SweepConfig {
  std::vector<double> radii = {0.4, 0.2, 0.1, 0.05, 0.025};  // decreasing
  int directions_per_radius = 8;
};

// Deterministic perturbation grid: row-aligned cone generators, coordinate
// axes one row at a time, then sign-alternating mixes, scaled to each
// radius in the max-of-row-norms sense.
struct PerturbationSweep {
  SweepConfig config;
  std::vector<PerturbationMatrix> perturbations;
  std::vector<int> radius_index;
  std::vector<int> direction_index;
  static PerturbationSweep make(const SweepConfig& cfg, const PolyUnion& X, int m);
};

struct PerturbedSolve {
  PerturbationMatrix u;
  double radius = 0.0;
  int radius_idx = 0;
  int dir_idx = 0;
  PointCloud cloud;
  EmptinessFlags flags;
  bool effective_empty = false;
};

PerturbedSolve sol_w_perturbed(const VectorObjective& f, const PolyUnion& X,
                               const PerturbationMatrix& u, const PointCloud& feasible);

enum class VerdictState { Pass, Fail, Vacuous };

struct ClosednessVerdict {
  VerdictState state = VerdictState::Pass;
  std::optional<Vec> witness;
  int witness_dir = -1;
  int emptiness_events = 0;
  double worst_match = 0.0;
};

struct UscVerdict {
  VerdictState state = VerdictState::Pass;
  std::vector<std::pair<double, double>> r_star;  // (eps, largest good radius)
  std::optional<Vec> witness_point;
  int witness_run = -1;
  bool emptiness_dominated = false;
};

struct LscVerdict {
  VerdictState state = VerdictState::Pass;
  std::optional<Vec> witness_point;
  int witness_run = -1;
  bool emptiness = false;
};

// Persistent cluster points across the smallest half of the radii must land
// within 2h of the unperturbed front.
ClosednessVerdict closedness_verdict(const std::vector<PerturbedSolve>& runs,
                                     const PointCloud& solw0, double h);

// For each neighborhood size, the largest radius whose whole tier keeps
// hausdorff excess within it; pass needs a positive radius for every size.
UscVerdict usc_verdict(const std::vector<PerturbedSolve>& runs, const PointCloud& solw0,
                       const std::vector<double>& eps_list);

// Every unperturbed front point must stay within 5h of the perturbed fronts
// at the smallest radius tier; an empty front there refutes lsc outright.
LscVerdict lsc_verdict(const std::vector<PerturbedSolve>& runs, const PointCloud& solw0);

struct EquivalenceReport {
  bool applicable = false;
  std::string reason;
  bool bounded = false;
  bool condition_holds = false;
  bool agree = false;
  bool lsc_passed = false;
};

// Boundedness of the unperturbed front versus the existence condition,
// under convexity hypotheses.
EquivalenceReport boundedness_equivalence_check(const VectorObjective& f, const PolyUnion& X,
                                                const GridSpec& g, const AsymConfig& cfg,
                                                bool lsc_passed);

struct StabilityReport {
  KVariant variant = KVariant::Plain;
  std::vector<PerturbedSolve> runs;
  PointCloud solw0;
  EmptinessFlags solw0_flags;
  ConditionVerdict condition;
  std::optional<EpsilonEstimate> epsilon;
  ClosednessVerdict closedness;
  UscVerdict usc;
  LscVerdict lsc;
  EquivalenceReport equivalence;
  std::optional<ConditionVerdict> intersection_q;
  std::vector<std::string> warnings;
};

StabilityReport stability_run(const VectorObjective& f, const PolyUnion& X,
                              const PointCloud& feasible, const SweepConfig& sweep,
                              const AsymConfig& cfg, KVariant variant = KVariant::Plain);

// Adds the robust-quasiconvexity precondition, the q-variant condition
// gate, and the intersection-condition consequence when lsc passes.
StabilityReport quasiconvex_stability_run(const VectorObjective& f, const PolyUnion& X,
                                          double alpha, const PointCloud& feasible,
                                          const SweepConfig& sweep, const AsymConfig& cfg,
                                          std::uint64_t seed);

// Reference solution interval as a function of the perturbation.
struct ClosedFormInterval {
  std::string id;
  std::function<std::pair<double, double>(const PerturbationMatrix&)> interval;
};

std::optional<ClosedFormInterval> closed_form_interval(const std::string& id);

PointCloud sample_interval(double lo, double hi, const GridSpec& g);

struct ClosedFormConformance {
  std::vector<double> per_run;
  double worst = 0.0;
  int runs_checked = 0;
};

ClosedFormConformance closed_form_conformance(const StabilityReport& rep,
                                              const ClosedFormInterval& form);

}  // namespace asymptopt
