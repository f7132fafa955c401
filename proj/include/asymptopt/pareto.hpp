#pragma once

#include "asymptopt/asymptotic.hpp"
#include "asymptopt/expr.hpp"
#include "asymptopt/geometry.hpp"

namespace asymptopt {

// All weight vectors with coordinates in {0, 1/r, ..., 1} summing to 1.
struct SimplexGrid {
  int m = 0, resolution = 0;
  std::vector<Vec> lambdas;
  std::vector<std::uint8_t> interior;  // 1 where every coordinate > 0
  static SimplexGrid make(int m, int resolution);
};

// sum_i lambda_i f_i; lambda must lie on the unit simplex (1e-12 slack).
ScalarExpr scalarize(const VectorObjective& f, VecRef lambda);

struct ScalarSolve {
  PointCloud argmin;
  double min_value = kPosInf;
  // Set when the argmin touches the truncation boundary and the objective
  // still descends along a recession direction there.
  bool escape = false;
};

ScalarSolve solve_scalar(const ScalarExpr& phi, const PolyUnion& X, const PointCloud& feasible);

bool weak_pareto_member(VecRef x, const VectorObjective& f, const PointCloud& feasible);
bool pareto_member(VecRef x, const VectorObjective& f, const PointCloud& feasible);

PointCloud solve_weak_front(const VectorObjective& f, const PointCloud& feasible);
PointCloud solve_front(const VectorObjective& f, const PointCloud& feasible);

// psi(x) = max over grid y of min_i (f_i(x) - f_i(y)); zero exactly on the
// weak front.
double achievement_psi(VecRef x, const VectorObjective& f, const PointCloud& feasible);
std::vector<double> achievement_psi_all(const VectorObjective& f, const PointCloud& feasible);

struct PsiReport {
  int disagreements = 0;
  std::vector<int> disagreeing_indices;
  double tau_psi = 0.0;
  double max_psi_on_front = 0.0;
  double min_psi_off_front = kPosInf;
};

// Dual route consistency: the dominance-scan front versus the psi <= tau
// characterization, point by point over the grid.
PsiReport verify_psi_characterization(const VectorObjective& f, const PointCloud& feasible);

struct ClaimCheck {
  double stat = 0.0;
  bool pass = false;
};

struct SharpCertificate {
  double R = 0.0;
  double c_hat = 0.0;
  Vec worst_ratio_point;
  int samples = 0;
  bool valid = false;
  std::string error;
  ClaimCheck growth;            // min psi(x)/||x|| over far points
  ClaimCheck psi_vs_image;      // min (dist(f(x), f(front)) - psi(x))
  ClaimCheck norm_vs_distance;  // min (||x|| - dist(x, front)/2)
};

// Far-point sharpness ratios dist(f(x), f(front)) / dist(x, front) for each
// radius, with the three supporting growth inequalities sampled alongside.
// Throws when the existence condition fails.
std::vector<SharpCertificate> sharp_certificates(const VectorObjective& f, const PolyUnion& X,
                                                 const PointCloud& feasible,
                                                 const std::vector<double>& R_list,
                                                 const AsymConfig& cfg);

struct EmptinessFlags {
  bool empty = false;
  bool escape = false;
  bool boundary_touch = false;
};

// A finite grid never has an empty weak front; emptiness is reported when
// every front point sits on the truncation boundary and every vertex
// scalarization escapes along a recession direction.
EmptinessFlags front_flags(const PointCloud& front, const VectorObjective& f, const PolyUnion& X,
                           const PointCloud& feasible);

struct BoundednessVerdict {
  bool bounded = true;
  bool touched_initial = false;
  bool grew_box = false;
};

// Boundary avoidance as the compactness proxy; the box is grown once to
// tell truncation artifacts from genuine unboundedness.
BoundednessVerdict front_boundedness(const VectorObjective& f, const PolyUnion& X,
                                     const GridSpec& g);

}  // namespace asymptopt
