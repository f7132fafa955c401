#pragma once

#include <cstdint>
#include <vector>

#include "asymptopt/expr.hpp"
#include "asymptopt/geometry.hpp"

// Data-parallel inner loops. Every kernel here has a serial twin in
// kernels::ref with identical semantics; the test suite checks they agree
// bit-for-bit and the bench target compares their throughput. Parallel
// variants write per-index slots only, so results do not depend on the
// thread count or schedule.
namespace asymptopt::kernels {

struct ValueMatrix {
  int n = 0;  // points
  int m = 0;  // objectives
  std::vector<double> v;
  double at(int i, int k) const { return v[static_cast<size_t>(i) * m + k]; }
  double& at(int i, int k) { return v[static_cast<size_t>(i) * m + k]; }
};

// One objective value per (point, component).
ValueMatrix eval_objectives(const VectorObjective& f, const std::vector<Vec>& pts);

// mask[i] == 1 iff no point strictly improves every component of i
// beyond float noise.
std::vector<std::uint8_t> weak_front_mask(const ValueMatrix& vals);

// mask[i] == 1 iff no point weakly improves every component and strictly
// improves some component of i.
std::vector<std::uint8_t> pareto_front_mask(const ValueMatrix& vals);

// psi[i] = max over cloud rows y of min over components of
// (at_x[i] - at_cloud[y]).
std::vector<double> psi_values(const ValueMatrix& at_x, const ValueMatrix& at_cloud);

// Per-point minimum Euclidean distance to `to` (+inf when `to` is empty).
std::vector<double> min_dist_to_cloud(const std::vector<Vec>& from, const std::vector<Vec>& to);

// Lattice points of g.box within snap radius of some piece of X, snapped
// onto the piece, deduped at h/10, sorted lexicographically.
std::vector<Vec> snap_lattice(const PolyUnion& X, const GridSpec& g);

namespace ref {
ValueMatrix eval_objectives(const VectorObjective& f, const std::vector<Vec>& pts);
std::vector<std::uint8_t> weak_front_mask(const ValueMatrix& vals);
std::vector<std::uint8_t> pareto_front_mask(const ValueMatrix& vals);
std::vector<double> psi_values(const ValueMatrix& at_x, const ValueMatrix& at_cloud);
std::vector<double> min_dist_to_cloud(const std::vector<Vec>& from, const std::vector<Vec>& to);
std::vector<Vec> snap_lattice(const PolyUnion& X, const GridSpec& g);
}  // namespace ref

// Shared dominance primitives so both routes compare floats identically.
inline bool strictly_below(double a, double b) { return a < b - noise_tol(a, b); }
inline bool weakly_below(double a, double b) { return a <= b + noise_tol(a, b); }

}  // namespace asymptopt::kernels
