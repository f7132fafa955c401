#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "asymptopt/core.hpp"

namespace asymptopt {

// {x : Ax <= b, Ex = d} with rows normalized to unit length.
class Polyhedron {
 public:
  static Polyhedron make(Mat A, Vec b, Mat E, Vec d);
  static Polyhedron whole_space(int dim);

  int dim() const { return dim_; }
  const Mat& A() const { return A_; }
  const Vec& b() const { return b_; }
  const Mat& E() const { return E_; }
  const Vec& d() const { return d_; }

  bool feasible() const { return feasible_; }
  // Cached feasible point of minimum norm (projection of the origin).
  const Vec& any_point() const;

  bool contains(VecRef x, double tol) const;
  // Max single-constraint violation; a lower bound on dist(x, P).
  double violation(VecRef x) const;

  // Euclidean projection; active-set iteration with an enumeration fallback.
  Vec project(VecRef z) const;
  // Exhaustive active-set enumeration. Slow, used as the testing reference
  // and for the feasibility decision at construction.
  Vec project_reference(VecRef z) const;

 private:
  Mat A_, E_;
  Vec b_, d_;
  int dim_ = 0;
  bool feasible_ = false;
  Vec base_point_;
  std::optional<Vec> project_enumerate(VecRef z) const;
};

// Finite union of convex polyhedra; empty pieces are pruned at construction.
class PolyUnion {
 public:
  static PolyUnion make(std::vector<Polyhedron> pieces);
  static PolyUnion whole_space(int dim);

  int dim() const { return dim_; }
  const std::vector<Polyhedron>& pieces() const { return pieces_; }
  bool contains(VecRef x, double tol) const;
  double distance(VecRef x) const;
  Vec project(VecRef x) const;

 private:
  std::vector<Polyhedron> pieces_;
  int dim_ = 0;
};

// One polyhedral cone {d : Ad <= 0, Ed = 0} with its extreme-ray /
// lineality-space representation attached.
struct ConePiece {
  Mat A, E;
  std::vector<Vec> generators;  // unit extreme rays
  std::vector<Vec> lineality;   // orthonormal basis
  bool is_zero() const { return generators.empty() && lineality.empty(); }
  bool member(VecRef dir_unit, double tol) const;
};

// A cone, either as a union of polyhedral pieces or as a membership
// predicate backed by an evaluator.
struct ConeRep {
  std::vector<ConePiece> pieces;
  std::function<bool(const Vec&)> member_fn;                // predicate kind
  std::function<std::vector<Vec>(int)> sampler_fn;
  bool predicate_kind = false;

  bool is_zero() const;
  // Membership is tested on d/||d|| so it is exactly positively homogeneous.
  bool member(VecRef d, double tol = 1e-9) const;
  std::vector<Vec> all_generators() const;
  // Deterministic unit directions: every generator, +- lineality basis,
  // then low-discrepancy conic combinations. Empty iff the cone is {0}.
  std::vector<Vec> sphere_sample(int count_per_piece) const;
};

ConePiece recession_cone_piece(const Polyhedron& P);
ConeRep recession_cone(const Polyhedron& P);
// Union of the pieces' recession cones (the asymptotic cone of a finite
// union of convex sets is the union of the pieces' cones).
ConeRep asymptotic_cone(const PolyUnion& X);

// Conic-hull membership from the generator representation only; test-grade
// (enumeration), independent of the halfspace route.
bool in_conic_hull(const std::vector<Vec>& generators, const std::vector<Vec>& lineality,
                   VecRef d, double tol = 1e-8);

struct GridSpec {
  Box box;
  double h = 0.1;
  double snap_radius = -1.0;  // <= 0 means h/2
  double tau_set = 1e-9;
  double snap() const { return snap_radius > 0 ? snap_radius : 0.5 * h; }
  int dim() const { return box.dim(); }
};

enum class CloudKind { Feasible, WeakPareto, Pareto, ScalarArgmin, Custom };

struct PointCloud {
  std::vector<Vec> points;
  GridSpec grid;
  CloudKind kind = CloudKind::Custom;
  bool empty() const { return points.empty(); }
  int size() const { return static_cast<int>(points.size()); }
  int dim() const { return points.empty() ? grid.dim() : static_cast<int>(points[0].size()); }
};

// Lattice points of the box within snap radius of some piece, each snapped
// onto that piece by projection, deduped at h/10, sorted lexicographically.
// Throws if the truncation box misses X entirely.
PointCloud grid_points(const PolyUnion& X, const GridSpec& g);

double dist_point_to_cloud(VecRef x, const PointCloud& S);  // +inf when S empty
// sup_{s in S1} dist(s, S2); 0 when S1 empty, +inf when only S2 empty.
double hausdorff_excess(const PointCloud& S1, const PointCloud& S2);
double hausdorff_distance(const PointCloud& S1, const PointCloud& S2);

// Deterministic quasi-uniform unit directions (diagnostic sampler).
std::vector<Vec> unit_sphere_directions(int dim, int count);

}  // namespace asymptopt
