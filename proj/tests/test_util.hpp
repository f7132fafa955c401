#pragma once

#include <random>
#include <string>

#include "asymptopt/cli_run.hpp"
#include "asymptopt/kernels.hpp"
#include "asymptopt/problem.hpp"

namespace testutil {

using namespace asymptopt;

inline std::string src_dir() { return ASYMPTOPT_SOURCE_DIR; }

inline ProblemSpec load_problem(const std::string& name) {
  return parse_problem(src_dir() + "/problems/" + name + ".json");
}

inline RunConfig load_config(const std::string& name, int n) {
  return parse_config(src_dir() + "/configs/" + name + ".json", n);
}

inline double draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double draw_range(std::mt19937_64& rng, double lo, double hi) {
  return lo + draw(rng) * (hi - lo);
}

inline Vec random_vec(std::mt19937_64& rng, int n, double scale = 2.0) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = draw_range(rng, -scale, scale);
  return v;
}

inline Mat random_psd(std::mt19937_64& rng, int n, double ridge = 0.3) {
  Mat B(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) B(r, c) = draw_range(rng, -1.0, 1.0);
  return Mat(B.transpose() * B + ridge * Mat::Identity(n, n));
}

// Small random expression trees covering the whole grammar.
inline ScalarExpr random_expr(std::mt19937_64& rng, int n, int depth = 2) {
  int pick = static_cast<int>(rng() % (depth > 0 ? 8 : 4));
  switch (pick) {
    case 0:
      return ScalarExpr::constant(n, draw_range(rng, -2, 2));
    case 1:
      return ScalarExpr::coordinate(n, static_cast<int>(rng() % n));
    case 2:
      return ScalarExpr::affine(random_vec(rng, n), draw_range(rng, -2, 2));
    case 3:
      return ScalarExpr::quadratic(random_psd(rng, n), random_vec(rng, n),
                                   draw_range(rng, -1, 1));
    case 4:
      return ScalarExpr::abs_power(random_expr(rng, n, depth - 1), 1 + long(rng() % 4),
                                   1 + long(rng() % 3));
    case 5:
      return ScalarExpr::scale(draw_range(rng, -2, 2), random_expr(rng, n, depth - 1));
    case 6:
      return ScalarExpr::sum({random_expr(rng, n, depth - 1), random_expr(rng, n, depth - 1)});
    default:
      return (rng() % 2 ? ScalarExpr::min_of : ScalarExpr::max_of)(
          {random_expr(rng, n, depth - 1), random_expr(rng, n, depth - 1)});
  }
}

inline ScalarExpr sqrt_abs(int n = 1) {
  return ScalarExpr::abs_power(ScalarExpr::coordinate(n, 0), 1, 2);
}

inline PolyUnion halfline_from(double lo) {  // [lo, +inf)
  Mat A(1, 1);
  A << -1;
  Vec b(1);
  b << -lo;
  return PolyUnion::make({Polyhedron::make(A, b, Mat(0, 1), Vec(0))});
}

inline GridSpec grid1d(double lo, double hi, double h) {
  GridSpec g;
  g.box.lo = Vec::Constant(1, lo);
  g.box.hi = Vec::Constant(1, hi);
  g.h = h;
  return g;
}

inline GridSpec grid2d(double lo, double hi, double h) {
  GridSpec g;
  g.box.lo = Vec::Constant(2, lo);
  g.box.hi = Vec::Constant(2, hi);
  g.h = h;
  return g;
}

inline Vec v1(double x) { return Vec::Constant(1, x); }

inline Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

// Independent dominance oracle: plain loops, no early exits, explicit
// epsilon, no shared code with the kernels.
inline std::vector<int> oracle_weak_front(const std::vector<Vec>& pts,
                                          const VectorObjective& f, double eps = 1e-9) {
  std::vector<int> keep;
  const int N = static_cast<int>(pts.size());
  std::vector<Vec> vals;
  for (const auto& p : pts) vals.push_back(f(p));
  for (int i = 0; i < N; ++i) {
    bool dominated = false;
    for (int y = 0; y < N; ++y) {
      int strict = 0;
      for (int k = 0; k < f.objectives(); ++k)
        if (vals[y][k] < vals[i][k] - eps * (1.0 + std::abs(vals[i][k]))) ++strict;
      if (strict == f.objectives()) dominated = true;
    }
    if (!dominated) keep.push_back(i);
  }
  return keep;
}

}  // namespace testutil
