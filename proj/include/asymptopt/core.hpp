#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace asymptopt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using VecRef = Eigen::Ref<const Eigen::VectorXd>;

inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

inline bool is_pinf(double v) { return std::isinf(v) && v > 0; }

// Extended-real sum: +inf absorbs everything, -inf never escapes
// (functions are kept proper by clamping to the lowest finite value).
inline double xadd(double a, double b) {
  if (is_pinf(a) || is_pinf(b)) return kPosInf;
  double s = a + b;
  if (std::isinf(s) && s < 0) return std::numeric_limits<double>::lowest();
  return s;
}

// Scalar multiple with the 0 * inf = 0 convention.
inline double xscale(double k, double v) {
  if (k == 0.0) return 0.0;
  if (is_pinf(v)) return k > 0 ? kPosInf : std::numeric_limits<double>::lowest();
  double p = k * v;
  if (std::isinf(p) && p < 0) return std::numeric_limits<double>::lowest();
  return p;
}

// NaN can only appear through inf-inf style accidents upstream; map it to
// "outside the domain" so evaluations stay in R u {+inf}.
inline double xsanitize(double v) {
  if (std::isnan(v)) return kPosInf;
  if (std::isinf(v) && v < 0) return std::numeric_limits<double>::lowest();
  return v;
}

struct Box {
  Vec lo, hi;
  int dim() const { return static_cast<int>(lo.size()); }
  bool valid() const {
    return lo.size() == hi.size() && lo.size() > 0 && (lo.array() <= hi.array()).all();
  }
};

// Relative float-noise tolerance used by all dominance/argmin comparisons.
inline double noise_tol(double a, double b) {
  return 1e-9 * (1.0 + std::max(std::abs(a), std::abs(b)));
}

// Effective thread count (honors ASYMPTOPT_THREADS); 1 when OpenMP is absent.
int max_threads();
// Apply the ASYMPTOPT_THREADS cap to the OpenMP runtime. Safe to call often.
void apply_thread_cap();

}  // namespace asymptopt
