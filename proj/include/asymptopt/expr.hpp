#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "asymptopt/core.hpp"

namespace asymptopt {

enum class Curvature { Affine, ConvexQuadratic, Convex, General };

// 0.5 x'Qx + c'x + b. Q is symmetric; affine expressions have Q == 0.
struct QuadForm {
  Mat Q;
  Vec c;
  double b = 0.0;
  bool is_affine(double tol = 0.0) const { return Q.cwiseAbs().maxCoeff() <= tol; }
};

enum class ExprKind { Constant, Coordinate, Affine, Quadratic, AbsPower, Sum, Scale, Min, Max };

class ScalarExpr;

struct ExprNode {
  ExprKind kind;
  int dim = 0;
  double scalar = 0.0;  // Constant value / Scale factor / affine offset b
  int coord = 0;        // Coordinate index
  Vec a;                // Affine coefficients / Quadratic linear part
  Mat Q;                // Quadratic matrix
  long p_num = 1, p_den = 1;  // AbsPower exponent as a reduced fraction
  std::vector<std::shared_ptr<const ExprNode>> kids;
  Curvature curv = Curvature::General;
  std::optional<QuadForm> qform;  // set when the whole subtree flattens
};

// Immutable scalar objective expression over R^n with values in R u {+inf}.
// Evaluation never yields NaN or -inf.
class ScalarExpr {
 public:
  ScalarExpr() = default;

  static ScalarExpr constant(int dim, double c);
  static ScalarExpr coordinate(int dim, int j);
  static ScalarExpr affine(const Vec& a, double b);
  static ScalarExpr quadratic(const Mat& Q, const Vec& c, double b);
  // |arg|^(num/den), exponent > 0
  static ScalarExpr abs_power(const ScalarExpr& arg, long num, long den);
  static ScalarExpr abs_of(const ScalarExpr& arg);
  static ScalarExpr sum(const std::vector<ScalarExpr>& terms);
  static ScalarExpr scale(double k, const ScalarExpr& arg);
  static ScalarExpr min_of(const std::vector<ScalarExpr>& terms);
  static ScalarExpr max_of(const std::vector<ScalarExpr>& terms);

  int dim() const { return node_->dim; }
  double operator()(VecRef x) const;

  // e(x) - <u, x>, with perturbed(0) == *this structurally.
  ScalarExpr perturbed(const Vec& u) const;

  Curvature curvature() const { return node_->curv; }
  const std::optional<QuadForm>& quadratic_form() const { return node_->qform; }

  const ExprNode& node() const { return *node_; }
  bool valid() const { return node_ != nullptr; }

 private:
  explicit ScalarExpr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  static ScalarExpr finish(ExprNode n);
  std::shared_ptr<const ExprNode> node_;
};

struct VectorObjective {
  std::vector<ScalarExpr> components;
  int dim = 0;

  VectorObjective() = default;
  explicit VectorObjective(std::vector<ScalarExpr> comps);
  int objectives() const { return static_cast<int>(components.size()); }
  Vec operator()(VecRef x) const;
};

// Per-objective linear perturbation, one row u_i per objective.
// The norm is max_i ||u_i|| (Euclidean row norms).
struct PerturbationMatrix {
  Mat rows;  // m x n
  PerturbationMatrix() = default;
  PerturbationMatrix(Mat r) : rows(std::move(r)) {}
  double norm() const;
  bool zero() const { return rows.size() == 0 || rows.cwiseAbs().maxCoeff() == 0.0; }
};

VectorObjective perturb(const VectorObjective& f, const PerturbationMatrix& u);

// Node-by-node structural equality (exact field comparison).
bool structurally_equal(const ScalarExpr& a, const ScalarExpr& b);

struct QcWitness {
  Vec x, y;
  double lambda = 0.0;
  double margin = 0.0;  // violation size: e(mix) - max(e(x), e(y))
};

struct QcVerdict {
  bool pass = true;
  std::optional<QcWitness> witness;
};

struct RobustQcVerdict {
  bool pass = true;
  std::optional<PerturbationMatrix> u;
  int component = -1;
  std::optional<QcWitness> witness;
};

// Samples (x, y, lambda) triples and checks e(lx+(1-l)y) <= max(e(x), e(y)).
// A pass is a non-refutation certificate only.
QcVerdict quasiconvex_sample_check(const ScalarExpr& e, const Box& region,
                                   int samples, std::uint64_t seed);

// Samples perturbations with norm < alpha and re-runs the componentwise
// check; alpha == 0 degenerates to testing u = 0 only.
RobustQcVerdict robust_quasiconvex_sample_check(const VectorObjective& f, double alpha,
                                                const Box& region, int u_samples,
                                                int triple_samples, std::uint64_t seed);

}  // namespace asymptopt
