#include "asymptopt/expr.hpp"

#include <numeric>
#include <random>
#include <stdexcept>

namespace asymptopt {

namespace {

double eval_node(const ExprNode& n, VecRef x);

bool psd(const Mat& Q) {
  if (Q.size() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Mat> es(Q, Eigen::EigenvaluesOnly);
  double scale = 1.0 + Q.cwiseAbs().maxCoeff();
  return es.eigenvalues().minCoeff() >= -1e-10 * scale;
}

std::optional<QuadForm> flatten(const ExprNode& n) {
  const int d = n.dim;
  switch (n.kind) {
    case ExprKind::Constant:
      return QuadForm{Mat::Zero(d, d), Vec::Zero(d), n.scalar};
    case ExprKind::Coordinate: {
      Vec c = Vec::Zero(d);
      c[n.coord] = 1.0;
      return QuadForm{Mat::Zero(d, d), c, 0.0};
    }
    case ExprKind::Affine:
      return QuadForm{Mat::Zero(d, d), n.a, n.scalar};
    case ExprKind::Quadratic:
      return QuadForm{n.Q, n.a, n.scalar};
    case ExprKind::Sum: {
      QuadForm acc{Mat::Zero(d, d), Vec::Zero(d), 0.0};
      for (const auto& k : n.kids) {
        if (!k->qform) return std::nullopt;
        acc.Q += k->qform->Q;
        acc.c += k->qform->c;
        acc.b += k->qform->b;
      }
      return acc;
    }
    case ExprKind::Scale: {
      const auto& k = n.kids[0];
      if (!k->qform) return std::nullopt;
      return QuadForm{n.scalar * k->qform->Q, n.scalar * k->qform->c, n.scalar * k->qform->b};
    }
    default:
      return std::nullopt;
  }
}

Curvature classify(const ExprNode& n) {
  if (n.qform) {
    if (n.qform->is_affine(1e-15 * (1.0 + n.qform->Q.size()))) return Curvature::Affine;
    return psd(n.qform->Q) ? Curvature::ConvexQuadratic : Curvature::General;
  }
  auto kid_convex = [](const std::shared_ptr<const ExprNode>& k) {
    return k->curv != Curvature::General;
  };
  switch (n.kind) {
    case ExprKind::AbsPower:
      // |affine|^p is convex for p >= 1; anything else stays unclassified.
      if (n.kids[0]->curv == Curvature::Affine && n.p_num >= n.p_den) return Curvature::Convex;
      return Curvature::General;
    case ExprKind::Max: {
      for (const auto& k : n.kids)
        if (!kid_convex(k)) return Curvature::General;
      return Curvature::Convex;
    }
    case ExprKind::Min:
      return n.kids.size() == 1 ? n.kids[0]->curv : Curvature::General;
    case ExprKind::Sum: {
      for (const auto& k : n.kids)
        if (!kid_convex(k)) return Curvature::General;
      return Curvature::Convex;
    }
    case ExprKind::Scale:
      if (n.scalar >= 0.0 && kid_convex(n.kids[0])) return Curvature::Convex;
      return Curvature::General;
    default:
      return Curvature::General;
  }
}

double eval_node(const ExprNode& n, VecRef x) {
  switch (n.kind) {
    case ExprKind::Constant:
      return n.scalar;
    case ExprKind::Coordinate:
      return x[n.coord];
    case ExprKind::Affine:
      return xsanitize(n.a.dot(x) + n.scalar);
    case ExprKind::Quadratic:
      return xsanitize(0.5 * x.dot(n.Q * x) + n.a.dot(x) + n.scalar);
    case ExprKind::AbsPower: {
      double v = eval_node(*n.kids[0], x);
      if (is_pinf(v)) return kPosInf;
      double p = static_cast<double>(n.p_num) / static_cast<double>(n.p_den);
      return xsanitize(std::pow(std::abs(v), p));
    }
    case ExprKind::Sum: {
      double acc = 0.0;
      for (const auto& k : n.kids) acc = xadd(acc, eval_node(*k, x));
      return acc;
    }
    case ExprKind::Scale:
      return xscale(n.scalar, eval_node(*n.kids[0], x));
    case ExprKind::Min: {
      double acc = kPosInf;
      bool first = true;
      for (const auto& k : n.kids) {
        double v = eval_node(*k, x);
        acc = first ? v : std::min(acc, v);
        first = false;
      }
      return acc;
    }
    case ExprKind::Max: {
      double acc = 0.0;
      bool first = true;
      for (const auto& k : n.kids) {
        double v = eval_node(*k, x);
        acc = first ? v : std::max(acc, v);
        first = false;
      }
      return acc;
    }
  }
  return kPosInf;
}

}  // namespace

ScalarExpr ScalarExpr::finish(ExprNode n) {
  auto node = std::make_shared<ExprNode>(std::move(n));
  node->qform = flatten(*node);
  node->curv = classify(*node);
  return ScalarExpr(node);
}

ScalarExpr ScalarExpr::constant(int dim, double c) {
  if (dim < 1) throw std::invalid_argument("expr: dimension must be positive");
  if (!std::isfinite(c)) throw std::invalid_argument("expr: constant must be finite");
  ExprNode n;
  n.kind = ExprKind::Constant;
  n.dim = dim;
  n.scalar = c;
  return finish(std::move(n));
}

ScalarExpr ScalarExpr::coordinate(int dim, int j) {
  if (dim < 1 || j < 0 || j >= dim) throw std::invalid_argument("expr: coordinate index out of range");
  ExprNode n;
  n.kind = ExprKind::Coordinate;
  n.dim = dim;
  n.coord = j;
  return finish(std::move(n));
}

ScalarExpr ScalarExpr::affine(const Vec& a, double b) {
  if (a.size() < 1) throw std::invalid_argument("expr: affine needs coefficients");
  if (!a.allFinite() || !std::isfinite(b)) throw std::invalid_argument("expr: affine data must be finite");
  ExprNode n;
  n.kind = ExprKind::Affine;
  n.dim = static_cast<int>(a.size());
  n.a = a;
  n.scalar = b;
  return finish(std::move(n));
}

ScalarExpr ScalarExpr::quadratic(const Mat& Q, const Vec& c, double b) {
  if (Q.rows() != Q.cols() || Q.rows() != c.size() || c.size() < 1)
    throw std::invalid_argument("expr: quadratic dimensions inconsistent");
  if (!Q.allFinite() || !c.allFinite() || !std::isfinite(b))
    throw std::invalid_argument("expr: quadratic data must be finite");
  ExprNode n;
  n.kind = ExprKind::Quadratic;
  n.dim = static_cast<int>(c.size());
  n.Q = 0.5 * (Q + Q.transpose());  // symmetrize
  n.a = c;
  n.scalar = b;
  return finish(std::move(n));
}

ScalarExpr ScalarExpr::abs_power(const ScalarExpr& arg, long num, long den) {
  if (!arg.valid()) throw std::invalid_argument("expr: power of empty expression");
  if (num <= 0 || den <= 0) throw std::invalid_argument("expr: power exponent must be positive");
  long g = std::gcd(num, den);
  ExprNode n;
  n.kind = ExprKind::AbsPower;
  n.dim = arg.dim();
  n.p_num = num / g;
  n.p_den = den / g;
  n.kids = {arg.node_};
  return finish(std::move(n));
}

ScalarExpr ScalarExpr::abs_of(const ScalarExpr& arg) { return abs_power(arg, 1, 1); }

ScalarExpr ScalarExpr::sum(const std::vector<ScalarExpr>& terms) {
  if (terms.empty()) throw std::invalid_argument("expr: empty sum");
  ExprNode n;
  n.kind = ExprKind::Sum;
  n.dim = terms[0].dim();
  for (const auto& t : terms) {
    if (t.dim() != n.dim) throw std::invalid_argument("expr: sum dimension mismatch");
    n.kids.push_back(t.node_);
  }
  return finish(std::move(n));
}

ScalarExpr ScalarExpr::scale(double k, const ScalarExpr& arg) {
  if (!std::isfinite(k)) throw std::invalid_argument("expr: scale factor must be finite");
  ExprNode n;
  n.kind = ExprKind::Scale;
  n.dim = arg.dim();
  n.scalar = k;
  n.kids = {arg.node_};
  return finish(std::move(n));
}

ScalarExpr ScalarExpr::min_of(const std::vector<ScalarExpr>& terms) {
  if (terms.empty()) throw std::invalid_argument("expr: empty min");
  ExprNode n;
  n.kind = ExprKind::Min;
  n.dim = terms[0].dim();
  for (const auto& t : terms) {
    if (t.dim() != n.dim) throw std::invalid_argument("expr: min dimension mismatch");
    n.kids.push_back(t.node_);
  }
  return finish(std::move(n));
}

ScalarExpr ScalarExpr::max_of(const std::vector<ScalarExpr>& terms) {
  if (terms.empty()) throw std::invalid_argument("expr: empty max");
  ExprNode n;
  n.kind = ExprKind::Max;
  n.dim = terms[0].dim();
  for (const auto& t : terms) {
    if (t.dim() != n.dim) throw std::invalid_argument("expr: max dimension mismatch");
    n.kids.push_back(t.node_);
  }
  return finish(std::move(n));
}

double ScalarExpr::operator()(VecRef x) const {
  if (!node_) throw std::logic_error("expr: evaluating empty expression");
  if (x.size() != node_->dim) throw std::invalid_argument("expr: point dimension mismatch");
  return xsanitize(eval_node(*node_, x));
}

ScalarExpr ScalarExpr::perturbed(const Vec& u) const {
  if (u.size() != node_->dim) throw std::invalid_argument("expr: perturbation dimension mismatch");
  if (u.cwiseAbs().maxCoeff() == 0.0) return *this;
  return sum({*this, affine(-u, 0.0)});
}

VectorObjective::VectorObjective(std::vector<ScalarExpr> comps) : components(std::move(comps)) {
  if (components.empty()) throw std::invalid_argument("objective: needs at least one component");
  dim = components[0].dim();
  for (const auto& c : components)
    if (c.dim() != dim) throw std::invalid_argument("objective: component dimension mismatch");
}

Vec VectorObjective::operator()(VecRef x) const {
  Vec out(objectives());
  for (int i = 0; i < objectives(); ++i) out[i] = components[i](x);
  return out;
}

namespace {
bool nodes_equal(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind || a.dim != b.dim) return false;
  if (a.scalar != b.scalar || a.coord != b.coord) return false;
  if (a.p_num != b.p_num || a.p_den != b.p_den) return false;
  if (a.a.size() != b.a.size() || (a.a.size() > 0 && a.a != b.a)) return false;
  if (a.Q.size() != b.Q.size() || (a.Q.size() > 0 && a.Q != b.Q)) return false;
  if (a.kids.size() != b.kids.size()) return false;
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (!nodes_equal(*a.kids[i], *b.kids[i])) return false;
  return true;
}
}  // namespace

bool structurally_equal(const ScalarExpr& a, const ScalarExpr& b) {
  if (!a.valid() || !b.valid()) return a.valid() == b.valid();
  return nodes_equal(a.node(), b.node());
}

double PerturbationMatrix::norm() const {
  if (rows.size() == 0) return 0.0;
  double best = 0.0;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) best = std::max(best, rows.row(i).norm());
  return best;
}

VectorObjective perturb(const VectorObjective& f, const PerturbationMatrix& u) {
  if (u.rows.rows() != f.objectives() || u.rows.cols() != f.dim)
    throw std::invalid_argument("perturb: matrix shape mismatch");
  std::vector<ScalarExpr> comps;
  comps.reserve(f.components.size());
  for (int i = 0; i < f.objectives(); ++i)
    comps.push_back(f.components[i].perturbed(u.rows.row(i).transpose()));
  return VectorObjective(std::move(comps));
}

namespace {

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Vec box_draw(const Box& region, std::mt19937_64& rng) {
  Vec x(region.dim());
  for (int i = 0; i < region.dim(); ++i)
    x[i] = region.lo[i] + unit_draw(rng) * (region.hi[i] - region.lo[i]);
  return x;
}

}  // namespace

QcVerdict quasiconvex_sample_check(const ScalarExpr& e, const Box& region, int samples,
                                   std::uint64_t seed) {
  if (!region.valid() || region.dim() != e.dim())
    throw std::invalid_argument("quasiconvex check: empty or mismatched region");
  if (samples < 1) throw std::invalid_argument("quasiconvex check: samples must be >= 1");
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    Vec x = box_draw(region, rng);
    Vec y = box_draw(region, rng);
    double lambda = unit_draw(rng);
    Vec mix = lambda * x + (1.0 - lambda) * y;
    double cap = std::max(e(x), e(y));
    double v = e(mix);
    if (is_pinf(v) && is_pinf(cap)) continue;
    if (v > xadd(cap, noise_tol(v, cap))) {
      return {false, QcWitness{x, y, lambda, v - cap}};
    }
  }
  return {true, std::nullopt};
}

RobustQcVerdict robust_quasiconvex_sample_check(const VectorObjective& f, double alpha,
                                                const Box& region, int u_samples,
                                                int triple_samples, std::uint64_t seed) {
  if (alpha < 0) throw std::invalid_argument("robust check: alpha must be >= 0");
  const int m = f.objectives(), n = f.dim;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);

  std::vector<PerturbationMatrix> draws;
  draws.emplace_back(Mat::Zero(m, n));
  if (alpha > 0) {
    for (int k = 0; k < u_samples; ++k) {
      double r = alpha * (k + 1) / (u_samples + 1.0);  // keep ||u|| < alpha
      Mat rows(m, n);
      for (int i = 0; i < m; ++i) {
        Vec dir(n);
        for (int j = 0; j < n; ++j) dir[j] = 2.0 * unit_draw(rng) - 1.0;
        double len = dir.norm();
        Vec row = len > 0 ? Vec((r / len) * dir) : Vec(Vec::Zero(n));
        rows.row(i) = row.transpose();
      }
      draws.emplace_back(std::move(rows));
    }
  }

  for (const auto& u : draws) {
    for (int i = 0; i < m; ++i) {
      // robust quasiconvexity perturbs by +<u_i, x>
      ScalarExpr g = f.components[i].perturbed(-u.rows.row(i).transpose());
      auto v = quasiconvex_sample_check(g, region, triple_samples, rng());
      if (!v.pass) return {false, u, i, v.witness};
    }
  }
  return {true, std::nullopt, -1, std::nullopt};
}

}  // namespace asymptopt
