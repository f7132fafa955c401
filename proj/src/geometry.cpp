#include "asymptopt/geometry.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "asymptopt/kernels.hpp"

namespace asymptopt {

namespace {

constexpr double kRowDropTol = 1e-13;

// Stationary point of min ||x - z|| s.t. C x = rhs: z plus a row-space correction.
Vec affine_project(VecRef z, const Mat& C, const Vec& rhs, bool* consistent) {
  if (C.rows() == 0) {
    if (consistent) *consistent = true;
    return z;
  }
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(C);
  Vec corr = cod.solve(rhs - C * z);
  Vec x = z + corr;
  if (consistent) {
    double scale = 1.0 + rhs.cwiseAbs().maxCoeff() + z.cwiseAbs().maxCoeff();
    *consistent = (C * x - rhs).cwiseAbs().maxCoeff() <= 1e-8 * scale;
  }
  return x;
}

void enumerate_subsets(int k, int max_size, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> subset;
  std::function<void(int)> rec = [&](int start) {
    fn(subset);
    if (static_cast<int>(subset.size()) == max_size) return;
    for (int i = start; i < k; ++i) {
      subset.push_back(i);
      rec(i + 1);
      subset.pop_back();
    }
  };
  rec(0);
}

Mat stack_rows(const Mat& top, const Mat& bottom) {
  Mat out(top.rows() + bottom.rows(), std::max(top.cols(), bottom.cols()));
  if (top.rows() > 0) out.topRows(top.rows()) = top;
  if (bottom.rows() > 0) out.bottomRows(bottom.rows()) = bottom;
  return out;
}

}  // namespace

Polyhedron Polyhedron::make(Mat A, Vec b, Mat E, Vec d) {
  Polyhedron P;
  int dim = 0;
  if (A.rows() > 0) dim = static_cast<int>(A.cols());
  if (E.rows() > 0) {
    if (dim != 0 && E.cols() != dim) throw std::invalid_argument("polyhedron: A/E width mismatch");
    dim = static_cast<int>(E.cols());
  }
  if (dim == 0) throw std::invalid_argument("polyhedron: cannot infer dimension from empty system");
  if (A.rows() != b.size() || E.rows() != d.size())
    throw std::invalid_argument("polyhedron: row/rhs count mismatch");

  bool trivially_empty = false;
  std::vector<int> keepA, keepE;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    double nrm = A.row(i).norm();
    if (nrm <= kRowDropTol) {
      if (b[i] < -1e-12) trivially_empty = true;  // 0 <= negative
      continue;
    }
    keepA.push_back(static_cast<int>(i));
  }
  for (Eigen::Index i = 0; i < E.rows(); ++i) {
    double nrm = E.row(i).norm();
    if (nrm <= kRowDropTol) {
      if (std::abs(d[i]) > 1e-12) trivially_empty = true;
      continue;
    }
    keepE.push_back(static_cast<int>(i));
  }

  P.dim_ = dim;
  P.A_.resize(keepA.size(), dim);
  P.b_.resize(keepA.size());
  for (size_t r = 0; r < keepA.size(); ++r) {
    double nrm = A.row(keepA[r]).norm();
    P.A_.row(r) = A.row(keepA[r]) / nrm;
    P.b_[r] = b[keepA[r]] / nrm;
  }
  P.E_.resize(keepE.size(), dim);
  P.d_.resize(keepE.size());
  for (size_t r = 0; r < keepE.size(); ++r) {
    double nrm = E.row(keepE[r]).norm();
    P.E_.row(r) = E.row(keepE[r]) / nrm;
    P.d_[r] = d[keepE[r]] / nrm;
  }

  if (trivially_empty) {
    P.feasible_ = false;
    return P;
  }
  auto proj = P.project_enumerate(Vec::Zero(dim));
  P.feasible_ = proj.has_value();
  if (proj) P.base_point_ = *proj;
  return P;
}

Polyhedron Polyhedron::whole_space(int dim) {
  Polyhedron P;
  P.dim_ = dim;
  P.A_.resize(0, dim);
  P.b_.resize(0);
  P.E_.resize(0, dim);
  P.d_.resize(0);
  P.feasible_ = true;
  P.base_point_ = Vec::Zero(dim);
  return P;
}

const Vec& Polyhedron::any_point() const {
  if (!feasible_) throw std::logic_error("polyhedron: empty, no point available");
  return base_point_;
}

bool Polyhedron::contains(VecRef x, double tol) const { return violation(x) <= tol; }

double Polyhedron::violation(VecRef x) const {
  double v = 0.0;
  if (A_.rows() > 0) v = std::max(v, (A_ * x - b_).maxCoeff());
  if (E_.rows() > 0) v = std::max(v, (E_ * x - d_).cwiseAbs().maxCoeff());
  return v;
}

std::optional<Vec> Polyhedron::project_enumerate(VecRef z) const {
  const int k = static_cast<int>(A_.rows());
  double best = kPosInf;
  std::optional<Vec> best_x;
  double scale = 1.0 + z.cwiseAbs().maxCoeff();
  enumerate_subsets(k, dim_, [&](const std::vector<int>& S) {
    Mat C(E_.rows() + S.size(), dim_);
    Vec rhs(E_.rows() + S.size());
    if (E_.rows() > 0) {
      C.topRows(E_.rows()) = E_;
      rhs.head(E_.rows()) = d_;
    }
    for (size_t r = 0; r < S.size(); ++r) {
      C.row(E_.rows() + r) = A_.row(S[r]);
      rhs[E_.rows() + r] = b_[S[r]];
    }
    bool ok = false;
    Vec x = affine_project(z, C, rhs, &ok);
    if (!ok) return;
    if (violation(x) > 1e-8 * scale) return;
    double dist = (x - z).norm();
    if (dist < best - 1e-14) {
      best = dist;
      best_x = x;
    }
  });
  return best_x;
}

Vec Polyhedron::project_reference(VecRef z) const {
  if (!feasible_) throw std::logic_error("polyhedron: projecting onto empty set");
  auto p = project_enumerate(z);
  if (!p) throw std::logic_error("polyhedron: reference projection failed");
  return *p;
}

Vec Polyhedron::project(VecRef z) const {
  if (!feasible_) throw std::logic_error("polyhedron: projecting onto empty set");
  const int k = static_cast<int>(A_.rows());
  double scale = 1.0 + z.cwiseAbs().maxCoeff();
  std::vector<int> W;
  for (int iter = 0; iter < 40 + 4 * k; ++iter) {
    Mat C(E_.rows() + W.size(), dim_);
    Vec rhs(E_.rows() + W.size());
    if (E_.rows() > 0) {
      C.topRows(E_.rows()) = E_;
      rhs.head(E_.rows()) = d_;
    }
    for (size_t r = 0; r < W.size(); ++r) {
      C.row(E_.rows() + r) = A_.row(W[r]);
      rhs[E_.rows() + r] = b_[W[r]];
    }
    bool ok = false;
    Vec x = affine_project(z, C, rhs, &ok);
    if (ok) {
      int worst = -1;
      double worst_v = 1e-10 * scale;
      for (int i = 0; i < k; ++i) {
        if (std::find(W.begin(), W.end(), i) != W.end()) continue;
        double v = A_.row(i).dot(x) - b_[i];
        if (v > worst_v) {
          worst_v = v;
          worst = i;
        }
      }
      if (worst >= 0) {
        W.push_back(worst);
        continue;
      }
      if (W.empty()) return x;
      // Feasible; verify the active inequalities carry nonnegative multipliers.
      Eigen::CompleteOrthogonalDecomposition<Mat> cod(Mat(C.transpose()));
      Vec nu = cod.solve(Vec(z - x));
      int drop = -1;
      for (size_t r = 0; r < W.size(); ++r) {
        if (nu[E_.rows() + r] < -1e-10 * scale) {
          drop = static_cast<int>(r);
          break;
        }
      }
      if (drop < 0) return x;
      W.erase(W.begin() + drop);
    } else {
      break;  // inconsistent working set; fall back
    }
  }
  return project_reference(z);
}

PolyUnion PolyUnion::make(std::vector<Polyhedron> pieces) {
  PolyUnion U;
  for (auto& p : pieces) {
    if (!p.feasible()) continue;  // prune empty pieces
    if (!U.pieces_.empty() && p.dim() != U.dim_)
      throw std::invalid_argument("union: piece dimension mismatch");
    U.dim_ = p.dim();
    U.pieces_.push_back(std::move(p));
  }
  if (U.pieces_.empty()) throw std::invalid_argument("union: all pieces empty");
  return U;
}

PolyUnion PolyUnion::whole_space(int dim) { return make({Polyhedron::whole_space(dim)}); }

bool PolyUnion::contains(VecRef x, double tol) const {
  for (const auto& p : pieces_)
    if (p.contains(x, tol)) return true;
  return false;
}

double PolyUnion::distance(VecRef x) const {
  double best = kPosInf;
  for (const auto& p : pieces_) best = std::min(best, (p.project(x) - x).norm());
  return best;
}

Vec PolyUnion::project(VecRef x) const {
  double best = kPosInf;
  Vec out;
  for (const auto& p : pieces_) {
    Vec y = p.project(x);
    double dist = (y - x).norm();
    if (dist < best) {
      best = dist;
      out = y;
    }
  }
  return out;
}

namespace {

// Orthonormal basis of the nullspace of M (whole space when M has no rows).
std::vector<Vec> nullspace_basis(const Mat& M, int dim) {
  std::vector<Vec> basis;
  if (M.rows() == 0) {
    for (int i = 0; i < dim; ++i) basis.push_back(Vec::Unit(dim, i));
    return basis;
  }
  Eigen::FullPivLU<Mat> lu(M);
  lu.setThreshold(1e-10);
  Mat K = lu.kernel();
  if (lu.dimensionOfKernel() == 0) return basis;
  Eigen::HouseholderQR<Mat> qr(K);
  Mat Qfull = qr.householderQ();
  for (Eigen::Index i = 0; i < K.cols(); ++i) basis.push_back(Qfull.col(i));
  return basis;
}

Vec project_off(const Vec& v, const std::vector<Vec>& basis) {
  Vec r = v;
  for (const auto& b : basis) r -= b.dot(r) * b;
  return r;
}

}  // namespace

ConePiece recession_cone_piece(const Polyhedron& P) {
  if (!P.feasible()) throw std::invalid_argument("recession cone: empty polyhedron");
  const int n = P.dim();
  ConePiece C;
  C.A = P.A();
  C.E = P.E();

  Mat M = stack_rows(P.A(), P.E());
  if (M.cols() == 0) M.resize(0, n);
  C.lineality = nullspace_basis(M, n);
  const int ldim = static_cast<int>(C.lineality.size());
  if (ldim == n) return C;  // whole space, no extreme rays

  // An extreme ray (mod lineality) is cut out by a set of tight inequality
  // rows whose nullspace, together with the equalities, has dimension
  // lineality + 1.
  const int k = static_cast<int>(P.A().rows());
  enumerate_subsets(k, std::max(0, n - 1), [&](const std::vector<int>& S) {
    Mat B(P.E().rows() + S.size(), n);
    if (P.E().rows() > 0) B.topRows(P.E().rows()) = P.E();
    for (size_t r = 0; r < S.size(); ++r) B.row(P.E().rows() + r) = P.A().row(S[r]);
    auto K = nullspace_basis(B, n);
    if (static_cast<int>(K.size()) != ldim + 1) return;
    Vec v;
    double best = 0.0;
    for (const auto& cand : K) {
      Vec w = project_off(cand, C.lineality);
      if (w.norm() > best) {
        best = w.norm();
        v = w;
      }
    }
    if (best < 1e-9) return;
    v /= v.norm();
    for (double sgn : {1.0, -1.0}) {
      Vec g = sgn * v;
      if (P.A().rows() > 0 && (P.A() * g).maxCoeff() > 1e-9) continue;
      bool dup = false;
      for (const auto& e : C.generators)
        if (e.dot(g) > 1.0 - 1e-9) dup = true;
      if (!dup) C.generators.push_back(g);
    }
  });
  return C;
}

bool ConePiece::member(VecRef dir_unit, double tol) const {
  if (A.rows() > 0 && (A * dir_unit).maxCoeff() > tol) return false;
  if (E.rows() > 0 && (E * dir_unit).cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

ConeRep recession_cone(const Polyhedron& P) {
  ConeRep c;
  c.pieces.push_back(recession_cone_piece(P));
  return c;
}

ConeRep asymptotic_cone(const PolyUnion& X) {
  ConeRep c;
  for (const auto& p : X.pieces()) c.pieces.push_back(recession_cone_piece(p));
  return c;
}

bool ConeRep::is_zero() const {
  if (predicate_kind) return false;  // decided by the evaluator, not here
  for (const auto& p : pieces)
    if (!p.is_zero()) return false;
  return true;
}

bool ConeRep::member(VecRef d, double tol) const {
  double nrm = d.norm();
  if (nrm == 0.0) return true;  // 0 belongs to every cone
  Vec dn = d / nrm;
  if (predicate_kind) return member_fn(dn);
  for (const auto& p : pieces)
    if (p.member(dn, tol)) return true;
  return false;
}

std::vector<Vec> ConeRep::all_generators() const {
  std::vector<Vec> out;
  for (const auto& p : pieces) {
    for (const auto& g : p.generators) {
      bool dup = false;
      for (const auto& e : out)
        if ((e - g).norm() < 1e-9) dup = true;
      if (!dup) out.push_back(g);
    }
  }
  return out;
}

namespace {

void push_unique(std::vector<Vec>& out, const Vec& v) {
  for (const auto& e : out)
    if ((e - v).norm() < 1e-9) return;
  out.push_back(v);
}

std::vector<Vec> effective_generators(const ConePiece& p) {
  std::vector<Vec> eff = p.generators;
  for (const auto& l : p.lineality) {
    push_unique(eff, l);
    push_unique(eff, Vec(-l));
  }
  return eff;
}

}  // namespace

std::vector<Vec> ConeRep::sphere_sample(int count_per_piece) const {
  if (predicate_kind) return sampler_fn(count_per_piece);
  std::vector<Vec> out;
  for (const auto& piece : pieces) {
    auto eff = effective_generators(piece);
    if (eff.empty()) continue;
    const int g = static_cast<int>(eff.size());
    std::vector<Vec> local;
    for (const auto& v : eff) push_unique(local, v);
    // pairwise, then triple midpoints in index order
    for (int i = 0; i < g && static_cast<int>(local.size()) < count_per_piece; ++i)
      for (int j = i + 1; j < g && static_cast<int>(local.size()) < count_per_piece; ++j) {
        Vec v = eff[i] + eff[j];
        if (v.norm() < 1e-9) continue;
        push_unique(local, Vec(v / v.norm()));
      }
    for (int i = 0; i < g && static_cast<int>(local.size()) < count_per_piece; ++i)
      for (int j = i + 1; j < g && static_cast<int>(local.size()) < count_per_piece; ++j)
        for (int k = j + 1; k < g && static_cast<int>(local.size()) < count_per_piece; ++k) {
          Vec v = eff[i] + eff[j] + eff[k];
          if (v.norm() < 1e-9) continue;
          push_unique(local, Vec(v / v.norm()));
        }
    // Weyl-sequence filler over the generator simplex
    int s = 0;
    while (static_cast<int>(local.size()) < count_per_piece && s < 16 * count_per_piece) {
      Vec v = Vec::Zero(eff[0].size());
      for (int i = 0; i < g; ++i) {
        double w = std::fmod((s + 1) * std::sqrt(2.0 + i), 1.0) + 1e-3;
        v += w * eff[i];
      }
      if (v.norm() > 1e-9) push_unique(local, Vec(v / v.norm()));
      ++s;
    }
    for (const auto& v : local) push_unique(out, v);
  }
  return out;
}

bool in_conic_hull(const std::vector<Vec>& generators, const std::vector<Vec>& lineality,
                   VecRef d, double tol) {
  if (d.norm() == 0.0) return true;
  const int n = static_cast<int>(d.size());
  const int g = static_cast<int>(generators.size());
  bool found = false;
  enumerate_subsets(g, std::min(g, n + 1), [&](const std::vector<int>& S) {
    if (found) return;
    Mat B(n, S.size() + lineality.size());
    for (size_t c = 0; c < S.size(); ++c) B.col(c) = generators[S[c]];
    for (size_t c = 0; c < lineality.size(); ++c) B.col(S.size() + c) = lineality[c];
    if (B.cols() == 0) return;
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(B);
    Vec coef = cod.solve(d);
    if ((B * coef - d).norm() > tol) return;
    for (size_t c = 0; c < S.size(); ++c)
      if (coef[c] < -tol) return;
    found = true;
  });
  return found;
}

PointCloud grid_points(const PolyUnion& X, const GridSpec& g) {
  if (g.dim() != X.dim()) throw std::invalid_argument("grid: box dimension mismatch");
  if (!(g.h > 0)) throw std::invalid_argument("grid: step must be positive");
  auto pts = kernels::snap_lattice(X, g);
  if (pts.empty()) throw std::runtime_error("grid: truncation misses X");
  return PointCloud{std::move(pts), g, CloudKind::Feasible};
}

double dist_point_to_cloud(VecRef x, const PointCloud& S) {
  if (S.empty()) return kPosInf;
  double best = kPosInf;
  for (const auto& p : S.points) best = std::min(best, (p - x).norm());
  return best;
}

double hausdorff_excess(const PointCloud& S1, const PointCloud& S2) {
  if (S1.empty()) return 0.0;
  double worst = 0.0;
  for (const auto& p : S1.points) worst = std::max(worst, dist_point_to_cloud(p, S2));
  return worst;
}

double hausdorff_distance(const PointCloud& S1, const PointCloud& S2) {
  return std::max(hausdorff_excess(S1, S2), hausdorff_excess(S2, S1));
}

std::vector<Vec> unit_sphere_directions(int dim, int count) {
  std::vector<Vec> out;
  if (dim == 1) {
    for (int i = 0; i < count; ++i) out.push_back(Vec::Constant(1, i % 2 == 0 ? 1.0 : -1.0));
    return out;
  }
  if (dim == 2) {
    for (int i = 0; i < count; ++i) {
      double a = 2.0 * M_PI * i / count;
      Vec v(2);
      v << std::cos(a), std::sin(a);
      out.push_back(v);
    }
    return out;
  }
  int produced = 0, s = 0;
  while (produced < count && s < 64 * count) {
    Vec v(dim);
    for (int j = 0; j < dim; ++j)
      v[j] = 2.0 * std::fmod((s + 1) * std::sqrt(2.0 + j) + 0.37 * j, 1.0) - 1.0;
    ++s;
    double nrm = v.norm();
    if (nrm < 1e-6) continue;
    out.push_back(v / nrm);
    ++produced;
  }
  return out;
}

}  // namespace asymptopt
