#include "asymptopt/kernels.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace asymptopt::kernels {

namespace {

bool lex_less(const Vec& a, const Vec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

// Keep-first dedupe of lexicographically sorted candidates at radius r,
// using a cell hash so clusters across sort order are still caught.
std::vector<Vec> dedupe_sorted(std::vector<Vec> cand, double r) {
  if (cand.empty()) return cand;
  const int n = static_cast<int>(cand[0].size());
  std::map<std::vector<long long>, std::vector<int>> cells;
  std::vector<Vec> kept;
  auto cell_of = [&](const Vec& p) {
    std::vector<long long> c(n);
    for (int i = 0; i < n; ++i) c[i] = static_cast<long long>(std::floor(p[i] / r));
    return c;
  };
  for (const auto& p : cand) {
    auto base = cell_of(p);
    bool dup = false;
    std::vector<long long> probe(n);
    std::function<void(int)> visit = [&](int axis) {
      if (dup) return;
      if (axis == n) {
        auto it = cells.find(probe);
        if (it == cells.end()) return;
        for (int idx : it->second)
          if ((kept[idx] - p).norm() <= r) dup = true;
        return;
      }
      for (long long off = -1; off <= 1; ++off) {
        probe[axis] = base[axis] + off;
        visit(axis + 1);
      }
    };
    visit(0);
    if (!dup) {
      kept.push_back(p);
      cells[base].push_back(static_cast<int>(kept.size()) - 1);
    }
  }
  return kept;
}

struct LatticeRange {
  std::vector<long long> lo, n;
  long long outer() const { return n.empty() ? 0 : n[0]; }
};

LatticeRange lattice_range(const GridSpec& g) {
  LatticeRange r;
  const int dim = g.dim();
  r.lo.resize(dim);
  r.n.resize(dim);
  for (int i = 0; i < dim; ++i) {
    long long lo = static_cast<long long>(std::ceil(g.box.lo[i] / g.h - 1e-9));
    long long hi = static_cast<long long>(std::floor(g.box.hi[i] / g.h + 1e-9));
    r.lo[i] = lo;
    r.n[i] = std::max<long long>(0, hi - lo + 1);
  }
  return r;
}

// All snapped candidates for one slice of the outer lattice axis, in
// row-major lattice order then piece order.
void slice_candidates(const PolyUnion& X, const GridSpec& g, const LatticeRange& r,
                      long long outer_idx, std::vector<Vec>& out) {
  const int dim = g.dim();
  const double snap = g.snap();
  Vec p(dim);
  p[0] = (r.lo[0] + outer_idx) * g.h;
  std::vector<long long> idx(dim, 0);
  bool done = false;
  while (!done) {
    for (int i = 1; i < dim; ++i) p[i] = (r.lo[i] + idx[i]) * g.h;
    for (const auto& piece : X.pieces()) {
      if (piece.violation(p) > snap + 1e-9) continue;
      Vec y = piece.project(p);
      if ((y - p).norm() <= snap) out.push_back(y);
    }
    done = true;
    for (int i = dim - 1; i >= 1; --i) {
      if (++idx[i] < r.n[i]) {
        done = false;
        break;
      }
      idx[i] = 0;
    }
    if (dim == 1) done = true;
  }
}

std::vector<Vec> finish_lattice(std::vector<Vec> cand, const GridSpec& g) {
  std::sort(cand.begin(), cand.end(), lex_less);
  return dedupe_sorted(std::move(cand), g.h / 10.0);
}

}  // namespace

ValueMatrix eval_objectives(const VectorObjective& f, const std::vector<Vec>& pts) {
  ValueMatrix vm;
  vm.n = static_cast<int>(pts.size());
  vm.m = f.objectives();
  vm.v.resize(static_cast<size_t>(vm.n) * vm.m);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < vm.n; ++i)
    for (int k = 0; k < vm.m; ++k) vm.at(i, k) = f.components[k](pts[i]);
  return vm;
}

std::vector<std::uint8_t> weak_front_mask(const ValueMatrix& vals) {
  std::vector<std::uint8_t> mask(vals.n, 1);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < vals.n; ++i) {
    for (int y = 0; y < vals.n && mask[i]; ++y) {
      if (y == i) continue;
      bool all_strict = true;
      for (int k = 0; k < vals.m && all_strict; ++k)
        all_strict = strictly_below(vals.at(y, k), vals.at(i, k));
      if (all_strict) mask[i] = 0;
    }
  }
  return mask;
}

std::vector<std::uint8_t> pareto_front_mask(const ValueMatrix& vals) {
  std::vector<std::uint8_t> mask(vals.n, 1);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < vals.n; ++i) {
    for (int y = 0; y < vals.n && mask[i]; ++y) {
      if (y == i) continue;
      bool leq_all = true, strict_some = false;
      for (int k = 0; k < vals.m && leq_all; ++k) {
        leq_all = weakly_below(vals.at(y, k), vals.at(i, k));
        if (strictly_below(vals.at(y, k), vals.at(i, k))) strict_some = true;
      }
      if (leq_all && strict_some) mask[i] = 0;
    }
  }
  return mask;
}

std::vector<double> psi_values(const ValueMatrix& at_x, const ValueMatrix& at_cloud) {
  std::vector<double> psi(at_x.n, -kPosInf);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < at_x.n; ++i) {
    double best = -kPosInf;
    for (int y = 0; y < at_cloud.n; ++y) {
      double worst = kPosInf;
      for (int k = 0; k < at_x.m; ++k)
        worst = std::min(worst, at_x.at(i, k) - at_cloud.at(y, k));
      best = std::max(best, worst);
    }
    psi[i] = best;
  }
  return psi;
}

std::vector<double> min_dist_to_cloud(const std::vector<Vec>& from, const std::vector<Vec>& to) {
  std::vector<double> out(from.size(), kPosInf);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < static_cast<int>(from.size()); ++i) {
    double best = kPosInf;
    for (const auto& q : to) best = std::min(best, (from[i] - q).norm());
    out[i] = best;
  }
  return out;
}

std::vector<Vec> snap_lattice(const PolyUnion& X, const GridSpec& g) {
  LatticeRange r = lattice_range(g);
  const long long outer = r.outer();
  std::vector<std::vector<Vec>> slices(outer);
#pragma omp parallel for schedule(static)
  for (long long o = 0; o < outer; ++o) slice_candidates(X, g, r, o, slices[o]);
  std::vector<Vec> cand;
  for (auto& s : slices)
    for (auto& p : s) cand.push_back(std::move(p));
  return finish_lattice(std::move(cand), g);
}

namespace ref {

ValueMatrix eval_objectives(const VectorObjective& f, const std::vector<Vec>& pts) {
  ValueMatrix vm;
  vm.n = static_cast<int>(pts.size());
  vm.m = f.objectives();
  vm.v.resize(static_cast<size_t>(vm.n) * vm.m);
  for (int i = 0; i < vm.n; ++i)
    for (int k = 0; k < vm.m; ++k) vm.at(i, k) = f.components[k](pts[i]);
  return vm;
}

std::vector<std::uint8_t> weak_front_mask(const ValueMatrix& vals) {
  std::vector<std::uint8_t> mask(vals.n, 1);
  for (int i = 0; i < vals.n; ++i) {
    bool member = true;
    for (int y = 0; y < vals.n && member; ++y) {
      if (y == i) continue;
      int strict = 0;
      for (int k = 0; k < vals.m; ++k)
        if (strictly_below(vals.at(y, k), vals.at(i, k))) ++strict;
      if (strict == vals.m) member = false;
    }
    mask[i] = member ? 1 : 0;
  }
  return mask;
}

std::vector<std::uint8_t> pareto_front_mask(const ValueMatrix& vals) {
  std::vector<std::uint8_t> mask(vals.n, 1);
  for (int i = 0; i < vals.n; ++i) {
    bool member = true;
    for (int y = 0; y < vals.n && member; ++y) {
      if (y == i) continue;
      int leq = 0, strict = 0;
      for (int k = 0; k < vals.m; ++k) {
        if (weakly_below(vals.at(y, k), vals.at(i, k))) ++leq;
        if (strictly_below(vals.at(y, k), vals.at(i, k))) ++strict;
      }
      if (leq == vals.m && strict > 0) member = false;
    }
    mask[i] = member ? 1 : 0;
  }
  return mask;
}

std::vector<double> psi_values(const ValueMatrix& at_x, const ValueMatrix& at_cloud) {
  std::vector<double> psi(at_x.n, -kPosInf);
  for (int i = 0; i < at_x.n; ++i) {
    double best = -kPosInf;
    for (int y = 0; y < at_cloud.n; ++y) {
      double worst = kPosInf;
      for (int k = 0; k < at_x.m; ++k)
        worst = std::min(worst, at_x.at(i, k) - at_cloud.at(y, k));
      best = std::max(best, worst);
    }
    psi[i] = best;
  }
  return psi;
}

std::vector<double> min_dist_to_cloud(const std::vector<Vec>& from, const std::vector<Vec>& to) {
  std::vector<double> out(from.size(), kPosInf);
  for (size_t i = 0; i < from.size(); ++i) {
    double best = kPosInf;
    for (const auto& q : to) best = std::min(best, (from[i] - q).norm());
    out[i] = best;
  }
  return out;
}

std::vector<Vec> snap_lattice(const PolyUnion& X, const GridSpec& g) {
  LatticeRange r = lattice_range(g);
  std::vector<Vec> cand;
  for (long long o = 0; o < r.outer(); ++o) slice_candidates(X, g, r, o, cand);
  return finish_lattice(std::move(cand), g);
}

}  // namespace ref

}  // namespace asymptopt::kernels
