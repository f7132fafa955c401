// Compares the OpenMP kernels against the serial reference on synthetic
// workloads of increasing size.

#include <chrono>
#include <cstdio>
#include <random>

#include "asymptopt/kernels.hpp"

using namespace asymptopt;

namespace {

double now_run(const std::function<void()>& fn, int reps) {
  auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count() / reps;
}

kernels::ValueMatrix synth_values(std::mt19937_64& rng, int n, int m) {
  kernels::ValueMatrix vm;
  vm.n = n;
  vm.m = m;
  vm.v.resize(size_t(n) * m);
  for (auto& v : vm.v) v = double(rng() >> 11) * 0x1.0p-53 * 6.0 - 3.0;
  return vm;
}

std::vector<Vec> synth_cloud(std::mt19937_64& rng, int n, int dim) {
  std::vector<Vec> pts;
  for (int i = 0; i < n; ++i) {
    Vec p(dim);
    for (int d = 0; d < dim; ++d) p[d] = double(rng() >> 11) * 0x1.0p-53 * 8.0 - 4.0;
    pts.push_back(p);
  }
  return pts;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-22s %10.3f ms %10.3f ms %8.2fx\n", name, serial * 1e3, parallel * 1e3,
              serial / parallel);
}

}  // namespace

int main() {
  apply_thread_cap();
  std::printf("threads: %d\n", max_threads());
  std::printf("%-22s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

  std::mt19937_64 rng(1);
  for (int n : {2000, 8000, 20000}) {
    auto vm = synth_values(rng, n, 2);
    std::printf("-- %d points, m = 2\n", n);
    row("weak_front_mask", now_run([&] { kernels::ref::weak_front_mask(vm); }, 3),
        now_run([&] { kernels::weak_front_mask(vm); }, 3));
    row("pareto_front_mask", now_run([&] { kernels::ref::pareto_front_mask(vm); }, 3),
        now_run([&] { kernels::pareto_front_mask(vm); }, 3));
    auto sub = synth_values(rng, std::min(n, 4000), 2);
    row("psi_values", now_run([&] { kernels::ref::psi_values(sub, sub); }, 3),
        now_run([&] { kernels::psi_values(sub, sub); }, 3));
    auto from = synth_cloud(rng, n, 2);
    auto to = synth_cloud(rng, 2000, 2);
    row("min_dist_to_cloud", now_run([&] { kernels::ref::min_dist_to_cloud(from, to); }, 3),
        now_run([&] { kernels::min_dist_to_cloud(from, to); }, 3));
  }

  // lattice snapping over a striped union of thin boxes
  std::vector<Polyhedron> pieces;
  for (int k = 0; k < 4; ++k) {
    Mat A(4, 2);
    A << 1, 0, -1, 0, 0, 1, 0, -1;
    Vec b(4);
    b << 4.0, 4.0, 0.02 + k, -(0.0 + k);
    pieces.push_back(Polyhedron::make(A, b, Mat(0, 2), Vec(0)));
  }
  PolyUnion stripes = PolyUnion::make(pieces);
  GridSpec g;
  g.box.lo = Vec::Constant(2, -4.0);
  g.box.hi = Vec::Constant(2, 4.0);
  g.h = 0.02;
  std::printf("-- lattice %dx%d, 4 pieces\n", 401, 401);
  row("snap_lattice", now_run([&] { kernels::ref::snap_lattice(stripes, g); }, 1),
      now_run([&] { kernels::snap_lattice(stripes, g); }, 1));
  return 0;
}
