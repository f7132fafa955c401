#include <doctest.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "test_util.hpp"

using namespace asymptopt;

namespace {

kernels::ValueMatrix random_values(std::mt19937_64& rng, int n, int m) {
  kernels::ValueMatrix vm;
  vm.n = n;
  vm.m = m;
  vm.v.resize(size_t(n) * m);
  for (auto& v : vm.v) v = testutil::draw_range(rng, -3, 3);
  // inject exact ties so the tolerance paths are exercised
  for (int i = 0; i + 3 < n; i += 7)
    for (int k = 0; k < m; ++k) vm.at(i + 1, k) = vm.at(i, k);
  return vm;
}

std::vector<Vec> random_cloud(std::mt19937_64& rng, int n, int dim) {
  std::vector<Vec> pts;
  for (int i = 0; i < n; ++i) pts.push_back(testutil::random_vec(rng, dim, 4.0));
  return pts;
}

}  // namespace

TEST_CASE("parallel kernels agree exactly with the serial reference") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 6; ++trial) {
    int n = 50 + int(rng() % 400);
    int m = 1 + int(rng() % 3);
    auto vm = random_values(rng, n, m);

    CHECK(kernels::weak_front_mask(vm) == kernels::ref::weak_front_mask(vm));
    CHECK(kernels::pareto_front_mask(vm) == kernels::ref::pareto_front_mask(vm));
    CHECK(kernels::psi_values(vm, vm) == kernels::ref::psi_values(vm, vm));

    auto from = random_cloud(rng, 80, 2);
    auto to = random_cloud(rng, 60, 2);
    CHECK(kernels::min_dist_to_cloud(from, to) == kernels::ref::min_dist_to_cloud(from, to));

    VectorObjective f({testutil::random_expr(rng, 2, 2), testutil::random_expr(rng, 2, 2)});
    auto a = kernels::eval_objectives(f, from);
    auto b = kernels::ref::eval_objectives(f, from);
    CHECK(a.v == b.v);
  }
}

TEST_CASE("lattice snapping agrees with the serial reference") {
  auto spec = testutil::load_problem("example-3.1");
  GridSpec g = testutil::grid2d(-2, 4, 0.1);
  auto par = kernels::snap_lattice(spec.feasible, g);
  auto ser = kernels::ref::snap_lattice(spec.feasible, g);
  REQUIRE(par.size() == ser.size());
  for (size_t i = 0; i < par.size(); ++i) CHECK(par[i] == ser[i]);
}

TEST_CASE("kernel output does not depend on the thread count") {
#ifdef _OPENMP
  std::mt19937_64 rng(202);
  auto vm = random_values(rng, 300, 2);
  auto spec = testutil::load_problem("example-3.1");
  GridSpec g = testutil::grid2d(-2, 4, 0.2);

  int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  auto mask1 = kernels::weak_front_mask(vm);
  auto psi1 = kernels::psi_values(vm, vm);
  auto lat1 = kernels::snap_lattice(spec.feasible, g);
  omp_set_num_threads(saved);
  auto mask2 = kernels::weak_front_mask(vm);
  auto psi2 = kernels::psi_values(vm, vm);
  auto lat2 = kernels::snap_lattice(spec.feasible, g);

  CHECK(mask1 == mask2);
  CHECK(psi1 == psi2);
  REQUIRE(lat1.size() == lat2.size());
  for (size_t i = 0; i < lat1.size(); ++i) CHECK(lat1[i] == lat2[i]);
#endif
}

TEST_CASE("repeated runs are bitwise identical") {
  std::mt19937_64 rng(303);
  auto vm = random_values(rng, 200, 3);
  CHECK(kernels::psi_values(vm, vm) == kernels::psi_values(vm, vm));
  CHECK(kernels::weak_front_mask(vm) == kernels::weak_front_mask(vm));
}
