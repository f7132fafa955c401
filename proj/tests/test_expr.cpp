#include <doctest.h>

#include "test_util.hpp"

using namespace asymptopt;
using testutil::v1;
using testutil::v2;

TEST_CASE("evaluation basics") {
  Mat Q(1, 1);
  Q << 1;
  auto half_sq = ScalarExpr::quadratic(Q, Vec::Zero(1), 0.0);  // x^2/2
  CHECK(half_sq(v1(2.0)) == doctest::Approx(2.0));

  CHECK(testutil::sqrt_abs()(v1(4.0)) == doctest::Approx(2.0));
  CHECK(testutil::sqrt_abs()(v1(0.0)) == 0.0);

  auto mx = ScalarExpr::max_of({ScalarExpr::coordinate(2, 0), ScalarExpr::coordinate(2, 1)});
  CHECK(mx(v2(3, -1)) == 3.0);

  CHECK_THROWS_AS(mx(v1(0.0)), std::invalid_argument);  // dimension mismatch
}

TEST_CASE("evaluation stays in R u {+inf}") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + int(rng() % 3);
    auto e = testutil::random_expr(rng, n, 3);
    for (double mag : {1.0, 1e100, 1e154, 1e200}) {
      Vec x = mag * testutil::random_vec(rng, n, 1.0);
      double v = e(x);
      CHECK(!std::isnan(v));
      CHECK(v > -kPosInf);
    }
  }
}

TEST_CASE("perturbation matches the linear form") {
  // x^2 perturbed by 0.4 evaluates as x^2 - 0.4 x
  Mat Q(1, 1);
  Q << 2;
  auto sq = ScalarExpr::quadratic(Q, Vec::Zero(1), 0.0);
  auto p = sq.perturbed(v1(0.4));
  for (double x : {-1.0, 0.0, 0.3, 2.0}) CHECK(p(v1(x)) == doctest::Approx(x * x - 0.4 * x));

  // f(x) = x perturbed by -0.1 becomes 1.1 x
  auto lin = ScalarExpr::affine(Vec::Ones(1), 0.0);
  auto q = lin.perturbed(v1(-0.1));
  CHECK(q(v1(2.0)) == doctest::Approx(2.2));

  // zero perturbation returns the expression itself
  auto e = testutil::sqrt_abs();
  CHECK(structurally_equal(e.perturbed(Vec::Zero(1)), e));
}

TEST_CASE("perturbation is float-exact against the dot product") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 1 + int(rng() % 3);
    auto e = testutil::random_expr(rng, n, 2);
    Vec x = testutil::random_vec(rng, n, 5.0);
    Vec u = testutil::random_vec(rng, n, 2.0);
    double lhs = e.perturbed(u)(x);
    double rhs = xadd(e(x), -u.dot(x));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("classification") {
  auto aff = ScalarExpr::affine(v2(1, -2), 3.0);
  CHECK(aff.curvature() == Curvature::Affine);

  Mat Q(1, 1);
  Q << 2;
  auto sq = ScalarExpr::quadratic(Q, Vec::Zero(1), 0.0);
  CHECK(sq.perturbed(v1(0.4)).curvature() == Curvature::ConvexQuadratic);

  CHECK(testutil::sqrt_abs().curvature() == Curvature::General);

  Mat Qneg(1, 1);
  Qneg << -2;
  CHECK(ScalarExpr::quadratic(Qneg, Vec::Zero(1), 0.0).curvature() == Curvature::General);

  // perturbing keeps the class
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    int n = 1 + int(rng() % 3);
    auto a = ScalarExpr::affine(testutil::random_vec(rng, n), testutil::draw_range(rng, -1, 1));
    Vec u = testutil::random_vec(rng, n);
    CHECK(a.perturbed(u).curvature() == Curvature::Affine);
    auto qq = ScalarExpr::quadratic(testutil::random_psd(rng, n), testutil::random_vec(rng, n), 0.0);
    CHECK(qq.perturbed(u).curvature() == Curvature::ConvexQuadratic);
  }

  // max of convex pieces is convex
  CHECK(ScalarExpr::max_of({aff, ScalarExpr::affine(v2(0, 1), 0.0)}).curvature() ==
        Curvature::Convex);
}

TEST_CASE("quasiconvexity sampling") {
  Box region{v1(-10), v1(10)};
  auto root = testutil::sqrt_abs();
  CHECK(quasiconvex_sample_check(root, region, 10000, 42).pass);

  // sqrt(|x|) - 0.2 x loses quasiconvexity
  auto tilted = root.perturbed(v1(0.2));
  auto verdict = quasiconvex_sample_check(tilted, region, 10000, 42);
  CHECK_FALSE(verdict.pass);
  REQUIRE(verdict.witness.has_value());
  // the witness violates the segment test when re-evaluated
  const auto& w = *verdict.witness;
  Vec mix = w.lambda * w.x + (1.0 - w.lambda) * w.y;
  CHECK(tilted(mix) > std::max(tilted(w.x), tilted(w.y)));

  Mat Q(1, 1);
  Q << 2;
  CHECK(quasiconvex_sample_check(ScalarExpr::quadratic(Q, Vec::Zero(1), 0.0), region, 5000, 1).pass);

  Box empty{v1(1), v1(-1)};
  CHECK_THROWS_AS(quasiconvex_sample_check(root, empty, 10, 1), std::invalid_argument);
}

TEST_CASE("affine and convex-quadratic always pass the quasiconvexity check") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; ++t) {
    int n = 1 + int(rng() % 2);
    Box region{Vec::Constant(n, -8.0), Vec::Constant(n, 8.0)};
    auto a = ScalarExpr::affine(testutil::random_vec(rng, n), testutil::draw_range(rng, -1, 1));
    CHECK(quasiconvex_sample_check(a, region, 2000, rng()).pass);
    auto q = ScalarExpr::quadratic(testutil::random_psd(rng, n), testutil::random_vec(rng, n), 0.0);
    CHECK(quasiconvex_sample_check(q, region, 2000, rng()).pass);
  }
}

TEST_CASE("robust quasiconvexity sampling") {
  Box region{v1(-10), v1(10)};
  Mat Q(1, 1);
  Q << 2;
  VectorObjective convex1({ScalarExpr::quadratic(Q, Vec::Zero(1), 0.0)});
  CHECK(robust_quasiconvex_sample_check(convex1, 1.0, region, 16, 2000, 5).pass);

  VectorObjective root({testutil::sqrt_abs()});
  auto verdict = robust_quasiconvex_sample_check(root, 1.0, region, 32, 4000, 5);
  CHECK_FALSE(verdict.pass);
  CHECK(verdict.component == 0);

  // alpha = 0 degenerates to u = 0 only
  VectorObjective pair({ScalarExpr::quadratic(Q, Vec::Zero(1), 0.0),
                        ScalarExpr::affine(Vec::Ones(1), 0.0)});
  CHECK(robust_quasiconvex_sample_check(pair, 0.0, region, 8, 2000, 5).pass);
}

TEST_CASE("perturbation matrix norm is the max of row norms") {
  Mat rows(2, 2);
  rows << 3, 4, 1, 0;
  PerturbationMatrix u(rows);
  CHECK(u.norm() == doctest::Approx(5.0));
  CHECK_FALSE(u.zero());
  CHECK(PerturbationMatrix(Mat::Zero(2, 2)).zero());
}
