#include <doctest.h>

#include "test_util.hpp"

using namespace asymptopt;
using testutil::v1;
using testutil::v2;

namespace {

// Probes over a symmetric 1d box, as the problem pipeline would set them.
AsymConfig cfg_with_probes(double t_max = 1e6, int t_points = 60) {
  AsymConfig cfg;
  cfg.t_max = t_max;
  cfg.t_points = t_points;
  auto cloud = grid_points(PolyUnion::whole_space(1), testutil::grid1d(-10, 10, 0.01));
  set_probes(cfg, cloud);
  return cfg;
}

// Independent route for convex expressions: the base-point difference
// quotient, which is exact for affine/convex-quadratic forms.
double convex_recession_oracle(const ScalarExpr& e, const Vec& d, const Vec& x0,
                               const AsymConfig& cfg) {
  double sup = -kPosInf;
  for (double t : {1.0, 1e2, 1e4, 1e6, 1e9, 1e12}) {
    double q = (e(x0 + t * d) - e(x0)) / t;
    sup = std::max(sup, q);
  }
  return sup > cfg.inf_threshold ? kPosInf : sup;
}

}  // namespace

TEST_CASE("growth rates along directions") {
  AsymConfig big = cfg_with_probes(1e14, 80);
  auto root = testutil::sqrt_abs();
  CHECK(std::abs(asym_value(root, v1(1), big)) <= 1e-6);
  CHECK(std::abs(asym_value(root, v1(-1), big)) <= 1e-6);

  // affine objectives use the exact linear formula
  auto f1 = ScalarExpr::affine(v2(1, 0), 0.0);
  AsymConfig cfg;
  CHECK(asym_value(f1, v2(-1, 0), cfg) == doctest::Approx(-1.0));

  Mat Q(1, 1);
  Q << 2;
  CHECK(is_pinf(asym_value(ScalarExpr::quadratic(Q, Vec::Zero(1), 0.0), v1(1), cfg)));

  CHECK_THROWS_AS(asym_value(f1, v2(0, 0), cfg), std::invalid_argument);
}

TEST_CASE("difference-quotient sups") {
  AsymConfig cfg = cfg_with_probes();
  CHECK(is_pinf(q_asym_value(testutil::sqrt_abs(), v1(1), cfg)));
  CHECK(is_pinf(q_asym_value(testutil::sqrt_abs(), v1(-1), cfg)));

  auto aff = ScalarExpr::affine(v2(2, -1), 0.5);
  AsymConfig cfg2;
  Vec d = v2(0.6, 0.8);
  CHECK(q_asym_value(aff, d, cfg2) == doctest::Approx(2 * 0.6 - 0.8));

  // restriction to [-1, inf): the direction -1 leaves the cone
  auto X = testutil::halfline_from(-1.0);
  auto cone = asymptotic_cone(X);
  auto linear = ScalarExpr::affine(Vec::Ones(1), 0.0);
  CHECK(is_pinf(q_asym_value(linear, v1(-1), cfg, &cone)));
  CHECK(q_asym_value(linear, v1(1), cfg, &cone) == doctest::Approx(1.0));
}

TEST_CASE("sublevel-restricted quotients") {
  AsymConfig cfg = cfg_with_probes();
  auto root = testutil::sqrt_abs();
  for (double s : {1.0, -1.0}) {
    double v = level_asym_value(root, 1.0, v1(s), cfg);
    CHECK(v > 0.0);
    CHECK(v <= 2.0 + 1e-3);
  }

  auto linear = ScalarExpr::affine(Vec::Ones(1), 0.0);
  CHECK(level_asym_value(linear, 0.0, v1(1), cfg) == doctest::Approx(1.0));

  auto zero = ScalarExpr::constant(1, 0.0);
  CHECK(level_asym_value(zero, 0.0, v1(1), cfg) == 0.0);

  // unreachable level
  auto shifted = ScalarExpr::affine(Vec::Ones(1), 100.0);
  CHECK_THROWS_WITH_AS(level_asym_value(shifted, -1000.0, v1(1), cfg),
                       doctest::Contains("level set not sampled"), std::runtime_error);
}

TEST_CASE("k-cone membership") {
  AsymConfig cfg = cfg_with_probes();
  auto f2 = ScalarExpr::affine(v2(0, 1), 0.0);
  auto k2 = k_cone(f2, KVariant::Plain, cfg);
  CHECK(in_k_cone(k2, v2(0, -1)).member);
  CHECK_FALSE(in_k_cone(k2, v2(0, 1)).member);

  Mat Q(1, 1);
  Q << 2;
  auto ksq = k_cone(ScalarExpr::quadratic(Q, Vec::Zero(1), 0.0), KVariant::Plain, cfg);
  CHECK_FALSE(in_k_cone(ksq, v1(1)).member);

  auto kq_root = k_cone(testutil::sqrt_abs(), KVariant::Q, cfg);
  CHECK_FALSE(in_k_cone(kq_root, v1(1)).member);

  // predicate cone view is positively homogeneous
  auto rep = as_cone_rep(k2);
  CHECK(rep.member(v2(0, -1)));
  CHECK(rep.member(v2(0, -7)));
  CHECK_FALSE(rep.sphere_sample(6).empty());
}

TEST_CASE("existence condition on the bundled problems") {
  AsymConfig cfg = cfg_with_probes();

  auto e31 = testutil::load_problem("example-3.1");
  CHECK(check_condition(e31.feasible, e31.objectives, KVariant::Plain, nullptr, cfg).holds);

  auto e41 = testutil::load_problem("example-4.1");
  auto v41 = check_condition(e41.feasible, e41.objectives, KVariant::Plain, nullptr, cfg);
  CHECK_FALSE(v41.holds);
  CHECK(v41.witness_index == 0);  // first objective
  CHECK(v41.witness[0] == doctest::Approx(1.0));
  CHECK(v41.margin <= cfg.zero_tol);

  auto e42 = testutil::load_problem("example-4.2");
  CHECK(check_condition(e42.feasible, e42.objectives, KVariant::Plain, nullptr, cfg).holds);

  // perturbed form via the identity: f = (x) on [0, inf) fails once u >= 1
  auto X = testutil::halfline_from(0.0);
  VectorObjective fx({ScalarExpr::affine(Vec::Ones(1), 0.0)});
  PerturbationMatrix u_small(Mat::Constant(1, 1, 0.5));
  CHECK(check_condition(X, fx, KVariant::Plain, &u_small, cfg).holds);
  PerturbationMatrix u_big(Mat::Constant(1, 1, 1.5));
  CHECK_FALSE(check_condition(X, fx, KVariant::Plain, &u_big, cfg).holds);
}

TEST_CASE("intersection condition with q-cones") {
  AsymConfig cfg = cfg_with_probes();

  auto e41 = testutil::load_problem("example-4.1");
  auto v = check_intersection_condition_q(e41.feasible, e41.objectives, cfg);
  CHECK_FALSE(v.holds);
  CHECK(v.witness[0] == doctest::Approx(-1.0));

  auto e42 = testutil::load_problem("example-4.2");
  CHECK(check_intersection_condition_q(e42.feasible, e42.objectives, cfg).holds);

  // bounded feasible set: holds vacuously
  Mat A(2, 1);
  A << 1, -1;
  Vec b = Vec::Ones(2);
  auto boxed = PolyUnion::make({Polyhedron::make(A, b, Mat(0, 1), Vec(0))});
  CHECK(check_intersection_condition_q(boxed, e41.objectives, cfg).holds);
}

TEST_CASE("perturbation identity deviations") {
  AsymConfig cfg = cfg_with_probes();
  std::vector<Vec> dirs{v1(1), v1(-1)};

  auto aff = ScalarExpr::affine(Vec::Ones(1), 0.3);
  CHECK(verify_perturbation_identity(aff, v1(0.7), dirs, cfg) <= 1e-12);

  Mat Q(1, 1);
  Q << 2;
  auto sq = ScalarExpr::quadratic(Q, Vec::Zero(1), 0.0);
  CHECK(verify_perturbation_identity(sq, v1(0.4), dirs, cfg) <= 1e-12);

  CHECK(verify_perturbation_identity(testutil::sqrt_abs(), v1(0.2), dirs, cfg) <= 1e-3);
}

TEST_CASE("epsilon thresholds") {
  AsymConfig cfg = cfg_with_probes();

  auto e42 = testutil::load_problem("example-4.2");
  auto est = epsilon_threshold(e42.feasible, e42.objectives, KVariant::Plain, cfg);
  CHECK(est.value >= 0.5);
  CHECK(est.value <= 1.0 + 1e-9);

  auto e41 = testutil::load_problem("example-4.1");
  CHECK_THROWS_WITH_AS(
      epsilon_threshold(e41.feasible, e41.objectives, KVariant::Plain, cfg),
      doctest::Contains("no threshold"), std::runtime_error);

  auto X = testutil::halfline_from(0.0);
  VectorObjective fx({ScalarExpr::affine(Vec::Ones(1), 0.0)});
  auto est2 = epsilon_threshold(X, fx, KVariant::Plain, cfg);
  CHECK(est2.value >= 0.9);
  CHECK(est2.value <= 1.0 + 1e-9);
}

TEST_CASE("positive homogeneity") {
  AsymConfig cfg = cfg_with_probes();
  std::vector<ScalarExpr> corpus{
      testutil::sqrt_abs(), ScalarExpr::affine(Vec::Ones(1), 0.4),
      ScalarExpr::abs_of(ScalarExpr::coordinate(1, 0)),
      ScalarExpr::max_of({ScalarExpr::affine(Vec::Ones(1), 0.0),
                          ScalarExpr::affine(-Vec::Ones(1), 1.0)})};
  for (const auto& e : corpus) {
    for (const auto& d : unit_sphere_directions(1, 10)) {
      double base = asym_value(e, d, cfg);
      for (double s : {0.5, 2.0, 10.0}) {
        double scaled = asym_value(e, s * d, cfg);
        if (is_pinf(base)) {
          CHECK(is_pinf(scaled));
        } else {
          CHECK(std::abs(scaled - s * base) <= 1e-3 * (1.0 + std::abs(s * base)));
        }
      }
    }
  }
}

TEST_CASE("plain growth never exceeds the quotient sup") {
  AsymConfig cfg = cfg_with_probes();
  std::vector<ScalarExpr> corpus{
      testutil::sqrt_abs(), ScalarExpr::affine(Vec::Ones(1), -0.3),
      ScalarExpr::abs_of(ScalarExpr::coordinate(1, 0)),
      ScalarExpr::max_of({ScalarExpr::affine(Vec::Ones(1), 0.0),
                          ScalarExpr::scale(-0.5, ScalarExpr::coordinate(1, 0))})};
  Mat Q(1, 1);
  Q << 2;
  corpus.push_back(ScalarExpr::quadratic(Q, Vec::Zero(1), 0.0));
  for (const auto& e : corpus) {
    for (const auto& d : unit_sphere_directions(1, 50)) {
      double a = asym_value(e, d, cfg);
      double q = q_asym_value(e, d, cfg);
      if (is_pinf(q)) continue;  // a <= +inf trivially
      CHECK(a <= q + 1e-6);
    }
  }
}

TEST_CASE("analytic recession agrees with the base-point quotient oracle") {
  AsymConfig cfg;
  std::mt19937_64 rng(41);
  for (int t = 0; t < 10; ++t) {
    int n = 1 + int(rng() % 3);
    auto aff = ScalarExpr::affine(testutil::random_vec(rng, n, 1.0),
                                  testutil::draw_range(rng, -1, 1));
    auto qd = ScalarExpr::quadratic(testutil::random_psd(rng, n), testutil::random_vec(rng, n, 1.0),
                                    0.0);
    std::vector<Vec> bases;
    for (int b = 0; b < 5; ++b) bases.push_back(testutil::random_vec(rng, n, 3.0));
    for (const auto& d : unit_sphere_directions(n, 50)) {
      for (const auto& e : {aff, qd}) {
        double impl = asym_value(e, d, cfg);
        double first = kPosInf;
        bool first_set = false;
        for (const auto& x0 : bases) {
          double oracle = convex_recession_oracle(e, d, x0, cfg);
          if (is_pinf(impl)) {
            CHECK(is_pinf(oracle));
          } else {
            CHECK(std::abs(impl - oracle) <= 1e-3 * (1.0 + std::abs(impl)));
          }
          // base-point independence
          if (!first_set) {
            first = oracle;
            first_set = true;
          } else if (!is_pinf(first)) {
            CHECK(std::abs(oracle - first) <= 1e-3 * (1.0 + std::abs(first)));
          } else {
            CHECK(is_pinf(oracle));
          }
        }
      }
    }
  }
}

TEST_CASE("quotient sup is convex in the direction") {
  AsymConfig cfg = cfg_with_probes();
  std::vector<ScalarExpr> corpus{
      ScalarExpr::affine(v2(1.5, -0.5), 0.2),
      ScalarExpr::max_of({ScalarExpr::affine(v2(1, 0), 0.0), ScalarExpr::affine(v2(0, 1), 0.0)})};
  AsymConfig cfg2;
  auto cloud2 = grid_points(PolyUnion::whole_space(2), testutil::grid2d(-5, 5, 0.25));
  set_probes(cfg2, cloud2);
  auto dirs = unit_sphere_directions(2, 12);
  for (const auto& e : corpus) {
    for (size_t i = 0; i < dirs.size(); ++i) {
      for (size_t j = i + 1; j < dirs.size(); ++j) {
        double vi = q_asym_value(e, dirs[i], cfg2);
        double vj = q_asym_value(e, dirs[j], cfg2);
        if (is_pinf(vi) || is_pinf(vj)) continue;
        for (double th : {0.25, 0.5, 0.75}) {
          Vec mix = th * dirs[i] + (1 - th) * dirs[j];
          if (mix.norm() < 1e-6) continue;
          double vm = q_asym_value(e, mix, cfg2);
          if (is_pinf(vm)) continue;
          CHECK(vm <= th * vi + (1 - th) * vj + 1e-3);
        }
      }
    }
  }
}
