#include <doctest.h>

#include "helpers.hpp"
#include "pfldg/liftings.hpp"
#include "pfldg/stability.hpp"

using namespace pfldg;

namespace {

const std::vector<std::string> kRegularMeshes = {"two_triangle", "criss_cross", "fig1_left",
                                                 "unit_square(2)"};

}  // namespace

TEST_CASE("norm of simple functions") {
  const Discretization disc(builtin_mesh("two_triangle"), 2);
  CHECK(norm_1h(DGScalarFunction(disc, 1)).value == 0.0);
  const Norm1h one = norm_1h(l2_project(disc, [](const Point&) { return 1.0; }, 1));
  CHECK(one.gradient_part == doctest::Approx(0.0));
  CHECK(one.jump_part == doctest::Approx(4.0));

  // Hand integration: 4 from the gradients, 16/9 interior, 4/9 boundary.
  const Discretization cc(builtin_mesh("criss_cross"), 2);
  const Norm1h n = norm_1h(counterexample_function(cc));
  CHECK(n.gradient_part == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(n.value * n.value == doctest::Approx(56.0 / 9.0).epsilon(1e-13));

  auto rng = test::rng(1);
  const DGScalarFunction u = random_scalar(cc, 1, rng);
  const Eigen::SparseMatrix<double> b = norm_1h_matrix(cc, 1);
  CHECK(std::sqrt(u.coefficients().dot(b * u.coefficients())) ==
        doctest::Approx(norm_1h(u).value).epsilon(1e-12));
}

TEST_CASE("counterexample checks") {
  const ExperimentReport r = run_counterexample();
  CHECK(r.passed());
  CHECK(r.checks.size() == 4);
  for (const auto& c : r.checks) CHECK_MESSAGE(c.pass, c.name);
  REQUIRE(r.c_min.has_value());
  CHECK(*r.c_min > 0.0);
}

TEST_CASE("tau vanishes for u = 0 and needs a face-regular mesh") {
  const Discretization disc(builtin_mesh("criss_cross"), 2);
  CHECK(l2_norm(build_tau(DGScalarFunction(disc, 1))) == 0.0);
  CHECK_THROWS_AS(check_upper_bound(DGScalarFunction(disc, 1), DGVectorFunction(disc, 2)),
                  std::invalid_argument);
  const Discretization bad(builtin_mesh("fig1_right"), 2);
  CHECK_THROWS_AS(build_tau(DGScalarFunction(bad, 1)), NotFaceRegular);
}

TEST_CASE("three-case identity on fig1_left") {
  auto rng = test::rng(2);
  for (int k : {1, 2, 3}) {
    const Discretization disc(builtin_mesh("fig1_left"), k + 1);
    for (int trial = 0; trial < 20; ++trial) {
      const DGScalarFunction u = random_scalar(disc, k, rng);
      const CaseIdentityResult r = check_case_identity(u, build_tau(u));
      CHECK(r.max_deviation <= 1e-10 * std::max(1.0, r.max_reference));
      CHECK(r.case_counts[0] == 4);
      CHECK(r.case_counts[1] == 1);
      CHECK(r.case_counts[2] == 2);
    }
  }
}

TEST_CASE("lower bound on face-regular meshes") {
  auto rng = test::rng(3);
  for (const auto& name : kRegularMeshes) {
    for (int k : {1, 2}) {
      const Discretization disc(builtin_mesh(name), k + 1);
      for (int trial = 0; trial < 20; ++trial) {
        const DGScalarFunction u = random_scalar(disc, k, rng);
        const double n = norm_1h(u).value;
        CHECK(inner_product(lifted_gradient(u), build_tau(u)) >= 0.5 * n * n - 1e-10);
      }
    }
  }
}

TEST_CASE("upper-bound ratio is scale invariant") {
  auto rng = test::rng(4);
  const Mesh m = builtin_mesh("fig1_left");
  const Discretization a(m, 2), b(m.scaled(2.0), 2);
  for (int trial = 0; trial < 5; ++trial) {
    const DGScalarFunction ua = random_scalar(a, 1, rng);
    // Orthonormal bases pick up a factor 1/2 under x -> 2x, so ub(2x) = ua(x).
    DGScalarFunction ub(b, 1, ua.coefficients() * 2.0);
    const double ra = check_upper_bound(ua, build_tau(ua));
    const double rb = check_upper_bound(ub, build_tau(ub));
    CHECK(rb == doctest::Approx(ra).epsilon(1e-10));
  }
}

TEST_CASE("continuous functions with zero boundary trace give interior-moment-only tau") {
  const Discretization disc(unit_square(2), 2);
  const DGScalarFunction hat = test::interpolate_p1(disc, [](const Point& x) {
    return std::max(0.0, 1.0 - 2.0 * std::max(std::abs(x.x() - 0.5), std::abs(x.y() - 0.5)));
  });
  const DGVectorFunction tau = build_tau(hat);
  const FaceData nj = normal_jumps(tau);
  for (int f = 0; f < disc.num_faces(); ++f) {
    for (int side = 0; side < (disc.face(f).interior() ? 2 : 1); ++side) {
      const Eigen::Matrix2Xd tr = eval_on_face(tau, f, side ? Side::interior : Side::exterior,
                                               disc.face_reference_rule().points);
      CHECK((disc.face(f).normal.transpose() * tr).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  CHECK(check_upper_bound(hat, tau) > 0.0);
}

TEST_CASE("equivalence constants") {
  const Discretization cc(builtin_mesh("criss_cross"), 2);
  const EquivalenceReport equal = equivalence_constants(cc, 1, 1, "criss_cross");
  CHECK(equal.c_min <= 1e-8);
  const EquivalenceReport raised = equivalence_constants(cc, 1, 2, "criss_cross");
  CHECK(raised.c_min > 0.5);
  CHECK(raised.c_max >= raised.c_min);
  CHECK(raised.dofs == 12);

  for (const auto& name : kRegularMeshes) {
    const Discretization disc(builtin_mesh(name), 3);
    for (int k : {1, 2}) {
      const EquivalenceReport svd = equivalence_constants(disc, k, k + 1);
      const EquivalenceReport eig = equivalence_constants_eig(disc, k, k + 1);
      CHECK(svd.c_min == doctest::Approx(eig.c_min).epsilon(1e-8));
      CHECK(svd.c_max == doctest::Approx(eig.c_max).epsilon(1e-8));
    }
  }
}

TEST_CASE("c_min is stable under refinement") {
  Mesh m = unit_square(2);
  double prev = 0.0;
  for (int level = 0; level < 3; ++level) {
    const Discretization disc(m, 2);
    const double c = equivalence_constants(disc, 1, 2).c_min;
    CHECK(c > 0.0);
    if (level > 0) CHECK(std::abs(c - prev) / prev < 0.2);
    prev = c;
    m = refine_uniform(m);
  }
  CHECK(poincare_constant(Discretization(unit_square(2), 2), 1) > 0.0);
}
