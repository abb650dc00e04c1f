#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "pfldg/stability.hpp"

using namespace pfldg;

namespace {

double l2_error(const DGScalarFunction& u, const ScalarField& f) {
  const Discretization& disc = u.discretization();
  const TriangleRule fine = quad_triangle(14);
  double s = 0.0;
  for (int c = 0; c < disc.num_cells(); ++c) {
    const PhysicalRule r = map_rule(fine, disc.mesh().corners(c));
    for (std::size_t q = 0; q < r.size(); ++q) {
      const double e = u.value(c, r.points[q]) - f(r.points[q]);
      s += r.weights[q] * e * e;
    }
  }
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("projection reproduces polynomials and constants") {
  const Discretization disc(builtin_mesh("fig1_left"), 3);
  const ScalarField p = [](const Point& x) { return 1 + x.x() - 2 * x.x() * x.y() + x.y() * x.y() * x.y(); };
  const DGScalarFunction u = l2_project(disc, p, 3);
  const Point sample(0.3, 0.1);
  CHECK(u.value(0, sample) == doctest::Approx(p(sample)).epsilon(1e-12));
  CHECK(l2_error(u, p) < 1e-12);

  const DGScalarFunction c = l2_project(disc, [](const Point&) { return 2.5; }, 1);
  for (int cell = 0; cell < disc.num_cells(); ++cell) {
    CHECK(c.value(cell, disc.mesh().centroid(cell)) == doctest::Approx(2.5).epsilon(1e-13));
  }
}

TEST_CASE("projection of sin(pi x) converges at rate 2 for k = 1") {
  const ScalarField f = [](const Point& x) { return std::sin(std::numbers::pi * x.x()); };
  std::vector<double> errs;
  for (int n : {4, 8, 16}) {
    const Discretization disc(unit_square(n), 1);
    errs.push_back(l2_error(l2_project(disc, f, 1), f));
  }
  for (std::size_t i = 1; i < errs.size(); ++i) {
    CHECK(std::log2(errs[i - 1] / errs[i]) == doctest::Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("traces of continuous and indicator functions") {
  const Discretization disc(builtin_mesh("unit_square(2)"), 2);
  const DGScalarFunction hat = test::interpolate_p1(disc, [](const Point& x) {
    return std::max(0.0, 1.0 - 2.0 * std::max(std::abs(x.x() - 0.5), std::abs(x.y() - 0.5)));
  });
  const std::vector<double> t = {0.0, 0.25, 0.5, 0.9};
  for (int f = 0; f < disc.num_faces(); ++f) {
    if (!disc.face(f).interior()) continue;
    const Eigen::VectorXd a = eval_on_face(hat, f, Side::exterior, t);
    const Eigen::VectorXd b = eval_on_face(hat, f, Side::interior, t);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-13);
  }

  const Face& f0 = [&]() -> const Face& {
    for (const auto& f : disc.faces()) if (f.interior()) return f;
    throw std::logic_error("no interior face");
  }();
  const int ext = f0.ext_cell;
  const DGScalarFunction ind = l2_project(
      disc, CellwiseField([&](int c, const Point&) { return c == ext ? 1.0 : 0.0; }), 0);
  const int fid = static_cast<int>(&f0 - disc.faces().data());
  CHECK(eval_on_face(ind, fid, Side::exterior, t).minCoeff() == doctest::Approx(1.0));
  CHECK(eval_on_face(ind, fid, Side::interior, t).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("counterexample traces have zero average") {
  const Discretization disc(builtin_mesh("criss_cross"), 2);
  const DGScalarFunction u = counterexample_function(disc);
  const std::vector<double> t = {0.0, 0.3, 0.7, 1.0};
  for (int f = 0; f < disc.num_faces(); ++f) {
    if (!disc.face(f).interior()) continue;
    const Eigen::VectorXd sum =
        eval_on_face(u, f, Side::exterior, t) + eval_on_face(u, f, Side::interior, t);
    CHECK(sum.cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("broken gradient") {
  const Discretization disc(builtin_mesh("fig1_left"), 2);
  const DGScalarFunction u =
      l2_project(disc, [](const Point& x) { return x.x() * x.x() + 3 * x.y(); }, 2);
  const DGVectorFunction g = broken_gradient(u, 1);
  const Point x(0.2, 0.3);
  CHECK(g.value(0, x).x() == doctest::Approx(0.4));
  CHECK(g.value(0, x).y() == doctest::Approx(3.0));
  CHECK(g.divergence(0, x) == doctest::Approx(2.0));
  CHECK(inner_product(u, u) == doctest::Approx(l2_norm(u) * l2_norm(u)));
}
