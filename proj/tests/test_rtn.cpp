#include <doctest.h>

#include <random>

#include "pfldg/rtn.hpp"

using namespace pfldg;

namespace {

// Random triangle with minimum angle bounded away from zero.
Mesh random_triangle(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> scale(0.01, 10.0);
  while (true) {
    std::array<Point, 3> p;
    for (auto& x : p) x = Point(u(rng), u(rng));
    const double area = 0.5 * std::abs((p[1] - p[0]).x() * (p[2] - p[0]).y() -
                                       (p[1] - p[0]).y() * (p[2] - p[0]).x());
    double longest = 0.0;
    for (int i = 0; i < 3; ++i) longest = std::max(longest, (p[(i + 1) % 3] - p[i]).norm());
    if (area / (longest * longest) < 0.15) continue;
    const double s = scale(rng);
    const Point shift(u(rng) * 5, u(rng) * 5);
    return Mesh::build({s * p[0] + shift, s * p[1] + shift, s * p[2] + shift}, {{0, 1, 2}});
  }
}

Eigen::VectorXd random_vector(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("moment round trip on random triangles") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Mesh mesh = random_triangle(rng);
    for (int k = 1; k <= 4; ++k) {
      const Discretization disc(mesh, k + 1);
      const RTNMomentSystem sys(disc, 0, k);
      CHECK(sys.dimension() == (k + 1) * (k + 3));
      const Eigen::VectorXd in = random_vector(sys.num_interior(), rng);
      const Eigen::VectorXd fc = random_vector(sys.num_face(), rng);
      const Eigen::VectorXd back = sys.moments(sys.reconstruct(in, fc));
      Eigen::VectorXd expect(sys.dimension());
      expect << in, fc;
      CHECK((back - expect).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("zero moments give the zero field") {
  const Discretization disc(builtin_mesh("two_triangle"), 3);
  const RTNMomentSystem sys(disc, 1, 2);
  const Eigen::VectorXd v =
      sys.reconstruct(Eigen::VectorXd::Zero(sys.num_interior()), Eigen::VectorXd::Zero(sys.num_face()));
  CHECK(v.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("P_k^2 fields are reproduced from their moments") {
  std::mt19937_64 rng(5);
  const Mesh mesh = random_triangle(rng);
  for (int k = 1; k <= 3; ++k) {
    const Discretization disc(mesh, k + 1);
    const RTNMomentSystem sys(disc, 0, k);
    const int n = dim_poly(k + 1);
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(2 * n);
    mu.head(dim_poly(k)) = random_vector(dim_poly(k), rng);
    mu.segment(n, dim_poly(k)) = random_vector(dim_poly(k), rng);
    const Eigen::VectorXd m = sys.moments(mu);
    const Eigen::VectorXd rec =
        sys.reconstruct(m.head(sys.num_interior()), m.tail(sys.num_face()));
    const DGVectorFunction a(disc, k + 1, mu), b(disc, k + 1, rec);
    for (const Point& x : {mesh.centroid(0), mesh.corners(0)[0], mesh.corners(0)[2]}) {
      CHECK((a.value(0, x) - b.value(0, x)).norm() < 1e-10 * (1 + a.value(0, x).norm()));
    }
  }
}

TEST_CASE("zero face moments give zero normal trace on that face") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Mesh mesh = random_triangle(rng);
    for (int k = 1; k <= 4; ++k) {
      const Discretization disc(mesh, k + 1);
      const RTNMomentSystem sys(disc, 0, k);
      Eigen::VectorXd fc = random_vector(sys.num_face(), rng);
      const int e = trial % 3;
      fc.segment(e * (k + 1), k + 1).setZero();
      const DGVectorFunction tau(disc, k + 1,
                                 sys.reconstruct(random_vector(sys.num_interior(), rng), fc));
      const auto [i, j] = mesh.edge(0, e);
      const Point n = mesh.outward_normal(0, e);
      double worst = 0.0, scale = 0.0;
      for (double t = 0.0; t <= 1.0; t += 0.05) {
        const Point x = mesh.vertices()[i] + t * (mesh.vertices()[j] - mesh.vertices()[i]);
        worst = std::max(worst, std::abs(tau.value(0, x).dot(n)));
        scale = std::max(scale, tau.value(0, x).norm());
      }
      CHECK(worst <= 1e-10 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("moment system is well conditioned on shape regular cells") {
  const Discretization disc(builtin_mesh("criss_cross"), 3);
  for (int c = 0; c < 4; ++c) CHECK(RTNMomentSystem(disc, c, 2).condition_number() < 1e4);
  CHECK_THROWS_AS(RTNMomentSystem(disc, 0, 3), std::invalid_argument);
}
