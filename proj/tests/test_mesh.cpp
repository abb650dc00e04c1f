#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pfldg/mesh.hpp"

using namespace pfldg;

namespace {

int count_boundary(const std::vector<Face>& faces) {
  int n = 0;
  for (const auto& f : faces) n += f.interior() ? 0 : 1;
  return n;
}

}  // namespace

TEST_CASE("two-triangle square") {
  const Mesh m = builtin_mesh("two_triangle");
  CHECK(m.num_vertices() == 4);
  CHECK(m.num_cells() == 2);
  CHECK(m.h() == doctest::Approx(std::sqrt(2.0)));
  const auto faces = enumerate_faces(m);
  CHECK(faces.size() == 5);
  CHECK(count_boundary(faces) == 4);
}

TEST_CASE("criss-cross mesh") {
  const Mesh m = builtin_mesh("criss_cross");
  CHECK(m.num_vertices() == 5);
  CHECK(m.vertices()[4].norm() == 0.0);
  for (int c = 0; c < 4; ++c) {
    CHECK(m.diameter(c) == doctest::Approx(2.0));
    CHECK(m.area(c) == doctest::Approx(1.0));
  }
  const auto faces = enumerate_faces(m);
  CHECK(faces.size() == 8);
  CHECK(count_boundary(faces) == 4);
}

TEST_CASE("clockwise cells are reoriented") {
  const Mesh m = Mesh::build({{0, 0}, {1, 0}, {0, 1}}, {{0, 2, 1}});
  CHECK(m.area(0) == doctest::Approx(0.5));
  const auto c = m.corners(0);
  const double signed_area =
      0.5 * ((c[1] - c[0]).x() * (c[2] - c[0]).y() - (c[1] - c[0]).y() * (c[2] - c[0]).x());
  CHECK(signed_area > 0.0);
}

TEST_CASE("invalid meshes are rejected") {
  CHECK_THROWS_AS(Mesh::build({{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 2}}), MeshError);
  CHECK_THROWS_AS(Mesh::build({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 3}}), MeshError);
  CHECK_THROWS_AS(Mesh::build({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 1}}), MeshError);
  CHECK_THROWS_AS(builtin_mesh("no_such_mesh"), MeshError);
}

TEST_CASE("outward normals are unit and point away from the centroid") {
  const Mesh m = builtin_mesh("unit_square(2)");
  for (int c = 0; c < m.num_cells(); ++c) {
    for (int e = 0; e < 3; ++e) {
      const Point n = m.outward_normal(c, e);
      CHECK(n.norm() == doctest::Approx(1.0));
      const auto [a, b] = m.edge(c, e);
      const Point mid = 0.5 * (m.vertices()[a] + m.vertices()[b]);
      CHECK(n.dot(mid - m.centroid(c)) > 0.0);
    }
  }
}

TEST_CASE("faces tile every cell boundary") {
  for (const std::string name : {"criss_cross", "fig1_left", "unit_square(4)"}) {
    const Mesh m = builtin_mesh(name);
    const auto faces = enumerate_faces(m);
    std::vector<double> perimeter(m.num_cells(), 0.0);
    for (const auto& f : faces) {
      perimeter[f.ext_cell] += f.length;
      if (f.int_cell) perimeter[*f.int_cell] += f.length;
    }
    for (int c = 0; c < m.num_cells(); ++c) {
      const auto p = m.corners(c);
      const double expect = (p[1] - p[0]).norm() + (p[2] - p[1]).norm() + (p[0] - p[2]).norm();
      CHECK(perimeter[c] == doctest::Approx(expect));
    }
  }
}

TEST_CASE("fig1_left is face regular with one irregular-to-K pair") {
  const Mesh m = builtin_mesh("fig1_left");
  bool hanging = false;
  for (const auto& v : m.vertices()) hanging = hanging || v.norm() == 0.0;
  CHECK(hanging);
  auto faces = enumerate_faces(m);
  CHECK(classify_regularity(m, faces));
  std::array<int, 4> counts{};
  for (const auto& f : faces) ++counts[static_cast<int>(f.kind)];
  CHECK(counts[0] == 4);  // boundary
  CHECK(counts[1] == 1);  // F_1 between the small triangles
  CHECK(counts[2] == 2);  // F_2, F_3 on the split edge of K
  CHECK(counts[3] == 0);
  for (const auto& f : faces) {
    if (f.kind == FaceCase::one_regular) CHECK(f.length == doctest::Approx(1.0));
  }
}

TEST_CASE("fig1_right is not face regular") {
  const Mesh m = builtin_mesh("fig1_right");
  auto faces = enumerate_faces(m);
  CHECK_FALSE(classify_regularity(m, faces));
  int irregular = 0;
  for (const auto& f : faces) irregular += f.kind == FaceCase::irregular ? 1 : 0;
  CHECK(irregular == 1);
}

TEST_CASE("matching meshes are face regular with cases 1 and 2 only") {
  for (const std::string name : {"two_triangle", "criss_cross", "unit_square(3)"}) {
    const Mesh m = builtin_mesh(name);
    auto faces = enumerate_faces(m);
    CHECK(classify_regularity(m, faces));
    for (const auto& f : faces) {
      CHECK((f.kind == FaceCase::boundary || f.kind == FaceCase::both_regular));
    }
  }
}

TEST_CASE("uniform refinement") {
  const Mesh two = refine_uniform(builtin_mesh("two_triangle"));
  CHECK(two.num_cells() == 8);
  CHECK(two.h() == doctest::Approx(std::sqrt(2.0) / 2));
  CHECK(refine_uniform(builtin_mesh("criss_cross")).num_cells() == 16);
  CHECK(builtin_mesh("unit_square(2)").num_cells() == 8);

  Mesh fine = refine_uniform(refine_uniform(builtin_mesh("criss_cross")));
  auto faces = enumerate_faces(fine);
  CHECK(classify_regularity(fine, faces));
  CHECK(fine.num_vertices() == 41);
}

TEST_CASE("mesh file round trip") {
  const Mesh m = builtin_mesh("fig1_left");
  std::stringstream s;
  write_mesh(s, m);
  const Mesh back = read_mesh(s);
  CHECK(back.num_cells() == m.num_cells());
  CHECK(back.num_vertices() == m.num_vertices());
  for (int c = 0; c < m.num_cells(); ++c) CHECK(back.area(c) == doctest::Approx(m.area(c)));

  std::stringstream bad("dim 3\n");
  CHECK_THROWS_AS(read_mesh(bad), MeshError);
  std::stringstream truncated("dim 2\n3\n0 0\n1 0\n");
  CHECK_THROWS_AS(read_mesh(truncated), MeshError);
  CHECK_THROWS_AS(read_mesh_file("/nonexistent/mesh.txt"), MeshError);
}
