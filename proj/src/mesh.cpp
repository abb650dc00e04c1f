#include "pfldg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace pfldg {

namespace {

constexpr double kRelTol = 1e-12;

double cross(const Point& u, const Point& v) { return u.x() * v.y() - u.y() * v.x(); }

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * cross(b - a, c - a);
}

}  // namespace

Mesh Mesh::build(std::vector<Point> vertices, std::vector<CellIndices> cells) {
  if (cells.empty()) throw MeshError("mesh has no cells");
  const int nv = static_cast<int>(vertices.size());
  for (const auto& p : vertices) {
    if (!p.allFinite()) throw MeshError("non-finite vertex coordinate");
  }

  Mesh mesh;
  mesh.areas_.reserve(cells.size());
  mesh.diameters_.reserve(cells.size());
  std::set<CellIndices> seen;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    auto& cell = cells[c];
    for (int v : cell) {
      if (v < 0 || v >= nv) {
        throw MeshError("cell " + std::to_string(c) + ": vertex index " + std::to_string(v) +
                        " out of range");
      }
    }
    if (cell[0] == cell[1] || cell[1] == cell[2] || cell[0] == cell[2]) {
      throw MeshError("cell " + std::to_string(c) + " repeats a vertex");
    }
    const Point& a = vertices[cell[0]];
    const Point& b = vertices[cell[1]];
    const Point& d = vertices[cell[2]];
    const double diam = std::max({(b - a).norm(), (d - b).norm(), (a - d).norm()});
    double area = signed_area(a, b, d);
    if (std::abs(area) <= kRelTol * diam * diam) {
      throw MeshError("cell " + std::to_string(c) + " is degenerate (zero area)");
    }
    if (area < 0) {
      std::swap(cell[1], cell[2]);
      area = -area;
    }
    auto key = cell;
    std::sort(key.begin(), key.end());
    if (!seen.insert(key).second) throw MeshError("duplicate cell " + std::to_string(c));
    mesh.areas_.push_back(area);
    mesh.diameters_.push_back(diam);
    mesh.h_ = std::max(mesh.h_, diam);
  }

  // Coincident vertices would silently split the skeleton.
  std::vector<int> order(vertices.size());
  for (int i = 0; i < nv; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return vertices[i].x() < vertices[j].x();
  });
  const double tol = kRelTol * std::max(mesh.h_, 1.0) * 1e2;
  for (int i = 0; i < nv; ++i) {
    for (int j = i + 1; j < nv; ++j) {
      const Point& p = vertices[order[i]];
      const Point& q = vertices[order[j]];
      if (q.x() - p.x() > tol) break;
      if ((p - q).norm() <= tol) {
        throw MeshError("vertices " + std::to_string(order[i]) + " and " +
                        std::to_string(order[j]) + " coincide");
      }
    }
  }

  mesh.vertices_ = std::move(vertices);
  mesh.cells_ = std::move(cells);
  return mesh;
}

std::array<Point, 3> Mesh::corners(int cell) const {
  const auto& c = cells_[cell];
  return {vertices_[c[0]], vertices_[c[1]], vertices_[c[2]]};
}

Point Mesh::centroid(int cell) const {
  const auto p = corners(cell);
  return (p[0] + p[1] + p[2]) / 3.0;
}

double Mesh::inradius(int cell) const {
  const auto p = corners(cell);
  const double perimeter = (p[1] - p[0]).norm() + (p[2] - p[1]).norm() + (p[0] - p[2]).norm();
  return 2.0 * areas_[cell] / perimeter;
}

std::array<int, 2> Mesh::edge(int cell, int e) const {
  const auto& c = cells_[cell];
  return {c[(e + 1) % 3], c[(e + 2) % 3]};
}

Point Mesh::outward_normal(int cell, int e) const {
  const auto [i, j] = edge(cell, e);
  const Point d = vertices_[j] - vertices_[i];
  return Point(d.y(), -d.x()).normalized();
}

Mesh Mesh::scaled(double factor) const {
  std::vector<Point> v = vertices_;
  for (auto& p : v) p *= factor;
  return build(std::move(v), cells_);
}

const char* to_string(FaceCase c) {
  switch (c) {
    case FaceCase::boundary: return "case1";
    case FaceCase::both_regular: return "case2";
    case FaceCase::one_regular: return "case3";
    case FaceCase::irregular: return "irregular";
  }
  return "?";
}

std::vector<Face> enumerate_faces(const Mesh& mesh) {
  const auto& verts = mesh.vertices();
  const int nc = mesh.num_cells();

  // Piece of an element edge between two consecutive vertices on it.
  struct Piece {
    int cell;
    int edge;
    int lo, hi;  // vertex ids ordered along the cell's ccw edge direction
  };
  std::vector<std::vector<std::vector<int>>> chains(nc, std::vector<std::vector<int>>(3));
  std::map<std::pair<int, int>, std::vector<Piece>> pieces;

  for (int c = 0; c < nc; ++c) {
    const double tol = kRelTol * mesh.diameter(c);
    for (int e = 0; e < 3; ++e) {
      const auto [i, j] = mesh.edge(c, e);
      const Point p = verts[i];
      const Point d = verts[j] - p;
      const double len2 = d.squaredNorm();
      std::vector<std::pair<double, int>> on_edge;
      for (int w = 0; w < mesh.num_vertices(); ++w) {
        if (w == i || w == j) continue;
        const Point r = verts[w] - p;
        const double t = r.dot(d) / len2;
        if (t <= kRelTol || t >= 1.0 - kRelTol) continue;
        if (std::abs(cross(d, r)) / std::sqrt(len2) > tol) continue;
        on_edge.emplace_back(t, w);
      }
      std::sort(on_edge.begin(), on_edge.end());
      auto& chain = chains[c][e];
      chain.push_back(i);
      for (const auto& tw : on_edge) chain.push_back(tw.second);
      chain.push_back(j);
      for (std::size_t s = 0; s + 1 < chain.size(); ++s) {
        const int lo = chain[s], hi = chain[s + 1];
        pieces[{std::min(lo, hi), std::max(lo, hi)}].push_back({c, e, lo, hi});
      }
    }
  }

  // Neighbour of each piece, seen from cell c: -1 on the boundary.
  auto neighbour = [&](int c, int lo, int hi) {
    const auto& owners = pieces.at({std::min(lo, hi), std::max(lo, hi)});
    if (owners.size() > 2) {
      throw MeshError("non-conforming mesh: segment (" + std::to_string(lo) + "," +
                      std::to_string(hi) + ") shared by more than two cells");
    }
    for (const auto& o : owners) {
      if (o.cell != c) {
        if (o.lo != hi || o.hi != lo) {
          throw MeshError("non-conforming mesh: cells " + std::to_string(c) + " and " +
                          std::to_string(o.cell) + " overlap");
        }
        return o.cell;
      }
    }
    return -1;
  };

  std::vector<Face> faces;
  for (int c = 0; c < nc; ++c) {
    for (int e = 0; e < 3; ++e) {
      const auto& chain = chains[c][e];
      std::size_t s = 0;
      while (s + 1 < chain.size()) {
        const int nb = neighbour(c, chain[s], chain[s + 1]);
        std::size_t t = s + 1;
        while (t + 1 < chain.size() && neighbour(c, chain[t], chain[t + 1]) == nb) ++t;
        if (nb == -1 || nb > c) {
          Face f;
          f.vertices = {chain[s], chain[t]};
          f.a = verts[chain[s]];
          f.b = verts[chain[t]];
          f.length = (f.b - f.a).norm();
          f.normal = mesh.outward_normal(c, e);
          f.ext_cell = c;
          f.ext_edge = e;
          if (nb != -1) {
            f.int_cell = nb;
            for (int ne = 0; ne < 3; ++ne) {
              const auto& nchain = chains[nb][ne];
              if (std::find(nchain.begin(), nchain.end(), chain[s]) != nchain.end() &&
                  std::find(nchain.begin(), nchain.end(), chain[t]) != nchain.end()) {
                f.int_edge = ne;
              }
            }
            if (f.int_edge < 0) {
              throw MeshError("non-conforming mesh: inconsistent face between cells " +
                              std::to_string(c) + " and " + std::to_string(nb));
            }
          }
          faces.push_back(f);
        }
        s = t;
      }
    }
  }
  return faces;
}

bool classify_regularity(const Mesh& mesh, std::span<Face> faces) {
  auto is_element_face = [&](int cell, int e, const Face& f) {
    auto ev = mesh.edge(cell, e);
    auto fv = f.vertices;
    std::sort(ev.begin(), ev.end());
    std::sort(fv.begin(), fv.end());
    return ev == fv;
  };
  bool regular = true;
  for (auto& f : faces) {
    f.regular_ext = is_element_face(f.ext_cell, f.ext_edge, f);
    f.regular_int = f.interior() && is_element_face(*f.int_cell, f.int_edge, f);
    if (!f.interior()) {
      f.kind = FaceCase::boundary;
      // Only reachable if a hanging vertex sits on the boundary.
      if (!f.regular_ext) {
        f.kind = FaceCase::irregular;
        regular = false;
      }
    } else if (f.regular_ext && f.regular_int) {
      f.kind = FaceCase::both_regular;
    } else if (f.regular_ext || f.regular_int) {
      f.kind = FaceCase::one_regular;
    } else {
      f.kind = FaceCase::irregular;
      regular = false;
    }
  }
  return regular;
}

Mesh refine_uniform(const Mesh& mesh) {
  std::vector<Point> verts = mesh.vertices();
  const double grid = 1e-9 * std::max(mesh.h(), 1e-300);
  std::map<std::pair<long long, long long>, int> index;
  auto key = [&](const Point& p) {
    return std::make_pair(std::llround(p.x() / grid), std::llround(p.y() / grid));
  };
  for (int v = 0; v < static_cast<int>(verts.size()); ++v) index.emplace(key(verts[v]), v);
  auto vertex_at = [&](const Point& p) {
    auto [it, inserted] = index.emplace(key(p), static_cast<int>(verts.size()));
    if (inserted) verts.push_back(p);
    return it->second;
  };

  std::vector<Mesh::CellIndices> cells;
  cells.reserve(4 * mesh.cells().size());
  for (const auto& c : mesh.cells()) {
    const int m01 = vertex_at(0.5 * (verts[c[0]] + verts[c[1]]));
    const int m12 = vertex_at(0.5 * (verts[c[1]] + verts[c[2]]));
    const int m20 = vertex_at(0.5 * (verts[c[2]] + verts[c[0]]));
    cells.push_back({c[0], m01, m20});
    cells.push_back({m01, c[1], m12});
    cells.push_back({m20, m12, c[2]});
    cells.push_back({m01, m12, m20});
  }
  return Mesh::build(std::move(verts), std::move(cells));
}

Mesh unit_square(int n) {
  if (n < 1) throw MeshError("unit_square needs n >= 1");
  std::vector<Point> verts;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) verts.emplace_back(double(i) / n, double(j) / n);
  }
  std::vector<Mesh::CellIndices> cells;
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return Mesh::build(std::move(verts), std::move(cells));
}

std::vector<std::string> builtin_mesh_names() {
  return {"two_triangle", "criss_cross", "fig1_left", "fig1_right", "unit_square(n)"};
}

Mesh builtin_mesh(const std::string& name) {
  if (name == "two_triangle") return unit_square(1);
  if (name == "criss_cross") {
    // K1 bottom, K2 right, K3 top, K4 left.
    return Mesh::build({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}, {0, 0}},
                       {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}});
  }
  if (name == "fig1_left") {
    // K is the right half; the left half is split through the hanging node (0,0).
    return Mesh::build({{0, 1}, {1, 0}, {0, -1}, {-1, 0}, {0, 0}},
                       {{2, 1, 0}, {3, 2, 4}, {3, 4, 0}});
  }
  if (name == "fig1_right") {
    return Mesh::build({{0, 1}, {1, 0}, {0, -1}, {-1, 0}, {0, -0.2}, {0, 0.2}},
                       {{3, 2, 4}, {3, 4, 0}, {1, 0, 5}, {1, 5, 2}});
  }
  for (const std::string prefix : {"unit_square(", "unit_square:", "unit_square"}) {
    if (name.rfind(prefix, 0) != 0) continue;
    std::string rest = name.substr(prefix.size());
    if (prefix == "unit_square(") {
      if (rest.empty() || rest.back() != ')') break;
      rest.pop_back();
    }
    if (rest.empty() || rest.find_first_not_of("0123456789") != std::string::npos) break;
    return unit_square(std::stoi(rest));
  }
  throw MeshError("unknown built-in mesh '" + name + "'");
}

Mesh read_mesh(std::istream& in) {
  auto fail = [](const std::string& what) { throw MeshError("malformed mesh file: " + what); };
  std::string tag;
  int dim = 0;
  if (!(in >> tag >> dim) || tag != "dim") fail("expected header 'dim 2'");
  if (dim != 2) fail("only dim 2 is supported");
  long nv = -1;
  if (!(in >> nv) || nv < 0) fail("bad vertex count");
  std::vector<Point> verts(nv);
  for (auto& p : verts) {
    if (!(in >> p.x() >> p.y())) fail("truncated vertex list");
  }
  long nc = -1;
  if (!(in >> nc) || nc < 0) fail("bad cell count");
  std::vector<Mesh::CellIndices> cells(nc);
  for (auto& c : cells) {
    if (!(in >> c[0] >> c[1] >> c[2])) fail("truncated cell list");
  }
  std::string extra;
  if (in >> extra) fail("trailing content '" + extra + "'");
  return Mesh::build(std::move(verts), std::move(cells));
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  std::ostringstream s;
  s.precision(17);
  s << "dim 2\n" << mesh.num_vertices() << "\n";
  for (const auto& p : mesh.vertices()) s << p.x() << " " << p.y() << "\n";
  s << mesh.num_cells() << "\n";
  for (const auto& c : mesh.cells()) s << c[0] << " " << c[1] << " " << c[2] << "\n";
  out << s.str();
}

}  // namespace pfldg
