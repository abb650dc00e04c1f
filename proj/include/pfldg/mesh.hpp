#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace pfldg {

using Point = Eigen::Vector2d;

/// Thrown for invalid mesh input: degenerate cells, bad indices, files that
/// cannot be parsed, or skeletons that cannot be decomposed into faces.
class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by operations whose construction requires a face-regular mesh.
class NotFaceRegular : public std::runtime_error {
 public:
  NotFaceRegular() : std::runtime_error("mesh not face regular") {}
};

/// Conforming or one-level nonconforming triangulation of a polygon.
///
/// Cells are stored counterclockwise. Local edge e of a cell joins local
/// vertices (e+1)%3 and (e+2)%3, i.e. it is the edge opposite vertex e.
class Mesh {
 public:
  using CellIndices = std::array<int, 3>;

  /// Validates and normalizes the input. Clockwise cells are reordered.
  static Mesh build(std::vector<Point> vertices, std::vector<CellIndices> cells);

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<CellIndices>& cells() const { return cells_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }

  std::array<Point, 3> corners(int cell) const;
  Point centroid(int cell) const;
  double area(int cell) const { return areas_[cell]; }
  /// h_K, the longest edge.
  double diameter(int cell) const { return diameters_[cell]; }
  double inradius(int cell) const;
  /// h, the largest cell diameter.
  double h() const { return h_; }

  /// Vertex indices of local edge e, in counterclockwise order.
  std::array<int, 2> edge(int cell, int e) const;
  /// Outward unit normal of local edge e.
  Point outward_normal(int cell, int e) const;

  /// Copy with all coordinates multiplied by `factor`.
  Mesh scaled(double factor) const;

 private:
  Mesh() = default;
  std::vector<Point> vertices_;
  std::vector<CellIndices> cells_;
  std::vector<double> areas_;
  std::vector<double> diameters_;
  double h_ = 0.0;
};

/// The three face situations that arise on a face-regular mesh.
enum class FaceCase {
  boundary,       ///< case 1
  both_regular,   ///< case 2: interior, an element face of both neighbours
  one_regular,    ///< case 3: interior, an element face of exactly one neighbour
  irregular,      ///< interior and regular w.r.t. neither (not face regular)
};

const char* to_string(FaceCase c);

/// A mesh face: a maximal segment of the skeleton shared by two cells or
/// lying on the boundary.
struct Face {
  std::array<int, 2> vertices{};  ///< endpoint vertex ids, a -> b
  Point a = Point::Zero();
  Point b = Point::Zero();
  double length = 0.0;  ///< h_F
  Point normal = Point::Zero();  ///< unit, outward from ext_cell
  int ext_cell = -1;
  int ext_edge = -1;  ///< local edge of ext_cell containing the face
  std::optional<int> int_cell;
  int int_edge = -1;
  bool regular_ext = false;
  bool regular_int = false;
  FaceCase kind = FaceCase::boundary;

  bool interior() const { return int_cell.has_value(); }
  Point at(double t) const { return a + t * (b - a); }
};

/// Splits every element edge at the vertices lying on it and groups the
/// pieces into mesh faces. Regularity flags are left unset.
std::vector<Face> enumerate_faces(const Mesh& mesh);

/// Sets the regularity flags and FaceCase of every face. Returns whether the
/// mesh is face regular (every face is an element face of some neighbour).
bool classify_regularity(const Mesh& mesh, std::span<Face> faces);

/// Red refinement: every triangle split into four through edge midpoints.
/// Midpoints of edges shared by neighbouring cells are merged.
Mesh refine_uniform(const Mesh& mesh);

/// Built-in geometries. Accepted names: two_triangle, criss_cross, fig1_left,
/// fig1_right, unit_square(n) (also unit_square:n).
Mesh builtin_mesh(const std::string& name);
Mesh unit_square(int n);
std::vector<std::string> builtin_mesh_names();

/// Plain-text format: "dim 2", vertex count, x y per line, cell count, three
/// 0-based indices per line.
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const Mesh& mesh);

}  // namespace pfldg
