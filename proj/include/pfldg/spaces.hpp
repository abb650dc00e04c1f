#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "pfldg/mesh.hpp"
#include "pfldg/polybasis.hpp"
#include "pfldg/quadrature.hpp"

namespace pfldg {

/// Mesh, skeleton, per-cell orthonormal bases and quadrature tables shared by
/// every discrete function. Immutable after construction.
///
/// Bases are built up to `max_degree`; V_{h,k} and Sigma_{h,l} use the first
/// dim_poly(k) (resp. dim_poly(l)) members of each cell basis.
class Discretization {
 public:
  Discretization(Mesh mesh, int max_degree);

  const Mesh& mesh() const { return mesh_; }
  int max_degree() const { return max_degree_; }
  int num_cells() const { return mesh_.num_cells(); }

  const std::vector<Face>& faces() const { return faces_; }
  const Face& face(int f) const { return faces_[f]; }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  bool face_regular() const { return face_regular_; }
  /// Mesh faces contained in the boundary of `cell`.
  const std::vector<int>& cell_faces(int cell) const { return cell_faces_[cell]; }
  /// The mesh face that coincides with element face e of `cell`, or -1 when
  /// that element face is split by hanging nodes.
  int element_face(int cell, int e) const { return element_faces_[cell][e]; }

  const ScalarBasis& basis(int cell) const { return bases_[cell]; }

  /// Quadrature exact to degree 2 * max_degree + 2.
  int quadrature_degree() const { return quad_degree_; }
  const PhysicalRule& cell_rule(int cell) const { return cell_rules_[cell]; }
  const SegmentRule& face_reference_rule() const { return face_ref_rule_; }
  const PhysicalRule& face_rule(int f) const { return face_rules_[f]; }

  /// Max-degree basis tables at the cell quadrature points.
  const Eigen::MatrixXd& cell_values(int cell) const { return cell_values_[cell]; }
  const std::array<Eigen::MatrixXd, 2>& cell_gradients(int cell) const { return cell_grads_[cell]; }
  /// Max-degree basis of `cell` at the quadrature points of face f.
  Eigen::MatrixXd face_values(int f, int cell) const;

  /// Scalar mass matrix of P_m(cell) in the cell basis.
  Eigen::MatrixXd mass(int cell, int degree) const;

 private:
  Mesh mesh_;
  int max_degree_;
  int quad_degree_;
  std::vector<Face> faces_;
  bool face_regular_ = false;
  std::vector<std::vector<int>> cell_faces_;
  std::vector<std::array<int, 3>> element_faces_;
  std::vector<ScalarBasis> bases_;
  std::vector<PhysicalRule> cell_rules_;
  SegmentRule face_ref_rule_;
  std::vector<PhysicalRule> face_rules_;
  std::vector<Eigen::MatrixXd> cell_values_;
  std::vector<std::array<Eigen::MatrixXd, 2>> cell_grads_;
  std::vector<Eigen::MatrixXd> masses_;
};

enum class Side { exterior, interior };

/// Element of V_{h,k}: one coefficient block of size dim_poly(k) per cell.
class DGScalarFunction {
 public:
  DGScalarFunction(const Discretization& disc, int degree);
  DGScalarFunction(const Discretization& disc, int degree, Eigen::VectorXd coefficients);

  const Discretization& discretization() const { return *disc_; }
  int degree() const { return degree_; }
  int block_size() const { return dim_poly(degree_); }

  Eigen::VectorXd& coefficients() { return coeffs_; }
  const Eigen::VectorXd& coefficients() const { return coeffs_; }
  auto block(int cell) { return coeffs_.segment(cell * block_size(), block_size()); }
  auto block(int cell) const { return coeffs_.segment(cell * block_size(), block_size()); }

  double value(int cell, const Point& x) const;
  Point gradient(int cell, const Point& x) const;

 private:
  const Discretization* disc_;
  int degree_;
  Eigen::VectorXd coeffs_;
};

/// Element of Sigma_{h,l}: per cell, the x-component block followed by the
/// y-component block, each of size dim_poly(l).
class DGVectorFunction {
 public:
  DGVectorFunction(const Discretization& disc, int degree);
  DGVectorFunction(const Discretization& disc, int degree, Eigen::VectorXd coefficients);

  const Discretization& discretization() const { return *disc_; }
  int degree() const { return degree_; }
  int component_size() const { return dim_poly(degree_); }
  int block_size() const { return 2 * dim_poly(degree_); }

  Eigen::VectorXd& coefficients() { return coeffs_; }
  const Eigen::VectorXd& coefficients() const { return coeffs_; }
  auto block(int cell) { return coeffs_.segment(cell * block_size(), block_size()); }
  auto block(int cell) const { return coeffs_.segment(cell * block_size(), block_size()); }

  Point value(int cell, const Point& x) const;
  double divergence(int cell, const Point& x) const;

 private:
  const Discretization* disc_;
  int degree_;
  Eigen::VectorXd coeffs_;
};

using ScalarField = std::function<double(const Point&)>;
/// Field defined cell by cell: f(cell, x).
using CellwiseField = std::function<double(int, const Point&)>;

/// Element-wise L2 projection onto V_{h,k}.
DGScalarFunction l2_project(const Discretization& disc, const ScalarField& f, int k);
DGScalarFunction l2_project(const Discretization& disc, const CellwiseField& f, int k);

/// L2 norm of a discrete function computed with the discretization's rules.
double l2_norm(const DGScalarFunction& u);
double l2_norm(const DGVectorFunction& sigma);
/// Integral over the domain of sigma . tau (same discretization).
double inner_product(const DGVectorFunction& sigma, const DGVectorFunction& tau);
double inner_product(const DGScalarFunction& u, const DGScalarFunction& v);

/// Trace of the cell on `side` of face f at reference points t in [0,1]
/// (x = a + t (b - a)). Throws std::invalid_argument for the interior side
/// of a boundary face.
Eigen::VectorXd eval_on_face(const DGScalarFunction& u, int f, Side side, std::span<const double> t);
Eigen::Matrix2Xd eval_on_face(const DGVectorFunction& sigma, int f, Side side,
                              std::span<const double> t);

/// Cell of face f on the given side (validated).
int side_cell(const Face& face, Side side);

/// Embeds the broken gradient of u (degree k - 1) into Sigma_{h,l}, l >= k - 1.
DGVectorFunction broken_gradient(const DGScalarFunction& u, int degree);

}  // namespace pfldg
