#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "pfldg/mesh.hpp"

namespace pfldg {

/// dim P_m in two variables.
constexpr int dim_poly(int m) { return m < 0 ? 0 : (m + 1) * (m + 2) / 2; }

/// Basis of P_m in two variables, stored as combinations of scaled monomials
/// ((x - c) / s)^a ((y - c) / s)^b graded by total degree.
///
/// The orthonormal variant is hierarchical: its first dim_poly(j) members span
/// P_j for every j <= m, so lower-degree spaces are prefixes.
class ScalarBasis {
 public:
  using Gradients = Eigen::Matrix<double, 2, Eigen::Dynamic>;

  /// Plain monomials x^a y^b, the reference-triangle basis.
  static ScalarBasis monomial(int degree);

  /// L2(K)-orthonormal basis of P_m(K) for the triangle with these corners,
  /// obtained by two Cholesky passes over the monomial Gram matrix.
  static ScalarBasis orthonormal(int degree, const std::array<Point, 3>& corners);

  int degree() const { return degree_; }
  int size() const { return dim_poly(degree_); }

  /// Values of all members at x.
  Eigen::VectorXd eval(const Point& x) const;
  /// Gradients of all members at x (column i = grad of member i).
  Gradients eval_grad(const Point& x) const;

  /// size() x points.size() tables.
  Eigen::MatrixXd eval(std::span<const Point> points) const;
  std::array<Eigen::MatrixXd, 2> eval_grad(std::span<const Point> points) const;

  /// Coefficients of member i in the scaled monomials (row i, lower triangular).
  const Eigen::MatrixXd& monomial_coefficients() const { return coeffs_; }
  const std::vector<std::array<int, 2>>& exponents() const { return exponents_; }

 private:
  ScalarBasis(int degree, Point center, double scale);
  void monomials(const Point& x, Eigen::VectorXd& m, Gradients* dm) const;

  int degree_ = 0;
  Point center_ = Point::Zero();
  double scale_ = 1.0;
  Eigen::MatrixXd coeffs_;
  std::vector<std::array<int, 2>> exponents_;
};

/// Homogeneous polynomials of exact degree k about a centre: the k + 1
/// monomials xi1^(k-j) xi2^j with xi = (x - c) / s.
class HomogeneousBasis {
 public:
  HomogeneousBasis(int degree, Point center = Point::Zero(), double scale = 1.0)
      : degree_(degree), center_(center), scale_(scale) {}

  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }
  Eigen::VectorXd eval(const Point& x) const;
  const Point& center() const { return center_; }
  double scale() const { return scale_; }

 private:
  int degree_;
  Point center_;
  double scale_;
};

/// L2-orthonormal Legendre basis of P_m on a segment of the given length,
/// evaluated at the reference coordinate t in [0,1].
Eigen::VectorXd segment_basis(int degree, double length, double t);

}  // namespace pfldg
