#include "pfldg/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace pfldg {

namespace {

void check_degree(int degree) {
  if (degree < 0 || degree > kMaxQuadratureDegree) {
    throw std::invalid_argument("unsupported quadrature degree " + std::to_string(degree));
  }
}

// Golub-Welsch for Gauss-Legendre, mapped to [0,1].
SegmentRule gauss_legendre(int n) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  SegmentRule rule;
  rule.exact_degree = 2 * n - 1;
  for (int i = 0; i < n; ++i) {
    const double v0 = eig.eigenvectors()(0, i);
    rule.points.push_back(0.5 * (eig.eigenvalues()(i) + 1.0));
    rule.weights.push_back(v0 * v0);
  }
  return rule;
}

}  // namespace

SegmentRule quad_segment(int degree) {
  check_degree(degree);
  SegmentRule rule = gauss_legendre(degree / 2 + 1);
  rule.exact_degree = degree;
  return rule;
}

TriangleRule quad_triangle(int degree) {
  check_degree(degree);
  // Collapsed map x = u (1 - v), y = v with Jacobian (1 - v), which raises
  // the degree in v by one.
  const int n = (degree + 2 + 1) / 2;
  const SegmentRule g = gauss_legendre(n);
  TriangleRule rule;
  rule.exact_degree = degree;
  for (int j = 0; j < n; ++j) {
    const double v = g.points[j];
    for (int i = 0; i < n; ++i) {
      const double u = g.points[i];
      rule.points.emplace_back(u * (1.0 - v), v);
      rule.weights.push_back(g.weights[i] * g.weights[j] * (1.0 - v));
    }
  }
  return rule;
}

PhysicalRule map_rule(const TriangleRule& rule, const std::array<Point, 3>& p) {
  const Point e1 = p[1] - p[0];
  const Point e2 = p[2] - p[0];
  const double det = std::abs(e1.x() * e2.y() - e1.y() * e2.x());
  PhysicalRule out;
  out.points.reserve(rule.points.size());
  out.weights.reserve(rule.points.size());
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const Point& r = rule.points[q];
    out.points.push_back(p[0] + r.x() * e1 + r.y() * e2);
    out.weights.push_back(rule.weights[q] * det);
  }
  return out;
}

PhysicalRule map_rule(const SegmentRule& rule, const Point& a, const Point& b) {
  const double len = (b - a).norm();
  PhysicalRule out;
  out.points.reserve(rule.points.size());
  out.weights.reserve(rule.points.size());
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    out.points.push_back(a + rule.points[q] * (b - a));
    out.weights.push_back(rule.weights[q] * len);
  }
  return out;
}

}  // namespace pfldg
