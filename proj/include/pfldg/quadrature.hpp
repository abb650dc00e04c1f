#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "pfldg/mesh.hpp"

namespace pfldg {

/// Rule on the reference triangle {(0,0),(1,0),(0,1)}; weights sum to 1/2.
struct TriangleRule {
  std::vector<Point> points;
  std::vector<double> weights;
  int exact_degree = 0;
};

/// Rule on the reference segment [0,1]; weights sum to 1.
struct SegmentRule {
  std::vector<double> points;
  std::vector<double> weights;
  int exact_degree = 0;
};

inline constexpr int kMaxQuadratureDegree = 20;

/// Throws std::invalid_argument outside 0 <= degree <= 20.
TriangleRule quad_triangle(int degree);
SegmentRule quad_segment(int degree);

/// Quadrature points and weights in physical coordinates.
struct PhysicalRule {
  std::vector<Point> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

/// Affine image of `rule` on the triangle with the given corners.
PhysicalRule map_rule(const TriangleRule& rule, const std::array<Point, 3>& corners);
/// Image of `rule` on the segment a -> b; weights carry the segment length.
PhysicalRule map_rule(const SegmentRule& rule, const Point& a, const Point& b);

}  // namespace pfldg
