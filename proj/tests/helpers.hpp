#pragma once

#include <random>

#include <Eigen/LU>

#include "pfldg/experiments.hpp"

namespace pfldg::test {

inline std::mt19937_64 rng(std::uint64_t seed = 7) { return std::mt19937_64(seed); }

/// P1 nodal interpolant of a vertex function, stored in the cell bases.
inline DGScalarFunction interpolate_p1(const Discretization& disc,
                                       const std::function<double(const Point&)>& f) {
  return l2_project(
      disc,
      CellwiseField([&](int cell, const Point& x) {
        const auto c = disc.mesh().corners(cell);
        Eigen::Matrix3d a;
        for (int i = 0; i < 3; ++i) a.row(i) << 1.0, c[i].x(), c[i].y();
        const Eigen::Vector3d vals(f(c[0]), f(c[1]), f(c[2]));
        const Eigen::Vector3d coef = a.partialPivLu().solve(vals);
        return coef[0] + coef[1] * x.x() + coef[2] * x.y();
      }),
      1);
}

}  // namespace pfldg::test
