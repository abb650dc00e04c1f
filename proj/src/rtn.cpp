#include "pfldg/rtn.hpp"

#include <string>

#include <Eigen/SVD>

namespace pfldg {

RTNMomentSystem::RTNMomentSystem(const Discretization& disc, int cell, int k)
    : disc_(&disc), cell_(cell), k_(k) {
  if (k < 1) throw std::invalid_argument("RTN moments need k >= 1");
  if (k + 1 > disc.max_degree()) {
    throw std::invalid_argument("discretization degree too low for RTN_" + std::to_string(k + 1));
  }
  const Mesh& mesh = disc.mesh();
  const ScalarBasis& basis = disc.basis(cell);
  const int n = dim_poly(k + 1);
  const int n_int = dim_poly(k - 1);
  const Eigen::MatrixXd mass = disc.mass(cell, k + 1);

  functionals_ = Eigen::MatrixXd::Zero(dimension(), 2 * n);
  for (int comp = 0; comp < 2; ++comp) {
    functionals_.block(comp * n_int, comp * n, n_int, n) = mass.topRows(n_int);
  }
  const SegmentRule& seg = disc.face_reference_rule();
  for (int e = 0; e < 3; ++e) {
    const auto [i, j] = mesh.edge(cell, e);
    const Point a = mesh.vertices()[i];
    const Point b = mesh.vertices()[j];
    const double len = (b - a).norm();
    const Point normal = mesh.outward_normal(cell, e);
    const int row = num_interior() + e * (k + 1);
    for (std::size_t q = 0; q < seg.points.size(); ++q) {
      const double t = seg.points[q];
      const double w = seg.weights[q] * len;
      const Eigen::VectorXd v = segment_basis(k, len, t);
      const Eigen::VectorXd phi = basis.eval(a + t * (b - a)).head(n);
      for (int comp = 0; comp < 2; ++comp) {
        functionals_.block(row, comp * n, k + 1, n) += (w * normal[comp]) * v * phi.transpose();
      }
    }
  }

  // P_k^2 is a prefix of each component block; the x p(x) members are
  // projected, which is exact since they lie in P_{k+1}^2.
  span_ = Eigen::MatrixXd::Zero(2 * n, dimension());
  const int nk = dim_poly(k);
  for (int comp = 0; comp < 2; ++comp) {
    for (int j = 0; j < nk; ++j) span_(comp * n + j, comp * nk + j) = 1.0;
  }
  const HomogeneousBasis hom(k, mesh.centroid(cell), mesh.diameter(cell));
  const PhysicalRule& rule = disc.cell_rule(cell);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(2 * n, k + 1);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Point& x = rule.points[q];
    const Point xi = (x - hom.center()) / hom.scale();
    const Eigen::VectorXd p = hom.eval(x);
    const Eigen::VectorXd phi = disc.cell_values(cell).col(q).head(n);
    for (int comp = 0; comp < 2; ++comp) {
      rhs.middleRows(comp * n, n) += (rule.weights[q] * xi[comp]) * phi * p.transpose();
    }
  }
  const auto llt = mass.llt();
  for (int comp = 0; comp < 2; ++comp) {
    span_.block(comp * n, 2 * nk, n, k + 1) = llt.solve(rhs.middleRows(comp * n, n));
  }

  moment_matrix_ = functionals_ * span_;
  lu_.compute(moment_matrix_);
  if (!lu_.isInvertible()) {
    throw SingularMomentSystem("RTN moment matrix is singular on cell " + std::to_string(cell));
  }
}

Eigen::VectorXd RTNMomentSystem::reconstruct(const Eigen::VectorXd& interior,
                                             const Eigen::VectorXd& face) const {
  if (interior.size() != num_interior() || face.size() != num_face()) {
    throw std::invalid_argument("moment vectors do not match the RTN moment system");
  }
  Eigen::VectorXd values(dimension());
  values << interior, face;
  return span_ * lu_.solve(values);
}

Eigen::VectorXd RTNMomentSystem::moments(const Eigen::VectorXd& block) const {
  return functionals_ * block;
}

double RTNMomentSystem::condition_number() const {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(moment_matrix_);
  const auto& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

Eigen::VectorXd rtn_from_moments(const Discretization& disc, int cell, int k,
                                 const Eigen::VectorXd& interior_values,
                                 const Eigen::VectorXd& face_values) {
  return RTNMomentSystem(disc, cell, k).reconstruct(interior_values, face_values);
}

}  // namespace pfldg
