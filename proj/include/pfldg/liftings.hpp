#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "pfldg/spaces.hpp"

namespace pfldg {

/// Scalar data on the skeleton: per face, values at the discretization's face
/// quadrature points.
struct FaceData {
  std::vector<Eigen::VectorXd> values;

  static FaceData zeros(const Discretization& disc);
};

/// Jump and average at reference points t of face f. On boundary faces both
/// reduce to the exterior trace.
Eigen::VectorXd jump(const DGScalarFunction& u, int f, std::span<const double> t);
Eigen::VectorXd average(const DGScalarFunction& u, int f, std::span<const double> t);
Eigen::Matrix2Xd jump(const DGVectorFunction& sigma, int f, std::span<const double> t);
Eigen::Matrix2Xd average(const DGVectorFunction& sigma, int f, std::span<const double> t);

/// Jumps of u on every face, sampled at the face quadrature points.
FaceData jumps(const DGScalarFunction& u);
/// Jumps of sigma . n_F on every face, sampled at the face quadrature points.
FaceData normal_jumps(const DGVectorFunction& sigma);

/// Vector lifting into Sigma_{h,l}:
///   int r(phi) . sigma = sum over all faces of int_F phi {sigma . n_F}.
/// Solved cell by cell with the local mass matrix.
DGVectorFunction lift_vector(const FaceData& phi, const Discretization& disc, int ell);

/// Scalar lifting into V_{h,k}:
///   int r(phi) v = sum over interior faces of int_F phi {v}.
/// Boundary entries of phi are ignored.
DGScalarFunction lift_scalar(const FaceData& phi, const Discretization& disc, int k);

/// G_h(u) = grad_h u - r_l([[u]]) in Sigma_{h,l}.
DGVectorFunction lifted_gradient(const DGScalarFunction& u, int ell);
inline DGVectorFunction lifted_gradient(const DGScalarFunction& u) {
  return lifted_gradient(u, u.degree() + 1);
}

/// D_h(sigma) = div_h sigma - r([[sigma . n_F]]) in V_{h,k}; k defaults to
/// sigma.degree() - 1.
DGScalarFunction lifted_divergence(const DGVectorFunction& sigma, int k);
inline DGScalarFunction lifted_divergence(const DGVectorFunction& sigma) {
  return lifted_divergence(sigma, sigma.degree() - 1);
}

/// Matrix of G_h : V_{h,k} -> Sigma_{h,l} in the coefficient layouts of
/// DGScalarFunction / DGVectorFunction.
Eigen::SparseMatrix<double> lifted_gradient_matrix(const Discretization& disc, int k, int ell);

/// Matrix of D_h : Sigma_{h,k+1} -> V_{h,k}.
Eigen::SparseMatrix<double> lifted_divergence_matrix(const Discretization& disc, int k);

/// Block-diagonal mass matrix of Sigma_{h,l}.
Eigen::SparseMatrix<double> vector_mass_matrix(const Discretization& disc, int ell);
/// Block-diagonal mass matrix of V_{h,k}.
Eigen::SparseMatrix<double> scalar_mass_matrix(const Discretization& disc, int k);

}  // namespace pfldg
