#pragma once

#include <Eigen/Core>
#include <Eigen/LU>

#include "pfldg/spaces.hpp"

namespace pfldg {

/// Thrown when the local moment matrix is singular to working precision.
class SingularMomentSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Moment degrees of freedom of the local Raviart-Thomas-Nedelec space
/// RTN_{k+1}(K) = P_k(K)^2 + x P~_k(K), of dimension (k+1)(k+3).
///
/// Interior moments integrate against the cell basis of P_{k-1}(K)^2 (x block
/// then y block); face moments integrate tau . n_E against the orthonormal
/// Legendre basis of P_k(E) on each element face E, with n_E the outward
/// normal of K and the face parametrised along the counterclockwise edge.
/// Fields are returned in the cell's Sigma_{k+1} block layout.
class RTNMomentSystem {
 public:
  RTNMomentSystem(const Discretization& disc, int cell, int k);

  int k() const { return k_; }
  int cell() const { return cell_; }
  int dimension() const { return (k_ + 1) * (k_ + 3); }
  int num_interior() const { return k_ * (k_ + 1); }
  int num_face() const { return 3 * (k_ + 1); }

  /// Unique tau in RTN_{k+1}(K) with the prescribed moments.
  Eigen::VectorXd reconstruct(const Eigen::VectorXd& interior_values,
                              const Eigen::VectorXd& face_values) const;

  /// Moment functionals applied to a Sigma_{k+1} block, stacked interior
  /// first then faces in local edge order.
  Eigen::VectorXd moments(const Eigen::VectorXd& block) const;

  /// Spanning set of RTN_{k+1}(K) in the Sigma_{k+1} block layout (columns).
  const Eigen::MatrixXd& spanning_set() const { return span_; }
  const Eigen::MatrixXd& moment_matrix() const { return moment_matrix_; }
  /// 2-norm condition number of the square moment matrix.
  double condition_number() const;

 private:
  const Discretization* disc_;
  int cell_;
  int k_;
  Eigen::MatrixXd functionals_;  // moments x Sigma_{k+1} block
  Eigen::MatrixXd span_;
  Eigen::MatrixXd moment_matrix_;
  Eigen::FullPivLU<Eigen::MatrixXd> lu_;
};

/// Convenience wrapper: reconstruct tau_K from its moments.
Eigen::VectorXd rtn_from_moments(const Discretization& disc, int cell, int k,
                                 const Eigen::VectorXd& interior_values,
                                 const Eigen::VectorXd& face_values);

}  // namespace pfldg
