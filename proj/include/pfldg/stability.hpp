#pragma once

#include <array>
#include <string>

#include <Eigen/SparseCore>

#include "pfldg/liftings.hpp"
#include "pfldg/report.hpp"
#include "pfldg/spaces.hpp"

namespace pfldg {

/// The mesh-dependent norm: value^2 = gradient_part + jump_part with
/// gradient_part = sum_K |grad u|^2_K and jump_part = sum_F h_F^-1 |[[u]]|^2_F
/// over all faces, boundary included.
struct Norm1h {
  double value = 0.0;
  double gradient_part = 0.0;
  double jump_part = 0.0;
};

Norm1h norm_1h(const DGScalarFunction& u);

/// Gram matrix of the squared 1,h-norm on V_{h,k}.
Eigen::SparseMatrix<double> norm_1h_matrix(const Discretization& disc, int k);

/// The test field of the lower-bound argument: on each cell, the RTN_{k+1}
/// field whose interior moments match grad u against P_{k-1}^2 and whose
/// face moments equal -h_F^-1 [[u]] (w.r.t. n_F) on element faces that are
/// mesh faces and vanish on element faces split by hanging nodes.
/// Throws NotFaceRegular on meshes that are not face regular.
DGVectorFunction build_tau(const DGScalarFunction& u);

/// ||tau||_{L2} / ||u||_{1,h}. Throws std::invalid_argument when u = 0.
double check_upper_bound(const DGScalarFunction& u, const DGVectorFunction& tau);

/// Pointwise check of {tau . n_F} = -c_F h_F^-1 [[u]] at the face quadrature
/// points, c_F = 1 for cases 1 and 2 and 1/2 for case 3.
struct CaseIdentityResult {
  double max_deviation = 0.0;
  double max_reference = 0.0;  ///< max |h_F^-1 [[u]]| seen, for scale
  std::array<int, 3> case_counts{};  ///< faces of case 1, 2, 3
};
CaseIdentityResult check_case_identity(const DGScalarFunction& u, const DGVectorFunction& tau);

/// Extremal values of ||G_h(u)|| / ||u||_{1,h} over V_{h,k}.
struct EquivalenceReport {
  double c_min = 0.0;
  double c_max = 0.0;
  std::string mesh;
  int k = 0;
  int ell = 0;
  int dofs = 0;
};

/// Singular values of M^{1/2} G L^{-T} with B = L L^T the 1,h Gram matrix;
/// equivalent to the generalized eigenproblem A x = lambda B x with
/// A = G^T M G, but accurate near c_min = 0.
EquivalenceReport equivalence_constants(const Discretization& disc, int k, int ell,
                                        const std::string& mesh_name = {});

/// Same constants from Eigen's generalized symmetric-definite eigensolver.
EquivalenceReport equivalence_constants_eig(const Discretization& disc, int k, int ell,
                                            const std::string& mesh_name = {});

/// sup ||u||_{L2} / ||u||_{1,h} over V_{h,k}.
double poincare_constant(const Discretization& disc, int k);

/// The piecewise-linear function on the criss-cross mesh whose equal-order
/// lifted gradient vanishes: y + 2/3, x - 2/3, -y + 2/3, -x - 2/3 on the
/// bottom, right, top and left cells.
DGScalarFunction counterexample_function(const Discretization& criss_cross);

/// Builds the criss-cross example and checks: vanishing averages on interior
/// faces, zero cell means, vanishing equal-order lifted gradient, and the
/// degree-(k+1) lower bound with the eigensolve constant.
ExperimentReport run_counterexample();

}  // namespace pfldg
