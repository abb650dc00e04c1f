#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "pfldg/spaces.hpp"

namespace pfldg {

/// a_h(u, v) = int G_h(u) . G_h(v) with the degree-(k+1) lifting, and the
/// load vector b_i = int f phi_i. There are no face penalty terms.
struct StiffnessSystem {
  const Discretization* disc = nullptr;
  int k = 0;
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd load;
  /// Lifted-gradient operator and Sigma_{h,k+1} mass used to form the matrix.
  Eigen::SparseMatrix<double> gradient;
  Eigen::SparseMatrix<double> sigma_mass;
};

/// Throws NotFaceRegular when the mesh is not face regular and
/// std::invalid_argument for k outside [1, 4] or a discretization of too low
/// degree.
StiffnessSystem assemble(const Discretization& disc, int k, const ScalarField& f);

enum class LinearSolver { direct, cg };

struct SolveResult {
  DGScalarFunction solution;
  double relative_residual = 0.0;
  int iterations = 0;
};

/// Sparse LDL^T by default; CG uses Jacobi preconditioning. Both target a
/// relative residual of 1e-10 and throw std::runtime_error otherwise.
SolveResult solve(const StiffnessSystem& system, LinearSolver method = LinearSolver::direct);

/// max over cells of max_x |-D_h(G_h(u))(x) - (Pi_h^k f)(x)|, sampled at
/// the cell quadrature points and vertices.
double strong_form_residual(const DGScalarFunction& u, const ScalarField& f);

/// Largest absolute value of a discrete function over the same sample points.
double max_abs(const DGScalarFunction& u);

struct ManufacturedSolution {
  std::string name;
  ScalarField u;
  std::function<Point(const Point&)> gradient;
  ScalarField f;
};

/// Names: sinsin (u = sin(pi x) sin(pi y) on the unit square), zero, one
/// (f = 1 with unknown exact solution; u and gradient are NaN).
ManufacturedSolution manufactured_solution(const std::string& name);

struct ErrorReport {
  double err_l2 = 0.0;
  double err_h1_broken = 0.0;
  double err_1h = 0.0;
  double h = 0.0;
  int dofs = 0;
};

/// Errors against the exact solution with rules of degree 2(k+2)+4.
ErrorReport compute_errors(const DGScalarFunction& u, const ManufacturedSolution& exact);

struct ConvergenceStudy {
  int k = 0;
  std::vector<int> subdivisions;
  std::vector<ErrorReport> errors;
  /// log2(e_i / e_{i+1}); entry i belongs to level i + 1.
  std::vector<double> rate_l2;
  std::vector<double> rate_h1;
  std::vector<double> residuals;
};

/// Solves on unit_square(n0), unit_square(2 n0), ... (`levels` meshes).
ConvergenceStudy convergence_study(int levels, int k, const ManufacturedSolution& exact, int n0 = 2);

}  // namespace pfldg
