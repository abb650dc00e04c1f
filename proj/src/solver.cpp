#include "pfldg/solver.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "pfldg/liftings.hpp"
#include "pfldg/stability.hpp"

namespace pfldg {

StiffnessSystem assemble(const Discretization& disc, int k, const ScalarField& f) {
  if (k < 1 || k > 4) throw std::invalid_argument("k must lie in [1, 4]");
  if (k + 1 > disc.max_degree()) {
    throw std::invalid_argument("discretization degree too low for the k+1 lifting");
  }
  if (!disc.face_regular()) throw NotFaceRegular();

  StiffnessSystem sys;
  sys.disc = &disc;
  sys.k = k;
  sys.gradient = lifted_gradient_matrix(disc, k, k + 1);
  sys.sigma_mass = vector_mass_matrix(disc, k + 1);
  sys.matrix = sys.gradient.transpose() * sys.sigma_mass * sys.gradient;
  sys.matrix.prune(0.0);

  const int n = dim_poly(k);
  sys.load = Eigen::VectorXd::Zero(disc.num_cells() * n);
  for (int c = 0; c < disc.num_cells(); ++c) {
    const PhysicalRule& rule = disc.cell_rule(c);
    const auto phi = disc.cell_values(c).topRows(n);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      sys.load.segment(c * n, n) += rule.weights[q] * f(rule.points[q]) * phi.col(q);
    }
  }
  return sys;
}

SolveResult solve(const StiffnessSystem& sys, LinearSolver method) {
  const double target = 1e-10;
  const double bnorm = sys.load.norm();
  SolveResult result{DGScalarFunction(*sys.disc, sys.k), 0.0, 0};
  if (bnorm == 0.0) return result;

  Eigen::VectorXd x;
  if (method == LinearSolver::direct) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(sys.matrix);
    if (ldlt.info() != Eigen::Success) throw std::runtime_error("LDL^T factorization failed");
    if ((ldlt.vectorD().array() <= 0.0).any()) {
      throw std::runtime_error("stiffness matrix is not positive definite");
    }
    x = ldlt.solve(sys.load);
    result.iterations = 1;
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg(sys.matrix);
    cg.setTolerance(target * 1e-2);
    cg.setMaxIterations(10 * static_cast<int>(sys.load.size()));
    x = cg.solve(sys.load);
    result.iterations = static_cast<int>(cg.iterations());
  }
  result.relative_residual = (sys.matrix * x - sys.load).norm() / bnorm;
  if (!(result.relative_residual <= target)) {
    throw std::runtime_error("linear solve did not reach the residual target");
  }
  result.solution.coefficients() = std::move(x);
  return result;
}

namespace {

template <typename Fn>
double max_over_samples(const Discretization& disc, Fn&& value) {
  double m = 0.0;
  for (int c = 0; c < disc.num_cells(); ++c) {
    for (const Point& x : disc.cell_rule(c).points) m = std::max(m, std::abs(value(c, x)));
    for (const Point& x : disc.mesh().corners(c)) m = std::max(m, std::abs(value(c, x)));
  }
  return m;
}

}  // namespace

double max_abs(const DGScalarFunction& u) {
  return max_over_samples(u.discretization(), [&](int c, const Point& x) { return u.value(c, x); });
}

double strong_form_residual(const DGScalarFunction& u, const ScalarField& f) {
  const Discretization& disc = u.discretization();
  const int k = u.degree();
  DGScalarFunction r = lifted_divergence(lifted_gradient(u, k + 1), k);
  r.coefficients() = -r.coefficients() - l2_project(disc, f, k).coefficients();
  return max_abs(r);
}

ManufacturedSolution manufactured_solution(const std::string& name) {
  using std::numbers::pi;
  if (name == "sinsin") {
    return {name,
            [](const Point& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); },
            [](const Point& x) {
              return Point(pi * std::cos(pi * x.x()) * std::sin(pi * x.y()),
                           pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
            },
            [](const Point& x) { return 2.0 * pi * pi * std::sin(pi * x.x()) * std::sin(pi * x.y()); }};
  }
  if (name == "zero") {
    return {name, [](const Point&) { return 0.0; }, [](const Point&) { return Point(0.0, 0.0); },
            [](const Point&) { return 0.0; }};
  }
  if (name == "one") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {name, [nan](const Point&) { return nan; }, [nan](const Point&) { return Point(nan, nan); },
            [](const Point&) { return 1.0; }};
  }
  throw std::invalid_argument("unknown manufactured solution '" + name + "'");
}

ErrorReport compute_errors(const DGScalarFunction& u, const ManufacturedSolution& exact) {
  const Discretization& disc = u.discretization();
  const Mesh& mesh = disc.mesh();
  const int degree = std::min(2 * (u.degree() + 2) + 4, kMaxQuadratureDegree);
  const TriangleRule tri = quad_triangle(degree);
  const SegmentRule seg = quad_segment(degree);

  ErrorReport e;
  double l2 = 0.0, h1 = 0.0, jumps = 0.0;
  for (int c = 0; c < disc.num_cells(); ++c) {
    const PhysicalRule rule = map_rule(tri, mesh.corners(c));
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Point& x = rule.points[q];
      const double d = exact.u(x) - u.value(c, x);
      l2 += rule.weights[q] * d * d;
      h1 += rule.weights[q] * (exact.gradient(x) - u.gradient(c, x)).squaredNorm();
    }
  }
  for (const Face& face : disc.faces()) {
    const PhysicalRule rule = map_rule(seg, face.a, face.b);
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Point& x = rule.points[q];
      double d = exact.u(x) - u.value(face.ext_cell, x);
      if (face.interior()) d -= exact.u(x) - u.value(*face.int_cell, x);
      sum += rule.weights[q] * d * d;
    }
    jumps += sum / face.length;
  }
  e.err_l2 = std::sqrt(l2);
  e.err_h1_broken = std::sqrt(h1);
  e.err_1h = std::sqrt(h1 + jumps);
  e.h = mesh.h();
  e.dofs = static_cast<int>(u.coefficients().size());
  return e;
}

ConvergenceStudy convergence_study(int levels, int k, const ManufacturedSolution& exact, int n0) {
  if (levels < 1) throw std::invalid_argument("convergence study needs at least one level");
  ConvergenceStudy study;
  study.k = k;
  for (int level = 0; level < levels; ++level) {
    const int n = n0 << level;
    const Discretization disc(unit_square(n), k + 1);
    const StiffnessSystem sys = assemble(disc, k, exact.f);
    const SolveResult sol = solve(sys);
    study.subdivisions.push_back(n);
    study.errors.push_back(compute_errors(sol.solution, exact));
    study.residuals.push_back(sol.relative_residual);
    if (level > 0) {
      const ErrorReport& a = study.errors[level - 1];
      const ErrorReport& b = study.errors[level];
      study.rate_l2.push_back(std::log2(a.err_l2 / b.err_l2));
      study.rate_h1.push_back(std::log2(a.err_h1_broken / b.err_h1_broken));
    }
  }
  return study;
}

}  // namespace pfldg
