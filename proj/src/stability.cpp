#include "pfldg/stability.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "pfldg/rtn.hpp"

namespace pfldg {

namespace {

Eigen::VectorXd weights_of(const PhysicalRule& rule) {
  return Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), rule.weights.size());
}

}  // namespace

Norm1h norm_1h(const DGScalarFunction& u) {
  const Discretization& disc = u.discretization();
  const int n = u.block_size();
  Norm1h norm;
  for (int c = 0; c < disc.num_cells(); ++c) {
    const Eigen::VectorXd w = weights_of(disc.cell_rule(c));
    const auto& grads = disc.cell_gradients(c);
    for (int comp = 0; comp < 2; ++comp) {
      const Eigen::VectorXd d = grads[comp].topRows(n).transpose() * u.block(c);
      norm.gradient_part += w.dot(d.cwiseAbs2());
    }
  }
  const FaceData jmp = jumps(u);
  for (int f = 0; f < disc.num_faces(); ++f) {
    const Eigen::VectorXd w = weights_of(disc.face_rule(f));
    norm.jump_part += w.dot(jmp.values[f].cwiseAbs2()) / disc.face(f).length;
  }
  norm.value = std::sqrt(norm.gradient_part + norm.jump_part);
  return norm;
}

Eigen::SparseMatrix<double> norm_1h_matrix(const Discretization& disc, int k) {
  const int n = dim_poly(k);
  std::vector<Eigen::Triplet<double>> triplets;
  auto emit = [&](int row_cell, int col_cell, const Eigen::MatrixXd& block) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) triplets.emplace_back(row_cell * n + i, col_cell * n + j, block(i, j));
    }
  };
  for (int c = 0; c < disc.num_cells(); ++c) {
    const Eigen::VectorXd w = weights_of(disc.cell_rule(c));
    const auto& grads = disc.cell_gradients(c);
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(n, n);
    for (int comp = 0; comp < 2; ++comp) {
      const auto g = grads[comp].topRows(n);
      block += g * w.asDiagonal() * g.transpose();
    }
    emit(c, c, block);
  }
  for (int f = 0; f < disc.num_faces(); ++f) {
    const Face& face = disc.face(f);
    const Eigen::VectorXd w = weights_of(disc.face_rule(f)) / face.length;
    std::vector<std::pair<int, double>> sides{{face.ext_cell, 1.0}};
    if (face.interior()) sides.emplace_back(*face.int_cell, -1.0);
    for (const auto& [ci, si] : sides) {
      const Eigen::MatrixXd pi = disc.face_values(f, ci).topRows(n);
      for (const auto& [cj, sj] : sides) {
        const Eigen::MatrixXd pj = disc.face_values(f, cj).topRows(n);
        emit(ci, cj, (si * sj) * pi * w.asDiagonal() * pj.transpose());
      }
    }
  }
  const int size = disc.num_cells() * n;
  Eigen::SparseMatrix<double> b(size, size);
  b.setFromTriplets(triplets.begin(), triplets.end());
  return b;
}

DGVectorFunction build_tau(const DGScalarFunction& u) {
  const Discretization& disc = u.discretization();
  if (!disc.face_regular()) throw NotFaceRegular();
  const int k = u.degree();
  const Mesh& mesh = disc.mesh();
  const SegmentRule& seg = disc.face_reference_rule();
  const int n_int = dim_poly(k - 1);

  DGVectorFunction tau(disc, k + 1);
  for (int c = 0; c < disc.num_cells(); ++c) {
    const RTNMomentSystem rtn(disc, c, k);

    Eigen::VectorXd interior(rtn.num_interior());
    const Eigen::VectorXd w = weights_of(disc.cell_rule(c));
    const auto& grads = disc.cell_gradients(c);
    const auto mu = disc.cell_values(c).topRows(n_int);
    for (int comp = 0; comp < 2; ++comp) {
      const Eigen::VectorXd d = grads[comp].topRows(u.block_size()).transpose() * u.block(c);
      interior.segment(comp * n_int, n_int) = mu * w.cwiseProduct(d);
    }

    Eigen::VectorXd face_values = Eigen::VectorXd::Zero(rtn.num_face());
    for (int e = 0; e < 3; ++e) {
      const int f = disc.element_face(c, e);
      if (f < 0) continue;
      const Face& face = disc.face(f);
      // Moments are stated w.r.t. n_F; the system uses the outward normal.
      const double sign = face.ext_cell == c ? 1.0 : -1.0;
      const auto [i, j] = mesh.edge(c, e);
      const Point a = mesh.vertices()[i];
      const Point b = mesh.vertices()[j];
      const double len = (b - a).norm();
      for (std::size_t q = 0; q < seg.points.size(); ++q) {
        const double t = seg.points[q];
        const Point x = a + t * (b - a);
        double jmp = u.value(face.ext_cell, x);
        if (face.interior()) jmp -= u.value(*face.int_cell, x);
        face_values.segment(e * (k + 1), k + 1) +=
            (sign * -jmp / face.length * seg.weights[q] * len) * segment_basis(k, len, t);
      }
    }
    tau.block(c) = rtn.reconstruct(interior, face_values);
  }
  return tau;
}

double check_upper_bound(const DGScalarFunction& u, const DGVectorFunction& tau) {
  const double denom = norm_1h(u).value;
  if (denom == 0.0) throw std::invalid_argument("upper-bound ratio undefined for u = 0");
  return l2_norm(tau) / denom;
}

CaseIdentityResult check_case_identity(const DGScalarFunction& u, const DGVectorFunction& tau) {
  const Discretization& disc = u.discretization();
  const auto& t = disc.face_reference_rule().points;
  CaseIdentityResult result;
  for (int f = 0; f < disc.num_faces(); ++f) {
    const Face& face = disc.face(f);
    double factor = 1.0;
    switch (face.kind) {
      case FaceCase::boundary: ++result.case_counts[0]; break;
      case FaceCase::both_regular: ++result.case_counts[1]; break;
      case FaceCase::one_regular:
        ++result.case_counts[2];
        factor = 0.5;
        break;
      case FaceCase::irregular: throw NotFaceRegular();
    }
    const Eigen::Matrix2Xd avg = average(tau, f, t);
    const Eigen::VectorXd avg_n = face.normal.transpose() * avg;
    const Eigen::VectorXd expected = -factor / face.length * jump(u, f, t);
    result.max_deviation = std::max(result.max_deviation, (avg_n - expected).cwiseAbs().maxCoeff());
    result.max_reference =
        std::max(result.max_reference, (expected / factor).cwiseAbs().maxCoeff());
  }
  return result;
}

namespace {

// Rows L_c^T G for each cell so that |W u|^2 = int |G_h u|^2.
Eigen::MatrixXd weighted_gradient(const Discretization& disc, int k, int ell) {
  const Eigen::MatrixXd g = Eigen::MatrixXd(lifted_gradient_matrix(disc, k, ell));
  const int ns = dim_poly(ell);
  Eigen::MatrixXd w(g.rows(), g.cols());
  for (int c = 0; c < disc.num_cells(); ++c) {
    const Eigen::LLT<Eigen::MatrixXd> llt(disc.mass(c, ell));
    const Eigen::MatrixXd upper = llt.matrixU();
    for (int comp = 0; comp < 2; ++comp) {
      const int row = c * 2 * ns + comp * ns;
      w.middleRows(row, ns) = upper * g.middleRows(row, ns);
    }
  }
  return w;
}

}  // namespace

EquivalenceReport equivalence_constants(const Discretization& disc, int k, int ell,
                                        const std::string& mesh_name) {
  Eigen::MatrixXd w = weighted_gradient(disc, k, ell);
  const Eigen::LLT<Eigen::MatrixXd> b(Eigen::MatrixXd(norm_1h_matrix(disc, k)));
  if (b.info() != Eigen::Success) {
    throw std::runtime_error("1,h Gram matrix is singular (assembly error)");
  }
  // w <- w L^{-T}
  const Eigen::MatrixXd wt = b.matrixL().solve(w.transpose());
  Eigen::BDCSVD<Eigen::MatrixXd> svd(wt.transpose());
  const auto& s = svd.singularValues();
  EquivalenceReport r;
  r.c_max = s(0);
  r.c_min = s(s.size() - 1);
  r.mesh = mesh_name;
  r.k = k;
  r.ell = ell;
  r.dofs = static_cast<int>(wt.rows());
  return r;
}

EquivalenceReport equivalence_constants_eig(const Discretization& disc, int k, int ell,
                                            const std::string& mesh_name) {
  const Eigen::MatrixXd w = weighted_gradient(disc, k, ell);
  const Eigen::MatrixXd a = w.transpose() * w;
  const Eigen::MatrixXd b = Eigen::MatrixXd(norm_1h_matrix(disc, k));
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, b, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("generalized eigensolve failed");
  }
  const auto& lambda = eig.eigenvalues();
  EquivalenceReport r;
  r.c_min = std::sqrt(std::max(lambda(0), 0.0));
  r.c_max = std::sqrt(std::max(lambda(lambda.size() - 1), 0.0));
  r.mesh = mesh_name;
  r.k = k;
  r.ell = ell;
  r.dofs = static_cast<int>(a.rows());
  return r;
}

double poincare_constant(const Discretization& disc, int k) {
  const Eigen::MatrixXd m = Eigen::MatrixXd(scalar_mass_matrix(disc, k));
  const Eigen::MatrixXd b = Eigen::MatrixXd(norm_1h_matrix(disc, k));
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, b, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw std::runtime_error("generalized eigensolve failed");
  return std::sqrt(eig.eigenvalues().maxCoeff());
}

DGScalarFunction counterexample_function(const Discretization& disc) {
  const Mesh& mesh = disc.mesh();
  return l2_project(
      disc,
      CellwiseField([&](int c, const Point& x) {
        const Point m = mesh.centroid(c);
        if (std::abs(m.y()) > std::abs(m.x())) {
          return m.y() < 0 ? x.y() + 2.0 / 3.0 : -x.y() + 2.0 / 3.0;
        }
        return m.x() > 0 ? x.x() - 2.0 / 3.0 : -x.x() - 2.0 / 3.0;
      }),
      1);
}

ExperimentReport run_counterexample() {
  const Discretization disc(builtin_mesh("criss_cross"), 2);
  const DGScalarFunction u = counterexample_function(disc);

  ExperimentReport report;
  report.experiment = "counterexample";
  report.mesh = "criss_cross";
  report.k = 1;
  report.ell = 2;

  const auto& t = disc.face_reference_rule().points;
  double max_average = 0.0;
  for (int f = 0; f < disc.num_faces(); ++f) {
    if (!disc.face(f).interior()) continue;
    max_average = std::max(max_average, average(u, f, t).cwiseAbs().maxCoeff());
  }
  double max_mean = 0.0;
  for (int c = 0; c < disc.num_cells(); ++c) {
    const PhysicalRule& rule = disc.cell_rule(c);
    double integral = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      integral += rule.weights[q] * u.value(c, rule.points[q]);
    }
    max_mean = std::max(max_mean, std::abs(integral));
  }
  const double norm = norm_1h(u).value;
  const double equal_order = l2_norm(lifted_gradient(u, 1));
  const double raised = l2_norm(lifted_gradient(u, 2));
  const EquivalenceReport eq = equivalence_constants(disc, 1, 2, "criss_cross");
  const EquivalenceReport eq_equal = equivalence_constants(disc, 1, 1, "criss_cross");

  report.c_min = eq.c_min;
  report.c_max = eq.c_max;
  report.checks.push_back(Check::at_most("average_vanishes_on_interior_faces", max_average, 1e-13));
  report.checks.push_back(Check::at_most("cell_means_vanish", max_mean, 1e-13));
  report.checks.push_back(
      Check::at_most("equal_order_lifted_gradient_vanishes", equal_order / norm, 1e-10));
  report.checks.push_back(
      Check::at_least("raised_order_lower_bound", raised / norm, eq.c_min * (1.0 - 1e-10)));
  report.metrics["norm_1h"] = norm;
  report.metrics["equal_order_lifted_gradient_l2"] = equal_order;
  report.metrics["raised_order_lifted_gradient_l2"] = raised;
  report.metrics["c_min_equal_order"] = eq_equal.c_min;
  report.metrics["c_max_equal_order"] = eq_equal.c_max;

  report.csv_header = {"check", "value", "threshold", "pass"};
  for (const auto& c : report.checks) {
    report.csv_rows.push_back({c.name, format_number(c.value), format_number(c.threshold),
                               c.pass ? "1" : "0"});
  }
  return report;
}

}  // namespace pfldg
