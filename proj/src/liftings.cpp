#include "pfldg/liftings.hpp"

#include <map>
#include <string>

#include <Eigen/Cholesky>

namespace pfldg {

namespace {

// Weight of a face in the average {.}: one half on interior faces.
double average_weight(const Face& face) { return face.interior() ? 0.5 : 1.0; }

Eigen::VectorXd trace(const DGScalarFunction& u, int f, int cell) {
  const Discretization& disc = u.discretization();
  return disc.face_values(f, cell).topRows(u.block_size()).transpose() * u.block(cell);
}

// sigma . n_F on face f from `cell`.
Eigen::VectorXd normal_trace(const DGVectorFunction& s, int f, int cell) {
  const Discretization& disc = s.discretization();
  const Point& n = disc.face(f).normal;
  const int m = s.component_size();
  const Eigen::MatrixXd phi = disc.face_values(f, cell).topRows(m);
  const auto b = s.block(cell);
  return phi.transpose() * (n.x() * b.head(m) + n.y() * b.tail(m));
}

Eigen::VectorXd weights_of(const PhysicalRule& rule) {
  return Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), rule.weights.size());
}

// Dense blocks of a cell-blocked operator, keyed by (row cell, column cell).
class BlockAccumulator {
 public:
  BlockAccumulator(int row_block, int col_block) : rows_(row_block), cols_(col_block) {}

  Eigen::MatrixXd& at(int row_cell, int col_cell) {
    auto [it, inserted] = blocks_.try_emplace({row_cell, col_cell});
    if (inserted) it->second = Eigen::MatrixXd::Zero(rows_, cols_);
    return it->second;
  }

  // Left-multiplies every block in block-row c by solve(c), then emits the
  // global matrix.
  template <typename Solve>
  Eigen::SparseMatrix<double> finish(int num_cells, Solve&& solve) {
    std::vector<Eigen::Triplet<double>> triplets;
    for (auto& [key, block] : blocks_) {
      const Eigen::MatrixXd local = solve(key.first, block);
      for (int j = 0; j < cols_; ++j) {
        for (int i = 0; i < rows_; ++i) {
          if (local(i, j) != 0.0) {
            triplets.emplace_back(key.first * rows_ + i, key.second * cols_ + j, local(i, j));
          }
        }
      }
    }
    Eigen::SparseMatrix<double> m(num_cells * rows_, num_cells * cols_);
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
  }

 private:
  int rows_, cols_;
  std::map<std::pair<int, int>, Eigen::MatrixXd> blocks_;
};

}  // namespace

FaceData FaceData::zeros(const Discretization& disc) {
  FaceData d;
  const auto nq = static_cast<Eigen::Index>(disc.face_reference_rule().points.size());
  d.values.assign(disc.num_faces(), Eigen::VectorXd::Zero(nq));
  return d;
}

Eigen::VectorXd jump(const DGScalarFunction& u, int f, std::span<const double> t) {
  const Face& face = u.discretization().face(f);
  Eigen::VectorXd v = eval_on_face(u, f, Side::exterior, t);
  if (face.interior()) v -= eval_on_face(u, f, Side::interior, t);
  return v;
}

Eigen::VectorXd average(const DGScalarFunction& u, int f, std::span<const double> t) {
  const Face& face = u.discretization().face(f);
  Eigen::VectorXd v = eval_on_face(u, f, Side::exterior, t);
  if (face.interior()) v = 0.5 * (v + eval_on_face(u, f, Side::interior, t));
  return v;
}

Eigen::Matrix2Xd jump(const DGVectorFunction& s, int f, std::span<const double> t) {
  const Face& face = s.discretization().face(f);
  Eigen::Matrix2Xd v = eval_on_face(s, f, Side::exterior, t);
  if (face.interior()) v -= eval_on_face(s, f, Side::interior, t);
  return v;
}

Eigen::Matrix2Xd average(const DGVectorFunction& s, int f, std::span<const double> t) {
  const Face& face = s.discretization().face(f);
  Eigen::Matrix2Xd v = eval_on_face(s, f, Side::exterior, t);
  if (face.interior()) v = 0.5 * (v + eval_on_face(s, f, Side::interior, t));
  return v;
}

FaceData jumps(const DGScalarFunction& u) {
  const Discretization& disc = u.discretization();
  FaceData d;
  d.values.reserve(disc.num_faces());
  for (int f = 0; f < disc.num_faces(); ++f) {
    const Face& face = disc.face(f);
    Eigen::VectorXd v = trace(u, f, face.ext_cell);
    if (face.interior()) v -= trace(u, f, *face.int_cell);
    d.values.push_back(std::move(v));
  }
  return d;
}

FaceData normal_jumps(const DGVectorFunction& s) {
  const Discretization& disc = s.discretization();
  FaceData d;
  d.values.reserve(disc.num_faces());
  for (int f = 0; f < disc.num_faces(); ++f) {
    const Face& face = disc.face(f);
    Eigen::VectorXd v = normal_trace(s, f, face.ext_cell);
    if (face.interior()) v -= normal_trace(s, f, *face.int_cell);
    d.values.push_back(std::move(v));
  }
  return d;
}

DGVectorFunction lift_vector(const FaceData& phi, const Discretization& disc, int ell) {
  if (static_cast<int>(phi.values.size()) != disc.num_faces()) {
    throw std::invalid_argument("face data does not match the skeleton");
  }
  DGVectorFunction r(disc, ell);
  const int n = r.component_size();
  for (int c = 0; c < disc.num_cells(); ++c) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * n);
    for (int f : disc.cell_faces(c)) {
      const Face& face = disc.face(f);
      const Eigen::VectorXd w = weights_of(disc.face_rule(f));
      const Eigen::VectorXd g =
          disc.face_values(f, c).topRows(n) * (average_weight(face) * w.cwiseProduct(phi.values[f]));
      rhs.head(n) += face.normal.x() * g;
      rhs.tail(n) += face.normal.y() * g;
    }
    const auto llt = disc.mass(c, ell).llt();
    r.block(c).head(n) = llt.solve(rhs.head(n));
    r.block(c).tail(n) = llt.solve(rhs.tail(n));
  }
  return r;
}

DGScalarFunction lift_scalar(const FaceData& phi, const Discretization& disc, int k) {
  if (static_cast<int>(phi.values.size()) != disc.num_faces()) {
    throw std::invalid_argument("face data does not match the skeleton");
  }
  DGScalarFunction r(disc, k);
  const int n = r.block_size();
  for (int c = 0; c < disc.num_cells(); ++c) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (int f : disc.cell_faces(c)) {
      if (!disc.face(f).interior()) continue;
      const Eigen::VectorXd w = weights_of(disc.face_rule(f));
      rhs += disc.face_values(f, c).topRows(n) * (0.5 * w.cwiseProduct(phi.values[f]));
    }
    r.block(c) = disc.mass(c, k).llt().solve(rhs);
  }
  return r;
}

DGVectorFunction lifted_gradient(const DGScalarFunction& u, int ell) {
  const Discretization& disc = u.discretization();
  DGVectorFunction g = broken_gradient(u, ell);
  g.coefficients() -= lift_vector(jumps(u), disc, ell).coefficients();
  return g;
}

DGScalarFunction lifted_divergence(const DGVectorFunction& s, int k) {
  const Discretization& disc = s.discretization();
  DGScalarFunction d(disc, k);
  const int n = d.block_size();
  const int m = s.component_size();
  for (int c = 0; c < disc.num_cells(); ++c) {
    const PhysicalRule& rule = disc.cell_rule(c);
    const auto& grads = disc.cell_gradients(c);
    const Eigen::VectorXd div =
        grads[0].topRows(m).transpose() * s.block(c).head(m) +
        grads[1].topRows(m).transpose() * s.block(c).tail(m);
    const Eigen::VectorXd rhs = disc.cell_values(c).topRows(n) * weights_of(rule).cwiseProduct(div);
    d.block(c) = disc.mass(c, k).llt().solve(rhs);
  }
  d.coefficients() -= lift_scalar(normal_jumps(s), disc, k).coefficients();
  return d;
}

Eigen::SparseMatrix<double> lifted_gradient_matrix(const Discretization& disc, int k, int ell) {
  if (ell < k - 1) throw std::invalid_argument("lifting degree below k - 1");
  const int nv = dim_poly(k);
  const int ns = dim_poly(ell);
  BlockAccumulator acc(2 * ns, nv);

  for (int c = 0; c < disc.num_cells(); ++c) {
    const Eigen::VectorXd w = weights_of(disc.cell_rule(c));
    const auto psi = disc.cell_values(c).topRows(ns);
    const auto& grads = disc.cell_gradients(c);
    Eigen::MatrixXd& block = acc.at(c, c);
    for (int comp = 0; comp < 2; ++comp) {
      block.middleRows(comp * ns, ns) += psi * w.asDiagonal() * grads[comp].topRows(nv).transpose();
    }
  }

  for (int f = 0; f < disc.num_faces(); ++f) {
    const Face& face = disc.face(f);
    const Eigen::VectorXd w = weights_of(disc.face_rule(f));
    const double omega = average_weight(face);
    std::vector<std::pair<int, double>> sides{{face.ext_cell, 1.0}};
    if (face.interior()) sides.emplace_back(*face.int_cell, -1.0);
    for (const auto& [target, unused] : sides) {
      const Eigen::MatrixXd psi = disc.face_values(f, target).topRows(ns);
      for (const auto& [source, sign] : sides) {
        const Eigen::MatrixXd phi = disc.face_values(f, source).topRows(nv);
        const Eigen::MatrixXd face_block = psi * w.asDiagonal() * phi.transpose();
        Eigen::MatrixXd& block = acc.at(target, source);
        block.topRows(ns) -= (omega * sign * face.normal.x()) * face_block;
        block.bottomRows(ns) -= (omega * sign * face.normal.y()) * face_block;
      }
    }
  }

  std::vector<Eigen::LLT<Eigen::MatrixXd>> mass;
  for (int c = 0; c < disc.num_cells(); ++c) mass.emplace_back(disc.mass(c, ell));
  return acc.finish(disc.num_cells(), [&](int c, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(b.rows(), b.cols());
    out.topRows(ns) = mass[c].solve(b.topRows(ns));
    out.bottomRows(ns) = mass[c].solve(b.bottomRows(ns));
    return out;
  });
}

Eigen::SparseMatrix<double> lifted_divergence_matrix(const Discretization& disc, int k) {
  const int nv = dim_poly(k);
  const int ns = dim_poly(k + 1);
  BlockAccumulator acc(nv, 2 * ns);

  for (int c = 0; c < disc.num_cells(); ++c) {
    const Eigen::VectorXd w = weights_of(disc.cell_rule(c));
    const auto phi = disc.cell_values(c).topRows(nv);
    const auto& grads = disc.cell_gradients(c);
    Eigen::MatrixXd& block = acc.at(c, c);
    for (int comp = 0; comp < 2; ++comp) {
      block.middleCols(comp * ns, ns) += phi * w.asDiagonal() * grads[comp].topRows(ns).transpose();
    }
  }

  for (int f = 0; f < disc.num_faces(); ++f) {
    const Face& face = disc.face(f);
    if (!face.interior()) continue;
    const Eigen::VectorXd w = weights_of(disc.face_rule(f));
    const std::array<std::pair<int, double>, 2> sides{{{face.ext_cell, 1.0}, {*face.int_cell, -1.0}}};
    for (const auto& [target, unused] : sides) {
      const Eigen::MatrixXd phi = disc.face_values(f, target).topRows(nv);
      for (const auto& [source, sign] : sides) {
        const Eigen::MatrixXd psi = disc.face_values(f, source).topRows(ns);
        const Eigen::MatrixXd face_block = phi * w.asDiagonal() * psi.transpose();
        Eigen::MatrixXd& block = acc.at(target, source);
        block.leftCols(ns) -= (0.5 * sign * face.normal.x()) * face_block;
        block.rightCols(ns) -= (0.5 * sign * face.normal.y()) * face_block;
      }
    }
  }

  std::vector<Eigen::LLT<Eigen::MatrixXd>> mass;
  for (int c = 0; c < disc.num_cells(); ++c) mass.emplace_back(disc.mass(c, k));
  return acc.finish(disc.num_cells(),
                    [&](int c, const Eigen::MatrixXd& b) -> Eigen::MatrixXd { return mass[c].solve(b); });
}

namespace {

Eigen::SparseMatrix<double> block_mass(const Discretization& disc, int degree, int copies) {
  const int n = dim_poly(degree);
  std::vector<Eigen::Triplet<double>> triplets;
  for (int c = 0; c < disc.num_cells(); ++c) {
    const Eigen::MatrixXd m = disc.mass(c, degree);
    for (int comp = 0; comp < copies; ++comp) {
      const int offset = c * copies * n + comp * n;
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) triplets.emplace_back(offset + i, offset + j, m(i, j));
      }
    }
  }
  const int size = disc.num_cells() * copies * n;
  Eigen::SparseMatrix<double> out(size, size);
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

}  // namespace

Eigen::SparseMatrix<double> vector_mass_matrix(const Discretization& disc, int ell) {
  return block_mass(disc, ell, 2);
}

Eigen::SparseMatrix<double> scalar_mass_matrix(const Discretization& disc, int k) {
  return block_mass(disc, k, 1);
}

}  // namespace pfldg
