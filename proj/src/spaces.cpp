#include "pfldg/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pfldg {

Discretization::Discretization(Mesh mesh, int max_degree)
    : mesh_(std::move(mesh)),
      max_degree_(max_degree),
      quad_degree_(std::min(2 * max_degree + 2, kMaxQuadratureDegree)) {
  if (max_degree < 1) throw std::invalid_argument("max_degree must be >= 1");
  faces_ = enumerate_faces(mesh_);
  face_regular_ = classify_regularity(mesh_, faces_);

  const int nc = mesh_.num_cells();
  cell_faces_.resize(nc);
  element_faces_.assign(nc, {-1, -1, -1});
  for (int f = 0; f < num_faces(); ++f) {
    const Face& face = faces_[f];
    cell_faces_[face.ext_cell].push_back(f);
    if (face.regular_ext) element_faces_[face.ext_cell][face.ext_edge] = f;
    if (face.interior()) {
      cell_faces_[*face.int_cell].push_back(f);
      if (face.regular_int) element_faces_[*face.int_cell][face.int_edge] = f;
    }
  }

  const TriangleRule tri = quad_triangle(quad_degree_);
  face_ref_rule_ = quad_segment(quad_degree_);
  bases_.reserve(nc);
  for (int c = 0; c < nc; ++c) {
    const auto corners = mesh_.corners(c);
    bases_.push_back(ScalarBasis::orthonormal(max_degree_, corners));
    cell_rules_.push_back(map_rule(tri, corners));
    const PhysicalRule& rule = cell_rules_.back();
    cell_values_.push_back(bases_[c].eval(rule.points));
    cell_grads_.push_back(bases_[c].eval_grad(rule.points));
    const auto& v = cell_values_.back();
    const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(), rule.weights.size());
    masses_.push_back(v * w.asDiagonal() * v.transpose());
  }
  for (const Face& face : faces_) face_rules_.push_back(map_rule(face_ref_rule_, face.a, face.b));
}

Eigen::MatrixXd Discretization::face_values(int f, int cell) const {
  return bases_[cell].eval(face_rules_[f].points);
}

Eigen::MatrixXd Discretization::mass(int cell, int degree) const {
  const int n = dim_poly(degree);
  return masses_[cell].topLeftCorner(n, n);
}

DGScalarFunction::DGScalarFunction(const Discretization& disc, int degree)
    : DGScalarFunction(disc, degree, Eigen::VectorXd::Zero(disc.num_cells() * dim_poly(degree))) {}

DGScalarFunction::DGScalarFunction(const Discretization& disc, int degree, Eigen::VectorXd c)
    : disc_(&disc), degree_(degree), coeffs_(std::move(c)) {
  if (degree < 0 || degree > disc.max_degree()) {
    throw std::invalid_argument("scalar degree " + std::to_string(degree) +
                                " outside the discretization's range");
  }
  if (coeffs_.size() != disc.num_cells() * block_size()) {
    throw std::invalid_argument("coefficient vector has the wrong size");
  }
}

double DGScalarFunction::value(int cell, const Point& x) const {
  return disc_->basis(cell).eval(x).head(block_size()).dot(block(cell));
}

Point DGScalarFunction::gradient(int cell, const Point& x) const {
  return disc_->basis(cell).eval_grad(x).leftCols(block_size()) * block(cell);
}

DGVectorFunction::DGVectorFunction(const Discretization& disc, int degree)
    : DGVectorFunction(disc, degree,
                       Eigen::VectorXd::Zero(disc.num_cells() * 2 * dim_poly(degree))) {}

DGVectorFunction::DGVectorFunction(const Discretization& disc, int degree, Eigen::VectorXd c)
    : disc_(&disc), degree_(degree), coeffs_(std::move(c)) {
  if (degree < 0 || degree > disc.max_degree()) {
    throw std::invalid_argument("vector degree " + std::to_string(degree) +
                                " outside the discretization's range");
  }
  if (coeffs_.size() != disc.num_cells() * block_size()) {
    throw std::invalid_argument("coefficient vector has the wrong size");
  }
}

Point DGVectorFunction::value(int cell, const Point& x) const {
  const int n = component_size();
  const Eigen::VectorXd phi = disc_->basis(cell).eval(x).head(n);
  const auto b = block(cell);
  return Point(phi.dot(b.head(n)), phi.dot(b.tail(n)));
}

double DGVectorFunction::divergence(int cell, const Point& x) const {
  const int n = component_size();
  const auto g = disc_->basis(cell).eval_grad(x);
  const auto b = block(cell);
  return g.row(0).head(n).dot(b.head(n)) + g.row(1).head(n).dot(b.tail(n));
}

namespace {

template <typename Eval>
DGScalarFunction project(const Discretization& disc, int k, Eval&& f) {
  DGScalarFunction u(disc, k);
  const int n = dim_poly(k);
  for (int c = 0; c < disc.num_cells(); ++c) {
    const PhysicalRule& rule = disc.cell_rule(c);
    const auto phi = disc.cell_values(c).topRows(n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      rhs += rule.weights[q] * f(c, rule.points[q]) * phi.col(q);
    }
    u.block(c) = disc.mass(c, k).llt().solve(rhs);
  }
  return u;
}

}  // namespace

DGScalarFunction l2_project(const Discretization& disc, const ScalarField& f, int k) {
  return project(disc, k, [&](int, const Point& x) { return f(x); });
}

DGScalarFunction l2_project(const Discretization& disc, const CellwiseField& f, int k) {
  return project(disc, k, f);
}

double inner_product(const DGScalarFunction& u, const DGScalarFunction& v) {
  const Discretization& disc = u.discretization();
  double sum = 0.0;
  for (int c = 0; c < disc.num_cells(); ++c) {
    const PhysicalRule& rule = disc.cell_rule(c);
    const Eigen::VectorXd uq = disc.cell_values(c).topRows(u.block_size()).transpose() * u.block(c);
    const Eigen::VectorXd vq = disc.cell_values(c).topRows(v.block_size()).transpose() * v.block(c);
    for (std::size_t q = 0; q < rule.size(); ++q) sum += rule.weights[q] * uq[q] * vq[q];
  }
  return sum;
}

double inner_product(const DGVectorFunction& s, const DGVectorFunction& t) {
  const Discretization& disc = s.discretization();
  const int ns = s.component_size(), nt = t.component_size();
  double sum = 0.0;
  for (int c = 0; c < disc.num_cells(); ++c) {
    const PhysicalRule& rule = disc.cell_rule(c);
    const Eigen::MatrixXd& phi = disc.cell_values(c);
    const auto bs = s.block(c);
    const auto bt = t.block(c);
    for (int comp = 0; comp < 2; ++comp) {
      const Eigen::VectorXd sq = phi.topRows(ns).transpose() * bs.segment(comp * ns, ns);
      const Eigen::VectorXd tq = phi.topRows(nt).transpose() * bt.segment(comp * nt, nt);
      for (std::size_t q = 0; q < rule.size(); ++q) sum += rule.weights[q] * sq[q] * tq[q];
    }
  }
  return sum;
}

double l2_norm(const DGScalarFunction& u) { return std::sqrt(std::max(0.0, inner_product(u, u))); }

double l2_norm(const DGVectorFunction& s) { return std::sqrt(std::max(0.0, inner_product(s, s))); }

int side_cell(const Face& face, Side side) {
  if (side == Side::exterior) return face.ext_cell;
  if (!face.interior()) {
    throw std::invalid_argument("interior-side trace requested on a boundary face");
  }
  return *face.int_cell;
}

Eigen::VectorXd eval_on_face(const DGScalarFunction& u, int f, Side side, std::span<const double> t) {
  const Face& face = u.discretization().face(f);
  const int cell = side_cell(face, side);
  Eigen::VectorXd out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = u.value(cell, face.at(t[i]));
  return out;
}

Eigen::Matrix2Xd eval_on_face(const DGVectorFunction& s, int f, Side side, std::span<const double> t) {
  const Face& face = s.discretization().face(f);
  const int cell = side_cell(face, side);
  Eigen::Matrix2Xd out(2, t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out.col(i) = s.value(cell, face.at(t[i]));
  return out;
}

DGVectorFunction broken_gradient(const DGScalarFunction& u, int degree) {
  const Discretization& disc = u.discretization();
  if (degree < u.degree() - 1) {
    throw std::invalid_argument("target degree too small for the broken gradient");
  }
  DGVectorFunction g(disc, degree);
  const int nu = u.block_size();
  const int ns = g.component_size();
  for (int c = 0; c < disc.num_cells(); ++c) {
    const PhysicalRule& rule = disc.cell_rule(c);
    const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(), rule.weights.size());
    const auto psi = disc.cell_values(c).topRows(ns);
    const auto& grads = disc.cell_gradients(c);
    const auto llt = disc.mass(c, degree).llt();
    for (int comp = 0; comp < 2; ++comp) {
      const Eigen::VectorXd dq = grads[comp].topRows(nu).transpose() * u.block(c);
      g.block(c).segment(comp * ns, ns) = llt.solve(psi * w.asDiagonal() * dq);
    }
  }
  return g;
}

}  // namespace pfldg
