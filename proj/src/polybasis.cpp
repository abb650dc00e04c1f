#include "pfldg/polybasis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "pfldg/quadrature.hpp"

namespace pfldg {

ScalarBasis::ScalarBasis(int degree, Point center, double scale)
    : degree_(degree), center_(center), scale_(scale) {
  if (degree < 0) throw std::invalid_argument("negative polynomial degree");
  for (int d = 0; d <= degree; ++d) {
    for (int j = 0; j <= d; ++j) exponents_.push_back({d - j, j});
  }
  coeffs_ = Eigen::MatrixXd::Identity(size(), size());
}

ScalarBasis ScalarBasis::monomial(int degree) { return ScalarBasis(degree, Point::Zero(), 1.0); }

ScalarBasis ScalarBasis::orthonormal(int degree, const std::array<Point, 3>& corners) {
  const Point center = (corners[0] + corners[1] + corners[2]) / 3.0;
  const double scale = std::max({(corners[1] - corners[0]).norm(),
                                 (corners[2] - corners[1]).norm(),
                                 (corners[0] - corners[2]).norm()});
  ScalarBasis basis(degree, center, scale);
  const PhysicalRule rule = map_rule(quad_triangle(2 * degree), corners);
  const int n = basis.size();

  for (int pass = 0; pass < 2; ++pass) {
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Eigen::VectorXd v = basis.eval(rule.points[q]);
      gram.selfadjointView<Eigen::Lower>().rankUpdate(v, rule.weights[q]);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(gram.selfadjointView<Eigen::Lower>());
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("monomial Gram matrix is not positive definite");
    }
    const Eigen::MatrixXd lower = llt.matrixL();
    basis.coeffs_ = lower.triangularView<Eigen::Lower>().solve(basis.coeffs_);
  }
  return basis;
}

void ScalarBasis::monomials(const Point& x, Eigen::VectorXd& m, Gradients* dm) const {
  const Point xi = (x - center_) / scale_;
  std::array<double, 32> px{}, py{};
  px[0] = py[0] = 1.0;
  for (int p = 1; p <= degree_; ++p) {
    px[p] = px[p - 1] * xi.x();
    py[p] = py[p - 1] * xi.y();
  }
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    const auto [a, b] = exponents_[i];
    m[i] = px[a] * py[b];
    if (dm) {
      (*dm)(0, i) = a > 0 ? a * px[a - 1] * py[b] / scale_ : 0.0;
      (*dm)(1, i) = b > 0 ? b * px[a] * py[b - 1] / scale_ : 0.0;
    }
  }
}

Eigen::VectorXd ScalarBasis::eval(const Point& x) const {
  Eigen::VectorXd m(size());
  monomials(x, m, nullptr);
  return coeffs_ * m;
}

ScalarBasis::Gradients ScalarBasis::eval_grad(const Point& x) const {
  Eigen::VectorXd m(size());
  Gradients dm(2, size());
  monomials(x, m, &dm);
  return dm * coeffs_.transpose();
}

Eigen::MatrixXd ScalarBasis::eval(std::span<const Point> points) const {
  Eigen::MatrixXd table(size(), points.size());
  for (std::size_t q = 0; q < points.size(); ++q) table.col(q) = eval(points[q]);
  return table;
}

std::array<Eigen::MatrixXd, 2> ScalarBasis::eval_grad(std::span<const Point> points) const {
  std::array<Eigen::MatrixXd, 2> table{Eigen::MatrixXd(size(), points.size()),
                                       Eigen::MatrixXd(size(), points.size())};
  for (std::size_t q = 0; q < points.size(); ++q) {
    const Gradients g = eval_grad(points[q]);
    table[0].col(q) = g.row(0).transpose();
    table[1].col(q) = g.row(1).transpose();
  }
  return table;
}

Eigen::VectorXd HomogeneousBasis::eval(const Point& x) const {
  const Point xi = (x - center_) / scale_;
  Eigen::VectorXd v(size());
  for (int j = 0; j <= degree_; ++j) {
    v[j] = std::pow(xi.x(), degree_ - j) * std::pow(xi.y(), j);
  }
  return v;
}

Eigen::VectorXd segment_basis(int degree, double length, double t) {
  Eigen::VectorXd v(degree + 1);
  const double s = 2.0 * t - 1.0;
  double p_prev = 1.0, p = s;
  for (int j = 0; j <= degree; ++j) {
    double pj;
    if (j == 0) {
      pj = 1.0;
    } else if (j == 1) {
      pj = s;
    } else {
      const double next = ((2.0 * j - 1.0) * s * p - (j - 1.0) * p_prev) / j;
      p_prev = p;
      p = next;
      pj = next;
    }
    v[j] = pj * std::sqrt((2.0 * j + 1.0) / length);
  }
  return v;
}

}  // namespace pfldg
