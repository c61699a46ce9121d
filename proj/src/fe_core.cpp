// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#include "fe_core.hpp"

#include <cmath>
#include <numbers>

namespace porohdg {

namespace {

// Gauss-Legendre nodes and weights on [0,1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2 * j - 1) * z * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = z;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2 * j - 1) * z * p1 - (j - 1) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    x[i] = 0.5 * (1.0 - z);
    w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
}

}  // namespace

QuadRule quadrature(Domain domain, int order) {
  if (order < 0 || order > kMaxQuadratureOrder) {
    fail(ErrorKind::InvalidInput,
         "quadrature order " + std::to_string(order) +
             " outside implemented range [0, " +
             std::to_string(kMaxQuadratureOrder) + "]");
  }
  QuadRule rule;
  rule.domain = domain;
  rule.order = order;
  std::vector<double> x, w;
  if (domain == Domain::Edge) {
    gauss_legendre(order / 2 + 1, x, w);
    for (std::size_t i = 0; i < x.size(); ++i) {
      rule.points.emplace_back(x[i], 0.0);
      rule.weights.push_back(w[i]);
    }
    return rule;
  }
  // The collapse y = v(1-u) adds one to the degree in u.
  const int n = (order + 2) / 2 + ((order + 2) % 2);
  gauss_legendre(n, x, w);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      rule.points.emplace_back(x[i], x[j] * (1.0 - x[i]));
      rule.weights.push_back(w[i] * w[j] * (1.0 - x[i]));
    }
  }
  return rule;
}

double jacobi(int n, double a, double b, double z) {
  if (n == 0) return 1.0;
  double p0 = 1.0;
  double p1 = 0.5 * ((a + b + 2.0) * z + (a - b));
  for (int m = 2; m <= n; ++m) {
    const double c = 2.0 * m + a + b;
    const double a1 = 2.0 * m * (m + a + b) * (c - 2.0);
    const double a2 = (c - 1.0) * (a * a - b * b);
    const double a3 = (c - 1.0) * c * (c - 2.0);
    const double a4 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * c;
    const double p2 = ((a2 + a3 * z) * p1 - a4 * p0) / a1;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double jacobi_derivative(int n, double a, double b, double z) {
  if (n == 0) return 0.0;
  return 0.5 * (n + a + b + 1.0) * jacobi(n - 1, a + 1.0, b + 1.0, z);
}

SimplexBasis::SimplexBasis(int degree) : degree_(degree) {
  if (degree < 0) fail(ErrorKind::InvalidInput, "basis degree must be >= 0");
  for (int d = 0; d <= degree; ++d) {
    for (int q = 0; q <= d; ++q) indices_.push_back({d - q, q});
  }
  norms_.assign(indices_.size(), 1.0);
  const QuadRule rule = quadrature(Domain::Triangle, 2 * degree);
  std::vector<double> sq(indices_.size(), 0.0);
  Eigen::VectorXd v(size());
  for (std::size_t iq = 0; iq < rule.size(); ++iq) {
    evaluate(rule.points[iq], v);
    for (int i = 0; i < size(); ++i) sq[i] += rule.weights[iq] * v[i] * v[i];
  }
  for (int i = 0; i < size(); ++i) norms_[i] = 1.0 / std::sqrt(sq[i]);
}

void SimplexBasis::evaluate(const Point2& xi,
                            Eigen::Ref<Eigen::VectorXd> values) const {
  Eigen::VectorXd dx(size()), dy(size());
  evaluate(xi, values, dx, dy);
}

void SimplexBasis::evaluate(const Point2& xi, Eigen::Ref<Eigen::VectorXd> values,
                            Eigen::Ref<Eigen::VectorXd> d_xi,
                            Eigen::Ref<Eigen::VectorXd> d_eta) const {
  const double x = xi[0], y = xi[1];
  // Q_p = t^p P_p(s/t) with s = 2x+y-1, t = 1-y, by the scaled Legendre
  // recurrence, which stays polynomial at the collapsed vertex.
  const double s = 2.0 * x + y - 1.0;
  const double t = 1.0 - y;
  const int k = degree_;
  std::vector<double> q(k + 1), qx(k + 1), qy(k + 1);
  q[0] = 1.0, qx[0] = 0.0, qy[0] = 0.0;
  if (k >= 1) q[1] = s, qx[1] = 2.0, qy[1] = 1.0;
  for (int p = 1; p < k; ++p) {
    const double c1 = (2.0 * p + 1.0) / (p + 1.0);
    const double c2 = static_cast<double>(p) / (p + 1.0);
    q[p + 1] = c1 * s * q[p] - c2 * t * t * q[p - 1];
    qx[p + 1] = c1 * (2.0 * q[p] + s * qx[p]) - c2 * t * t * qx[p - 1];
    qy[p + 1] = c1 * (q[p] + s * qy[p]) -
                c2 * (-2.0 * t * q[p - 1] + t * t * qy[p - 1]);
  }
  const double b = 2.0 * y - 1.0;
  for (int i = 0; i < size(); ++i) {
    const auto [p, qq] = indices_[i];
    const double r = jacobi(qq, 2.0 * p + 1.0, 0.0, b);
    const double dr = 2.0 * jacobi_derivative(qq, 2.0 * p + 1.0, 0.0, b);
    values[i] = norms_[i] * q[p] * r;
    d_xi[i] = norms_[i] * qx[p] * r;
    d_eta[i] = norms_[i] * (qy[p] * r + q[p] * dr);
  }
}

BasisTable SimplexBasis::tabulate(std::span<const Point2> points) const {
  BasisTable table;
  const auto np = static_cast<Eigen::Index>(points.size());
  table.values.resize(np, size());
  table.d_xi.resize(np, size());
  table.d_eta.resize(np, size());
  Eigen::VectorXd v(size()), dx(size()), dy(size());
  for (Eigen::Index i = 0; i < np; ++i) {
    evaluate(points[i], v, dx, dy);
    table.values.row(i) = v.transpose();
    table.d_xi.row(i) = dx.transpose();
    table.d_eta.row(i) = dy.transpose();
  }
  return table;
}

void EdgeBasis::evaluate(double s, Eigen::Ref<Eigen::VectorXd> values) const {
  const double z = 2.0 * s - 1.0;
  double p0 = 1.0, p1 = z;
  for (int m = 0; m <= degree_; ++m) {
    double pm;
    if (m == 0) {
      pm = 1.0;
    } else if (m == 1) {
      pm = z;
    } else {
      pm = ((2 * m - 1) * z * p1 - (m - 1) * p0) / m;
      p0 = p1;
      p1 = pm;
    }
    values[m] = std::sqrt(2.0 * m + 1.0) * pm;
  }
}

Eigen::MatrixXd EdgeBasis::tabulate(std::span<const double> params) const {
  Eigen::MatrixXd table(static_cast<Eigen::Index>(params.size()), size());
  Eigen::VectorXd v(size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    evaluate(params[i], v);
    table.row(static_cast<Eigen::Index>(i)) = v.transpose();
  }
  return table;
}

AffineMap affine_map(const std::array<Point2, 3>& vertices) {
  AffineMap map;
  map.vertices = vertices;
  map.jacobian.col(0) = vertices[1] - vertices[0];
  map.jacobian.col(1) = vertices[2] - vertices[0];
  map.det = map.jacobian.determinant();
  const double scale = map.jacobian.cwiseAbs().maxCoeff();
  if (!(map.det > 1e-14 * scale * scale)) {
    fail(ErrorKind::InvalidInput,
         "degenerate or clockwise triangle (det = " + std::to_string(map.det) +
             ")");
  }
  map.inv_transpose = map.jacobian.inverse().transpose();
  for (int j = 0; j < 3; ++j) {
    const Point2 d = vertices[(j + 2) % 3] - vertices[(j + 1) % 3];
    map.face_lengths[j] = d.norm();
    map.normals[j] = Point2(d.y(), -d.x()) / map.face_lengths[j];
  }
  return map;
}

}  // namespace porohdg
