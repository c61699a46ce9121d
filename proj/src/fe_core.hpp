// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"

namespace porohdg {

using Point2 = Eigen::Vector2d;

enum class Domain { Triangle, Edge };

/// Dimension of P_k on a triangle ((k+1)(k+2)/2) or an edge (k+1).
constexpr int dim_pk(int k, Domain domain) {
  return domain == Domain::Triangle ? (k + 1) * (k + 2) / 2 : k + 1;
}

/// Quadrature rule on the reference triangle (0,0),(1,0),(0,1) or the
/// reference edge [0,1]. Edge points use only the x coordinate.
struct QuadRule {
  Domain domain = Domain::Triangle;
  std::vector<Point2> points;
  std::vector<double> weights;
  int order = 0;

  std::size_t size() const { return weights.size(); }
};

/// Highest polynomial exactness `quadrature` will build.
inline constexpr int kMaxQuadratureOrder = 40;

/// Gauss-Legendre on [0,1]; collapsed (Duffy) tensor Gauss-Legendre on the
/// triangle. Throws InvalidInput above kMaxQuadratureOrder.
QuadRule quadrature(Domain domain, int order);

/// Jacobi polynomial P_n^{(a,b)}(z) by three-term recurrence.
double jacobi(int n, double a, double b, double z);
/// d/dz P_n^{(a,b)}(z).
double jacobi_derivative(int n, double a, double b, double z);

/// Values and reference gradients of a basis sampled at quadrature points.
/// Rows are points, columns are basis functions.
struct BasisTable {
  Eigen::MatrixXd values;
  Eigen::MatrixXd d_xi;
  Eigen::MatrixXd d_eta;
};

/// Orthonormal hierarchical (Dubiner) basis of P_k on the reference triangle:
/// the reference mass matrix is the identity. Functions are ordered by total
/// degree, so the first dim_pk(j) functions span P_j.
class SimplexBasis {
 public:
  explicit SimplexBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(norms_.size()); }

  void evaluate(const Point2& xi, Eigen::Ref<Eigen::VectorXd> values) const;
  void evaluate(const Point2& xi, Eigen::Ref<Eigen::VectorXd> values,
                Eigen::Ref<Eigen::VectorXd> d_xi,
                Eigen::Ref<Eigen::VectorXd> d_eta) const;
  BasisTable tabulate(std::span<const Point2> points) const;

 private:
  int degree_;
  std::vector<std::array<int, 2>> indices_;
  std::vector<double> norms_;
};

/// Orthonormal Legendre basis of P_k on [0,1]: sqrt(2m+1) P_m(2s-1).
class EdgeBasis {
 public:
  explicit EdgeBasis(int degree) : degree_(degree) {}

  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }

  void evaluate(double s, Eigen::Ref<Eigen::VectorXd> values) const;
  /// Rows are parameters, columns are basis functions.
  Eigen::MatrixXd tabulate(std::span<const double> params) const;

 private:
  int degree_;
};

inline SimplexBasis simplex_basis(int k) { return SimplexBasis(k); }
inline EdgeBasis edge_basis(int k) { return EdgeBasis(k); }

/// Affine map from the reference triangle onto a physical triangle.
/// Local face j is the edge opposite local vertex j, running from vertex
/// (j+1)%3 to vertex (j+2)%3.
struct AffineMap {
  std::array<Point2, 3> vertices;
  Eigen::Matrix2d jacobian;
  double det = 0.0;
  Eigen::Matrix2d inv_transpose;
  std::array<Point2, 3> normals;
  std::array<double, 3> face_lengths{};

  Point2 to_physical(const Point2& xi) const {
    return vertices[0] + jacobian * xi;
  }
  Point2 to_reference(const Point2& x) const {
    return inv_transpose.transpose() * (x - vertices[0]);
  }
};

/// Throws InvalidInput for zero or negative (clockwise) area.
AffineMap affine_map(const std::array<Point2, 3>& vertices);

/// Reference coordinates of the three reference vertices.
inline const std::array<Point2, 3>& reference_vertices() {
  static const std::array<Point2, 3> v{Point2(0, 0), Point2(1, 0), Point2(0, 1)};
  return v;
}

}  // namespace porohdg
