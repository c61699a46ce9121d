// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "fe_core.hpp"
#include "materials.hpp"
#include "mesh.hpp"

namespace porohdg {

/// Offsets of the element unknowns. Interior vector:
/// [sxx, syy, sxy | vs1, vs2 | vf1, vf2 | p], stress and fluid fields in P_k,
/// solid velocity in P_{k+1}. Trace vector, per local face j = 0..2:
/// [vs_hat1, vs_hat2, p_hat], each in P_k(F).
struct LocalLayout {
  int k = 1;
  int nk = 3;   // dim P_k(K)
  int nk1 = 6;  // dim P_{k+1}(K)
  int ne = 2;   // dim P_k(F)

  explicit LocalLayout(int degree = 1)
      : k(degree),
        nk(dim_pk(degree, Domain::Triangle)),
        nk1(dim_pk(degree + 1, Domain::Triangle)),
        ne(dim_pk(degree, Domain::Edge)) {}

  int stress(int a = 0) const { return a * nk; }
  int solid(int c = 0) const { return 3 * nk + c * nk1; }
  int fluid(int c = 0) const { return 3 * nk + 2 * nk1 + c * nk; }
  int pressure() const { return 3 * nk + 2 * nk1 + 2 * nk; }
  int interior_size() const { return pressure() + nk; }

  int face_size() const { return 3 * ne; }
  /// comp 0, 1: solid trace components; comp 2: pressure trace.
  int trace(int face, int comp) const { return face * face_size() + comp * ne; }
  int trace_size() const { return 3 * face_size(); }
};

/// Component c of the traction of the unit Voigt stress a (xx, yy, xy)
/// on a face with normal n.
double traction_coefficient(int a, int c, const Point2& n);

/// Reference tables shared by all elements of one degree: the P_{k+1} basis
/// (whose first dim P_k functions span P_k) at volume points and along each
/// reference face, and the edge basis at face points in both orientations.
class ReferenceElement {
 public:
  /// `order` is the quadrature exactness; at least 2k+2 is needed for the
  /// solid velocity mass. Default 2k+3.
  explicit ReferenceElement(int k, int order = -1);

  int degree() const { return layout_.k; }
  int order() const { return order_; }
  const LocalLayout& layout() const { return layout_; }
  const SimplexBasis& basis() const { return basis_; }
  const EdgeBasis& trace_basis() const { return edge_; }

  const QuadRule& volume_rule() const { return volume_; }
  const BasisTable& volume_table() const { return volume_table_; }
  const QuadRule& edge_rule() const { return edge_rule_; }
  /// P_{k+1} values at the edge points of local face j (param runs from
  /// local vertex (j+1)%3 to (j+2)%3).
  const Eigen::MatrixXd& face_table(int j) const { return face_tables_[j]; }
  /// Edge basis at the edge points; `flipped` evaluates at 1 - t.
  const Eigen::MatrixXd& edge_table(bool flipped) const {
    return edge_tables_[flipped ? 1 : 0];
  }

 private:
  LocalLayout layout_;
  int order_;
  SimplexBasis basis_;
  EdgeBasis edge_;
  QuadRule volume_;
  BasisTable volume_table_;
  QuadRule edge_rule_;
  std::array<Eigen::MatrixXd, 3> face_tables_;
  std::array<Eigen::MatrixXd, 2> edge_tables_;
};

/// Facewise constant stabilization, one value per (element, local face).
struct Stabilization {
  std::vector<std::array<double, 3>> solid;
  std::vector<std::array<double, 3>> fluid;
};

/// tau_s = c_s / h_K on every face of K, tau_f = c_f everywhere.
Stabilization stabilization_defaults(const Mesh& mesh, double c_s, double c_f);

/// True when the trace parameter of local face j runs against the local
/// vertex order (the lower global vertex id is parameter 0).
bool face_flipped(const Mesh& mesh, int element, int j);

/// L2(F) projection of traces of P_{k+1}(K) functions onto P_k(F), for one
/// scalar component: row m, column i is the m-th edge coefficient of the
/// projected trace of basis function i.
Eigen::MatrixXd face_reduction(const Mesh& mesh, int element, int j,
                               const ReferenceElement& ref);

/// Element matrices of the semidiscrete forms. Trace-indexed blocks use the
/// full local trace size; rows or columns of the other trace kind are zero.
struct LocalBlocks {
  LocalLayout layout;
  Eigen::MatrixXd aa_stress;           // (A s, r)
  Eigen::MatrixXd aa_stress_pressure;  // (A alpha p I, r)
  Eigen::MatrixXd aa_pressure;         // (A alpha p I, alpha q I)
  Eigen::MatrixXd storage;             // (s0 p, q)
  Eigen::MatrixXd rho;                 // [vs; vf] density-weighted mass
  Eigen::MatrixXd drag;                // (eta/kappa vf, wf)
  Eigen::MatrixXd div_stress;          // (div r, ws)
  Eigen::MatrixXd div_fluid;           // (p, div wf), rows wf, columns p
  Eigen::MatrixXd face_stress;         // <s n, w_hat>, rows trace
  Eigen::MatrixXd face_fluid;          // <vf.n, q_hat>, rows trace
  Eigen::MatrixXd stab_solid_vv;       // tau_s <P vs, P ws>
  Eigen::MatrixXd stab_solid_vh;       // tau_s <vs, w_hat>, rows ws
  Eigen::MatrixXd stab_solid_hh;       // tau_s <vs_hat, w_hat>
  Eigen::MatrixXd stab_fluid_pp;       // tau_f <p, q>
  Eigen::MatrixXd stab_fluid_ph;       // tau_f <p, q_hat>, rows q
  Eigen::MatrixXd stab_fluid_hh;       // tau_f <p_hat, q_hat>

  /// Matrix of the time-derivative terms.
  Eigen::MatrixXd mass() const;
  /// Interior-interior part of the spatial operator.
  Eigen::MatrixXd stiffness() const;
  /// Interior rows, trace columns.
  Eigen::MatrixXd coupling() const;
  /// Trace rows (the trace equations, fluid rows negated), interior columns.
  Eigen::MatrixXd trace_rows() const;
  /// Trace-trace block.
  Eigen::MatrixXd trace_trace() const;
};

/// Assembles every block for one element.
LocalBlocks local_matrices(const Mesh& mesh, int element, const MaterialParams& material,
                           const ReferenceElement& ref, const Stabilization& stab);

/// Applies the time-derivative matrix using the orthonormality of the
/// reference basis; equals blocks.mass() * u.
Eigen::VectorXd apply_mass(const LocalLayout& layout, const MaterialParams& material,
                           double det, const Eigen::Ref<const Eigen::VectorXd>& u);

/// One-step Crank-Nicolson matrix of one element, unknowns at the new level.
struct ElementSystem {
  Eigen::MatrixXd ii, ib, bi, bb;
};

/// [M + dt/2 K, dt/2 C; dt/2 E, dt/2 H].
ElementSystem cn_element_system(const LocalBlocks& blocks, double dt);

/// Right-hand side of cn_element_system from the old level and the source
/// load at the half step: interior (M - dt/2 K) u - dt/2 C l + dt F, trace
/// -dt/2 (E u + H l).
std::pair<Eigen::VectorXd, Eigen::VectorXd> cn_rhs(const LocalBlocks& blocks, double dt,
                                                   const Eigen::VectorXd& u,
                                                   const Eigen::VectorXd& lambda,
                                                   const Eigen::VectorXd& load);

using VectorField = std::function<Eigen::Vector2d(const Point2&)>;
using ScalarField = std::function<double(const Point2&)>;
using StressField = std::function<Eigen::Vector3d(const Point2&)>;

/// Interior load vector [0 | (f, ws) | (ff, wf) | (g, q)]. Empty functions
/// are zero.
Eigen::VectorXd load_vector(const Mesh& mesh, int element, const ReferenceElement& ref,
                            const VectorField& f, const VectorField& ff,
                            const ScalarField& g);

/// L2(F) projection of a scalar function onto P_k(F) in the face's own
/// parameterization.
Eigen::VectorXd project_to_face(const Mesh& mesh, int face, const ReferenceElement& ref,
                                const ScalarField& fn);

/// Elementwise L2 projection of fields onto the interior layout.
Eigen::VectorXd project_to_element(const Mesh& mesh, int element,
                                   const ReferenceElement& ref, const StressField& stress,
                                   const VectorField& solid, const VectorField& fluid,
                                   const ScalarField& pressure);

/// Point values of a local interior vector.
struct PointValues {
  Eigen::Vector3d stress;
  Eigen::Vector2d solid;
  Eigen::Vector2d fluid;
  double pressure = 0.0;
};
PointValues evaluate_interior(const LocalLayout& layout, const Eigen::VectorXd& basis_values,
                              const Eigen::Ref<const Eigen::VectorXd>& u);

}  // namespace porohdg
