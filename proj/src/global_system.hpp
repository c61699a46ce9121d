// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "hdg_local.hpp"
#include "mesh.hpp"

namespace porohdg {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

/// Global trace numbering. Face f owns the contiguous block
/// [3(k+1) f, 3(k+1)(f+1)) laid out as [vs_hat1, vs_hat2, p_hat].
struct DofMap {
  int degree = 1;
  int face_size = 6;
  int num_faces = 0;
  std::vector<char> essential;  // per trace DOF
  std::vector<int> free_index;  // -1 for essential DOFs
  int num_free = 0;

  int size() const { return face_size * num_faces; }
  int ne() const { return degree + 1; }
  /// Global index of trace component `comp` (0, 1 solid; 2 pressure),
  /// coefficient m, on face f.
  int index(int f, int comp, int m) const { return f * face_size + comp * ne() + m; }
  /// Global indices of the local trace vector of an element.
  std::vector<int> element_dofs(const Mesh& mesh, int element) const;
};

/// Solid traces on Gamma_d and pressure traces on Gamma_p are essential.
DofMap build_dofmap(const Mesh& mesh, int k);

/// Per-degree counts: all-degree-k volumetric DG unknowns per element,
/// trace unknowns per face, and the reduction 1 - 1.5 * face / element.
struct DofCounts {
  int volume_per_element;
  int trace_per_face;
  double reduction;
};
DofCounts dof_counts(int k);

/// Statically condensed system. Each element contributes an ElementSystem
/// whose trace rows map to global trace DOFs through `dofs`; DOFs flagged
/// in `essential` are prescribed. The trace matrix is assembled and
/// factorized once in the constructor.
class CondensedSystem {
 public:
  CondensedSystem(std::vector<ElementSystem> elements, std::vector<std::vector<int>> dofs,
                  int num_trace, const std::vector<char>& essential);
  ~CondensedSystem();
  CondensedSystem(CondensedSystem&&) noexcept;
  CondensedSystem& operator=(CondensedSystem&&) noexcept;

  int num_elements() const { return static_cast<int>(lu_.size()); }
  int interior_size() const { return ni_; }
  int num_trace() const { return num_trace_; }
  int num_free() const { return num_free_; }
  const std::vector<int>& dofs(int e) const { return dofs_[e]; }
  const SparseMatrix& matrix() const { return matrix_; }
  /// Number of sparse factorizations performed so far.
  int factorization_count() const { return factorizations_; }

  /// Interior block times x, from the stored factors.
  Eigen::VectorXd apply_interior(int e, const Eigen::VectorXd& x) const;
  /// Interior-to-trace and trace-trace blocks.
  const Eigen::MatrixXd& bi(int e) const { return bi_[e]; }
  const Eigen::MatrixXd& bb(int e) const { return bb_[e]; }
  /// Interior block inverse times the interior-to-trace coupling.
  const Eigen::MatrixXd& condensed_coupling(int e) const { return w_[e]; }

  /// Solves for all unknowns. `rhs_i` is the concatenation of element
  /// interior right-hand sides, `rhs_b` of element trace right-hand sides
  /// (in element trace order); essential entries of `trace` are read as
  /// the prescribed values and the remaining entries are overwritten.
  void solve(const Eigen::VectorXd& rhs_i, const Eigen::VectorXd& rhs_b,
             Eigen::VectorXd& interior, Eigen::VectorXd& trace) const;

 private:
  struct Factor;
  Eigen::MatrixXd interior_solve(int e, const Eigen::MatrixXd& b) const;

  int ni_ = 0;
  int nb_ = 0;
  int num_trace_ = 0;
  int num_free_ = 0;
  std::vector<int> free_index_;
  std::vector<std::vector<int>> dofs_;
  std::vector<char> has_essential_;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
  std::vector<Eigen::VectorXd> scale_;
  std::vector<Eigen::MatrixXd> w_, bi_, bb_;
  SparseMatrix matrix_;
  std::unique_ptr<Factor> factor_;
  int factorizations_ = 0;
};

/// Uncondensed system over [all interior unknowns; free trace unknowns],
/// solved by sparse LU. Used as an oracle for the condensed path.
struct MonolithicSystem {
  SparseMatrix matrix;
  int interior_size = 0;
  std::vector<int> free_index;
  int num_free = 0;
};

MonolithicSystem assemble_monolithic(const std::vector<ElementSystem>& elements,
                                     const std::vector<std::vector<int>>& dofs,
                                     int num_trace, const std::vector<char>& essential);

/// Same contract as CondensedSystem::solve.
void solve_monolithic(const MonolithicSystem& sys, const std::vector<ElementSystem>& elements,
                      const std::vector<std::vector<int>>& dofs, const Eigen::VectorXd& rhs_i,
                      const Eigen::VectorXd& rhs_b, Eigen::VectorXd& interior,
                      Eigen::VectorXd& trace);

/// Name of the sparse LU backend in use.
std::string sparse_backend_name();

/// Writes a sparse matrix in Matrix Market coordinate format.
void write_matrix_market(const SparseMatrix& matrix, const std::string& path);

}  // namespace porohdg
