// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#include "global_system.hpp"

#include <Eigen/SparseLU>
#include <unsupported/Eigen/SparseExtra>

#ifdef POROHDG_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

namespace porohdg {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

#ifdef POROHDG_HAVE_UMFPACK
using SparseLuBackend = Eigen::UmfPackLU<SparseMatrix>;
#else
using SparseLuBackend = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;
#endif

std::vector<int> free_numbering(int num_trace, const std::vector<char>& essential,
                                const std::vector<std::vector<int>>& dofs, int& num_free) {
  std::vector<char> present(num_trace, 0);
  for (const auto& d : dofs) {
    for (int g : d) present[g] = 1;
  }
  std::vector<int> idx(num_trace, -1);
  num_free = 0;
  for (int g = 0; g < num_trace; ++g) {
    if (present[g] && !essential[g]) idx[g] = num_free++;
  }
  return idx;
}

}  // namespace

std::vector<int> DofMap::element_dofs(const Mesh& mesh, int element) const {
  std::vector<int> out;
  out.reserve(3 * face_size);
  for (int j = 0; j < 3; ++j) {
    const int base = mesh.element_face(element, j) * face_size;
    for (int r = 0; r < face_size; ++r) out.push_back(base + r);
  }
  return out;
}

DofMap build_dofmap(const Mesh& mesh, int k) {
  if (k < 1) fail(ErrorKind::InvalidInput, "polynomial degree must be >= 1");
  DofMap map;
  map.degree = k;
  map.face_size = 3 * (k + 1);
  map.num_faces = mesh.num_faces();
  map.essential.assign(map.size(), 0);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.faces()[f];
    if (!face.is_boundary()) continue;
    for (int m = 0; m < map.ne(); ++m) {
      if (face.tags.elastic == ElasticBc::Dirichlet) {
        map.essential[map.index(f, 0, m)] = 1;
        map.essential[map.index(f, 1, m)] = 1;
      }
      if (face.tags.flow == FlowBc::Pressure) map.essential[map.index(f, 2, m)] = 1;
    }
  }
  map.free_index.assign(map.size(), -1);
  for (int g = 0; g < map.size(); ++g) {
    if (!map.essential[g]) map.free_index[g] = map.num_free++;
  }
  return map;
}

DofCounts dof_counts(int k) {
  if (k < 0) fail(ErrorKind::InvalidInput, "degree must be >= 0");
  DofCounts c;
  c.volume_per_element = 8 * dim_pk(k, Domain::Triangle);
  c.trace_per_face = 3 * dim_pk(k, Domain::Edge);
  c.reduction = 1.0 - 1.5 * c.trace_per_face / c.volume_per_element;
  return c;
}

struct CondensedSystem::Factor {
  SparseLuBackend lu;
};

CondensedSystem::~CondensedSystem() = default;
CondensedSystem::CondensedSystem(CondensedSystem&&) noexcept = default;
CondensedSystem& CondensedSystem::operator=(CondensedSystem&&) noexcept = default;

CondensedSystem::CondensedSystem(std::vector<ElementSystem> elements,
                                 std::vector<std::vector<int>> dofs, int num_trace,
                                 const std::vector<char>& essential)
    : num_trace_(num_trace), dofs_(std::move(dofs)) {
  const int ne = static_cast<int>(elements.size());
  if (ne == 0) fail(ErrorKind::InvalidInput, "no elements to condense");
  if (static_cast<int>(dofs_.size()) != ne ||
      static_cast<int>(essential.size()) != num_trace) {
    fail(ErrorKind::InvalidInput, "element and DOF tables disagree in size");
  }
  ni_ = static_cast<int>(elements[0].ii.rows());
  nb_ = static_cast<int>(elements[0].bb.rows());
  free_index_ = free_numbering(num_trace, essential, dofs_, num_free_);

  lu_.resize(ne);
  scale_.resize(ne);
  w_.resize(ne);
  bi_.resize(ne);
  bb_.resize(ne);
  has_essential_.assign(ne, 0);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(ne) * nb_ * nb_);
  for (int e = 0; e < ne; ++e) {
    ElementSystem& s = elements[e];
    if (s.ii.rows() != ni_ || s.bb.rows() != nb_ ||
        static_cast<int>(dofs_[e].size()) != nb_) {
      fail(ErrorKind::InvalidInput, "element " + std::to_string(e) + " has inconsistent sizes");
    }
    // Factor the symmetrically equilibrated block; physical units put the
    // stress and velocity rows many orders of magnitude apart.
    VectorXd& sc = scale_[e];
    sc = s.ii.diagonal().cwiseAbs().cwiseSqrt();
    for (auto& v : sc) {
      if (!(v > 0.0)) v = 1.0;
    }
    lu_[e].compute(sc.cwiseInverse().asDiagonal() * s.ii * sc.cwiseInverse().asDiagonal());
    const auto pivots = lu_[e].matrixLU().diagonal().cwiseAbs();
    const double rc = std::min(lu_[e].rcond(), pivots.minCoeff() / pivots.maxCoeff());
    if (!(rc > 1e-14)) {
      fail(ErrorKind::Solver, "interior block of element " + std::to_string(e) +
                                  " is singular (rcond " + std::to_string(rc) + ")");
    }
    w_[e] = interior_solve(e, s.ib);
    const MatrixXd schur = s.bb - s.bi * w_[e];
    for (int r = 0; r < nb_; ++r) {
      const int gr = free_index_[dofs_[e][r]];
      if (gr < 0) {
        has_essential_[e] = 1;
        continue;
      }
      for (int c = 0; c < nb_; ++c) {
        const int gc = free_index_[dofs_[e][c]];
        if (gc >= 0) trip.emplace_back(gr, gc, schur(r, c));
      }
    }
    bi_[e] = std::move(s.bi);
    bb_[e] = std::move(s.bb);
    s = ElementSystem{};
  }
  matrix_.resize(num_free_, num_free_);
  matrix_.setFromTriplets(trip.begin(), trip.end());
  matrix_.makeCompressed();
  factor_ = std::make_unique<Factor>();
  if (num_free_ > 0) {
    factor_->lu.compute(matrix_);
    ++factorizations_;
    if (factor_->lu.info() != Eigen::Success) {
      fail(ErrorKind::Solver,
           "global trace matrix factorization failed (stabilization or density "
           "assumptions violated?)");
    }
  }
}

Eigen::MatrixXd CondensedSystem::interior_solve(int e, const Eigen::MatrixXd& b) const {
  const VectorXd inv = scale_[e].cwiseInverse();
  return inv.asDiagonal() * lu_[e].solve(inv.asDiagonal() * b);
}

Eigen::VectorXd CondensedSystem::apply_interior(int e, const Eigen::VectorXd& x) const {
  const auto& lu = lu_[e];
  VectorXd y = lu.matrixLU().triangularView<Eigen::Upper>() * scale_[e].cwiseProduct(x);
  y = lu.matrixLU().triangularView<Eigen::UnitLower>() * y;
  return scale_[e].cwiseProduct(lu.permutationP().inverse() * y);
}

void CondensedSystem::solve(const Eigen::VectorXd& rhs_i, const Eigen::VectorXd& rhs_b,
                            Eigen::VectorXd& interior, Eigen::VectorXd& trace) const {
  const int ne = num_elements();
  if (rhs_i.size() != static_cast<Eigen::Index>(ne) * ni_ ||
      rhs_b.size() != static_cast<Eigen::Index>(ne) * nb_ || trace.size() != num_trace_) {
    fail(ErrorKind::InvalidInput, "right-hand side sizes do not match the system");
  }
  interior.resize(rhs_i.size());
  VectorXd g = VectorXd::Zero(num_free_);
  VectorXd local(nb_);
  for (int e = 0; e < ne; ++e) {
    auto y = interior.segment(static_cast<Eigen::Index>(e) * ni_, ni_);
    y = interior_solve(e, rhs_i.segment(static_cast<Eigen::Index>(e) * ni_, ni_));
    local = rhs_b.segment(static_cast<Eigen::Index>(e) * nb_, nb_) - bi_[e] * y;
    if (has_essential_[e]) {
      VectorXd ess = VectorXd::Zero(nb_);
      for (int r = 0; r < nb_; ++r) {
        if (free_index_[dofs_[e][r]] < 0) ess[r] = trace[dofs_[e][r]];
      }
      local -= bb_[e] * ess - bi_[e] * (w_[e] * ess);
    }
    for (int r = 0; r < nb_; ++r) {
      const int gr = free_index_[dofs_[e][r]];
      if (gr >= 0) g[gr] += local[r];
    }
  }
  VectorXd x;
  if (num_free_ > 0) {
    x = factor_->lu.solve(g);
    if (factor_->lu.info() != Eigen::Success || !x.allFinite()) {
      fail(ErrorKind::Solver, "global trace solve failed");
    }
  }
  for (int gidx = 0; gidx < num_trace_; ++gidx) {
    if (free_index_[gidx] >= 0) trace[gidx] = x[free_index_[gidx]];
  }
  for (int e = 0; e < ne; ++e) {
    for (int r = 0; r < nb_; ++r) local[r] = trace[dofs_[e][r]];
    interior.segment(static_cast<Eigen::Index>(e) * ni_, ni_) -= w_[e] * local;
  }
}

MonolithicSystem assemble_monolithic(const std::vector<ElementSystem>& elements,
                                     const std::vector<std::vector<int>>& dofs,
                                     int num_trace, const std::vector<char>& essential) {
  MonolithicSystem sys;
  const int ne = static_cast<int>(elements.size());
  const int ni = static_cast<int>(elements.at(0).ii.rows());
  const int nb = static_cast<int>(elements[0].bb.rows());
  sys.interior_size = ne * ni;
  sys.free_index = free_numbering(num_trace, essential, dofs, sys.num_free);
  const int n = sys.interior_size + sys.num_free;
  std::vector<Eigen::Triplet<double>> trip;
  for (int e = 0; e < ne; ++e) {
    const ElementSystem& s = elements[e];
    const int o = e * ni;
    for (int r = 0; r < ni; ++r) {
      for (int c = 0; c < ni; ++c) {
        if (s.ii(r, c) != 0.0) trip.emplace_back(o + r, o + c, s.ii(r, c));
      }
    }
    for (int b = 0; b < nb; ++b) {
      const int gb = sys.free_index[dofs[e][b]];
      if (gb < 0) continue;
      const int row = sys.interior_size + gb;
      for (int r = 0; r < ni; ++r) {
        if (s.ib(r, b) != 0.0) trip.emplace_back(o + r, row, s.ib(r, b));
        if (s.bi(b, r) != 0.0) trip.emplace_back(row, o + r, s.bi(b, r));
      }
      for (int c = 0; c < nb; ++c) {
        const int gc = sys.free_index[dofs[e][c]];
        if (gc >= 0 && s.bb(b, c) != 0.0) {
          trip.emplace_back(row, sys.interior_size + gc, s.bb(b, c));
        }
      }
    }
  }
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  sys.matrix.makeCompressed();
  return sys;
}

void solve_monolithic(const MonolithicSystem& sys, const std::vector<ElementSystem>& elements,
                      const std::vector<std::vector<int>>& dofs, const Eigen::VectorXd& rhs_i,
                      const Eigen::VectorXd& rhs_b, Eigen::VectorXd& interior,
                      Eigen::VectorXd& trace) {
  const int ne = static_cast<int>(elements.size());
  const int ni = static_cast<int>(elements[0].ii.rows());
  const int nb = static_cast<int>(elements[0].bb.rows());
  VectorXd rhs = VectorXd::Zero(sys.interior_size + sys.num_free);
  rhs.head(sys.interior_size) = rhs_i;
  for (int e = 0; e < ne; ++e) {
    VectorXd ess = VectorXd::Zero(nb);
    for (int b = 0; b < nb; ++b) {
      if (sys.free_index[dofs[e][b]] < 0) ess[b] = trace[dofs[e][b]];
    }
    rhs.segment(e * ni, ni) -= elements[e].ib * ess;
    const VectorXd tb = rhs_b.segment(e * nb, nb) - elements[e].bb * ess;
    for (int b = 0; b < nb; ++b) {
      const int gb = sys.free_index[dofs[e][b]];
      if (gb >= 0) rhs[sys.interior_size + gb] += tb[b];
    }
  }
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(sys.matrix);
  if (lu.info() != Eigen::Success) fail(ErrorKind::Solver, "monolithic factorization failed");
  const VectorXd x = lu.solve(rhs);
  interior = x.head(sys.interior_size);
  for (int g = 0; g < static_cast<int>(sys.free_index.size()); ++g) {
    if (sys.free_index[g] >= 0) trace[g] = x[sys.interior_size + sys.free_index[g]];
  }
}

std::string sparse_backend_name() {
#ifdef POROHDG_HAVE_UMFPACK
  return "umfpack";
#else
  return "eigen-sparselu";
#endif
}

void write_matrix_market(const SparseMatrix& matrix, const std::string& path) {
  if (!Eigen::saveMarket(matrix, path)) {
    fail(ErrorKind::Io, "cannot write matrix to " + path);
  }
}

}  // namespace porohdg
