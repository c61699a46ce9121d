// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#include "hdg_local.hpp"

#include <string>

namespace porohdg {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Block (a,b) of the result is s(a,b) * g.
template <typename Small>
MatrixXd kron(const Small& s, const MatrixXd& g) {
  MatrixXd out(s.rows() * g.rows(), s.cols() * g.cols());
  for (Eigen::Index a = 0; a < s.rows(); ++a) {
    for (Eigen::Index b = 0; b < s.cols(); ++b) {
      out.block(a * g.rows(), b * g.cols(), g.rows(), g.cols()) = s(a, b) * g;
    }
  }
  return out;
}

}  // namespace

double traction_coefficient(int a, int c, const Point2& n) {
  switch (a) {
    case 0: return c == 0 ? n.x() : 0.0;
    case 1: return c == 1 ? n.y() : 0.0;
    default: return c == 0 ? n.y() : n.x();
  }
}

ReferenceElement::ReferenceElement(int k, int order)
    : layout_(k),
      order_(order < 0 ? 2 * k + 3 : order),
      basis_(k + 1),
      edge_(k) {
  if (k < 0) fail(ErrorKind::InvalidInput, "degree must be >= 0");
  if (order_ < 2 * k + 2) {
    fail(ErrorKind::InvalidInput,
         "quadrature order " + std::to_string(order_) + " under-resolves degree " +
             std::to_string(k) + " forms (need >= " + std::to_string(2 * k + 2) + ")");
  }
  volume_ = quadrature(Domain::Triangle, order_);
  volume_table_ = basis_.tabulate(volume_.points);
  edge_rule_ = quadrature(Domain::Edge, order_);
  const auto& rv = reference_vertices();
  std::vector<double> t, t_flip;
  for (const Point2& p : edge_rule_.points) {
    t.push_back(p.x());
    t_flip.push_back(1.0 - p.x());
  }
  for (int j = 0; j < 3; ++j) {
    const Point2& a = rv[(j + 1) % 3];
    const Point2& b = rv[(j + 2) % 3];
    std::vector<Point2> pts;
    for (double s : t) pts.push_back(a + s * (b - a));
    face_tables_[j] = basis_.tabulate(pts).values;
  }
  edge_tables_[0] = edge_.tabulate(t);
  edge_tables_[1] = edge_.tabulate(t_flip);
}

Stabilization stabilization_defaults(const Mesh& mesh, double c_s, double c_f) {
  if (!(c_s > 0.0) || !(c_f > 0.0)) {
    fail(ErrorKind::InvalidInput, "stabilization constants must be positive");
  }
  Stabilization stab;
  stab.solid.resize(mesh.num_elements());
  stab.fluid.resize(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    stab.solid[e].fill(c_s / mesh.h(e));
    stab.fluid[e].fill(c_f);
  }
  return stab;
}

bool face_flipped(const Mesh& mesh, int element, int j) {
  const auto& t = mesh.triangles()[element];
  return t[(j + 1) % 3] > t[(j + 2) % 3];
}

Eigen::MatrixXd face_reduction(const Mesh& mesh, int element, int j,
                               const ReferenceElement& ref) {
  const QuadRule& rule = ref.edge_rule();
  const MatrixXd& psi = ref.face_table(j);
  const MatrixXd& mu = ref.edge_table(face_flipped(mesh, element, j));
  // Edge basis is orthonormal in the unit parameter, so the Gram matrix
  // cancels against the face length.
  MatrixXd r = MatrixXd::Zero(mu.cols(), psi.cols());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    r += rule.weights[q] * mu.row(q).transpose() * psi.row(q);
  }
  return r;
}

LocalBlocks local_matrices(const Mesh& mesh, int element, const MaterialParams& material,
                           const ReferenceElement& ref, const Stabilization& stab) {
  const LocalLayout& L = ref.layout();
  const int nk = L.nk, nk1 = L.nk1, ne = L.ne, nb = L.trace_size();
  const AffineMap map = affine_map(mesh.element_vertices(element));

  // Volume integrals.
  const QuadRule& vol = ref.volume_rule();
  const BasisTable& tab = ref.volume_table();
  MatrixXd g11 = MatrixXd::Zero(nk1, nk1);
  MatrixXd dx = MatrixXd::Zero(nk, nk1), dy = MatrixXd::Zero(nk, nk1);
  for (std::size_t q = 0; q < vol.size(); ++q) {
    const double w = vol.weights[q] * map.det;
    const auto v = tab.values.row(q);
    const Eigen::RowVectorXd gx = map.inv_transpose(0, 0) * tab.d_xi.row(q) +
                                  map.inv_transpose(0, 1) * tab.d_eta.row(q);
    const Eigen::RowVectorXd gy = map.inv_transpose(1, 0) * tab.d_xi.row(q) +
                                  map.inv_transpose(1, 1) * tab.d_eta.row(q);
    g11.noalias() += w * v.transpose() * v;
    dx.noalias() += w * gx.head(nk).transpose() * v;
    dy.noalias() += w * gy.head(nk).transpose() * v;
  }
  const MatrixXd g = g11.topLeftCorner(nk, nk);
  const MatrixXd gk = g11.topRows(nk);  // P_k rows, P_{k+1} columns

  const VoigtMatrix& A = material.compliance;
  const Eigen::Vector3d Ae = A * voigt_identity();
  const double alpha = material.alpha;

  LocalBlocks b;
  b.layout = L;
  b.aa_stress = kron(A, g);
  b.aa_stress_pressure = kron(Eigen::MatrixXd(alpha * Ae), g);
  b.aa_pressure = alpha * alpha * voigt_identity().dot(Ae) * g;
  b.storage = material.s0 * g;

  b.rho = MatrixXd::Zero(2 * nk1 + 2 * nk, 2 * nk1 + 2 * nk);
  b.rho.topLeftCorner(2 * nk1, 2 * nk1) =
      kron(Eigen::Matrix2d(material.rho11 * Eigen::Matrix2d::Identity()), g11);
  const MatrixXd coupling = kron(Eigen::Matrix2d(material.rho12 * Eigen::Matrix2d::Identity()),
                                 MatrixXd(gk.transpose()));
  b.rho.topRightCorner(2 * nk1, 2 * nk) = coupling;
  b.rho.bottomLeftCorner(2 * nk, 2 * nk1) = coupling.transpose();
  b.rho.bottomRightCorner(2 * nk, 2 * nk) = kron(material.rho22, g);
  b.drag = kron(material.drag, g);

  b.div_stress = MatrixXd::Zero(3 * nk, 2 * nk1);
  b.div_stress.block(0, 0, nk, nk1) = dx;
  b.div_stress.block(nk, nk1, nk, nk1) = dy;
  b.div_stress.block(2 * nk, 0, nk, nk1) = dy;
  b.div_stress.block(2 * nk, nk1, nk, nk1) = dx;

  b.div_fluid = MatrixXd::Zero(2 * nk, nk);
  b.div_fluid.topRows(nk) = dx.leftCols(nk);
  b.div_fluid.bottomRows(nk) = dy.leftCols(nk);

  // Face integrals.
  b.face_stress = MatrixXd::Zero(nb, 3 * nk);
  b.face_fluid = MatrixXd::Zero(nb, 2 * nk);
  b.stab_solid_vv = MatrixXd::Zero(2 * nk1, 2 * nk1);
  b.stab_solid_vh = MatrixXd::Zero(2 * nk1, nb);
  b.stab_solid_hh = MatrixXd::Zero(nb, nb);
  b.stab_fluid_pp = MatrixXd::Zero(nk, nk);
  b.stab_fluid_ph = MatrixXd::Zero(nk, nb);
  b.stab_fluid_hh = MatrixXd::Zero(nb, nb);
  const QuadRule& er = ref.edge_rule();
  for (int j = 0; j < 3; ++j) {
    const double len = map.face_lengths[j];
    const Point2& n = map.normals[j];
    const MatrixXd& psi = ref.face_table(j);
    const MatrixXd& mu = ref.edge_table(face_flipped(mesh, element, j));
    MatrixXd r_pm = MatrixXd::Zero(nk1, ne);   // <psi, mu>
    MatrixXd g_mu = MatrixXd::Zero(ne, ne);    // <mu, mu>
    MatrixXd r_pp = MatrixXd::Zero(nk, nk);    // <phi, phi>
    for (std::size_t q = 0; q < er.size(); ++q) {
      const double w = er.weights[q] * len;
      r_pm.noalias() += w * psi.row(q).transpose() * mu.row(q);
      g_mu.noalias() += w * mu.row(q).transpose() * mu.row(q);
      r_pp.noalias() += w * psi.row(q).head(nk).transpose() * psi.row(q).head(nk);
    }
    const MatrixXd r_km = r_pm.topRows(nk);
    const double ts = stab.solid[element][j];
    const double tf = stab.fluid[element][j];
    const MatrixXd proj = r_pm * g_mu.ldlt().solve(r_pm.transpose());
    for (int c = 0; c < 2; ++c) {
      const int row = L.trace(j, c);
      for (int a = 0; a < 3; ++a) {
        b.face_stress.block(row, a * nk, ne, nk) +=
            traction_coefficient(a, c, n) * r_km.transpose();
      }
      b.face_fluid.block(L.trace(j, 2), c * nk, ne, nk) += n[c] * r_km.transpose();
      b.stab_solid_vv.block(c * nk1, c * nk1, nk1, nk1) += ts * proj;
      b.stab_solid_vh.block(c * nk1, row, nk1, ne) += ts * r_pm;
      b.stab_solid_hh.block(row, row, ne, ne) += ts * g_mu;
    }
    b.stab_fluid_pp += tf * r_pp;
    b.stab_fluid_ph.block(0, L.trace(j, 2), nk, ne) += tf * r_km;
    b.stab_fluid_hh.block(L.trace(j, 2), L.trace(j, 2), ne, ne) += tf * g_mu;
  }
  return b;
}

Eigen::MatrixXd LocalBlocks::mass() const {
  const LocalLayout& L = layout;
  const int nk = L.nk, nk1 = L.nk1;
  MatrixXd m = MatrixXd::Zero(L.interior_size(), L.interior_size());
  m.block(L.stress(), L.stress(), 3 * nk, 3 * nk) = aa_stress;
  m.block(L.stress(), L.pressure(), 3 * nk, nk) = aa_stress_pressure;
  m.block(L.pressure(), L.stress(), nk, 3 * nk) = aa_stress_pressure.transpose();
  m.block(L.pressure(), L.pressure(), nk, nk) = aa_pressure + storage;
  m.block(L.solid(), L.solid(), 2 * nk1 + 2 * nk, 2 * nk1 + 2 * nk) = rho;
  return m;
}

Eigen::MatrixXd LocalBlocks::stiffness() const {
  const LocalLayout& L = layout;
  const int nk = L.nk, nk1 = L.nk1;
  MatrixXd k = MatrixXd::Zero(L.interior_size(), L.interior_size());
  k.block(L.stress(), L.solid(), 3 * nk, 2 * nk1) = div_stress;
  k.block(L.solid(), L.stress(), 2 * nk1, 3 * nk) = -div_stress.transpose();
  k.block(L.solid(), L.solid(), 2 * nk1, 2 * nk1) = stab_solid_vv;
  k.block(L.fluid(), L.fluid(), 2 * nk, 2 * nk) = drag;
  k.block(L.fluid(), L.pressure(), 2 * nk, nk) = -div_fluid;
  k.block(L.pressure(), L.fluid(), nk, 2 * nk) = div_fluid.transpose();
  k.block(L.pressure(), L.pressure(), nk, nk) = stab_fluid_pp;
  return k;
}

Eigen::MatrixXd LocalBlocks::coupling() const {
  const LocalLayout& L = layout;
  const int nk = L.nk, nk1 = L.nk1;
  MatrixXd c = MatrixXd::Zero(L.interior_size(), L.trace_size());
  c.block(L.stress(), 0, 3 * nk, c.cols()) = -face_stress.transpose();
  c.block(L.solid(), 0, 2 * nk1, c.cols()) = -stab_solid_vh;
  c.block(L.fluid(), 0, 2 * nk, c.cols()) = face_fluid.transpose();
  c.block(L.pressure(), 0, nk, c.cols()) = -stab_fluid_ph;
  return c;
}

Eigen::MatrixXd LocalBlocks::trace_rows() const {
  const LocalLayout& L = layout;
  const int nk = L.nk, nk1 = L.nk1;
  MatrixXd e = MatrixXd::Zero(L.trace_size(), L.interior_size());
  e.block(0, L.stress(), e.rows(), 3 * nk) = face_stress;
  e.block(0, L.solid(), e.rows(), 2 * nk1) = -stab_solid_vh.transpose();
  e.block(0, L.fluid(), e.rows(), 2 * nk) = -face_fluid;
  e.block(0, L.pressure(), e.rows(), nk) = -stab_fluid_ph.transpose();
  return e;
}

Eigen::MatrixXd LocalBlocks::trace_trace() const { return stab_solid_hh + stab_fluid_hh; }

Eigen::VectorXd apply_mass(const LocalLayout& L, const MaterialParams& m, double det,
                           const Eigen::Ref<const Eigen::VectorXd>& u) {
  const int nk = L.nk, nk1 = L.nk1;
  VectorXd out(L.interior_size());
  const Eigen::Vector3d Ae = m.compliance * voigt_identity();
  const auto p = u.segment(L.pressure(), nk);
  for (int a = 0; a < 3; ++a) {
    auto row = out.segment(L.stress(a), nk);
    row = m.alpha * Ae[a] * p;
    for (int b = 0; b < 3; ++b) row += m.compliance(a, b) * u.segment(L.stress(b), nk);
  }
  auto pr = out.segment(L.pressure(), nk);
  pr = (m.alpha * m.alpha * voigt_identity().dot(Ae) + m.s0) * p;
  for (int a = 0; a < 3; ++a) pr += m.alpha * Ae[a] * u.segment(L.stress(a), nk);
  for (int c = 0; c < 2; ++c) {
    auto vs = out.segment(L.solid(c), nk1);
    vs = m.rho11 * u.segment(L.solid(c), nk1);
    vs.head(nk) += m.rho12 * u.segment(L.fluid(c), nk);
    auto vf = out.segment(L.fluid(c), nk);
    vf = m.rho12 * u.segment(L.solid(c), nk);
    for (int d = 0; d < 2; ++d) vf += m.rho22(c, d) * u.segment(L.fluid(d), nk);
  }
  return det * out;
}

ElementSystem cn_element_system(const LocalBlocks& blocks, double dt) {
  if (!(dt > 0.0)) fail(ErrorKind::InvalidInput, "time step must be positive");
  const double h = 0.5 * dt;
  ElementSystem s;
  s.ii = blocks.mass() + h * blocks.stiffness();
  s.ib = h * blocks.coupling();
  s.bi = h * blocks.trace_rows();
  s.bb = h * blocks.trace_trace();
  return s;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> cn_rhs(const LocalBlocks& blocks, double dt,
                                                   const Eigen::VectorXd& u,
                                                   const Eigen::VectorXd& lambda,
                                                   const Eigen::VectorXd& load) {
  const double h = 0.5 * dt;
  VectorXd ri = blocks.mass() * u - h * (blocks.stiffness() * u + blocks.coupling() * lambda) +
                dt * load;
  VectorXd rb = -h * (blocks.trace_rows() * u + blocks.trace_trace() * lambda);
  return {std::move(ri), std::move(rb)};
}

Eigen::VectorXd load_vector(const Mesh& mesh, int element, const ReferenceElement& ref,
                            const VectorField& f, const VectorField& ff,
                            const ScalarField& g) {
  const LocalLayout& L = ref.layout();
  VectorXd out = VectorXd::Zero(L.interior_size());
  if (!f && !ff && !g) return out;
  const AffineMap map = affine_map(mesh.element_vertices(element));
  const QuadRule& vol = ref.volume_rule();
  const MatrixXd& tab = ref.volume_table().values;
  for (std::size_t q = 0; q < vol.size(); ++q) {
    const double w = vol.weights[q] * map.det;
    const Point2 x = map.to_physical(vol.points[q]);
    const auto v = tab.row(q).transpose();
    if (f) {
      const Eigen::Vector2d fv = f(x);
      for (int c = 0; c < 2; ++c) out.segment(L.solid(c), L.nk1) += w * fv[c] * v;
    }
    if (ff) {
      const Eigen::Vector2d fv = ff(x);
      for (int c = 0; c < 2; ++c) out.segment(L.fluid(c), L.nk) += w * fv[c] * v.head(L.nk);
    }
    if (g) out.segment(L.pressure(), L.nk) += w * g(x) * v.head(L.nk);
  }
  return out;
}

Eigen::VectorXd project_to_face(const Mesh& mesh, int face, const ReferenceElement& ref,
                                const ScalarField& fn) {
  const Face& f = mesh.faces()[face];
  const Point2& a = mesh.vertices()[f.vertices[0]];
  const Point2& b = mesh.vertices()[f.vertices[1]];
  const QuadRule& rule = ref.edge_rule();
  const MatrixXd& mu = ref.edge_table(false);
  VectorXd c = VectorXd::Zero(ref.layout().ne);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double s = rule.points[q].x();
    c += rule.weights[q] * fn(a + s * (b - a)) * mu.row(q).transpose();
  }
  return c;
}

Eigen::VectorXd project_to_element(const Mesh& mesh, int element,
                                   const ReferenceElement& ref, const StressField& stress,
                                   const VectorField& solid, const VectorField& fluid,
                                   const ScalarField& pressure) {
  const LocalLayout& L = ref.layout();
  VectorXd out = VectorXd::Zero(L.interior_size());
  const AffineMap map = affine_map(mesh.element_vertices(element));
  const QuadRule& vol = ref.volume_rule();
  const MatrixXd& tab = ref.volume_table().values;
  // The reference basis is orthonormal, so the projection is a weighted sum.
  for (std::size_t q = 0; q < vol.size(); ++q) {
    const double w = vol.weights[q];
    const Point2 x = map.to_physical(vol.points[q]);
    const auto v = tab.row(q).transpose();
    if (stress) {
      const Eigen::Vector3d s = stress(x);
      for (int a = 0; a < 3; ++a) out.segment(L.stress(a), L.nk) += w * s[a] * v.head(L.nk);
    }
    if (solid) {
      const Eigen::Vector2d s = solid(x);
      for (int c = 0; c < 2; ++c) out.segment(L.solid(c), L.nk1) += w * s[c] * v;
    }
    if (fluid) {
      const Eigen::Vector2d s = fluid(x);
      for (int c = 0; c < 2; ++c) out.segment(L.fluid(c), L.nk) += w * s[c] * v.head(L.nk);
    }
    if (pressure) out.segment(L.pressure(), L.nk) += w * pressure(x) * v.head(L.nk);
  }
  return out;
}

PointValues evaluate_interior(const LocalLayout& L, const Eigen::VectorXd& phi,
                              const Eigen::Ref<const Eigen::VectorXd>& u) {
  PointValues pv;
  const auto pk = phi.head(L.nk);
  for (int a = 0; a < 3; ++a) pv.stress[a] = pk.dot(u.segment(L.stress(a), L.nk));
  for (int c = 0; c < 2; ++c) {
    pv.solid[c] = phi.head(L.nk1).dot(u.segment(L.solid(c), L.nk1));
    pv.fluid[c] = pk.dot(u.segment(L.fluid(c), L.nk));
  }
  pv.pressure = pk.dot(u.segment(L.pressure(), L.nk));
  return pv;
}

}  // namespace porohdg
