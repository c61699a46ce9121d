// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#include "timestepper.hpp"

#include <cmath>
#include <random>
#include <string>

#include <Eigen/SparseCholesky>

namespace porohdg {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Gathers rows and columns `idx` of m.
MatrixXd pick(const MatrixXd& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  MatrixXd out(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = m(rows[r], cols[c]);
  }
  return out;
}

std::vector<int> range(int begin, int count) {
  std::vector<int> v(count);
  for (int i = 0; i < count; ++i) v[i] = begin + i;
  return v;
}

// Local trace positions of the given components, face by face.
std::vector<int> trace_positions(const LocalLayout& L, std::initializer_list<int> comps) {
  std::vector<int> out;
  for (int j = 0; j < 3; ++j) {
    for (int c : comps) {
      for (int m = 0; m < L.ne; ++m) out.push_back(L.trace(j, c) + m);
    }
  }
  return out;
}

// Physical basis gradients at the volume quadrature points.
struct Gradients {
  MatrixXd gx, gy;
};

Gradients physical_gradients(const ReferenceElement& ref, const AffineMap& map) {
  const BasisTable& t = ref.volume_table();
  return {map.inv_transpose(0, 0) * t.d_xi + map.inv_transpose(0, 1) * t.d_eta,
          map.inv_transpose(1, 0) * t.d_xi + map.inv_transpose(1, 1) * t.d_eta};
}

// Face quadrature of local face j in physical coordinates.
template <typename Fn>
void for_face_points(const ReferenceElement& ref, const AffineMap& map, int j, Fn fn) {
  const QuadRule& er = ref.edge_rule();
  const Point2& a = map.vertices[(j + 1) % 3];
  const Point2& b = map.vertices[(j + 2) % 3];
  const MatrixXd& psi = ref.face_table(j);
  for (std::size_t q = 0; q < er.size(); ++q) {
    const Point2 x = a + er.points[q].x() * (b - a);
    fn(x, psi.row(q), er.weights[q] * map.face_lengths[j]);
  }
}

// Writes the essential entries of `trace` listed by comps from face
// projections of fn(component).
void project_essential(const Discretization& disc, std::initializer_list<int> comps,
                       const std::function<double(const Point2&, int)>& fn, VectorXd& trace) {
  const Mesh& mesh = disc.mesh();
  const DofMap& d = disc.dofs();
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (!mesh.faces()[f].is_boundary()) continue;
    for (int c : comps) {
      if (!d.essential[d.index(f, c, 0)]) continue;
      const VectorXd v = project_to_face(mesh, f, disc.reference(),
                                         [&](const Point2& x) { return fn(x, c); });
      for (int m = 0; m < d.ne(); ++m) trace[d.index(f, c, m)] = v[m];
    }
  }
}

}  // namespace

Discretization::Discretization(Mesh mesh, MaterialField materials, int degree,
                               Stabilization stab)
    : mesh_(std::move(mesh)),
      materials_(std::move(materials)),
      ref_(degree),
      dofs_(build_dofmap(mesh_, degree)),
      stab_(std::move(stab)) {
  const std::size_t ne = mesh_.num_elements();
  if (materials_.element_region.size() != ne) {
    fail(ErrorKind::InvalidInput, "material assignment does not cover the mesh");
  }
  for (int r : materials_.element_region) {
    if (r < 0 || r >= static_cast<int>(materials_.regions.size())) {
      fail(ErrorKind::InvalidInput, "element refers to unknown material region");
    }
  }
  if (stab_.solid.size() != ne || stab_.fluid.size() != ne) {
    fail(ErrorKind::InvalidInput, "stabilization does not cover the mesh");
  }
  for (std::size_t e = 0; e < ne; ++e) {
    for (int j = 0; j < 3; ++j) {
      if (!(stab_.solid[e][j] >= 0.0) || !(stab_.fluid[e][j] >= 0.0)) {
        fail(ErrorKind::InvalidInput, "stabilization must be nonnegative");
      }
    }
  }
}

LocalBlocks Discretization::blocks(int e) const {
  return local_matrices(mesh_, e, materials_.at(e), ref_, stab_);
}

State zero_state(const Discretization& disc, double t) {
  State s;
  s.t = t;
  s.block = disc.layout().interior_size();
  s.interior = VectorXd::Zero(static_cast<Eigen::Index>(s.block) * disc.num_elements());
  s.trace = VectorXd::Zero(disc.dofs().size());
  return s;
}

TimeGrid make_time_grid(double t_final, double dt_max, double t0) {
  if (!(dt_max > 0.0)) fail(ErrorKind::InvalidInput, "time step must be positive");
  if (!(t_final > t0)) fail(ErrorKind::InvalidInput, "final time must exceed start time");
  const double span = t_final - t0;
  TimeGrid g;
  g.steps = std::max(1, static_cast<int>(std::ceil(span / dt_max * (1.0 - 1e-12))));
  g.dt = span / g.steps;
  g.t0 = t0;
  return g;
}

std::pair<double, double> midpoint_ops(double g_old, double g_new, double dt) {
  if (!(dt > 0.0)) fail(ErrorKind::InvalidInput, "time step must be positive");
  return {(g_new - g_old) / dt, 0.5 * (g_old + g_new)};
}

void apply_dirichlet(const Discretization& disc, const SourceSpec& src, double t,
                     VectorXd& trace) {
  const DofMap& d = disc.dofs();
  for (int g = 0; g < d.size(); ++g) {
    if (d.essential[g]) trace[g] = 0.0;
  }
  if (src.solid_velocity_bc) {
    project_essential(disc, {0, 1},
                      [&](const Point2& x, int c) { return src.solid_velocity_bc(x, t)[c]; },
                      trace);
  }
  if (src.pressure_bc) {
    project_essential(disc, {2},
                      [&](const Point2& x, int) { return src.pressure_bc(x, t); }, trace);
  }
}

void init_fluid(const Discretization& disc, const InitialData& data, State& state) {
  const Mesh& mesh = disc.mesh();
  const ReferenceElement& ref = disc.reference();
  const LocalLayout& L = disc.layout();
  const int nk = L.nk, ni = 3 * nk;
  const std::vector<int> sel = trace_positions(L, {2});
  const int nb = static_cast<int>(sel.size());
  const std::vector<int> fluid_rows = range(L.fluid(), 2 * nk);
  const std::vector<int> p_rows = range(L.pressure(), nk);

  std::vector<ElementSystem> systems(mesh.num_elements());
  std::vector<std::vector<int>> dofs(mesh.num_elements());
  VectorXd rhs_i = VectorXd::Zero(static_cast<Eigen::Index>(ni) * mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const LocalBlocks b = disc.blocks(e);
    const AffineMap map = affine_map(mesh.element_vertices(e));
    ElementSystem& s = systems[e];
    s.ii = MatrixXd::Zero(ni, ni);
    s.ii.topLeftCorner(2 * nk, 2 * nk) = map.det * MatrixXd::Identity(2 * nk, 2 * nk);
    s.ii.topRightCorner(2 * nk, nk) = -b.div_fluid;
    s.ii.bottomLeftCorner(nk, 2 * nk) = b.div_fluid.transpose();
    s.ii.bottomRightCorner(nk, nk) = b.stab_fluid_pp;
    const std::vector<int> all_f = range(0, 2 * nk);
    const std::vector<int> all_p = range(0, nk);
    s.ib.resize(ni, nb);
    s.ib.topRows(2 * nk) = pick(MatrixXd(b.face_fluid.transpose()), all_f, sel);
    s.ib.bottomRows(nk) = -pick(b.stab_fluid_ph, all_p, sel);
    s.bi.resize(nb, ni);
    s.bi.leftCols(2 * nk) = -pick(b.face_fluid, sel, all_f);
    s.bi.rightCols(nk) = -pick(MatrixXd(b.stab_fluid_ph.transpose()), sel, all_p);
    s.bb = pick(b.stab_fluid_hh, sel, sel);
    const std::vector<int> gd = disc.element_dofs(e);
    for (int r : sel) dofs[e].push_back(gd[r]);

    // (v_f0, w) - (p0, div w) + <p0, w.n>  and  (div v_f0, q).
    auto rhs = rhs_i.segment(static_cast<Eigen::Index>(e) * ni, ni);
    const QuadRule& vol = ref.volume_rule();
    const MatrixXd& tab = ref.volume_table().values;
    const Gradients g = physical_gradients(ref, map);
    for (std::size_t q = 0; q < vol.size(); ++q) {
      const double w = vol.weights[q] * map.det;
      const Point2 x = map.to_physical(vol.points[q]);
      const auto phi = tab.row(q).head(nk).transpose();
      const Eigen::Vector2d vf = data.fluid_velocity ? data.fluid_velocity(x)
                                                     : Eigen::Vector2d::Zero();
      const double p0 = data.pressure ? data.pressure(x) : 0.0;
      const double dv = data.fluid_divergence ? data.fluid_divergence(x) : 0.0;
      rhs.segment(0, nk) += w * (vf[0] * phi - p0 * g.gx.row(q).head(nk).transpose());
      rhs.segment(nk, nk) += w * (vf[1] * phi - p0 * g.gy.row(q).head(nk).transpose());
      rhs.segment(2 * nk, nk) += w * dv * phi;
    }
    if (data.pressure) {
      for (int j = 0; j < 3; ++j) {
        const Point2& n = map.normals[j];
        for_face_points(ref, map, j, [&](const Point2& x, const auto& psi, double w) {
          const double p0 = data.pressure(x);
          for (int c = 0; c < 2; ++c) {
            rhs.segment(c * nk, nk) += w * p0 * n[c] * psi.head(nk).transpose();
          }
        });
      }
    }
  }
  const DofMap& d = disc.dofs();
  const CondensedSystem sys(std::move(systems), dofs, d.size(), d.essential);
  VectorXd trace = state.trace;
  project_essential(disc, {2},
                    [&](const Point2& x, int) { return data.pressure ? data.pressure(x) : 0.0; },
                    trace);
  VectorXd interior;
  sys.solve(rhs_i, VectorXd::Zero(static_cast<Eigen::Index>(nb) * mesh.num_elements()),
            interior, trace);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto u = interior.segment(static_cast<Eigen::Index>(e) * ni, ni);
    auto out = state.element(e);
    for (int i = 0; i < 2 * nk; ++i) out[fluid_rows[i]] = u[i];
    for (int i = 0; i < nk; ++i) out[p_rows[i]] = u[2 * nk + i];
  }
  for (int f = 0; f < d.num_faces; ++f) {
    for (int m = 0; m < d.ne(); ++m) state.trace[d.index(f, 2, m)] = trace[d.index(f, 2, m)];
  }
}

void init_solid(const Discretization& disc, const InitialData& data, State& state) {
  const Mesh& mesh = disc.mesh();
  const ReferenceElement& ref = disc.reference();
  const LocalLayout& L = disc.layout();
  const int nk = L.nk, nk1 = L.nk1, ns = 3 * nk, ni = ns + 2 * nk1;
  const std::vector<int> sel = trace_positions(L, {0, 1});
  const int nb = static_cast<int>(sel.size());
  const std::vector<int> all_s = range(0, ns), all_v = range(0, 2 * nk1);

  std::vector<ElementSystem> systems(mesh.num_elements());
  std::vector<std::vector<int>> dofs(mesh.num_elements());
  VectorXd rhs_i = VectorXd::Zero(static_cast<Eigen::Index>(ni) * mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const LocalBlocks b = disc.blocks(e);
    const MaterialParams& mat = disc.materials().at(e);
    const AffineMap map = affine_map(mesh.element_vertices(e));
    ElementSystem& s = systems[e];
    s.ii.resize(ni, ni);
    s.ii << b.aa_stress, b.div_stress, -b.div_stress.transpose(), b.stab_solid_vv;
    s.ib.resize(ni, nb);
    s.ib.topRows(ns) = -pick(MatrixXd(b.face_stress.transpose()), all_s, sel);
    s.ib.bottomRows(2 * nk1) = -pick(b.stab_solid_vh, all_v, sel);
    s.bi.resize(nb, ni);
    s.bi.leftCols(ns) = pick(b.face_stress, sel, all_s);
    s.bi.rightCols(2 * nk1) = -pick(MatrixXd(b.stab_solid_vh.transpose()), sel, all_v);
    s.bb = pick(b.stab_solid_hh, sel, sel);
    const std::vector<int> gd = disc.element_dofs(e);
    for (int r : sel) dofs[e].push_back(gd[r]);

    // (A s0, r) + (div r, v_s0) - <v_s0, r n>  and  -(div s0, w).
    auto rhs = rhs_i.segment(static_cast<Eigen::Index>(e) * ni, ni);
    const QuadRule& vol = ref.volume_rule();
    const MatrixXd& tab = ref.volume_table().values;
    const Gradients g = physical_gradients(ref, map);
    for (std::size_t q = 0; q < vol.size(); ++q) {
      const double w = vol.weights[q] * map.det;
      const Point2 x = map.to_physical(vol.points[q]);
      const auto phi = tab.row(q).transpose();
      const auto gx = g.gx.row(q).head(nk).transpose();
      const auto gy = g.gy.row(q).head(nk).transpose();
      if (data.stress) {
        const Eigen::Vector3d as = mat.compliance * data.stress(x);
        for (int a = 0; a < 3; ++a) rhs.segment(a * nk, nk) += w * as[a] * phi.head(nk);
      }
      if (data.solid_velocity) {
        const Eigen::Vector2d v = data.solid_velocity(x);
        rhs.segment(0, nk) += w * v[0] * gx;
        rhs.segment(nk, nk) += w * v[1] * gy;
        rhs.segment(2 * nk, nk) += w * (v[0] * gy + v[1] * gx);
      }
      if (data.stress_divergence) {
        const Eigen::Vector2d dv = data.stress_divergence(x);
        for (int c = 0; c < 2; ++c) rhs.segment(ns + c * nk1, nk1) -= w * dv[c] * phi;
      }
    }
    if (data.solid_velocity) {
      for (int j = 0; j < 3; ++j) {
        const Point2& n = map.normals[j];
        for_face_points(ref, map, j, [&](const Point2& x, const auto& psi, double w) {
          const Eigen::Vector2d v = data.solid_velocity(x);
          for (int a = 0; a < 3; ++a) {
            const double t = traction_coefficient(a, 0, n) * v[0] +
                             traction_coefficient(a, 1, n) * v[1];
            rhs.segment(a * nk, nk) -= w * t * psi.head(nk).transpose();
          }
        });
      }
    }
  }
  const DofMap& d = disc.dofs();
  const CondensedSystem sys(std::move(systems), dofs, d.size(), d.essential);
  VectorXd trace = state.trace;
  project_essential(disc, {0, 1},
                    [&](const Point2& x, int c) {
                      return data.solid_velocity ? data.solid_velocity(x)[c] : 0.0;
                    },
                    trace);
  VectorXd interior;
  sys.solve(rhs_i, VectorXd::Zero(static_cast<Eigen::Index>(nb) * mesh.num_elements()),
            interior, trace);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto u = interior.segment(static_cast<Eigen::Index>(e) * ni, ni);
    auto out = state.element(e);
    out.segment(L.stress(), ns) = u.head(ns);
    out.segment(L.solid(), 2 * nk1) = u.tail(2 * nk1);
  }
  for (int f = 0; f < d.num_faces; ++f) {
    for (int c = 0; c < 2; ++c) {
      for (int m = 0; m < d.ne(); ++m) state.trace[d.index(f, c, m)] = trace[d.index(f, c, m)];
    }
  }
}

State init_compatible(const Discretization& disc, const InitialData& data, double t0) {
  State s = zero_state(disc, t0);
  init_fluid(disc, data, s);
  init_solid(disc, data, s);
  return s;
}

State init_projection(const Discretization& disc, const InitialData& data, double t0) {
  State s = zero_state(disc, t0);
  const Mesh& mesh = disc.mesh();
  for (int e = 0; e < mesh.num_elements(); ++e) {
    s.element(e) = project_to_element(mesh, e, disc.reference(), data.stress,
                                      data.solid_velocity, data.fluid_velocity, data.pressure);
  }
  const DofMap& d = disc.dofs();
  for (int f = 0; f < mesh.num_faces(); ++f) {
    for (int c = 0; c < 3; ++c) {
      if (c < 2 && !data.solid_velocity) continue;
      if (c == 2 && !data.pressure) continue;
      const VectorXd v = project_to_face(mesh, f, disc.reference(), [&](const Point2& x) {
        return c < 2 ? data.solid_velocity(x)[c] : data.pressure(x);
      });
      for (int m = 0; m < d.ne(); ++m) s.trace[d.index(f, c, m)] = v[m];
    }
  }
  return s;
}

CompatibilityResidual compatibility_residual(const Discretization& disc, const State& state) {
  const DofMap& d = disc.dofs();
  VectorXd res = VectorXd::Zero(d.size());
  double scale = 0.0;
  for (int e = 0; e < disc.num_elements(); ++e) {
    const LocalBlocks b = disc.blocks(e);
    const std::vector<int> gd = disc.element_dofs(e);
    VectorXd lam(gd.size());
    for (std::size_t r = 0; r < gd.size(); ++r) lam[r] = state.trace[gd[r]];
    const VectorXd eu = b.trace_rows() * state.element(e);
    const VectorXd hl = b.trace_trace() * lam;
    scale = std::max({scale, eu.cwiseAbs().maxCoeff(), hl.cwiseAbs().maxCoeff()});
    for (std::size_t r = 0; r < gd.size(); ++r) res[gd[r]] += eu[r] + hl[r];
  }
  CompatibilityResidual out;
  if (scale == 0.0) return out;
  for (int g = 0; g < d.size(); ++g) {
    if (d.essential[g]) continue;
    const int comp = (g % d.face_size) / d.ne();
    double& slot = comp < 2 ? out.solid : out.fluid;
    slot = std::max(slot, std::abs(res[g]) / scale);
  }
  return out;
}

State random_compatible_state(const Discretization& disc, std::uint64_t seed) {
  State s = zero_state(disc);
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (auto& c : s.interior) c = U(gen);
  const DofMap& d = disc.dofs();
  std::vector<Eigen::Triplet<double>> trip;
  VectorXd rhs = VectorXd::Zero(d.num_free);
  for (int e = 0; e < disc.num_elements(); ++e) {
    const LocalBlocks b = disc.blocks(e);
    const std::vector<int> gd = disc.element_dofs(e);
    const VectorXd eu = b.trace_rows() * s.element(e);
    const MatrixXd h = b.trace_trace();
    for (std::size_t r = 0; r < gd.size(); ++r) {
      const int gr = d.free_index[gd[r]];
      if (gr < 0) continue;
      rhs[gr] -= eu[r];
      for (std::size_t c = 0; c < gd.size(); ++c) {
        const int gc = d.free_index[gd[c]];
        if (gc >= 0 && h(r, c) != 0.0) trip.emplace_back(gr, gc, h(r, c));
      }
    }
  }
  SparseMatrix hm(d.num_free, d.num_free);
  hm.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(hm);
  if (ldlt.info() != Eigen::Success) {
    fail(ErrorKind::Solver, "trace stabilization matrix is singular (zero stabilization?)");
  }
  const VectorXd lam = ldlt.solve(rhs);
  for (int g = 0; g < d.size(); ++g) {
    if (d.free_index[g] >= 0) s.trace[g] = lam[d.free_index[g]];
  }
  return s;
}

std::vector<ElementSystem> element_systems(const Discretization& disc, double dt) {
  std::vector<ElementSystem> out;
  out.reserve(disc.num_elements());
  for (int e = 0; e < disc.num_elements(); ++e) {
    out.push_back(cn_element_system(disc.blocks(e), dt));
  }
  return out;
}

namespace {

std::vector<std::vector<int>> all_element_dofs(const Discretization& disc) {
  std::vector<std::vector<int>> out(disc.num_elements());
  for (int e = 0; e < disc.num_elements(); ++e) out[e] = disc.element_dofs(e);
  return out;
}

}  // namespace

Stepper::Stepper(const Discretization& disc, double dt)
    : disc_(&disc),
      dt_(dt),
      system_(element_systems(disc, dt), all_element_dofs(disc), disc.dofs().size(),
              disc.dofs().essential) {
  det_.resize(disc.num_elements());
  for (int e = 0; e < disc.num_elements(); ++e) {
    det_[e] = affine_map(disc.mesh().element_vertices(e)).det;
  }
}

State Stepper::advance(const State& state, const SourceSpec& src) const {
  const Discretization& disc = *disc_;
  const LocalLayout& L = disc.layout();
  const int ne = disc.num_elements(), ni = L.interior_size(), nb = L.trace_size();
  if (state.block != ni || state.interior.size() != static_cast<Eigen::Index>(ni) * ne) {
    fail(ErrorKind::InvalidInput, "state does not match the discretization");
  }
  const double tm = state.t + 0.5 * dt_;
  VectorXd rhs_i(static_cast<Eigen::Index>(ni) * ne);
  VectorXd rhs_b(static_cast<Eigen::Index>(nb) * ne);
  VectorXd lam(nb);
  VectorField f, ff;
  ScalarField g;
  if (src.body_force) f = [&](const Point2& x) { return src.body_force(x, tm); };
  if (src.fluid_force) ff = [&](const Point2& x) { return src.fluid_force(x, tm); };
  if (src.fluid_source) g = [&](const Point2& x) { return src.fluid_source(x, tm); };
  for (int e = 0; e < ne; ++e) {
    const std::vector<int>& gd = system_.dofs(e);
    for (int r = 0; r < nb; ++r) lam[r] = state.trace[gd[r]];
    const auto u = state.element(e);
    auto ri = rhs_i.segment(static_cast<Eigen::Index>(e) * ni, ni);
    ri = 2.0 * apply_mass(L, disc.materials().at(e), det_[e], u) -
         system_.apply_interior(e, u + system_.condensed_coupling(e) * lam);
    if (src.has_loads()) {
      ri += dt_ * load_vector(disc.mesh(), e, disc.reference(), f, ff, g);
    }
    rhs_b.segment(static_cast<Eigen::Index>(e) * nb, nb) =
        -(system_.bi(e) * u + system_.bb(e) * lam);
  }
  State next;
  next.t = state.t + dt_;
  next.block = ni;
  next.trace = state.trace;
  apply_dirichlet(disc, src, next.t, next.trace);
  system_.solve(rhs_i, rhs_b, next.interior, next.trace);
  return next;
}

}  // namespace porohdg
