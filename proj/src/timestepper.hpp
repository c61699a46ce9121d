// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "global_system.hpp"
#include "hdg_local.hpp"
#include "materials.hpp"
#include "mesh.hpp"

namespace porohdg {

using TimeVectorField = std::function<Eigen::Vector2d(const Point2&, double)>;
using TimeScalarField = std::function<double(const Point2&, double)>;
using TimeStressField = std::function<Eigen::Vector3d(const Point2&, double)>;

/// Mesh, per-element materials, degree, stabilization and trace numbering.
class Discretization {
 public:
  Discretization(Mesh mesh, MaterialField materials, int degree, Stabilization stab);

  const Mesh& mesh() const { return mesh_; }
  const MaterialField& materials() const { return materials_; }
  int degree() const { return ref_.degree(); }
  const ReferenceElement& reference() const { return ref_; }
  const LocalLayout& layout() const { return ref_.layout(); }
  const DofMap& dofs() const { return dofs_; }
  const Stabilization& stabilization() const { return stab_; }
  int num_elements() const { return mesh_.num_elements(); }

  LocalBlocks blocks(int e) const;
  std::vector<int> element_dofs(int e) const { return dofs_.element_dofs(mesh_, e); }

 private:
  Mesh mesh_;
  MaterialField materials_;
  ReferenceElement ref_;
  DofMap dofs_;
  Stabilization stab_;
};

/// Coefficients of all unknowns at one time level. `interior` holds the
/// element blocks back to back in LocalLayout order, `trace` is indexed by
/// the DofMap.
struct State {
  double t = 0.0;
  int block = 0;
  Eigen::VectorXd interior;
  Eigen::VectorXd trace;

  auto element(int e) { return interior.segment(static_cast<Eigen::Index>(e) * block, block); }
  auto element(int e) const {
    return interior.segment(static_cast<Eigen::Index>(e) * block, block);
  }
};

State zero_state(const Discretization& disc, double t = 0.0);

/// Uniform grid t_i = t0 + i dt.
struct TimeGrid {
  double dt = 0.0;
  int steps = 0;
  double t0 = 0.0;

  double time(int i) const { return t0 + i * dt; }
  double final_time() const { return time(steps); }
};

/// Largest grid step not above `dt_max` that lands exactly on `t_final`.
TimeGrid make_time_grid(double t_final, double dt_max, double t0 = 0.0);

/// (difference quotient, arithmetic mean) of a two-level quantity.
std::pair<double, double> midpoint_ops(double g_old, double g_new, double dt);

/// Sources and Dirichlet data. Empty functions are zero.
struct SourceSpec {
  TimeVectorField body_force;
  TimeVectorField fluid_force;
  TimeScalarField fluid_source;
  TimeVectorField solid_velocity_bc;
  TimeScalarField pressure_bc;

  bool has_loads() const { return body_force || fluid_force || fluid_source; }
};

/// Sets essential trace DOFs to the face L2 projection of the Dirichlet
/// data at time t (zero where no data is given).
void apply_dirichlet(const Discretization& disc, const SourceSpec& src, double t,
                     Eigen::VectorXd& trace);

/// Continuous fields at the initial time. Divergences are needed by the
/// compatible construction only.
struct InitialData {
  StressField stress;
  VectorField stress_divergence;
  VectorField solid_velocity;
  VectorField fluid_velocity;
  ScalarField fluid_divergence;
  ScalarField pressure;
};

/// Static HDG solve for the fluid unknowns; fills v_f, p and p_hat.
void init_fluid(const Discretization& disc, const InitialData& data, State& state);
/// Static HDG solve for the elastic unknowns; fills stress, v_s and v_s_hat.
void init_solid(const Discretization& disc, const InitialData& data, State& state);
/// Both static solves.
State init_compatible(const Discretization& disc, const InitialData& data, double t0 = 0.0);
/// Elementwise L2 projection with face-projected traces. Fast, but the
/// trace equations do not hold.
State init_projection(const Discretization& disc, const InitialData& data, double t0 = 0.0);

/// Largest residual of the assembled trace equations over free trace DOFs,
/// relative to the largest single element contribution.
struct CompatibilityResidual {
  double solid = 0.0;
  double fluid = 0.0;
};
CompatibilityResidual compatibility_residual(const Discretization& disc, const State& state);

/// Random interior coefficients in [-1, 1] with traces solving the trace
/// equations (homogeneous essential data).
State random_compatible_state(const Discretization& disc, std::uint64_t seed);

/// Crank-Nicolson stepper. The condensed trace matrix is built and
/// factorized once on construction.
class Stepper {
 public:
  Stepper(const Discretization& disc, double dt);

  double dt() const { return dt_; }
  const CondensedSystem& system() const { return system_; }

  /// One step from t to t + dt; sources at t + dt/2, Dirichlet data at
  /// t + dt.
  State advance(const State& state, const SourceSpec& src) const;

 private:
  const Discretization* disc_;
  double dt_;
  std::vector<double> det_;
  CondensedSystem system_;
};

/// Element systems of the one-step matrix, in element order.
std::vector<ElementSystem> element_systems(const Discretization& disc, double dt);

}  // namespace porohdg
