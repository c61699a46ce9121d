// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "materials.hpp"
#include "timestepper.hpp"

namespace porohdg {

/// Closed-form space-time fields of a manufactured solution together with
/// the sources that make them solve the first-order system. Stress and
/// strain-like quantities are Voigt (xx, yy, xy).
struct ExactSolution {
  MaterialParams material;

  TimeVectorField displacement;
  TimeVectorField solid_velocity;
  TimeVectorField solid_acceleration;
  /// Engineering strain rate (exx, eyy, 2exy) of the solid velocity.
  TimeStressField solid_strain_rate;
  TimeScalarField solid_divergence;

  TimeStressField stress;
  TimeStressField stress_rate;
  TimeVectorField stress_divergence;

  TimeScalarField pressure;
  TimeScalarField pressure_rate;
  TimeVectorField pressure_gradient;

  TimeVectorField fluid_velocity;
  TimeVectorField fluid_velocity_rate;
  TimeScalarField fluid_divergence;

  TimeVectorField body_force;
  TimeVectorField fluid_force;
  TimeScalarField fluid_source;

  /// Loads plus Dirichlet data equal to the exact traces.
  SourceSpec sources() const;
  /// Fields frozen at time t.
  InitialData initial_data(double t) const;
};

/// Unit-square benchmark: solid displacement
/// (sin(pi x) sin(pi y), x y (x-1)(y-1)) sin(pi t), pressure
/// x (1-x) sin^2(pi y) (2 + cos(pi t)), fluid velocity -grad p, with
/// rho = (1, 1, 2), eta = kappa = alpha = s0 = 1 and plane-strain (E, nu).
MaterialParams example1_material(double young, double poisson);
ExactSolution example1_solution(double young, double poisson);

/// Pointwise residuals of the four first-order equations using only the
/// closures of `exact` (constitutive, solid momentum, fluid momentum, mass).
struct PdeResidual {
  Eigen::Vector3d constitutive;
  Eigen::Vector2d solid_momentum;
  Eigen::Vector2d fluid_momentum;
  double mass = 0.0;

  double max_abs() const;
};
PdeResidual pde_residual(const ExactSolution& exact, const Point2& x, double t);

enum class Field { Stress, SolidVelocity, FluidVelocity, Pressure };
inline constexpr std::array<Field, 4> kAllFields{Field::Stress, Field::SolidVelocity,
                                                 Field::FluidVelocity, Field::Pressure};
std::string_view field_name(Field f);
/// Accepts "sigma", "vs", "vf", "p"; throws InvalidInput otherwise.
Field parse_field(std::string_view name);

/// L2 norm over the mesh of (discrete - exact) for one field at time t.
/// Stress uses the tensor norm (shear counted twice). `order` below 2(k+2)
/// is rejected; -1 picks 2k+6.
double l2_error(const Discretization& disc, const State& state, const ExactSolution& exact,
                Field field, double t, int order = -1);
/// L2 norm of one discrete field.
double l2_norm(const Discretization& disc, const State& state, Field field);

/// log(e_i/e_{i-1}) / log(h_i/h_{i-1}) for i >= 1 (n-1 values).
std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& hs);
/// Least-squares slope of log e against log h over the last `count` entries.
double fitted_slope(const std::vector<double>& errors, const std::vector<double>& hs,
                    int count);

/// Step size not above h^((k+2)/2) landing exactly on T.
double default_time_step(double h, int degree, double t_final);

struct ConvergenceOptions {
  double t_final = 1.0;
  /// Non-positive: default_time_step.
  double dt = 0.0;
  double c_s = 1.0;
  double c_f = 1.0;
  bool compatible_init = true;
};

struct ErrorReport {
  int degree = 1;
  std::vector<int> divisions;
  std::vector<double> hs;
  std::vector<double> dts;
  std::array<std::vector<double>, 4> errors;

  const std::vector<double>& error(Field f) const { return errors[static_cast<int>(f)]; }
  std::vector<double> rates(Field f) const { return eoc(error(f), hs); }
  double asymptotic_rate(Field f, int count = 3) const;

  std::string table() const;
  std::string csv() const;
};

/// Benchmark errors at T on n x n unit-square meshes (h = 1/n) with every
/// boundary essential for both solid and fluid traces.
ErrorReport convergence_study(const ExactSolution& exact, int degree,
                              const std::vector<int>& divisions,
                              const ConvergenceOptions& options = {});

/// Result of a fixed-mesh benchmark run.
struct BenchmarkRun {
  State final_state;
  std::array<double, 4> errors{};
  double dt = 0.0;
  int steps = 0;
};
BenchmarkRun run_benchmark(const ExactSolution& exact, int degree, int divisions,
                           const ConvergenceOptions& options);

/// Weighted energy X^2 of a state by quadrature.
double energy_norm2(const Discretization& disc, const State& state);
/// Dissipation rate Z^2 of a state: drag, solid and fluid stabilization.
double dissipation2(const Discretization& disc, const State& state);

struct EnergySample {
  double t = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;
};

/// Running energy bookkeeping: Y^2 accumulates dt Z^2 at step midpoints.
class EnergyTracker {
 public:
  EnergyTracker(const Discretization& disc, const State& initial);
  void push(const State& next);
  const std::vector<EnergySample>& samples() const { return samples_; }

 private:
  const Discretization* disc_;
  State last_;
  std::vector<EnergySample> samples_;
};

std::vector<EnergySample> energy_series(const Discretization& disc,
                                        const std::vector<State>& trajectory);

/// One step by assembling the full interior-plus-trace system.
State monolithic_step(const Discretization& disc, double dt, const State& state,
                      const SourceSpec& src);

/// Random interior and free trace coefficients in [-1, 1].
State random_state(const Discretization& disc, std::uint64_t seed);

/// Max over fields of max|condensed - monolithic| / max|monolithic| after one
/// step from `random_state(seed)` without sources. Zero when both vanish.
double oracle_compare(const Mesh& mesh, int degree, const MaterialParams& material,
                      double dt, std::uint64_t seed);
double oracle_compare(const Discretization& disc, double dt, const State& start);

}  // namespace porohdg
