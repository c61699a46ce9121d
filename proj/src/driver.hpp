// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "timestepper.hpp"
#include "verification.hpp"

namespace porohdg {

/// A0 exp(-((x-cx)/lx)^2 - ((y-cy)/ly)^2). Throws for non-positive widths.
ScalarField gaussian_pulse(double a0, double lx, double ly, const Point2& center);
/// Gradient of gaussian_pulse.
VectorField gaussian_pulse_gradient(double a0, double lx, double ly, const Point2& center);

Mesh build_mesh(const MeshConfig& cfg);
/// First region whose predicate holds at the element centroid.
MaterialField assign_materials(const Config& cfg, const Mesh& mesh);
Discretization build_discretization(const Config& cfg);
/// Same, on an n x n refinement of the configured rectangle.
Discretization build_discretization(const Config& cfg, int nx, int ny);

InitialData initial_data(const Config& cfg);
State initial_state(const Config& cfg, const Discretization& disc);
SourceSpec source_spec(const Config& cfg);
/// Configured step, or the automatic choice for this discretization.
double resolve_time_step(const Config& cfg, const Discretization& disc);

struct DiagnosticRow {
  double t = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;
  std::array<double, 4> norms{};  // sigma, vs, vf, p
};
std::string diagnostics_csv(const std::vector<DiagnosticRow>& rows);

struct RunOptions {
  bool write_files = true;
  bool emit_matrix = false;
  std::ostream* log = nullptr;
};

struct RunResult {
  RunMode mode = RunMode::Simulate;
  int steps = 0;
  double dt = 0.0;
  std::optional<State> final_state;
  std::vector<DiagnosticRow> diagnostics;
  /// Final-time errors against the manufactured solution, when there is one.
  std::optional<std::array<double, 4>> errors;
  std::optional<ErrorReport> report;
  double oracle_difference = 0.0;
  bool finite = true;
  std::vector<std::string> files;
};

/// Executes the configured mode. Failures are rethrown with the stage
/// (mesh, materials, init, factorize, step, output) in the message.
RunResult run(const Config& cfg, const RunOptions& options = {});

}  // namespace porohdg
