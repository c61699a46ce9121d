// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "materials.hpp"
#include "mesh.hpp"

namespace porohdg {

enum class RunMode { Simulate, ConvergenceStudy, OracleCheck };
enum class InitialKind { Zero, Manufactured, Pulse };
enum class InitMethod { Compatible, Projection };
enum class SourceKind { None, Manufactured };

struct RefineDirective {
  Point2 center = Point2::Zero();
  double radius = 0.0;
  int levels = 1;
  bool operator==(const RefineDirective&) const = default;
};

struct MeshConfig {
  std::string file;  // non-empty: read a poro-mesh file instead
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  int nx = 8, ny = 8;
  BoundarySpec boundary;
  std::vector<RefineDirective> refine;
  bool operator==(const MeshConfig&) const = default;
};

/// Elements whose centroid satisfies the predicate belong to the region.
struct RegionPredicate {
  enum class Kind { All, Below, Above, Box } kind = Kind::All;
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;  // Below/Above: y = a; Box: [a,b]x[c,d]
  bool contains(const Point2& x) const;
  bool operator==(const RegionPredicate&) const = default;
};

/// Either a library key or explicit coefficients (SI).
struct MaterialSpec {
  std::string library;
  bool isotropic = true;
  double young = 0.0, poisson = 0.0;
  double c11 = 0.0, c13 = 0.0, c33 = 0.0, c55 = 0.0;
  double alpha = 0.0, s0 = 0.0, rho11 = 0.0, rho12 = 0.0, eta = 0.0;
  Eigen::Vector2d rho22 = Eigen::Vector2d::Zero();
  Eigen::Vector2d kappa = Eigen::Vector2d::Ones();

  MaterialParams resolve(const std::string& name) const;
  bool operator==(const MaterialSpec&) const = default;
};

struct RegionConfig {
  std::string name;
  MaterialSpec material;
  RegionPredicate where;
  bool operator==(const RegionConfig&) const = default;
};

/// Gaussian added to the listed initial fields: vs1 vs2 vf1 vf2 sxx syy sxy p.
struct PulseConfig {
  std::vector<std::string> targets;
  double amplitude = 1.0;
  double lx = 1.0, ly = 1.0;
  Point2 center = Point2::Zero();
  bool operator==(const PulseConfig&) const = default;
};

struct Config {
  RunMode mode = RunMode::Simulate;
  int degree = 1;
  std::uint64_t seed = 1;

  MeshConfig mesh;
  double c_s = 1.0, c_f = 1.0;
  std::vector<RegionConfig> regions;

  InitialKind initial = InitialKind::Zero;
  InitMethod init_method = InitMethod::Compatible;
  PulseConfig pulse;
  SourceKind source = SourceKind::None;
  /// Manufactured benchmark elastic constants.
  double young = 3.0, poisson = 0.3;

  double dt = 0.0;  // 0: automatic
  double t_final = 1.0;

  std::string output_dir = "out";
  int snapshots = 50;
  bool write_vtk = true;

  int study_levels = 5;

  bool operator==(const Config&) const = default;
};

/// Checks cross-field consistency and material validity; throws Config
/// errors naming the offending key.
void validate_config(const Config& cfg);

/// Parses the sectioned "poro-hdg-config 1" text; unknown keys are errors.
Config parse_config_text(const std::string& text);
Config parse_config(const std::string& path);
/// Canonical text with SI values at full precision; reparses to an equal
/// Config.
std::string serialize_config(const Config& cfg);

/// Value of `text` ("36 GPa", "0.08", "6e-13 m^2") in SI for the dimension
/// of `key`; throws on unit mismatch.
enum class Dimension { None, Pressure, InversePressure, Density, Length, Time, Area, Viscosity };
double parse_quantity(const std::string& key, const std::string& text, Dimension dim);

std::vector<std::string> scenario_names();
/// Throws Config listing the presets for an unknown name.
Config scenario(const std::string& name);

std::string mode_name(RunMode m);
RunMode parse_mode(const std::string& s);

}  // namespace porohdg
