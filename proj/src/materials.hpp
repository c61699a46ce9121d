// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"

namespace porohdg {

/// 3x3 matrix acting on Voigt vectors (xx, yy, xy). Stiffness maps
/// engineering strain (exx, eyy, 2exy) to stress; compliance is its inverse.
using VoigtMatrix = Eigen::Matrix3d;

/// Voigt image of the identity tensor.
inline Eigen::Vector3d voigt_identity() { return {1.0, 1.0, 0.0}; }

/// Plane-strain isotropic stiffness from Young modulus and Poisson ratio.
VoigtMatrix isotropic_stiffness(double young, double poisson);

/// [[c11,c13,0],[c13,c33,0],[0,0,c55]]; rejects a non-SPD result.
VoigtMatrix anisotropic_stiffness(double c11, double c13, double c33, double c55);

/// Inverse of an SPD stiffness.
VoigtMatrix compliance(const VoigtMatrix& stiffness);

/// Smallest eigenvalue of rho11*rho22 - rho12^2 I; rejects values <= 0.
double validate_densities(double rho11, double rho12, const Eigen::Matrix2d& rho22);

/// eta * kappa^{-1} for a diagonal permeability.
Eigen::Matrix2d drag_matrix(double eta, const Eigen::Vector2d& kappa_diag);

/// Unused-by-the-solver Table-style rows kept alongside a library material.
struct MaterialProvenance {
  double porosity = 0.0;
  double solid_bulk = 0.0;  // Pa
  double fluid_bulk = 0.0;  // Pa
  double drained_bulk = 0.0;  // Pa
  bool operator==(const MaterialProvenance&) const = default;
};

/// Poroelastic coefficients in SI units.
struct MaterialParams {
  std::string name;
  VoigtMatrix stiffness = VoigtMatrix::Identity();
  VoigtMatrix compliance = VoigtMatrix::Identity();
  double alpha = 0.0;
  double s0 = 0.0;
  double rho11 = 1.0;
  double rho12 = 0.0;
  Eigen::Matrix2d rho22 = Eigen::Matrix2d::Identity();
  double eta = 0.0;
  Eigen::Vector2d kappa = Eigen::Vector2d::Ones();
  Eigen::Matrix2d drag = Eigen::Matrix2d::Zero();
  double rho0 = 0.0;
  std::optional<MaterialProvenance> provenance;

  bool operator==(const MaterialParams&) const = default;
};

/// Assembles and validates a full parameter set. `rho22` and `kappa` are the
/// diagonal entries (xx, yy).
MaterialParams make_material(std::string name, const VoigtMatrix& stiffness,
                             double alpha, double s0, double rho11, double rho12,
                             const Eigen::Vector2d& rho22, double eta,
                             const Eigen::Vector2d& kappa);

/// Built-in library: "sandstone-iso", "glass-epoxy", "sandstone-het", "shale".
std::optional<MaterialParams> library_material(const std::string& key);
std::vector<std::string> library_material_names();

/// Rough fast compressional speed sqrt((c_max + alpha^2/s0) / rho11), used to
/// size default end times.
double fast_wave_speed(const MaterialParams& m);

/// Per-element coefficient assignment over named regions.
struct MaterialField {
  std::vector<MaterialParams> regions;
  std::vector<int> element_region;

  const MaterialParams& at(int element) const {
    return regions[element_region[element]];
  }
};

/// One region covering `num_elements` elements.
MaterialField uniform_material(const MaterialParams& material, int num_elements);

}  // namespace porohdg
