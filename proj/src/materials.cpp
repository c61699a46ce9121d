// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#include "materials.hpp"

#include <cmath>
#include <sstream>

namespace porohdg {

namespace {

constexpr double kGPa = 1e9;

double min_eigenvalue(const VoigtMatrix& m) {
  Eigen::SelfAdjointEigenSolver<VoigtMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

VoigtMatrix isotropic_stiffness(double young, double poisson) {
  if (!(young > 0.0) || !(poisson > -1.0) || !(poisson < 0.5)) {
    fail(ErrorKind::InvalidInput,
         "isotropic stiffness needs E > 0 and -1 < nu < 0.5");
  }
  const double lambda = young * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
  const double mu = young / (2.0 * (1.0 + poisson));
  VoigtMatrix c = VoigtMatrix::Zero();
  c(0, 0) = c(1, 1) = lambda + 2.0 * mu;
  c(0, 1) = c(1, 0) = lambda;
  c(2, 2) = mu;
  return c;
}

VoigtMatrix anisotropic_stiffness(double c11, double c13, double c33, double c55) {
  VoigtMatrix c = VoigtMatrix::Zero();
  c(0, 0) = c11;
  c(0, 1) = c(1, 0) = c13;
  c(1, 1) = c33;
  c(2, 2) = c55;
  const double lmin = min_eigenvalue(c);
  if (!(lmin > 0.0)) {
    std::ostringstream os;
    os << "stiffness is not positive definite (smallest eigenvalue " << lmin << ")";
    fail(ErrorKind::InvalidInput, os.str());
  }
  return c;
}

VoigtMatrix compliance(const VoigtMatrix& stiffness) {
  if (!stiffness.isApprox(stiffness.transpose(), 1e-14) ||
      !(min_eigenvalue(stiffness) > 0.0)) {
    fail(ErrorKind::InvalidInput, "compliance needs an SPD stiffness");
  }
  return stiffness.llt().solve(VoigtMatrix::Identity());
}

double validate_densities(double rho11, double rho12, const Eigen::Matrix2d& rho22) {
  if (!std::isfinite(rho11) || !std::isfinite(rho12) || !rho22.allFinite()) {
    fail(ErrorKind::InvalidInput, "densities must be finite");
  }
  const Eigen::Matrix2d m = rho11 * rho22 - rho12 * rho12 * Eigen::Matrix2d::Identity();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(0.5 * (m + m.transpose()),
                                                    Eigen::EigenvaluesOnly);
  const double rho0 = es.eigenvalues().minCoeff();
  if (!(rho0 > 0.0)) {
    std::ostringstream os;
    os << "density coercivity fails: rho11*rho22 - rho12^2 has minimum eigenvalue "
       << rho0;
    fail(ErrorKind::InvalidInput, os.str());
  }
  return rho0;
}

Eigen::Matrix2d drag_matrix(double eta, const Eigen::Vector2d& kappa_diag) {
  if (!(eta >= 0.0)) fail(ErrorKind::InvalidInput, "viscosity must be >= 0");
  if (eta == 0.0) return Eigen::Matrix2d::Zero();
  if (!(kappa_diag.minCoeff() > 0.0)) {
    fail(ErrorKind::InvalidInput, "permeability must be positive when eta > 0");
  }
  return Eigen::Vector2d(eta / kappa_diag[0], eta / kappa_diag[1]).asDiagonal();
}

MaterialParams make_material(std::string name, const VoigtMatrix& stiffness,
                             double alpha, double s0, double rho11, double rho12,
                             const Eigen::Vector2d& rho22, double eta,
                             const Eigen::Vector2d& kappa) {
  if (!(alpha >= 0.0)) fail(ErrorKind::InvalidInput, name + ": alpha must be >= 0");
  if (!(s0 >= 0.0)) fail(ErrorKind::InvalidInput, name + ": s0 must be >= 0");
  MaterialParams m;
  m.name = std::move(name);
  m.stiffness = stiffness;
  m.compliance = compliance(stiffness);
  m.alpha = alpha;
  m.s0 = s0;
  m.rho11 = rho11;
  m.rho12 = rho12;
  m.rho22 = rho22.asDiagonal();
  m.rho0 = validate_densities(rho11, rho12, m.rho22);
  m.eta = eta;
  m.kappa = kappa;
  m.drag = drag_matrix(eta, kappa);
  return m;
}

std::optional<MaterialParams> library_material(const std::string& key) {
  struct Row {
    const char* key;
    double c11, c13, c33, c55;  // GPa
    double s0;                  // 1/GPa
    double alpha, rho11, rho12, rho22_11, rho22_33;
    double kappa11, kappa33, eta;
    double phi, ks, kf, k;      // GPa
  };
  static const Row rows[] = {
      {"sandstone-iso", 36, 12, 36, 12, 8.75e-2, 0.5, 2208, 1040, 10400, 18720,
       6e-13, 1e-13, 1e-3, 0.2, 40, 2.5, 20},
      {"glass-epoxy", 39.4, 1.2, 13.1, 3.0, 9.8e-2, 0.92, 1660, 1040, 10400, 18720,
       6e-13, 1e-13, 1e-3, 0.2, 40, 2.5, 3.2},
      {"sandstone-het", 36, 12, 36, 12, 8.75e-2, 0.5, 2208, 1040, 10400, 10400,
       6e-13, 6e-13, 0, 0.2, 40, 2.5, 20},
      {"shale", 11.9, 3.9, 11.9, 3.9, 6.03e-2, 0.13, 2022.8, 1040, 13000, 13000,
       1e-13, 1e-13, 0, 0.16, 7.6, 2.5, 6.6},
  };
  for (const Row& r : rows) {
    if (key != r.key) continue;
    MaterialParams m = make_material(
        r.key,
        anisotropic_stiffness(r.c11 * kGPa, r.c13 * kGPa, r.c33 * kGPa, r.c55 * kGPa),
        r.alpha, r.s0 / kGPa, r.rho11, r.rho12, {r.rho22_11, r.rho22_33}, r.eta,
        {r.kappa11, r.kappa33});
    m.provenance = MaterialProvenance{r.phi, r.ks * kGPa, r.kf * kGPa, r.k * kGPa};
    return m;
  }
  return std::nullopt;
}

std::vector<std::string> library_material_names() {
  return {"sandstone-iso", "glass-epoxy", "sandstone-het", "shale"};
}

double fast_wave_speed(const MaterialParams& m) {
  const double cmax = std::max(m.stiffness(0, 0), m.stiffness(1, 1));
  const double fluid = m.s0 > 0.0 ? m.alpha * m.alpha / m.s0 : 0.0;
  return std::sqrt((cmax + fluid) / m.rho11);
}

MaterialField uniform_material(const MaterialParams& material, int num_elements) {
  return MaterialField{{material}, std::vector<int>(num_elements, 0)};
}

}  // namespace porohdg
