// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "driver.hpp"
#include "global_system.hpp"
#include "output.hpp"
#include "verification.hpp"

namespace porohdg {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string summary;
};

void detail(const char* fmt, auto... args) {
  std::printf("    ");
  std::printf(fmt, args...);
  std::printf("\n");
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------- 1, 2, 3

struct SlopeTarget {
  double centre;
  double tol;
  bool at_least = false;  // accept anything >= centre - tol
};

bool slope_ok(double s, const SlopeTarget& t) {
  return t.at_least ? s >= t.centre - t.tol : std::abs(s - t.centre) <= t.tol;
}

Outcome spatial_convergence(double poisson) {
  const auto t0 = Clock::now();
  const ExactSolution ex = example1_solution(3.0, poisson);
  struct Case {
    int k;
    std::vector<int> divisions;
    std::array<SlopeTarget, 4> targets;
  };
  const std::vector<Case> cases = {
      {1, {2, 4, 8, 16, 32}, {{{2, 0.25}, {3, 0.3}, {2, 0.25}, {2, 0.25}}}},
      {2, {2, 4, 8, 16}, {{{3, 0.25}, {3.4, 0.0, true}, {3, 0.3}, {3, 0.25}}}},
  };
  Outcome out;
  std::string fails;
  for (const Case& c : cases) {
    const ErrorReport rep = convergence_study(ex, c.k, c.divisions, ConvergenceOptions{});
    std::printf("%s", rep.table().c_str());
    for (int f = 0; f < 4; ++f) {
      const double s = rep.asymptotic_rate(kAllFields[f]);
      const bool ok = slope_ok(s, c.targets[f]);
      detail("k=%d %-5s fitted slope %.3f  target %s%.2f%s  %s", c.k,
             std::string(field_name(kAllFields[f])).c_str(), s,
             c.targets[f].at_least ? ">= " : "", c.targets[f].centre,
             c.targets[f].at_least ? "" : fmt(" +- %.2f", c.targets[f].tol).c_str(),
             ok ? "ok" : "MISS");
      if (!ok) {
        out.pass = false;
        fails += fmt(" k=%d %s %.2f", c.k, std::string(field_name(kAllFields[f])).c_str(), s);
      }
    }
  }
  const double elapsed = seconds_since(t0);
  if (elapsed > 600.0) out.pass = false;
  out.summary = fmt("nu=%g, %.1f s", poisson, elapsed) + (fails.empty() ? "" : "; off target:" + fails);
  return out;
}

Outcome temporal_order() {
  const auto t0 = Clock::now();
  const ExactSolution ex = example1_solution(3.0, 0.3);
  std::array<std::vector<double>, 4> errors;
  std::vector<double> dts;
  for (int m : {20, 40, 80}) {
    ConvergenceOptions o;
    o.dt = 1.0 / m;
    const BenchmarkRun r = run_benchmark(ex, 3, 16, o);
    dts.push_back(o.dt);
    for (int f = 0; f < 4; ++f) errors[f].push_back(r.errors[f]);
    detail("dt=1/%-3d  sigma %.3e  vs %.3e  vf %.3e  p %.3e", m, r.errors[0], r.errors[1],
           r.errors[2], r.errors[3]);
  }
  Outcome out;
  std::string slopes;
  for (int f = 0; f < 4; ++f) {
    const double s = fitted_slope(errors[f], dts, 3);
    slopes += fmt(" %s %.3f", std::string(field_name(kAllFields[f])).c_str(), s);
    if (!(std::abs(s - 2.0) <= 0.2)) out.pass = false;
  }
  const double elapsed = seconds_since(t0);
  if (elapsed > 300.0) out.pass = false;
  out.summary = "slopes" + slopes + fmt(", %.1f s", elapsed);
  return out;
}

// ---------------------------------------------------------------- 4

Outcome energy_identity() {
  const auto t0 = Clock::now();
  struct Case {
    std::string label;
    MaterialParams material;
    int n, k;
    double dt;
  };
  const MaterialParams sand = *library_material("sandstone-iso");
  const MaterialParams glass = *library_material("glass-epoxy");
  const std::vector<Case> cases = {
      {"example1 nu=0.3", example1_material(3.0, 0.3), 6, 2, 0.01},
      {"example1 nu=0.499", example1_material(3.0, 0.499), 6, 1, 0.01},
      {"sandstone-iso", sand, 6, 2, 1.0 / 6.0 / fast_wave_speed(sand)},
      {"glass-epoxy", glass, 6, 1, 1.0 / 6.0 / fast_wave_speed(glass)},
  };
  Outcome out;
  double worst = 0.0;
  for (const Case& c : cases) {
    Mesh mesh = build_structured_rect(0, 1, 0, 1, c.n, c.n);
    const double z = c.material.rho11 * fast_wave_speed(c.material);
    const bool si = z > 1e3;
    Stabilization st = stabilization_defaults(mesh, si ? z / c.n : 1.0, si ? 1.0 / z : 1.0);
    const int ne = mesh.num_elements();
    const Discretization d(std::move(mesh), uniform_material(c.material, ne), c.k, std::move(st));
    const Stepper stepper(d, c.dt);
    State s = random_compatible_state(d, 7);
    EnergyTracker tracker(d, s);
    bool monotone = true;
    for (int i = 0; i < 200; ++i) {
      s = stepper.advance(s, SourceSpec{});
      tracker.push(s);
    }
    const auto& smp = tracker.samples();
    const double x0 = smp.front().x2;
    double dev = 0.0;
    for (std::size_t i = 1; i < smp.size(); ++i) {
      dev = std::max(dev, std::abs(smp[i].x2 + 2.0 * smp[i].y2 - x0) / x0);
      if (smp[i].x2 > smp[i - 1].x2 * (1.0 + 1e-12)) monotone = false;
    }
    detail("%-18s k=%d 200 steps: max |X_n^2 + 2Y_n^2 - X_0^2| / X_0^2 = %.2e, X nonincreasing: %s",
           c.label.c_str(), c.k, dev, monotone ? "yes" : "NO");
    worst = std::max(worst, dev);
    if (dev > 1e-9 || !monotone) out.pass = false;
  }
  const double elapsed = seconds_since(t0);
  if (elapsed > 60.0) out.pass = false;
  out.summary = fmt("max relative defect %.2e, %.1f s", worst, elapsed);
  return out;
}

// ---------------------------------------------------------------- 5

Outcome condensation_oracle() {
  const auto t0 = Clock::now();
  const std::vector<std::pair<std::string, MaterialParams>> materials = {
      {"example1 nu=0.3", example1_material(3.0, 0.3)},
      {"example1 nu=0.499", example1_material(3.0, 0.499)},
      {"anisotropic", make_material("aniso", anisotropic_stiffness(3, 1, 2, 1), 0.8, 0.5, 2, 1,
                                    {3, 4}, 1, {1, 0.5})},
  };
  Outcome out;
  double worst = 0.0;
  int runs = 0;
  for (const auto& [label, m] : materials) {
    double w = 0.0;
    for (int n = 2; n <= 8; ++n) {
      const Mesh mesh = build_structured_rect(0, 1, 0, 1, n, n);
      for (int k = 1; k <= 3; ++k) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
          w = std::max(w, oracle_compare(mesh, k, m, 0.05, seed));
          ++runs;
        }
      }
    }
    detail("%-18s meshes 2x2..8x8, k=1..3, 5 seeds: max relative difference %.2e", label.c_str(), w);
    worst = std::max(worst, w);
  }
  if (worst > 1e-9) out.pass = false;
  const double elapsed = seconds_since(t0);
  if (elapsed > 120.0) out.pass = false;
  out.summary = fmt("%d one-step comparisons, max relative difference %.2e, %.1f s", runs, worst, elapsed);
  return out;
}

// ---------------------------------------------------------------- 6

Outcome dof_accounting() {
  const std::array<int, 4> volume{24, 48, 80, 120};
  const std::array<int, 4> trace{6, 9, 12, 15};
  const std::array<double, 4> percent{62.5, 71.9, 77.5, 81.3};
  Outcome out;
  std::string row;
  for (int k = 1; k <= 4; ++k) {
    const DofCounts c = dof_counts(k);
    const Mesh mesh = build_structured_rect(0, 1, 0, 1, 3, 2);
    const DofMap map = build_dofmap(mesh, k);
    const bool mesh_ok = map.size() == c.trace_per_face * mesh.num_faces();
    const bool ok = c.volume_per_element == volume[k - 1] && c.trace_per_face == trace[k - 1] &&
                    std::abs(100.0 * c.reduction - percent[k - 1]) <= 0.1 && mesh_ok;
    detail("k=%d volumetric DG %d/element, trace %d/face, reduction %.2f%%  %s", k,
           c.volume_per_element, c.trace_per_face, 100.0 * c.reduction, ok ? "ok" : "MISMATCH");
    row += fmt(" %d/%d/%.2f%%", c.volume_per_element, c.trace_per_face, 100.0 * c.reduction);
    if (!ok) out.pass = false;
  }
  out.summary = "k=1..4:" + row;
  return out;
}

// ---------------------------------------------------------------- 7

Outcome well_posedness() {
  const auto t0 = Clock::now();
  Outcome out;
  double worst = 0.0;
  for (const std::string& name : scenario_names()) {
    const auto ts = Clock::now();
    const Config cfg = scenario(name);
    const int n = cfg.mode == RunMode::ConvergenceStudy ? 1 << cfg.study_levels : cfg.mesh.nx;
    const Discretization d = cfg.mode == RunMode::ConvergenceStudy
                                 ? build_discretization(cfg, n, n)
                                 : build_discretization(cfg);
    const double dt = resolve_time_step(cfg, d);
    double mag = 0.0;
    try {
      const Stepper stepper(d, dt);
      const State s = stepper.advance(zero_state(d), SourceSpec{});
      mag = std::max(s.interior.cwiseAbs().maxCoeff(), s.trace.cwiseAbs().maxCoeff());
    } catch (const Error& e) {
      detail("%s: %s", name.c_str(), e.what());
      out.pass = false;
      continue;
    }
    detail("%-31s %6d elements, %7d trace unknowns: factorized, zero-data solve max |x| = %.1e (%.1f s)",
           name.c_str(), d.num_elements(), d.dofs().size(), mag, seconds_since(ts));
    worst = std::max(worst, mag);
    if (!(mag <= 1e-14)) out.pass = false;
  }
  out.summary = fmt("%zu presets, max |x| = %.1e, %.1f s", scenario_names().size(), worst,
                    seconds_since(t0));
  return out;
}

// ---------------------------------------------------------------- 8

Outcome initial_compatibility() {
  const auto t0 = Clock::now();
  Outcome out;
  double worst_res = 0.0;
  std::string rates;
  for (double nu : {0.3, 0.499}) {
    const ExactSolution ex = example1_solution(3.0, nu);
    for (int k = 1; k <= 2; ++k) {
      std::array<std::vector<double>, 4> errors;
      std::vector<double> hs;
      for (int n : {4, 8, 16, 32}) {
        Mesh mesh = build_structured_rect(0, 1, 0, 1, n, n);
        Stabilization st = stabilization_defaults(mesh, 1.0, 1.0);
        const int ne = mesh.num_elements();
        const Discretization d(std::move(mesh), uniform_material(ex.material, ne), k, std::move(st));
        State s = zero_state(d);
        const InitialData data = ex.initial_data(0.0);
        init_fluid(d, data, s);
        init_solid(d, data, s);
        const CompatibilityResidual r = compatibility_residual(d, s);
        worst_res = std::max({worst_res, r.solid, r.fluid});
        if (r.solid > 1e-10 || r.fluid > 1e-10) out.pass = false;
        hs.push_back(1.0 / n);
        for (int f = 0; f < 4; ++f) errors[f].push_back(l2_error(d, s, ex, kAllFields[f], 0.0));
      }
      std::string line;
      for (int f = 0; f < 4; ++f) {
        const double rate = fitted_slope(errors[f], hs, 3);
        line += fmt(" %s %.2f", std::string(field_name(kAllFields[f])).c_str(), rate);
        if (!(rate >= k + 0.75)) out.pass = false;
      }
      detail("nu=%g k=%d static-solve rates (h=1/8..1/32, need >= %.2f):%s", nu, k, k + 0.75,
             line.c_str());
      if (nu == 0.3) rates += fmt(" k=%d:", k) + line;
    }
  }
  detail("max facewise compatibility residual %.2e", worst_res);
  out.summary = fmt("max residual %.1e; rates", worst_res) + rates + fmt(", %.1f s", seconds_since(t0));
  return out;
}

// ---------------------------------------------------------------- 9

Outcome scenario_stability() {
  Outcome out;
  const std::filesystem::path root =
      std::filesystem::temp_directory_path() / "porohdg_acceptance_scenarios";
  std::filesystem::remove_all(root);
  std::string summary;
  for (const std::string& name :
       {std::string("example2-isotropic"), std::string("example2-anisotropic"),
        std::string("example3-heterogeneous")}) {
    const auto t0 = Clock::now();
    Config cfg = scenario(name);
    cfg.mesh.nx = cfg.mesh.nx * 2 / 5;
    cfg.mesh.ny = cfg.mesh.ny * 2 / 5;
    cfg.snapshots = 4;
    cfg.output_dir = (root / name).string();
    bool ok = true;
    std::string why;
    RunResult r;
    try {
      r = run(cfg);
    } catch (const Error& e) {
      ok = false;
      why = e.what();
    }
    int elements = 0;
    bool monotone = true, vtk_ok = ok;
    int vtk_files = 0;
    if (ok) {
      elements = build_mesh(cfg.mesh).num_elements();
      if (elements > 20000) ok = false;
      for (std::size_t i = 1; i < r.diagnostics.size(); ++i) {
        if (r.diagnostics[i].x2 > r.diagnostics[i - 1].x2 * (1.0 + 1e-12)) monotone = false;
      }
      for (const std::string& f : r.files) {
        if (f.size() < 4 || f.substr(f.size() - 4) != ".vtk") continue;
        ++vtk_files;
        try {
          const VtkData v = read_vtk(f);
          bool finite = v.names.size() == 8;
          for (const auto& field : v.fields) {
            for (double x : field) finite = finite && std::isfinite(x);
          }
          if (static_cast<int>(v.cells.size()) != elements || !finite) vtk_ok = false;
        } catch (const Error& e) {
          vtk_ok = false;
          why = e.what();
        }
      }
      ok = ok && r.finite && monotone && vtk_ok && vtk_files == cfg.snapshots + 1;
    }
    const double elapsed = seconds_since(t0);
    if (elapsed > 600.0) ok = false;
    detail("%-22s %5d elements, %3d steps, finite %s, energy nonincreasing %s, %d VTK files reparsed %s, %.1f s %s",
           name.c_str(), elements, r.steps, r.finite ? "yes" : "NO", monotone ? "yes" : "NO",
           vtk_files, vtk_ok ? "ok" : "BAD", elapsed, why.c_str());
    if (!ok) out.pass = false;
    summary += fmt(" %s %d el/%.0f s", name.c_str(), elements, elapsed);
  }
  out.summary = "coarse runs:" + summary;
  return out;
}

// ---------------------------------------------------------------- 10

// a + b e1 + c e2 + d e1 e2 with e1^2 = e2^2 = 0: exact first and mixed
// second derivatives.
struct HyperDual {
  double a = 0, b = 0, c = 0, d = 0;
};
HyperDual operator-(HyperDual x, HyperDual y) { return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d}; }
HyperDual operator*(HyperDual x, HyperDual y) {
  return {x.a * y.a, x.a * y.b + x.b * y.a, x.a * y.c + x.c * y.a,
          x.a * y.d + x.b * y.c + x.c * y.b + x.d * y.a};
}
HyperDual operator*(double s, HyperDual x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }
HyperDual operator+(double s, HyperDual x) { return {s + x.a, x.b, x.c, x.d}; }
HyperDual operator-(HyperDual x, double s) { return {x.a - s, x.b, x.c, x.d}; }
HyperDual sin(HyperDual x) {
  const double s = std::sin(x.a), c = std::cos(x.a);
  return {s, c * x.b, c * x.c, c * x.d - s * x.b * x.c};
}
HyperDual cos(HyperDual x) {
  const double s = std::sin(x.a), c = std::cos(x.a);
  return {c, -s * x.b, -s * x.c, -s * x.d - c * x.b * x.c};
}

// Retyped benchmark displacement and pressure.
std::array<HyperDual, 3> benchmark_fields(HyperDual x, HyperDual y, HyperDual t) {
  const double pi = 3.14159265358979323846;
  const HyperDual st = sin(pi * t);
  const HyperDual u1 = sin(pi * x) * sin(pi * y) * st;
  const HyperDual u2 = x * y * (x - 1.0) * (y - 1.0) * st;
  const HyperDual sy = sin(pi * y);
  const HyperDual p = (x - x * x) * sy * sy * (2.0 + cos(pi * t));
  return {u1, u2, p};
}

struct Jet {
  double v = 0;
  double g[3] = {};
  double h[3][3] = {};
};

std::array<Jet, 3> jets(double x, double y, double t) {
  std::array<Jet, 3> out;
  const double at[3] = {x, y, t};
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      HyperDual v[3];
      for (int q = 0; q < 3; ++q) v[q] = {at[q], q == i ? 1.0 : 0.0, q == j ? 1.0 : 0.0, 0.0};
      const auto f = benchmark_fields(v[0], v[1], v[2]);
      for (int q = 0; q < 3; ++q) {
        out[q].v = f[q].a;
        out[q].g[i] = f[q].b;
        out[q].g[j] = f[q].c;
        out[q].h[i][j] = out[q].h[j][i] = f[q].d;
      }
    }
  }
  return out;
}

Outcome manufactured_residual_gate() {
  constexpr int X = 0, Y = 1, T = 2;
  // Printed benchmark constants.
  const double rho11 = 1, rho12 = 1, rho22 = 2, eta = 1, kappa = 1, alpha = 1, s0 = 1, young = 3;
  Outcome out;
  double worst_res = 0.0, worst_closure = 0.0, worst_param = 0.0;
  for (double nu : {0.3, 0.499}) {
    const ExactSolution ex = example1_solution(young, nu);
    const double lambda = young * nu / ((1 + nu) * (1 - 2 * nu));
    const double mu = young / (2 * (1 + nu));
    Eigen::Matrix3d C;
    C << lambda + 2 * mu, lambda, 0, lambda, lambda + 2 * mu, 0, 0, 0, mu;
    const Eigen::Matrix3d A = C.inverse();
    const Eigen::Vector3d I(1, 1, 0);
    const MaterialParams& m = ex.material;
    worst_param = std::max({worst_param, (m.stiffness - C).norm() / C.norm(),
                            std::abs(m.rho11 - rho11), std::abs(m.rho12 - rho12),
                            (m.rho22 - rho22 * Eigen::Matrix2d::Identity()).norm(),
                            (m.drag - eta / kappa * Eigen::Matrix2d::Identity()).norm(),
                            std::abs(m.alpha - alpha), std::abs(m.s0 - s0)});

    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int sample = 0; sample < 1000; ++sample) {
      const double x = uni(rng), y = uni(rng), t = uni(rng);
      const auto jt = jets(x, y, t);
      const Jet &u1 = jt[0], &u2 = jt[1], &p = jt[2];
      const Eigen::Vector3d strain(u1.g[X], u2.g[Y], u1.g[Y] + u2.g[X]);
      const Eigen::Vector3d strain_rate(u1.h[X][T], u2.h[Y][T], u1.h[Y][T] + u2.h[X][T]);
      const Eigen::Vector3d sigma = C * strain - alpha * p.v * I;
      const Eigen::Vector3d sigma_rate = C * strain_rate - alpha * p.g[T] * I;
      const Eigen::Vector2d div_sigma(
          (lambda + 2 * mu) * u1.h[X][X] + lambda * u2.h[X][Y] - alpha * p.g[X] +
              mu * (u1.h[Y][Y] + u2.h[X][Y]),
          mu * (u1.h[X][Y] + u2.h[X][X]) + lambda * u1.h[X][Y] + (lambda + 2 * mu) * u2.h[Y][Y] -
              alpha * p.g[Y]);
      const Eigen::Vector2d vs(u1.g[T], u2.g[T]);
      const Eigen::Vector2d as(u1.h[T][T], u2.h[T][T]);
      const Eigen::Vector2d grad_p(p.g[X], p.g[Y]);
      const Eigen::Vector2d vf = -grad_p;
      const Eigen::Vector2d vf_rate(-p.h[X][T], -p.h[Y][T]);
      const double div_vf = -(p.h[X][X] + p.h[Y][Y]);
      const Eigen::Vector3d compliant = A * (sigma_rate + alpha * p.g[T] * I);

      const Point2 at(x, y);
      const Eigen::Vector3d r1 = compliant - strain_rate;
      const Eigen::Vector2d r2 = rho11 * as + rho12 * vf_rate - div_sigma - ex.body_force(at, t);
      const Eigen::Vector2d r3 = rho12 * as + rho22 * vf_rate + eta / kappa * vf + grad_p -
                                 ex.fluid_force(at, t);
      const double r4 = s0 * p.g[T] + div_vf + alpha * I.dot(compliant) - ex.fluid_source(at, t);
      worst_res = std::max({worst_res, r1.cwiseAbs().maxCoeff(), r2.cwiseAbs().maxCoeff(),
                            r3.cwiseAbs().maxCoeff(), std::abs(r4)});

      const double closure = std::max(
          {(ex.stress(at, t) - sigma).cwiseAbs().maxCoeff(),
           (ex.stress_rate(at, t) - sigma_rate).cwiseAbs().maxCoeff(),
           (ex.stress_divergence(at, t) - div_sigma).cwiseAbs().maxCoeff(),
           (ex.solid_velocity(at, t) - vs).cwiseAbs().maxCoeff(),
           (ex.solid_acceleration(at, t) - as).cwiseAbs().maxCoeff(),
           (ex.solid_strain_rate(at, t) - strain_rate).cwiseAbs().maxCoeff(),
           std::abs(ex.solid_divergence(at, t) - (strain_rate[0] + strain_rate[1])),
           (ex.fluid_velocity(at, t) - vf).cwiseAbs().maxCoeff(),
           (ex.fluid_velocity_rate(at, t) - vf_rate).cwiseAbs().maxCoeff(),
           std::abs(ex.fluid_divergence(at, t) - div_vf),
           std::abs(ex.pressure(at, t) - p.v), std::abs(ex.pressure_rate(at, t) - p.g[T]),
           (ex.pressure_gradient(at, t) - grad_p).cwiseAbs().maxCoeff()});
      worst_closure = std::max(worst_closure, closure);
    }
    // The solver's own residual routine on the same samples.
    std::mt19937_64 rng2(7);
    double own = 0.0;
    for (int s = 0; s < 1000; ++s) {
      own = std::max(own, pde_residual(ex, Point2(uni(rng2), uni(rng2)), uni(rng2)).max_abs());
    }
    detail("nu=%g: 1000 samples, max residual with declared sources %.2e, closure mismatch %.2e, pde_residual %.2e",
           nu, worst_res, worst_closure, own);
    worst_res = std::max(worst_res, own);
  }
  detail("declared material vs printed constants: max deviation %.2e", worst_param);
  out.pass = worst_res <= 1e-10 && worst_closure <= 1e-10 && worst_param <= 1e-12;
  out.summary = fmt("max residual %.2e, max closure mismatch %.2e", worst_res, worst_closure);
  return out;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> check;
};

}  // namespace
}  // namespace porohdg

int main(int argc, char** argv) {
  using namespace porohdg;
  CLI::App app{"porohdg acceptance suite", "porohdg_acceptance"};
  std::vector<int> only;
  app.add_option("--only", only, "Run only these criteria (1-10)")->delimiter(',')->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {1, "spatial convergence, compressible", [] { return spatial_convergence(0.3); }},
      {2, "spatial convergence, nearly incompressible", [] { return spatial_convergence(0.499); }},
      {3, "temporal order", temporal_order},
      {4, "discrete energy identity", energy_identity},
      {5, "condensation oracle", condensation_oracle},
      {6, "DOF accounting", dof_accounting},
      {7, "well-posedness of every preset", well_posedness},
      {8, "initial-data compatibility", initial_compatibility},
      {9, "scenario stability", scenario_stability},
      {10, "manufactured-solution residual gate", manufactured_residual_gate},
  };
  const std::set<int> selected(only.begin(), only.end());
  int failed = 0;
  std::vector<std::string> lines;
  for (const Criterion& c : all) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    std::printf("criterion %d: %s\n", c.id, c.title);
    std::fflush(stdout);
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("exception: ") + e.what();
    }
    char buf[1024];
    std::snprintf(buf, sizeof buf, "[%s] criterion %d (%s): %s", o.pass ? "PASS" : "FAIL", c.id,
                  c.title, o.summary.c_str());
    std::printf("%s\n\n", buf);
    std::fflush(stdout);
    lines.push_back(buf);
    if (!o.pass) ++failed;
  }
  std::printf("summary\n");
  for (const auto& l : lines) std::printf("%s\n", l.c_str());
  std::printf("%d of %zu criteria failed\n", failed, lines.size());
  return failed == 0 ? 0 : 1;
}
