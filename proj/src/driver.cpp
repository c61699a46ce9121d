// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#include "driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "global_system.hpp"
#include "output.hpp"

namespace porohdg {

ScalarField gaussian_pulse(double a0, double lx, double ly, const Point2& center) {
  if (!(lx > 0.0) || !(ly > 0.0)) fail(ErrorKind::InvalidInput, "pulse widths must be positive");
  return [=](const Point2& x) {
    const double u = (x.x() - center.x()) / lx, v = (x.y() - center.y()) / ly;
    return a0 * std::exp(-(u * u + v * v));
  };
}

VectorField gaussian_pulse_gradient(double a0, double lx, double ly, const Point2& center) {
  const ScalarField g = gaussian_pulse(a0, lx, ly, center);
  return [=](const Point2& x) {
    const double val = g(x);
    return Eigen::Vector2d(-2.0 * (x.x() - center.x()) / (lx * lx) * val,
                           -2.0 * (x.y() - center.y()) / (ly * ly) * val);
  };
}

namespace {

template <typename Fn>
auto stage(const char* name, Fn fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    fail(e.kind(), std::string("[") + name + "] " + e.what());
  }
}

bool manufactured(const Config& c) {
  return c.initial == InitialKind::Manufactured || c.source == SourceKind::Manufactured;
}

}  // namespace

Mesh build_mesh(const MeshConfig& cfg) {
  Mesh mesh = cfg.file.empty() ? build_structured_rect(cfg.xmin, cfg.xmax, cfg.ymin, cfg.ymax,
                                                       cfg.nx, cfg.ny, cfg.boundary)
                               : read_mesh_file(cfg.file);
  for (const RefineDirective& r : cfg.refine) {
    mesh = refine_near_point(mesh, r.center, r.radius, r.levels);
  }
  return mesh;
}

MaterialField assign_materials(const Config& cfg, const Mesh& mesh) {
  MaterialField field;
  if (manufactured(cfg)) return uniform_material(example1_material(cfg.young, cfg.poisson), mesh.num_elements());
  for (const RegionConfig& r : cfg.regions) field.regions.push_back(r.material.resolve(r.name));
  field.element_region.resize(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Point2 c = mesh.centroid(e);
    int found = -1;
    for (std::size_t i = 0; i < cfg.regions.size() && found < 0; ++i) {
      if (cfg.regions[i].where.contains(c)) found = static_cast<int>(i);
    }
    if (found < 0) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "element %d (centroid %g, %g) matches no material region", e,
                    c.x(), c.y());
      fail(ErrorKind::Config, buf);
    }
    field.element_region[e] = found;
  }
  return field;
}

Discretization build_discretization(const Config& cfg) {
  Mesh mesh = stage("mesh", [&] { return build_mesh(cfg.mesh); });
  MaterialField mats = stage("materials", [&] { return assign_materials(cfg, mesh); });
  Stabilization stab = stabilization_defaults(mesh, cfg.c_s, cfg.c_f);
  return Discretization(std::move(mesh), std::move(mats), cfg.degree, std::move(stab));
}

Discretization build_discretization(const Config& cfg, int nx, int ny) {
  Config c = cfg;
  c.mesh.nx = nx;
  c.mesh.ny = ny;
  return build_discretization(c);
}

InitialData initial_data(const Config& cfg) {
  if (cfg.initial == InitialKind::Manufactured) {
    return example1_solution(cfg.young, cfg.poisson).initial_data(0.0);
  }
  InitialData d;
  d.stress = [](const Point2&) { return Eigen::Vector3d::Zero(); };
  d.stress_divergence = [](const Point2&) { return Eigen::Vector2d::Zero(); };
  d.solid_velocity = [](const Point2&) { return Eigen::Vector2d::Zero(); };
  d.fluid_velocity = [](const Point2&) { return Eigen::Vector2d::Zero(); };
  d.fluid_divergence = [](const Point2&) { return 0.0; };
  d.pressure = [](const Point2&) { return 0.0; };
  if (cfg.initial == InitialKind::Zero) return d;

  const PulseConfig& pc = cfg.pulse;
  const ScalarField g = gaussian_pulse(pc.amplitude, pc.lx, pc.ly, pc.center);
  const VectorField dg = gaussian_pulse_gradient(pc.amplitude, pc.lx, pc.ly, pc.center);
  auto has = [&](const char* t) {
    return std::find(pc.targets.begin(), pc.targets.end(), t) != pc.targets.end();
  };
  const Eigen::Vector3d s(has("sxx"), has("syy"), has("sxy"));
  const Eigen::Vector2d vs(has("vs1"), has("vs2")), vf(has("vf1"), has("vf2"));
  const double p = has("p");
  d.stress = [=](const Point2& x) { return Eigen::Vector3d(s * g(x)); };
  d.stress_divergence = [=](const Point2& x) {
    const Eigen::Vector2d gr = dg(x);
    return Eigen::Vector2d(s[0] * gr.x() + s[2] * gr.y(), s[2] * gr.x() + s[1] * gr.y());
  };
  d.solid_velocity = [=](const Point2& x) { return Eigen::Vector2d(vs * g(x)); };
  d.fluid_velocity = [=](const Point2& x) { return Eigen::Vector2d(vf * g(x)); };
  d.fluid_divergence = [=](const Point2& x) { return vf.dot(dg(x)); };
  d.pressure = [=](const Point2& x) { return p * g(x); };
  return d;
}

State initial_state(const Config& cfg, const Discretization& disc) {
  if (cfg.initial == InitialKind::Zero) return zero_state(disc);
  const InitialData d = initial_data(cfg);
  return cfg.init_method == InitMethod::Compatible ? init_compatible(disc, d)
                                                   : init_projection(disc, d);
}

SourceSpec source_spec(const Config& cfg) {
  if (cfg.source == SourceKind::Manufactured) return example1_solution(cfg.young, cfg.poisson).sources();
  return {};
}

double resolve_time_step(const Config& cfg, const Discretization& disc) {
  if (cfg.dt > 0.0) return make_time_grid(cfg.t_final, cfg.dt).dt;
  if (manufactured(cfg) && cfg.mesh.file.empty() && cfg.mesh.refine.empty()) {
    const double h = std::max((cfg.mesh.xmax - cfg.mesh.xmin) / cfg.mesh.nx,
                              (cfg.mesh.ymax - cfg.mesh.ymin) / cfg.mesh.ny);
    return default_time_step(h, cfg.degree, cfg.t_final);
  }
  // One crossing of the largest element by the fastest wave.
  double speed = 0.0;
  for (const auto& m : disc.materials().regions) speed = std::max(speed, fast_wave_speed(m));
  return make_time_grid(cfg.t_final, mesh_size(disc.mesh()) / speed).dt;
}

std::string diagnostics_csv(const std::vector<DiagnosticRow>& rows) {
  std::ostringstream os;
  os << "t,X2,Y2,l2_sigma,l2_vs,l2_vf,l2_p\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.x2, r.y2,
                  r.norms[0], r.norms[1], r.norms[2], r.norms[3]);
    os << buf;
  }
  return os.str();
}

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out || !(out << text)) fail(ErrorKind::Io, "cannot write '" + path + "'");
}

std::string prepare_dir(const Config& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create '" + cfg.output_dir + "': " + ec.message());
  return cfg.output_dir;
}

DiagnosticRow diagnose(const Discretization& disc, const State& s, double y2, double x2) {
  DiagnosticRow r;
  r.t = s.t;
  r.x2 = x2;
  r.y2 = y2;
  for (int f = 0; f < 4; ++f) r.norms[f] = l2_norm(disc, s, kAllFields[f]);
  return r;
}

RunResult simulate(const Config& cfg, const RunOptions& opt) {
  RunResult res;
  res.mode = RunMode::Simulate;
  const Discretization disc = build_discretization(cfg);
  const double dt = resolve_time_step(cfg, disc);
  const TimeGrid grid = make_time_grid(cfg.t_final, dt);
  res.dt = grid.dt;
  res.steps = grid.steps;
  const SourceSpec src = source_spec(cfg);
  State s = stage("init", [&] { return initial_state(cfg, disc); });
  const Stepper stepper = stage("factorize", [&] { return Stepper(disc, grid.dt); });
  if (opt.log) {
    *opt.log << "elements " << disc.num_elements() << ", trace unknowns " << disc.dofs().size()
             << ", steps " << grid.steps << " of " << grid.dt << " s, backend "
             << sparse_backend_name() << '\n';
  }
  const std::string dir = opt.write_files ? prepare_dir(cfg) : std::string();
  if (opt.write_files && opt.emit_matrix) {
    const std::string path = dir + "/matrix.mtx";
    stage("output", [&] { write_matrix_market(stepper.system().matrix(), path); });
    res.files.push_back(path);
  }
  const int snaps = cfg.write_vtk ? std::min(cfg.snapshots, grid.steps) : 0;
  int next_snap = 0;
  auto maybe_snapshot = [&](int step) {
    if (!opt.write_files || !cfg.write_vtk || cfg.snapshots == 0 || next_snap > snaps) return;
    // Snapshot j is taken at step round(j N / S); j = 0 is the initial state.
    const long target =
        snaps > 0 ? std::lround(static_cast<double>(next_snap) * grid.steps / snaps) : 0;
    if (step != target) return;
    char name[64];
    std::snprintf(name, sizeof name, "/snapshot_%04d.vtk", next_snap);
    stage("output", [&] { write_vtk(disc, s, dir + name); });
    res.files.push_back(dir + name);
    ++next_snap;
  };

  EnergyTracker energy(disc, s);
  res.diagnostics.push_back(diagnose(disc, s, 0.0, energy.samples().back().x2));
  maybe_snapshot(0);
  for (int i = 0; i < grid.steps; ++i) {
    s = stage("step", [&] { return stepper.advance(s, src); });
    s.t = grid.time(i + 1);
    if (!s.interior.allFinite() || !s.trace.allFinite()) {
      res.finite = false;
      fail(ErrorKind::Solver, "[step] non-finite coefficients at step " + std::to_string(i + 1));
    }
    energy.push(s);
    res.diagnostics.push_back(diagnose(disc, s, energy.samples().back().y2, energy.samples().back().x2));
    maybe_snapshot(i + 1);
  }
  if (manufactured(cfg)) {
    const ExactSolution ex = example1_solution(cfg.young, cfg.poisson);
    std::array<double, 4> err{};
    for (int f = 0; f < 4; ++f) err[f] = l2_error(disc, s, ex, kAllFields[f], s.t);
    res.errors = err;
    if (opt.log) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "final errors: sigma %.3e  vs %.3e  vf %.3e  p %.3e\n",
                    err[0], err[1], err[2], err[3]);
      *opt.log << buf;
    }
  }
  if (opt.write_files) {
    const std::string path = dir + "/diagnostics.csv";
    stage("output", [&] { write_text(path, diagnostics_csv(res.diagnostics)); });
    res.files.push_back(path);
  }
  res.final_state = std::move(s);
  return res;
}

RunResult study(const Config& cfg, const RunOptions& opt) {
  RunResult res;
  res.mode = RunMode::ConvergenceStudy;
  std::vector<int> divisions;
  for (int l = 1; l <= cfg.study_levels; ++l) divisions.push_back(1 << l);
  ConvergenceOptions co;
  co.t_final = cfg.t_final;
  co.dt = cfg.dt;
  co.c_s = cfg.c_s;
  co.c_f = cfg.c_f;
  co.compatible_init = cfg.init_method == InitMethod::Compatible;
  if (opt.log) {
    *opt.log << "convergence study: k = " << cfg.degree << ", h = 1/2 .. 1/" << divisions.back()
             << ", T = " << cfg.t_final << '\n';
  }
  res.report = stage("study", [&] {
    return convergence_study(example1_solution(cfg.young, cfg.poisson), cfg.degree, divisions, co);
  });
  if (opt.write_files) {
    const std::string path = prepare_dir(cfg) + "/convergence.csv";
    stage("output", [&] { write_text(path, res.report->csv()); });
    res.files.push_back(path);
  }
  return res;
}

RunResult oracle(const Config& cfg, const RunOptions& opt) {
  RunResult res;
  res.mode = RunMode::OracleCheck;
  const Discretization disc = build_discretization(cfg);
  res.dt = resolve_time_step(cfg, disc);
  res.oracle_difference = stage("factorize", [&] {
    return oracle_compare(disc, res.dt, random_state(disc, cfg.seed));
  });
  if (opt.log) {
    char buf[120];
    std::snprintf(buf, sizeof buf, "max relative difference %.3e\n", res.oracle_difference);
    *opt.log << buf;
  }
  if (opt.write_files && opt.emit_matrix) {
    const Stepper st(disc, res.dt);
    const std::string path = prepare_dir(cfg) + "/matrix.mtx";
    stage("output", [&] { write_matrix_market(st.system().matrix(), path); });
    res.files.push_back(path);
  }
  return res;
}

}  // namespace

RunResult run(const Config& cfg, const RunOptions& opt) {
  stage("config", [&] { validate_config(cfg); });
  switch (cfg.mode) {
    case RunMode::Simulate: return simulate(cfg, opt);
    case RunMode::ConvergenceStudy: return study(cfg, opt);
    case RunMode::OracleCheck: return oracle(cfg, opt);
  }
  return {};
}

}  // namespace porohdg
