// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "config.hpp"
#include "driver.hpp"
#include "output.hpp"

namespace porohdg {
namespace {

namespace fs = std::filesystem;

std::string temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("porohdg_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

const char* kMinimalExample1 = R"(poro-hdg-config 1
[run]
mode = simulate
[initial]
kind = manufactured
[source]
kind = manufactured
[manufactured]
young = 3
poisson = 0.3
[time]
t_final = 1
)";

TEST(Config, MinimalBenchmark) {
  const Config c = parse_config_text(kMinimalExample1);
  EXPECT_EQ(c.degree, 1);
  EXPECT_EQ(c.mesh.xmin, 0.0);
  EXPECT_EQ(c.mesh.xmax, 1.0);
  EXPECT_EQ(c.mesh.ymin, 0.0);
  EXPECT_EQ(c.mesh.ymax, 1.0);
  EXPECT_TRUE(c.mesh.boundary.rules.empty());
  EXPECT_EQ(c.mesh.boundary.fallback.elastic, ElasticBc::Dirichlet);
  EXPECT_EQ(c.mesh.boundary.fallback.flow, FlowBc::Pressure);
  EXPECT_EQ(c.initial, InitialKind::Manufactured);
  EXPECT_EQ(c.dt, 0.0);
}

std::string with(const std::string& base, const std::string& extra) { return base + extra; }

void expect_config_error(const std::string& text, const std::string& fragment) {
  try {
    parse_config_text(text);
    ADD_FAILURE() << "accepted: " << fragment;
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST(Config, Rejections) {
  std::string t = kMinimalExample1;
  expect_config_error("poro-hdg-config 2\n", "header");
  {
    std::string s = t;
    s.replace(s.find("poisson = 0.3"), 13, "poisson = 0.5");
    expect_config_error(s, "manufactured");
  }
  expect_config_error(with(t, "[stabilization]\ncolour = red\n"), "stabilization.colour");
  expect_config_error(with(t, "[nonsense]\n"), "unknown section");
  expect_config_error(with(t, "[output]\nsnapshots = many\n"), "output.snapshots");
  {
    std::string s = t;
    s.replace(s.find("t_final = 1"), 11, "t_final = 1 GPa");
    expect_config_error(s, "time.t_final");
  }
  {
    std::string s = t;
    s.replace(s.find("t_final = 1"), 11, "dt = 0.1\ndt = 0.2\nt_final = 1");
    expect_config_error(s, "duplicate key");
  }
}

const char* kExplicitMaterial = R"(poro-hdg-config 1
[material.rock]
c11 = 36 GPa
c13 = 12 GPa
c33 = 36 GPa
c55 = 12 GPa
alpha = 0.5
s0 = 8.75e-2 1/GPa
rho11 = 2208 kg/m^3
rho12 = 1040
rho22 = 10400 18720 kg/m^3
eta = 1e-3 Pa*s
kappa = 6e-13 1e-13 m^2
[time]
dt = 1 ms
t_final = 10 ms
)";

TEST(Config, ExplicitMaterialUnits) {
  const Config c = parse_config_text(kExplicitMaterial);
  ASSERT_EQ(c.regions.size(), 1u);
  const MaterialParams m = c.regions[0].material.resolve("rock");
  const MaterialParams ref = *library_material("sandstone-iso");
  EXPECT_EQ(m.stiffness, ref.stiffness);
  EXPECT_DOUBLE_EQ(m.s0, ref.s0);
  EXPECT_EQ(m.rho22, ref.rho22);
  EXPECT_EQ(m.kappa, ref.kappa);
  EXPECT_DOUBLE_EQ(c.dt, 1e-3);
  EXPECT_DOUBLE_EQ(c.t_final, 1e-2);
}

TEST(Config, ViscousMaterialNeedsPermeability) {
  std::string s = kExplicitMaterial;
  s.erase(s.find("kappa"), std::string("kappa = 6e-13 1e-13 m^2\n").size());
  expect_config_error(s, "kappa");
  // Inviscid fluid does not need it.
  s.replace(s.find("eta = 1e-3 Pa*s"), 15, "eta = 0");
  EXPECT_NO_THROW(parse_config_text(s));
}

TEST(Config, UnitMismatch) {
  std::string s = kExplicitMaterial;
  s.replace(s.find("c11 = 36 GPa"), 12, "c11 = 36 kg/m^3");
  expect_config_error(s, "material.rock.c11");
}

TEST(Config, GpaRoundTripIsLossless) {
  for (double v : {36.0, 12.0, 39.4, 1.2, 13.1, 3.0, 11.9, 3.9, 40.0, 2.5, 20.0, 3.2, 7.6, 6.6}) {
    const double pa = parse_quantity("x", std::to_string(v) + " GPa", Dimension::Pressure);
    char a[32], b[32];
    std::snprintf(a, sizeof a, "%.15g", pa / 1e9);
    std::snprintf(b, sizeof b, "%.15g", v);
    EXPECT_STREQ(a, b);
  }
  for (double v : {8.75e-2, 9.8e-2, 6.03e-2}) {
    const double si = parse_quantity("x", std::to_string(v) + " 1/GPa", Dimension::InversePressure);
    char a[32], b[32];
    std::snprintf(a, sizeof a, "%.15g", si * 1e9);
    std::snprintf(b, sizeof b, "%.15g", v);
    EXPECT_STREQ(a, b);
  }
}

TEST(Config, PresetsRoundTrip) {
  for (const std::string& name : scenario_names()) {
    const Config c = scenario(name);
    EXPECT_NO_THROW(validate_config(c)) << name;
    const std::string text = serialize_config(c);
    const Config back = parse_config_text(text);
    EXPECT_TRUE(back == c) << name << "\n" << text;
    EXPECT_EQ(serialize_config(back), text);
  }
}

TEST(Config, ShippedPresetFilesMatchScenarios) {
  for (const std::string& name : scenario_names()) {
    const std::string path = std::string(POROHDG_SOURCE_DIR) + "/configs/" + name + ".cfg";
    EXPECT_TRUE(parse_config(path) == scenario(name)) << path;
  }
}

TEST(Config, UnknownScenarioListsPresets) {
  try {
    scenario("example9");
    FAIL();
  } catch (const Error& e) {
    for (const auto& n : scenario_names()) EXPECT_NE(std::string(e.what()).find(n), std::string::npos);
  }
}

TEST(Scenario, ParameterSets) {
  const Config e1 = scenario("example1-compressible");
  EXPECT_EQ(e1.degree, 1);
  EXPECT_EQ(e1.young, 3.0);
  EXPECT_EQ(e1.poisson, 0.3);
  EXPECT_EQ(scenario("example1-nearly-incompressible").poisson, 0.499);

  const Config e2 = scenario("example2-isotropic");
  EXPECT_EQ(e2.mesh.xmin, -4.675);
  EXPECT_EQ(e2.mesh.xmax, 4.675);
  EXPECT_NEAR((e2.mesh.xmax - e2.mesh.xmin) / e2.mesh.nx, 9.35 / 200, 1e-15);
  ASSERT_EQ(e2.regions.size(), 1u);
  EXPECT_EQ(e2.regions[0].material.library, "sandstone-iso");
  EXPECT_EQ(e2.pulse.targets, std::vector<std::string>{"vs2"});
  EXPECT_EQ(e2.pulse.amplitude, 1.0);
  EXPECT_EQ(e2.pulse.lx, 0.08);
  EXPECT_EQ(e2.pulse.ly, 0.08);

  const Config e2a = scenario("example2-anisotropic");
  EXPECT_EQ(e2a.regions[0].material.library, "glass-epoxy");
  EXPECT_EQ(e2a.pulse.targets, (std::vector<std::string>{"syy", "p"}));

  const Config e3 = scenario("example3-heterogeneous");
  EXPECT_EQ(e3.mesh.xmax, 1500.0);
  EXPECT_EQ(e3.mesh.ymax, 1400.0);
  EXPECT_EQ(e3.pulse.center, Point2(750, 900));
  const Mesh mesh = build_mesh(e3.mesh);
  const MaterialField mf = assign_materials(e3, mesh);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const std::string& want = mesh.centroid(e).y() < 700 ? "shale" : "sandstone";
    ASSERT_EQ(mf.at(e).name, want);
  }
  EXPECT_EQ(mf.regions[0].stiffness, library_material("shale")->stiffness);
  EXPECT_EQ(mf.regions[1].stiffness, library_material("sandstone-het")->stiffness);
  // Fast wave crosses half the domain by the end time.
  const double c = fast_wave_speed(*library_material("sandstone-het"));
  EXPECT_NEAR(e3.t_final * c, 750.0, 1e-9);
}

TEST(Pulse, Values) {
  const ScalarField g = gaussian_pulse(1.0, 0.08, 0.08, Point2(0, 0));
  EXPECT_EQ(g(Point2(0, 0)), 1.0);
  EXPECT_NEAR(g(Point2(0.08, 0)), std::exp(-1.0), 1e-15);
  EXPECT_EQ(g(Point2(0.03, 0.05)), g(Point2(-0.03, 0.05)));
  const VectorField dg = gaussian_pulse_gradient(2.0, 0.5, 0.3, Point2(1, 2));
  const ScalarField g2 = gaussian_pulse(2.0, 0.5, 0.3, Point2(1, 2));
  const Point2 x(1.2, 1.9);
  const double h = 1e-6;
  EXPECT_NEAR(dg(x).x(), (g2(x + Point2(h, 0)) - g2(x - Point2(h, 0))) / (2 * h), 1e-7);
  EXPECT_NEAR(dg(x).y(), (g2(x + Point2(0, h)) - g2(x - Point2(0, h))) / (2 * h), 1e-7);
  EXPECT_THROW(gaussian_pulse(1, 0, 1, Point2(0, 0)), Error);
}

TEST(Vtk, ZeroStateAndCounts) {
  Config c = scenario("example3-heterogeneous");
  c.mesh.nx = 6;
  c.mesh.ny = 4;
  const Discretization d = build_discretization(c);
  const std::string dir = temp_dir("vtk_zero");
  write_vtk(d, zero_state(d), dir + "/z.vtk");
  const VtkData v = read_vtk(dir + "/z.vtk");
  EXPECT_EQ(static_cast<int>(v.points.size()), d.mesh().num_vertices());
  EXPECT_EQ(static_cast<int>(v.cells.size()), d.mesh().num_elements());
  ASSERT_EQ(v.names.size(), 8u);
  for (const auto& f : v.fields) {
    for (double x : f) EXPECT_EQ(x, 0.0);
  }
}

TEST(Vtk, RoundTripNineDigits) {
  Config c = scenario("example2-anisotropic");
  c.mesh.nx = c.mesh.ny = 4;
  c.mesh.refine.clear();
  const Discretization d = build_discretization(c);
  State s = zero_state(d);
  for (int i = 0; i < s.interior.size(); ++i) s.interior[i] = std::sin(1.0 + i) * std::pow(10.0, i % 7 - 3);
  const std::string dir = temp_dir("vtk_rt");
  write_vtk(d, s, dir + "/s.vtk");
  const VtkData v = read_vtk(dir + "/s.vtk");
  const Eigen::MatrixXd ref = vertex_fields(d, s);
  for (int f = 0; f < 8; ++f) {
    EXPECT_EQ(v.names[f], vtk_field_names()[f]);
    for (int p = 0; p < ref.rows(); ++p) {
      EXPECT_NEAR(v.fields[f][p], ref(p, f), 1e-8 * std::abs(ref(p, f)) + 1e-300);
    }
  }
}

TEST(Vtk, VertexAveragingOfContinuousField) {
  // A globally linear pressure is reproduced at the vertices.
  Config c = scenario("example2-isotropic");
  c.mesh.nx = c.mesh.ny = 3;
  c.mesh.refine.clear();
  const Discretization d = build_discretization(c);
  InitialData data = initial_data(c);
  data.pressure = [](const Point2& x) { return 2 * x.x() - x.y(); };
  const State s = init_projection(d, data);
  const Eigen::MatrixXd vals = vertex_fields(d, s);
  for (int v = 0; v < d.mesh().num_vertices(); ++v) {
    const Point2& x = d.mesh().vertices()[v];
    EXPECT_NEAR(vals(v, 0), 2 * x.x() - x.y(), 1e-11);
  }
}

Config tiny_pulse_run(const std::string& dir) {
  Config c = scenario("example2-isotropic");
  c.mesh.nx = c.mesh.ny = 6;
  c.mesh.refine.clear();
  c.pulse.lx = c.pulse.ly = 1.5;
  c.t_final = 5 * c.dt;
  c.snapshots = 2;
  c.output_dir = dir;
  return c;
}

TEST(Driver, SimulateWritesOutputs) {
  const std::string dir = temp_dir("sim");
  const Config c = tiny_pulse_run(dir);
  RunOptions o;
  o.emit_matrix = true;
  const RunResult r = run(c, o);
  EXPECT_EQ(r.steps, 5);
  EXPECT_EQ(r.diagnostics.size(), 6u);
  EXPECT_TRUE(fs::exists(dir + "/diagnostics.csv"));
  EXPECT_TRUE(fs::exists(dir + "/matrix.mtx"));
  EXPECT_TRUE(fs::exists(dir + "/snapshot_0000.vtk"));
  EXPECT_TRUE(fs::exists(dir + "/snapshot_0002.vtk"));
  EXPECT_FALSE(fs::exists(dir + "/snapshot_0003.vtk"));
  for (std::size_t i = 1; i < r.diagnostics.size(); ++i) {
    EXPECT_LE(r.diagnostics[i].x2, r.diagnostics[i - 1].x2 * (1 + 1e-12));
    const double x0 = r.diagnostics[0].x2;
    EXPECT_NEAR(r.diagnostics[i].x2 + 2 * r.diagnostics[i].y2, x0, 1e-9 * x0);
  }
  std::ifstream in(dir + "/diagnostics.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,X2,Y2,l2_sigma,l2_vs,l2_vf,l2_p");
}

TEST(Driver, DeterministicDiagnostics) {
  const std::string a = temp_dir("det_a"), b = temp_dir("det_b");
  run(tiny_pulse_run(a));
  run(tiny_pulse_run(b));
  auto slurp = [](const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  EXPECT_EQ(slurp(a + "/diagnostics.csv"), slurp(b + "/diagnostics.csv"));
}

TEST(Driver, ShortRunTakesOneStep) {
  const std::string dir = temp_dir("zero_steps");
  Config c = tiny_pulse_run(dir);
  c.t_final = 0.4 * c.dt;
  const RunResult r = run(c);
  EXPECT_EQ(r.steps, 1);
  EXPECT_TRUE(fs::exists(dir + "/snapshot_0000.vtk"));
}

TEST(Driver, ManufacturedSimulationReportsErrors) {
  Config c = scenario("example1-compressible");
  c.mode = RunMode::Simulate;
  c.mesh.nx = c.mesh.ny = 4;
  c.t_final = 0.25;
  RunOptions o;
  o.write_files = false;
  const RunResult r = run(c, o);
  ASSERT_TRUE(r.errors.has_value());
  const BenchmarkRun ref = run_benchmark(example1_solution(3, 0.3), 1, 4,
                                         ConvergenceOptions{0.25, 0.0, 1.0, 1.0, true});
  for (int f = 0; f < 4; ++f) EXPECT_NEAR((*r.errors)[f], ref.errors[f], 1e-12);
}

TEST(Driver, OracleMode) {
  Config c = scenario("example1-compressible");
  c.mode = RunMode::OracleCheck;
  c.mesh.nx = c.mesh.ny = 3;
  RunOptions o;
  o.write_files = false;
  EXPECT_LE(run(c, o).oracle_difference, 1e-9);
}

TEST(Driver, StageTaggedFailure) {
  Config c = scenario("example3-heterogeneous");
  c.mesh.nx = 4;
  c.mesh.ny = 4;
  c.regions.pop_back();  // nothing covers the upper half
  try {
    run(c, RunOptions{false, false, nullptr});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("[materials]"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace porohdg
