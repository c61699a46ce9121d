// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "verification.hpp"

namespace porohdg {
namespace {

using Eigen::Vector2d;
using Eigen::Vector3d;
using Eigen::VectorXd;

constexpr double kPi = std::numbers::pi;

Discretization unit_square(int n, int k, const MaterialParams& m,
                           const BoundarySpec& spec = {}) {
  Mesh mesh = build_structured_rect(0, 1, 0, 1, n, n, spec);
  Stabilization stab = stabilization_defaults(mesh, 1, 1);
  const int ne = mesh.num_elements();
  return Discretization(std::move(mesh), uniform_material(m, ne), k, std::move(stab));
}

std::vector<std::pair<Point2, double>> samples(int count, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0), T(0.0, 2.0);
  std::vector<std::pair<Point2, double>> out;
  for (int i = 0; i < count; ++i) out.push_back({Point2(U(gen), U(gen)), T(gen)});
  return out;
}

TEST(Example1, PrintedValues) {
  const ExactSolution ex = example1_solution(3.0, 0.3);
  const Vector2d u = ex.displacement(Point2(0.5, 0.5), 0.5);
  EXPECT_NEAR(u[0], 1.0, 1e-15);
  EXPECT_NEAR(u[1], 0.0625, 1e-15);
  EXPECT_NEAR(ex.pressure(Point2(0.5, 0.5), 0.0), 0.75, 1e-15);
}

TEST(Example1, VanishesOnBoundary) {
  const ExactSolution ex = example1_solution(3.0, 0.3);
  for (const auto& [x, t] : samples(50, 1)) {
    for (const Point2& b : {Point2(0, x.y()), Point2(1, x.y()), Point2(x.x(), 0),
                            Point2(x.x(), 1)}) {
      EXPECT_LT(ex.displacement(b, t).norm(), 1e-15);
      EXPECT_LT(ex.solid_velocity(b, t).norm(), 1e-14);
      EXPECT_LT(std::abs(ex.pressure(b, t)), 1e-15);
    }
  }
}

TEST(Example1, InitialStressIsPressureOnly) {
  // The displacement time factor vanishes at t = 0, so only -alpha p I is left.
  const ExactSolution ex = example1_solution(3.0, 0.3);
  const Point2 x(0.3, 0.6);
  const Vector3d s = ex.stress(x, 0.0);
  const double p = ex.pressure(x, 0.0);
  EXPECT_NEAR(s[0], -p, 1e-15);
  EXPECT_NEAR(s[1], -p, 1e-15);
  EXPECT_NEAR(s[2], 0.0, 1e-15);
  const Vector2d v = ex.solid_velocity(x, 0.0);
  const double sx = std::sin(kPi * 0.3), sy = std::sin(kPi * 0.6);
  EXPECT_NEAR(v[0], kPi * sx * sy, 1e-14);
  EXPECT_NEAR(v[1], kPi * 0.3 * 0.6 * (0.3 - 1) * (0.6 - 1), 1e-14);
}

// Central differences of the closures against their declared derivatives.
template <typename F>
auto d_dt(const F& f, const Point2& x, double t, double h = 1e-5) {
  return (f(x, t + h) - f(x, t - h)) / (2 * h);
}
template <typename F>
auto d_dx(const F& f, const Point2& x, double t, int dir, double h = 1e-5) {
  const Point2 e = dir == 0 ? Point2(h, 0) : Point2(0, h);
  return (f(x + e, t) - f(x - e, t)) / (2 * h);
}

void expect_close(double a, double b, double tol = 1e-6) {
  EXPECT_LE(std::abs(a - b), tol * std::max(1.0, std::abs(b))) << a << " vs " << b;
}
template <typename V>
void expect_close_vec(const V& a, const V& b, double tol = 1e-6) {
  for (int i = 0; i < a.size(); ++i) expect_close(a[i], b[i], tol);
}

TEST(Example1, DerivativesMatchFiniteDifferences) {
  for (double nu : {0.3, 0.499}) {
    const ExactSolution ex = example1_solution(3.0, nu);
    const MaterialParams& m = ex.material;
    for (const auto& [x0, t] : samples(40, 7)) {
      const Point2 x = 0.05 * Point2(1, 1) + 0.9 * x0;
      expect_close_vec<Vector2d>(ex.solid_velocity(x, t), d_dt(ex.displacement, x, t));
      expect_close_vec<Vector2d>(ex.solid_acceleration(x, t), d_dt(ex.solid_velocity, x, t));
      expect_close(ex.pressure_rate(x, t), d_dt(ex.pressure, x, t));
      expect_close_vec<Vector3d>(ex.stress_rate(x, t), d_dt(ex.stress, x, t), 1e-6);
      expect_close_vec<Vector2d>(ex.fluid_velocity_rate(x, t), d_dt(ex.fluid_velocity, x, t));

      const Vector2d vx = d_dx(ex.solid_velocity, x, t, 0);
      const Vector2d vy = d_dx(ex.solid_velocity, x, t, 1);
      expect_close_vec<Vector3d>(ex.solid_strain_rate(x, t), Vector3d(vx[0], vy[1], vx[1] + vy[0]));
      expect_close(ex.solid_divergence(x, t), vx[0] + vy[1]);

      expect_close_vec<Vector2d>(ex.pressure_gradient(x, t),
                                 Vector2d(d_dx(ex.pressure, x, t, 0), d_dx(ex.pressure, x, t, 1)));
      expect_close_vec<Vector2d>(ex.fluid_velocity(x, t), -ex.pressure_gradient(x, t), 1e-14);
      expect_close(ex.fluid_divergence(x, t), d_dx(ex.fluid_velocity, x, t, 0)[0] +
                                                  d_dx(ex.fluid_velocity, x, t, 1)[1]);

      const Vector3d sx = d_dx(ex.stress, x, t, 0), sy = d_dx(ex.stress, x, t, 1);
      expect_close_vec<Vector2d>(ex.stress_divergence(x, t),
                                 Vector2d(sx[0] + sy[2], sx[2] + sy[1]), 1e-6);

      // Constitutive law from the displacement.
      const Vector2d ux = d_dx(ex.displacement, x, t, 0), uy = d_dx(ex.displacement, x, t, 1);
      const Vector3d eps(ux[0], uy[1], ux[1] + uy[0]);
      expect_close_vec<Vector3d>(
          ex.stress(x, t), Vector3d(m.stiffness * eps - m.alpha * ex.pressure(x, t) * voigt_identity()),
          1e-6);
    }
  }
}

TEST(Example1, PdeResidualVanishes) {
  for (double nu : {0.3, 0.499}) {
    const ExactSolution ex = example1_solution(3.0, nu);
    double worst = 0.0;
    for (const auto& [x, t] : samples(1000, 11)) worst = std::max(worst, pde_residual(ex, x, t).max_abs());
    EXPECT_LE(worst, 1e-10);
  }
}

TEST(Example1, MaterialParameters) {
  const MaterialParams m = example1_material(3.0, 0.3);
  EXPECT_EQ(m.rho11, 1.0);
  EXPECT_EQ(m.rho12, 1.0);
  EXPECT_EQ(m.rho22, Eigen::Matrix2d::Identity() * 2.0);
  EXPECT_EQ(m.eta, 1.0);
  EXPECT_EQ(m.kappa, Vector2d(1, 1));
  EXPECT_EQ(m.alpha, 1.0);
  EXPECT_EQ(m.s0, 1.0);
  EXPECT_THROW(example1_material(3.0, 0.5), Error);
}

TEST(Fields, NamesRoundTrip) {
  for (Field f : kAllFields) EXPECT_EQ(parse_field(field_name(f)), f);
  EXPECT_THROW(parse_field("temperature"), Error);
}

// Linear-in-space fields at every time.
ExactSolution linear_fields(const MaterialParams& m) {
  ExactSolution ex;
  ex.material = m;
  ex.stress = [](const Point2& x, double) { return Vector3d(x.x(), 1 - x.y(), 2 * x.x() + x.y()); };
  ex.solid_velocity = [](const Point2& x, double) {
    return Vector2d(x.x() * x.y(), x.y() * x.y());  // degree 2 = k + 1
  };
  ex.fluid_velocity = [](const Point2& x, double) { return Vector2d(x.y(), -x.x()); };
  ex.pressure = [](const Point2& x, double) { return 3 * x.x() - x.y(); };
  return ex;
}

TEST(L2Error, ZeroForProjectedDiscreteFields) {
  const Discretization d = unit_square(3, 1, example1_material(3, 0.3));
  const ExactSolution ex = linear_fields(d.materials().at(0));
  InitialData init;
  init.stress = [&](const Point2& x) { return ex.stress(x, 0); };
  init.solid_velocity = [&](const Point2& x) { return ex.solid_velocity(x, 0); };
  init.fluid_velocity = [&](const Point2& x) { return ex.fluid_velocity(x, 0); };
  init.pressure = [&](const Point2& x) { return ex.pressure(x, 0); };
  const State s = init_projection(d, init);
  for (Field f : kAllFields) EXPECT_LE(l2_error(d, s, ex, f, 0.0), 1e-12) << field_name(f);
}

TEST(L2Error, ZeroAndConstantOffsets) {
  const Discretization d = unit_square(2, 2, example1_material(3, 0.3));
  const State s = zero_state(d);
  ExactSolution ex;
  ex.material = d.materials().at(0);
  ex.stress = [](const Point2&, double) { return Vector3d::Zero(); };
  ex.solid_velocity = [](const Point2&, double) { return Vector2d::Zero(); };
  ex.fluid_velocity = [](const Point2&, double) { return Vector2d::Zero(); };
  ex.pressure = [](const Point2&, double) { return 0.0; };
  for (Field f : kAllFields) EXPECT_EQ(l2_error(d, s, ex, f, 0.0), 0.0);

  ex.pressure = [](const Point2&, double) { return -0.7; };
  EXPECT_NEAR(l2_error(d, s, ex, Field::Pressure, 0.0), 0.7, 1e-14);
  ex.fluid_velocity = [](const Point2&, double) { return Vector2d(0.3, 0.4); };
  EXPECT_NEAR(l2_error(d, s, ex, Field::FluidVelocity, 0.0), 0.5, 1e-14);
  ex.stress = [](const Point2&, double) { return Vector3d(0, 0, 1); };
  EXPECT_NEAR(l2_error(d, s, ex, Field::Stress, 0.0), std::sqrt(2.0), 1e-14);
  ex.stress = [](const Point2&, double) { return Vector3d(2, 0, 0); };
  EXPECT_NEAR(l2_error(d, s, ex, Field::Stress, 0.0), 2.0, 1e-14);
}

TEST(L2Error, RejectsLowQuadrature) {
  const Discretization d = unit_square(2, 2, example1_material(3, 0.3));
  const ExactSolution ex = example1_solution(3, 0.3);
  EXPECT_THROW(l2_error(d, zero_state(d), ex, Field::Pressure, 0.0, 7), Error);
  EXPECT_NO_THROW(l2_error(d, zero_state(d), ex, Field::Pressure, 0.0, 8));
}

TEST(L2Norm, MatchesZeroExactError) {
  const Discretization d = unit_square(2, 1, example1_material(3, 0.3));
  const State s = random_state(d, 5);
  ExactSolution zero;
  zero.stress = [](const Point2&, double) { return Vector3d::Zero(); };
  zero.solid_velocity = [](const Point2&, double) { return Vector2d::Zero(); };
  zero.fluid_velocity = [](const Point2&, double) { return Vector2d::Zero(); };
  zero.pressure = [](const Point2&, double) { return 0.0; };
  for (Field f : kAllFields) {
    EXPECT_NEAR(l2_norm(d, s, f), l2_error(d, s, zero, f, 0.0), 1e-12);
  }
}

TEST(Eoc, ExactPowers) {
  auto r = eoc({1e-2, 2.5e-3}, {0.5, 0.25});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0], 2.0, 1e-12);
  r = eoc({8e-3, 1e-3}, {0.5, 0.25});
  EXPECT_NEAR(r[0], 3.0, 1e-12);
  // Published stress errors at h = 1/4, 1/8 for k = 1.
  r = eoc({7.36e-3, 1.67e-3}, {0.25, 0.125});
  EXPECT_NEAR(r[0], 2.14, 0.005);
}

TEST(Eoc, Rejections) {
  EXPECT_THROW(eoc({1e-2}, {0.5}), Error);
  EXPECT_THROW(eoc({1e-2, 0.0}, {0.5, 0.25}), Error);
  EXPECT_THROW(eoc({1e-2, 1e-3}, {0.5}), Error);
}

TEST(Eoc, FittedSlope) {
  std::vector<double> hs{0.5, 0.25, 0.125, 0.0625}, e;
  for (double h : hs) e.push_back(3.0 * std::pow(h, 2.5));
  EXPECT_NEAR(fitted_slope(e, hs, 3), 2.5, 1e-12);
  EXPECT_NEAR(fitted_slope(e, hs, 4), 2.5, 1e-12);
  EXPECT_THROW(fitted_slope(e, hs, 5), Error);
}

TEST(TimeStep, DefaultRule) {
  const double dt = default_time_step(1.0 / 8, 1, 1.0);
  EXPECT_LE(dt, std::pow(1.0 / 8, 1.5) + 1e-15);
  EXPECT_NEAR(1.0 / dt, std::round(1.0 / dt), 1e-9);
  EXPECT_EQ(std::lround(1.0 / dt), 23);
}

TEST(Energy, ZeroTrajectory) {
  const Discretization d = unit_square(2, 1, example1_material(3, 0.3));
  State a = zero_state(d), b = zero_state(d, 0.1);
  for (const EnergySample& s : energy_series(d, {a, b})) {
    EXPECT_EQ(s.x2, 0.0);
    EXPECT_EQ(s.y2, 0.0);
  }
}

TEST(Energy, MatchesElementMassForm) {
  const Discretization d = unit_square(3, 2, *library_material("glass-epoxy"));
  const State s = random_state(d, 9);
  double ref = 0.0;
  for (int e = 0; e < d.num_elements(); ++e) ref += s.element(e).dot(d.blocks(e).mass() * s.element(e));
  EXPECT_NEAR(energy_norm2(d, s), ref, 1e-11 * std::abs(ref));
}

TEST(Energy, DissipationMatchesElementForms) {
  const Discretization d = unit_square(3, 1, example1_material(3, 0.3));
  const State s = random_state(d, 4);
  double ref = 0.0;
  for (int e = 0; e < d.num_elements(); ++e) {
    const LocalBlocks b = d.blocks(e);
    const std::vector<int> gd = d.element_dofs(e);
    VectorXd lam(gd.size());
    for (std::size_t r = 0; r < gd.size(); ++r) lam[r] = s.trace[gd[r]];
    const VectorXd u = s.element(e);
    ref += u.dot(b.stiffness() * u + b.coupling() * lam) + lam.dot(b.trace_rows() * u + b.trace_trace() * lam);
  }
  EXPECT_NEAR(dissipation2(d, s), ref, 1e-11 * std::abs(ref));
}

TEST(Energy, SinglePressureTraceMismatch) {
  const Discretization d = unit_square(2, 1, example1_material(3, 0.3));
  int face = -1;
  for (int f = 0; f < d.mesh().num_faces(); ++f) {
    if (!d.mesh().faces()[f].is_boundary()) {
      face = f;
      break;
    }
  }
  ASSERT_GE(face, 0);
  State a = zero_state(d);
  a.trace[d.dofs().index(face, 2, 0)] = 0.5;  // constant 0.5 along the face
  State b = a;
  b.t = 0.2;
  const Face& F = d.mesh().faces()[face];
  double expected = 0.0;
  for (int side = 0; side < 2; ++side) {
    expected += d.stabilization().fluid[F.elements[side]][F.local_index[side]] * 0.25 * F.length;
  }
  const auto series = energy_series(d, {a, b});
  ASSERT_EQ(series.size(), 2u);
  EXPECT_NEAR(series[1].y2 - series[0].y2, 0.2 * expected, 1e-14);
  EXPECT_EQ(series[1].x2, 0.0);
}

TEST(Energy, IdentityForZeroSourceRun) {
  const Discretization d = unit_square(4, 1, example1_material(3, 0.3));
  State s = random_compatible_state(d, 21);
  const Stepper st(d, 0.05);
  EnergyTracker tracker(d, s);
  for (int i = 0; i < 20; ++i) {
    s = st.advance(s, {});
    tracker.push(s);
  }
  const auto& series = tracker.samples();
  const double x0 = series.front().x2;
  for (std::size_t i = 1; i < series.size(); ++i) {
    EXPECT_LE(std::abs(series[i].x2 + 2 * series[i].y2 - x0), 1e-10 * x0);
    EXPECT_LE(series[i].x2, series[i - 1].x2 * (1 + 1e-12));
  }
}

TEST(Oracle, ZeroDataGivesZero) {
  const Discretization d = unit_square(2, 2, example1_material(3, 0.3));
  EXPECT_EQ(oracle_compare(d, 0.1, zero_state(d)), 0.0);
}

TEST(Oracle, AgreesForSeveralDegrees) {
  const Mesh mesh = build_structured_rect(0, 1, 0, 1, 2, 2);
  for (int k : {1, 3}) {
    EXPECT_LE(oracle_compare(mesh, k, example1_material(3, 0.3), 0.01, 3), 1e-9) << k;
  }
}

TEST(MonolithicStep, MatchesStepperWithSources) {
  const ExactSolution ex = example1_solution(3, 0.3);
  const Discretization d = unit_square(3, 1, ex.material);
  State s = init_projection(d, ex.initial_data(0.0));
  const Stepper st(d, 0.1);
  const State a = st.advance(s, ex.sources());
  const State b = monolithic_step(d, 0.1, s, ex.sources());
  EXPECT_LE((a.interior - b.interior).norm(), 1e-10 * b.interior.norm());
  EXPECT_LE((a.trace - b.trace).norm(), 1e-10 * b.trace.norm());
}

TEST(Convergence, ErrorsDecreaseOnCoarseMeshes) {
  const ExactSolution ex = example1_solution(3, 0.3);
  const ErrorReport rep = convergence_study(ex, 1, {2, 4, 8});
  for (Field f : kAllFields) {
    const auto& e = rep.error(f);
    ASSERT_EQ(e.size(), 3u);
    EXPECT_LT(e[2], e[1]) << field_name(f);
    EXPECT_LT(e[1], e[0]) << field_name(f);
  }
  EXPECT_EQ(rep.hs, (std::vector<double>{0.5, 0.25, 0.125}));
  const std::string table = rep.table();
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 4);
  EXPECT_NE(table.find("e.o.c."), std::string::npos);
  const std::string csv = rep.csv();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_EQ(csv.rfind("k,n,h,dt,err_sigma,eoc_sigma", 0), 0u);
}

}  // namespace
}  // namespace porohdg
