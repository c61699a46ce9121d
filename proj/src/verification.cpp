// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#include "verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "fe_core.hpp"
#include "global_system.hpp"

namespace porohdg {

using Eigen::Matrix2d;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::Vector3d;
using Eigen::VectorXd;

SourceSpec ExactSolution::sources() const {
  SourceSpec s;
  s.body_force = body_force;
  s.fluid_force = fluid_force;
  s.fluid_source = fluid_source;
  s.solid_velocity_bc = solid_velocity;
  s.pressure_bc = pressure;
  return s;
}

InitialData ExactSolution::initial_data(double t) const {
  InitialData d;
  d.stress = [f = stress, t](const Point2& x) { return f(x, t); };
  d.stress_divergence = [f = stress_divergence, t](const Point2& x) { return f(x, t); };
  d.solid_velocity = [f = solid_velocity, t](const Point2& x) { return f(x, t); };
  d.fluid_velocity = [f = fluid_velocity, t](const Point2& x) { return f(x, t); };
  d.fluid_divergence = [f = fluid_divergence, t](const Point2& x) { return f(x, t); };
  d.pressure = [f = pressure, t](const Point2& x) { return f(x, t); };
  return d;
}

MaterialParams example1_material(double young, double poisson) {
  return make_material("example1", isotropic_stiffness(young, poisson), 1.0, 1.0, 1.0, 1.0,
                       Vector2d(2.0, 2.0), 1.0, Vector2d(1.0, 1.0));
}

namespace {

constexpr double kPi = std::numbers::pi;

// Spatial factors of the benchmark. Solid displacement is
// (s(x) s(y), q(x) q(y)) * sin(pi t), pressure w(x) s(y)^2 * (2 + cos(pi t)).
struct Ex1Space {
  double sx, sy, cx, cy;  // sin/cos(pi x), sin/cos(pi y)
  double qx, qy, dqx, dqy;  // x(x-1), y(y-1) and derivatives
  double w, dw;             // x(1-x) and derivative

  explicit Ex1Space(const Point2& p)
      : sx(std::sin(kPi * p.x())),
        sy(std::sin(kPi * p.y())),
        cx(std::cos(kPi * p.x())),
        cy(std::cos(kPi * p.y())),
        qx(p.x() * (p.x() - 1.0)),
        qy(p.y() * (p.y() - 1.0)),
        dqx(2.0 * p.x() - 1.0),
        dqy(2.0 * p.y() - 1.0),
        w(p.x() * (1.0 - p.x())),
        dw(1.0 - 2.0 * p.x()) {}

  Vector2d u() const { return {sx * sy, qx * qy}; }
  // Engineering strain of u and its x, y derivatives.
  Vector3d strain() const { return {kPi * cx * sy, qx * dqy, kPi * sx * cy + dqx * qy}; }
  Vector3d strain_x() const {
    return {-kPi * kPi * sx * sy, dqx * dqy, kPi * kPi * cx * cy + 2.0 * qy};
  }
  Vector3d strain_y() const {
    return {kPi * kPi * cx * cy, 2.0 * qx, -kPi * kPi * sx * sy + dqx * dqy};
  }
  double div_u() const { return kPi * cx * sy + qx * dqy; }
  double p() const { return w * sy * sy; }
  Vector2d grad_p() const { return {dw * sy * sy, kPi * w * 2.0 * sy * cy}; }
  double lap_p() const { return -2.0 * sy * sy + 2.0 * kPi * kPi * w * (cy * cy - sy * sy); }
};

// Time factors: displacement, its first and second derivatives; pressure and
// its first derivative.
struct Ex1Time {
  double s, ds, dds, tp, dtp;
  explicit Ex1Time(double t)
      : s(std::sin(kPi * t)),
        ds(kPi * std::cos(kPi * t)),
        dds(-kPi * kPi * std::sin(kPi * t)),
        tp(2.0 + std::cos(kPi * t)),
        dtp(-kPi * std::sin(kPi * t)) {}
};

}  // namespace

ExactSolution example1_solution(double young, double poisson) {
  ExactSolution ex;
  ex.material = example1_material(young, poisson);
  const MaterialParams m = ex.material;
  const Vector3d I = voigt_identity();

  ex.displacement = [](const Point2& x, double t) {
    return Vector2d(Ex1Space(x).u() * Ex1Time(t).s);
  };
  ex.solid_velocity = [](const Point2& x, double t) {
    return Vector2d(Ex1Space(x).u() * Ex1Time(t).ds);
  };
  ex.solid_acceleration = [](const Point2& x, double t) {
    return Vector2d(Ex1Space(x).u() * Ex1Time(t).dds);
  };
  ex.solid_strain_rate = [](const Point2& x, double t) {
    return Vector3d(Ex1Space(x).strain() * Ex1Time(t).ds);
  };
  ex.solid_divergence = [](const Point2& x, double t) {
    return Ex1Space(x).div_u() * Ex1Time(t).ds;
  };

  ex.pressure = [](const Point2& x, double t) { return Ex1Space(x).p() * Ex1Time(t).tp; };
  ex.pressure_rate = [](const Point2& x, double t) {
    return Ex1Space(x).p() * Ex1Time(t).dtp;
  };
  ex.pressure_gradient = [](const Point2& x, double t) {
    return Vector2d(Ex1Space(x).grad_p() * Ex1Time(t).tp);
  };

  ex.stress = [m, I](const Point2& x, double t) {
    const Ex1Space sp(x);
    const Ex1Time tm(t);
    return Vector3d(m.stiffness * sp.strain() * tm.s - m.alpha * sp.p() * tm.tp * I);
  };
  ex.stress_rate = [m, I](const Point2& x, double t) {
    const Ex1Space sp(x);
    const Ex1Time tm(t);
    return Vector3d(m.stiffness * sp.strain() * tm.ds - m.alpha * sp.p() * tm.dtp * I);
  };
  ex.stress_divergence = [m, I](const Point2& x, double t) {
    const Ex1Space sp(x);
    const Ex1Time tm(t);
    const Vector2d gp = sp.grad_p() * tm.tp;
    const Vector3d sx = m.stiffness * sp.strain_x() * tm.s - m.alpha * gp.x() * I;
    const Vector3d sy = m.stiffness * sp.strain_y() * tm.s - m.alpha * gp.y() * I;
    return Vector2d(sx[0] + sy[2], sx[2] + sy[1]);
  };

  ex.fluid_velocity = [](const Point2& x, double t) {
    return Vector2d(-Ex1Space(x).grad_p() * Ex1Time(t).tp);
  };
  ex.fluid_velocity_rate = [](const Point2& x, double t) {
    return Vector2d(-Ex1Space(x).grad_p() * Ex1Time(t).dtp);
  };
  ex.fluid_divergence = [](const Point2& x, double t) {
    return -Ex1Space(x).lap_p() * Ex1Time(t).tp;
  };

  ex.body_force = [m, ex](const Point2& x, double t) {
    return Vector2d(m.rho11 * ex.solid_acceleration(x, t) +
                    m.rho12 * ex.fluid_velocity_rate(x, t) - ex.stress_divergence(x, t));
  };
  ex.fluid_force = [m, ex](const Point2& x, double t) {
    return Vector2d(m.rho12 * ex.solid_acceleration(x, t) +
                    m.rho22 * ex.fluid_velocity_rate(x, t) +
                    m.drag * ex.fluid_velocity(x, t) + ex.pressure_gradient(x, t));
  };
  ex.fluid_source = [m, ex](const Point2& x, double t) {
    return m.s0 * ex.pressure_rate(x, t) + ex.fluid_divergence(x, t) +
           m.alpha * ex.solid_divergence(x, t);
  };
  return ex;
}

double PdeResidual::max_abs() const {
  return std::max({constitutive.cwiseAbs().maxCoeff(), solid_momentum.cwiseAbs().maxCoeff(),
                   fluid_momentum.cwiseAbs().maxCoeff(), std::abs(mass)});
}

PdeResidual pde_residual(const ExactSolution& ex, const Point2& x, double t) {
  const MaterialParams& m = ex.material;
  const Vector3d I = voigt_identity();
  const Vector3d rate = m.compliance * (ex.stress_rate(x, t) + m.alpha * ex.pressure_rate(x, t) * I);
  const Vector2d a = ex.solid_acceleration(x, t);
  const Vector2d vf_dot = ex.fluid_velocity_rate(x, t);
  PdeResidual r;
  r.constitutive = rate - ex.solid_strain_rate(x, t);
  r.solid_momentum =
      m.rho11 * a + m.rho12 * vf_dot - ex.stress_divergence(x, t) - ex.body_force(x, t);
  r.fluid_momentum = m.rho12 * a + m.rho22 * vf_dot + m.drag * ex.fluid_velocity(x, t) +
                     ex.pressure_gradient(x, t) - ex.fluid_force(x, t);
  r.mass = m.s0 * ex.pressure_rate(x, t) + ex.fluid_divergence(x, t) + m.alpha * I.dot(rate) -
           ex.fluid_source(x, t);
  return r;
}

std::string_view field_name(Field f) {
  switch (f) {
    case Field::Stress: return "sigma";
    case Field::SolidVelocity: return "vs";
    case Field::FluidVelocity: return "vf";
    case Field::Pressure: return "p";
  }
  return "?";
}

Field parse_field(std::string_view name) {
  for (Field f : kAllFields) {
    if (field_name(f) == name) return f;
  }
  fail(ErrorKind::InvalidInput, "unknown field '" + std::string(name) +
                                    "' (expected sigma, vs, vf or p)");
}

namespace {

// Squared pointwise norm of one field of the difference between discrete
// values and a reference.
double field_norm2(Field f, const PointValues& v) {
  switch (f) {
    case Field::Stress:
      return v.stress[0] * v.stress[0] + v.stress[1] * v.stress[1] +
             2.0 * v.stress[2] * v.stress[2];
    case Field::SolidVelocity: return v.solid.squaredNorm();
    case Field::FluidVelocity: return v.fluid.squaredNorm();
    case Field::Pressure: return v.pressure * v.pressure;
  }
  return 0.0;
}

void check_state(const Discretization& disc, const State& s) {
  const int ni = disc.layout().interior_size();
  if (s.block != ni || s.interior.size() != static_cast<Eigen::Index>(ni) * disc.num_elements() ||
      s.trace.size() != disc.dofs().size()) {
    fail(ErrorKind::InvalidInput, "state does not match the discretization");
  }
}

// Sum over elements and points of weight * fn(x, values).
template <typename Fn>
double integrate_state(const Discretization& disc, const State& s, const QuadRule& rule,
                       const MatrixXd& values, Fn fn) {
  double total = 0.0;
  for (int e = 0; e < disc.num_elements(); ++e) {
    const AffineMap map = affine_map(disc.mesh().element_vertices(e));
    const auto u = s.element(e);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const PointValues pv =
          evaluate_interior(disc.layout(), values.row(q).transpose(), u);
      total += rule.weights[q] * map.det * fn(e, map.to_physical(rule.points[q]), pv);
    }
  }
  return total;
}

}  // namespace

double l2_error(const Discretization& disc, const State& state, const ExactSolution& exact,
                Field field, double t, int order) {
  check_state(disc, state);
  const int k = disc.degree();
  if (order < 0) order = 2 * k + 6;
  if (order < 2 * (k + 2)) {
    fail(ErrorKind::InvalidInput, "error quadrature must be exact to degree 2(k+2)");
  }
  const QuadRule rule = quadrature(Domain::Triangle, order);
  const MatrixXd values = disc.reference().basis().tabulate(rule.points).values;
  const double sum = integrate_state(
      disc, state, rule, values, [&](int, const Point2& x, PointValues v) {
        switch (field) {
          case Field::Stress: v.stress -= exact.stress(x, t); break;
          case Field::SolidVelocity: v.solid -= exact.solid_velocity(x, t); break;
          case Field::FluidVelocity: v.fluid -= exact.fluid_velocity(x, t); break;
          case Field::Pressure: v.pressure -= exact.pressure(x, t); break;
        }
        return field_norm2(field, v);
      });
  return std::sqrt(std::max(sum, 0.0));
}

double l2_norm(const Discretization& disc, const State& state, Field field) {
  check_state(disc, state);
  const QuadRule& rule = disc.reference().volume_rule();
  const double sum =
      integrate_state(disc, state, rule, disc.reference().volume_table().values,
                      [&](int, const Point2&, const PointValues& v) { return field_norm2(field, v); });
  return std::sqrt(std::max(sum, 0.0));
}

std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& hs) {
  if (errors.size() != hs.size() || errors.size() < 2) {
    fail(ErrorKind::InvalidInput, "eoc needs at least two matching error/h pairs");
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!(errors[i] > 0.0) || !(hs[i] > 0.0)) {
      fail(ErrorKind::InvalidInput, "eoc needs positive errors and mesh sizes");
    }
  }
  std::vector<double> out;
  for (std::size_t i = 1; i < errors.size(); ++i) {
    out.push_back(std::log(errors[i] / errors[i - 1]) / std::log(hs[i] / hs[i - 1]));
  }
  return out;
}

double fitted_slope(const std::vector<double>& errors, const std::vector<double>& hs,
                    int count) {
  if (errors.size() != hs.size() || count < 2 || static_cast<std::size_t>(count) > errors.size()) {
    fail(ErrorKind::InvalidInput, "fitted_slope needs at least `count` >= 2 pairs");
  }
  const std::size_t first = errors.size() - count;
  double mx = 0, my = 0;
  for (std::size_t i = first; i < errors.size(); ++i) {
    if (!(errors[i] > 0.0) || !(hs[i] > 0.0)) {
      fail(ErrorKind::InvalidInput, "fitted_slope needs positive errors and mesh sizes");
    }
    mx += std::log(hs[i]);
    my += std::log(errors[i]);
  }
  mx /= count;
  my /= count;
  double sxy = 0, sxx = 0;
  for (std::size_t i = first; i < errors.size(); ++i) {
    const double dx = std::log(hs[i]) - mx;
    sxy += dx * (std::log(errors[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

double default_time_step(double h, int degree, double t_final) {
  if (!(h > 0.0) || !(t_final > 0.0)) fail(ErrorKind::InvalidInput, "h and T must be positive");
  return make_time_grid(t_final, std::pow(h, 0.5 * (degree + 2))).dt;
}

double ErrorReport::asymptotic_rate(Field f, int count) const {
  return fitted_slope(error(f), hs, std::min<int>(count, static_cast<int>(hs.size())));
}

std::string ErrorReport::table() const {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-3s %-8s", "k", "h");
  os << buf;
  for (Field f : kAllFields) {
    std::snprintf(buf, sizeof buf, " | %9s %6s", std::string(field_name(f)).c_str(), "e.o.c.");
    os << buf;
  }
  os << '\n';
  for (std::size_t i = 0; i < hs.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%-3d 1/%-6d", degree, divisions.empty() ? 0 : divisions[i]);
    os << buf;
    for (Field f : kAllFields) {
      const auto& e = error(f);
      if (i == 0) {
        std::snprintf(buf, sizeof buf, " | %9.2e %6s", e[i], "-");
      } else {
        std::snprintf(buf, sizeof buf, " | %9.2e %6.2f", e[i],
                      std::log(e[i] / e[i - 1]) / std::log(hs[i] / hs[i - 1]));
      }
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

std::string ErrorReport::csv() const {
  std::ostringstream os;
  os << "k,n,h,dt";
  for (Field f : kAllFields) os << ",err_" << field_name(f) << ",eoc_" << field_name(f);
  os << '\n';
  char buf[64];
  for (std::size_t i = 0; i < hs.size(); ++i) {
    os << degree << ',' << (divisions.empty() ? 0 : divisions[i]);
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g", hs[i], dts.empty() ? 0.0 : dts[i]);
    os << buf;
    for (Field f : kAllFields) {
      const auto& e = error(f);
      std::snprintf(buf, sizeof buf, ",%.17g", e[i]);
      os << buf << ',';
      if (i > 0) {
        std::snprintf(buf, sizeof buf, "%.6f",
                      std::log(e[i] / e[i - 1]) / std::log(hs[i] / hs[i - 1]));
        os << buf;
      }
    }
    os << '\n';
  }
  return os.str();
}

BenchmarkRun run_benchmark(const ExactSolution& exact, int degree, int n,
                           const ConvergenceOptions& opt) {
  if (n < 1) fail(ErrorKind::InvalidInput, "mesh divisions must be positive");
  Mesh mesh = build_structured_rect(0.0, 1.0, 0.0, 1.0, n, n);
  Stabilization stab = stabilization_defaults(mesh, opt.c_s, opt.c_f);
  const int ne = mesh.num_elements();
  const Discretization disc(std::move(mesh), uniform_material(exact.material, ne), degree,
                            std::move(stab));
  const double h = 1.0 / n;
  const TimeGrid grid = make_time_grid(
      opt.t_final, opt.dt > 0.0 ? opt.dt : default_time_step(h, degree, opt.t_final));
  const InitialData init = exact.initial_data(0.0);
  State s = opt.compatible_init ? init_compatible(disc, init, 0.0)
                                : init_projection(disc, init, 0.0);
  const Stepper stepper(disc, grid.dt);
  const SourceSpec src = exact.sources();
  for (int i = 0; i < grid.steps; ++i) {
    s = stepper.advance(s, src);
    s.t = grid.time(i + 1);
  }
  BenchmarkRun run;
  run.dt = grid.dt;
  run.steps = grid.steps;
  for (Field f : kAllFields) {
    run.errors[static_cast<int>(f)] = l2_error(disc, s, exact, f, s.t);
  }
  run.final_state = std::move(s);
  return run;
}

ErrorReport convergence_study(const ExactSolution& exact, int degree,
                              const std::vector<int>& divisions,
                              const ConvergenceOptions& opt) {
  if (divisions.empty()) fail(ErrorKind::InvalidInput, "no mesh levels given");
  ErrorReport rep;
  rep.degree = degree;
  for (int n : divisions) {
    const BenchmarkRun run = run_benchmark(exact, degree, n, opt);
    rep.divisions.push_back(n);
    rep.hs.push_back(1.0 / n);
    rep.dts.push_back(run.dt);
    for (int f = 0; f < 4; ++f) rep.errors[f].push_back(run.errors[f]);
  }
  return rep;
}

double energy_norm2(const Discretization& disc, const State& state) {
  check_state(disc, state);
  const Vector3d I = voigt_identity();
  return integrate_state(
      disc, state, disc.reference().volume_rule(), disc.reference().volume_table().values,
      [&](int e, const Point2&, const PointValues& v) {
        const MaterialParams& m = disc.materials().at(e);
        const Vector3d tau = v.stress + m.alpha * v.pressure * I;
        return tau.dot(m.compliance * tau) + m.s0 * v.pressure * v.pressure +
               m.rho11 * v.solid.squaredNorm() + 2.0 * m.rho12 * v.solid.dot(v.fluid) +
               v.fluid.dot(m.rho22 * v.fluid);
      });
}

double dissipation2(const Discretization& disc, const State& state) {
  check_state(disc, state);
  double total = integrate_state(
      disc, state, disc.reference().volume_rule(), disc.reference().volume_table().values,
      [&](int e, const Point2&, const PointValues& v) {
        return v.fluid.dot(disc.materials().at(e).drag * v.fluid);
      });
  const ReferenceElement& ref = disc.reference();
  const LocalLayout& L = disc.layout();
  const QuadRule& er = ref.edge_rule();
  const Mesh& mesh = disc.mesh();
  for (int e = 0; e < disc.num_elements(); ++e) {
    const AffineMap map = affine_map(mesh.element_vertices(e));
    const auto u = state.element(e);
    const std::vector<int> gd = disc.element_dofs(e);
    for (int j = 0; j < 3; ++j) {
      const MatrixXd red = face_reduction(mesh, e, j, ref);
      const MatrixXd& mu = ref.edge_table(face_flipped(mesh, e, j));
      const MatrixXd& psi = ref.face_table(j);
      VectorXd jump_s[2], hat_p(L.ne);
      for (int c = 0; c < 2; ++c) {
        VectorXd hat(L.ne);
        for (int m = 0; m < L.ne; ++m) hat[m] = state.trace[gd[L.trace(j, c) + m]];
        jump_s[c] = red * u.segment(L.solid(c), L.nk1) - hat;
      }
      for (int m = 0; m < L.ne; ++m) hat_p[m] = state.trace[gd[L.trace(j, 2) + m]];
      const double ts = disc.stabilization().solid[e][j];
      const double tf = disc.stabilization().fluid[e][j];
      for (std::size_t q = 0; q < er.size(); ++q) {
        const double w = er.weights[q] * map.face_lengths[j];
        const double d0 = mu.row(q).dot(jump_s[0]);
        const double d1 = mu.row(q).dot(jump_s[1]);
        const double dp = psi.row(q).head(L.nk).dot(u.segment(L.pressure(), L.nk)) -
                          mu.row(q).dot(hat_p);
        total += w * (ts * (d0 * d0 + d1 * d1) + tf * dp * dp);
      }
    }
  }
  return total;
}

EnergyTracker::EnergyTracker(const Discretization& disc, const State& initial)
    : disc_(&disc), last_(initial) {
  samples_.push_back({initial.t, energy_norm2(disc, initial), 0.0});
}

void EnergyTracker::push(const State& next) {
  State mid = next;
  mid.interior = 0.5 * (last_.interior + next.interior);
  mid.trace = 0.5 * (last_.trace + next.trace);
  const double dt = next.t - last_.t;
  samples_.push_back({next.t, energy_norm2(*disc_, next),
                      samples_.back().y2 + dt * dissipation2(*disc_, mid)});
  last_ = next;
}

std::vector<EnergySample> energy_series(const Discretization& disc,
                                        const std::vector<State>& trajectory) {
  if (trajectory.empty()) return {};
  EnergyTracker tracker(disc, trajectory.front());
  for (std::size_t i = 1; i < trajectory.size(); ++i) tracker.push(trajectory[i]);
  return tracker.samples();
}

State monolithic_step(const Discretization& disc, double dt, const State& state,
                      const SourceSpec& src) {
  check_state(disc, state);
  const LocalLayout& L = disc.layout();
  const int ne = disc.num_elements(), ni = L.interior_size(), nb = L.trace_size();
  std::vector<ElementSystem> sys = element_systems(disc, dt);
  std::vector<std::vector<int>> dofs(ne);
  VectorXd ri(static_cast<Eigen::Index>(ni) * ne), rb(static_cast<Eigen::Index>(nb) * ne);
  const double tm = state.t + 0.5 * dt;
  VectorField f, ff;
  ScalarField g;
  if (src.body_force) f = [&](const Point2& x) { return src.body_force(x, tm); };
  if (src.fluid_force) ff = [&](const Point2& x) { return src.fluid_force(x, tm); };
  if (src.fluid_source) g = [&](const Point2& x) { return src.fluid_source(x, tm); };
  for (int e = 0; e < ne; ++e) {
    dofs[e] = disc.element_dofs(e);
    VectorXd lam(nb);
    for (int r = 0; r < nb; ++r) lam[r] = state.trace[dofs[e][r]];
    const VectorXd load = src.has_loads()
                              ? load_vector(disc.mesh(), e, disc.reference(), f, ff, g)
                              : VectorXd::Zero(ni);
    const auto [a, b] = cn_rhs(disc.blocks(e), dt, state.element(e), lam, load);
    ri.segment(static_cast<Eigen::Index>(e) * ni, ni) = a;
    rb.segment(static_cast<Eigen::Index>(e) * nb, nb) = b;
  }
  State next;
  next.t = state.t + dt;
  next.block = ni;
  next.trace = state.trace;
  apply_dirichlet(disc, src, next.t, next.trace);
  const MonolithicSystem ms =
      assemble_monolithic(sys, dofs, disc.dofs().size(), disc.dofs().essential);
  solve_monolithic(ms, sys, dofs, ri, rb, next.interior, next.trace);
  return next;
}

State random_state(const Discretization& disc, std::uint64_t seed) {
  State s = zero_state(disc);
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (auto& c : s.interior) c = U(gen);
  for (int g = 0; g < disc.dofs().size(); ++g) {
    if (!disc.dofs().essential[g]) s.trace[g] = U(gen);
  }
  return s;
}

namespace {

// Relative max-norm difference of one group of coefficients.
double group_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::abs(a[i] - b[i]));
    scale = std::max(scale, std::abs(b[i]));
  }
  if (diff == 0.0) return 0.0;
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace

double oracle_compare(const Discretization& disc, double dt, const State& start) {
  const Stepper stepper(disc, dt);
  const SourceSpec none;
  const State fast = stepper.advance(start, none);
  const State mono = monolithic_step(disc, dt, start, none);
  const LocalLayout& L = disc.layout();
  // Groups: stress, solid velocity, fluid velocity, pressure, solid trace,
  // pressure trace.
  std::array<std::vector<double>, 6> fa, mo;
  const std::array<std::pair<int, int>, 4> ranges{
      std::pair{L.stress(), 3 * L.nk}, std::pair{L.solid(), 2 * L.nk1},
      std::pair{L.fluid(), 2 * L.nk}, std::pair{L.pressure(), L.nk}};
  for (int e = 0; e < disc.num_elements(); ++e) {
    for (int g = 0; g < 4; ++g) {
      for (int i = 0; i < ranges[g].second; ++i) {
        fa[g].push_back(fast.element(e)[ranges[g].first + i]);
        mo[g].push_back(mono.element(e)[ranges[g].first + i]);
      }
    }
  }
  const DofMap& d = disc.dofs();
  for (int f = 0; f < d.num_faces; ++f) {
    for (int c = 0; c < 3; ++c) {
      for (int m = 0; m < d.ne(); ++m) {
        const int g = d.index(f, c, m);
        fa[c < 2 ? 4 : 5].push_back(fast.trace[g]);
        mo[c < 2 ? 4 : 5].push_back(mono.trace[g]);
      }
    }
  }
  double worst = 0.0;
  for (int g = 0; g < 6; ++g) worst = std::max(worst, group_difference(fa[g], mo[g]));
  return worst;
}

double oracle_compare(const Mesh& mesh, int degree, const MaterialParams& material, double dt,
                      std::uint64_t seed) {
  const Discretization disc(mesh, uniform_material(material, mesh.num_elements()), degree,
                            stabilization_defaults(mesh, 1.0, 1.0));
  return oracle_compare(disc, dt, random_state(disc, seed));
}

}  // namespace porohdg
