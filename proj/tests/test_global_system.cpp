// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <random>
#include <set>

#include <gtest/gtest.h>
#include <unsupported/Eigen/SparseExtra>

#include "global_system.hpp"

namespace porohdg {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

BoundarySpec mixed_spec() {
  BoundarySpec spec;
  spec.fallback = {ElasticBc::Dirichlet, FlowBc::Pressure};
  spec.rules.push_back({Side::Top, {ElasticBc::Traction, FlowBc::Flux}});
  spec.rules.push_back({Side::Left, {ElasticBc::Dirichlet, FlowBc::Flux}});
  return spec;
}

struct Problem {
  Mesh mesh;
  DofMap map;
  std::vector<ElementSystem> elements;
  std::vector<std::vector<int>> dofs;
};

Problem make_problem(const Mesh& mesh, int k, const MaterialParams& m, double dt) {
  Problem p{mesh, build_dofmap(mesh, k), {}, {}};
  const ReferenceElement ref(k);
  const Stabilization stab = stabilization_defaults(mesh, 1, 1);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    p.elements.push_back(cn_element_system(local_matrices(mesh, e, m, ref, stab), dt));
    p.dofs.push_back(p.map.element_dofs(mesh, e));
  }
  return p;
}

MaterialParams unit_material() {
  return make_material("ex1", isotropic_stiffness(3.0, 0.3), 1, 1, 1, 1, {2, 2}, 1, {1, 1});
}

VectorXd random_vector(Eigen::Index n, std::mt19937& gen) {
  std::uniform_real_distribution<double> U(-1, 1);
  VectorXd v(n);
  for (auto& c : v) c = U(gen);
  return v;
}

// Max relative residual of the uncondensed equations.
double residual(const Problem& p, const VectorXd& ri, const VectorXd& rb, const VectorXd& u,
                const VectorXd& lam) {
  const int ni = p.elements[0].ii.rows(), nb = p.elements[0].bb.rows();
  double worst = 0.0;
  VectorXd trace_res = VectorXd::Zero(p.map.size()), trace_scale = VectorXd::Zero(p.map.size());
  for (std::size_t e = 0; e < p.elements.size(); ++e) {
    const ElementSystem& s = p.elements[e];
    VectorXd l(nb);
    for (int b = 0; b < nb; ++b) l[b] = lam[p.dofs[e][b]];
    const VectorXd ue = u.segment(e * ni, ni);
    const VectorXd r1 = s.ii * ue + s.ib * l - ri.segment(e * ni, ni);
    worst = std::max(worst, r1.norm() / (ri.segment(e * ni, ni).norm() + 1e-300));
    const VectorXd r2 = s.bi * ue + s.bb * l - rb.segment(e * nb, nb);
    for (int b = 0; b < nb; ++b) {
      trace_res[p.dofs[e][b]] += r2[b];
      trace_scale[p.dofs[e][b]] += std::abs(rb[e * nb + b]);
    }
  }
  for (int g = 0; g < p.map.size(); ++g) {
    if (!p.map.essential[g]) {
      worst = std::max(worst, std::abs(trace_res[g]) / (trace_scale.maxCoeff() + 1e-300));
    }
  }
  return worst;
}

TEST(GlobalSystem, DofMapCounts) {
  const Mesh m = build_structured_rect(0, 1, 0, 1, 2, 2);
  const DofMap d1 = build_dofmap(m, 1);
  EXPECT_EQ(d1.size(), 96);
  EXPECT_EQ(d1.face_size, 6);
  EXPECT_EQ(build_dofmap(m, 2).face_size, 9);
  EXPECT_EQ(build_dofmap(m, 4).face_size, 15);
  // Default tags: every boundary trace is essential.
  EXPECT_EQ(d1.num_free, 8 * 6);
  EXPECT_THROW(build_dofmap(m, 0), Error);

  const Mesh mm = build_structured_rect(0, 1, 0, 1, 2, 2, mixed_spec());
  const DofMap d = build_dofmap(mm, 1);
  // Top: both free; left: pressure free.
  EXPECT_EQ(d.num_free, 8 * 6 + 2 * 6 + 2 * 2);
  int seen = 0;
  for (int f = 0; f < mm.num_faces(); ++f) {
    for (int c = 0; c < 3; ++c) {
      for (int m2 = 0; m2 < 2; ++m2) {
        EXPECT_EQ(d.index(f, c, m2), seen++);
      }
    }
  }
  const std::vector<int> ed = d.element_dofs(mm, 3);
  ASSERT_EQ(ed.size(), 18u);
  EXPECT_EQ(ed[0], mm.element_face(3, 0) * 6);
  EXPECT_EQ(ed[6], mm.element_face(3, 1) * 6);
}

TEST(GlobalSystem, ReductionTable) {
  const double expect[] = {0.625, 0.71875, 0.775, 0.8125};
  const int volume[] = {24, 48, 80, 120};
  for (int k = 1; k <= 4; ++k) {
    const DofCounts c = dof_counts(k);
    EXPECT_EQ(c.trace_per_face, 3 * (k + 1));
    EXPECT_EQ(c.volume_per_element, volume[k - 1]);
    EXPECT_DOUBLE_EQ(c.reduction, expect[k - 1]);
  }
}

TEST(GlobalSystem, CondensedMatchesMonolithic) {
  std::mt19937 gen(42);
  for (int n : {2, 4, 8}) {
    const Mesh mesh = build_structured_rect(0, 1, 0, 1, n, n, mixed_spec());
    for (int k = 1; k <= 3; ++k) {
      const Problem p = make_problem(mesh, k, unit_material(), 0.05);
      const int ni = p.elements[0].ii.rows(), nb = p.elements[0].bb.rows();
      const VectorXd ri = random_vector(static_cast<Eigen::Index>(ni) * mesh.num_elements(), gen);
      const VectorXd rb = random_vector(static_cast<Eigen::Index>(nb) * mesh.num_elements(), gen);
      VectorXd lam = random_vector(p.map.size(), gen);  // essential values
      VectorXd lam_mono = lam;
      const CondensedSystem cs(p.elements, p.dofs, p.map.size(), p.map.essential);
      EXPECT_EQ(cs.num_free(), p.map.num_free);
      VectorXd u, u_mono;
      cs.solve(ri, rb, u, lam);
      const MonolithicSystem ms = assemble_monolithic(p.elements, p.dofs, p.map.size(),
                                                      p.map.essential);
      EXPECT_EQ(ms.matrix.rows(), ni * mesh.num_elements() + p.map.num_free);
      if (n == 2 && k == 1) EXPECT_EQ(ms.interior_size, 240);
      solve_monolithic(ms, p.elements, p.dofs, ri, rb, u_mono, lam_mono);
      EXPECT_LT((u - u_mono).norm() / u_mono.norm(), 1e-9) << n << ' ' << k;
      EXPECT_LT((lam - lam_mono).norm() / lam_mono.norm(), 1e-9) << n << ' ' << k;
      EXPECT_LT(residual(p, ri, rb, u, lam), 1e-10) << n << ' ' << k;
    }
  }
}

TEST(GlobalSystem, PhysicalUnitsScaling) {
  std::mt19937 gen(9);
  BoundarySpec spec = mixed_spec();
  const Mesh mesh = build_structured_rect(0, 400, 0, 300, 4, 3, spec);
  const Problem p = make_problem(mesh, 2, *library_material("sandstone-iso"), 1e-4);
  const int ni = p.elements[0].ii.rows(), nb = p.elements[0].bb.rows();
  const VectorXd ri = random_vector(static_cast<Eigen::Index>(ni) * mesh.num_elements(), gen);
  const VectorXd rb = random_vector(static_cast<Eigen::Index>(nb) * mesh.num_elements(), gen);
  VectorXd lam = VectorXd::Zero(p.map.size()), lam_mono = lam, u, u_mono;
  const CondensedSystem cs(p.elements, p.dofs, p.map.size(), p.map.essential);
  cs.solve(ri, rb, u, lam);
  const MonolithicSystem ms =
      assemble_monolithic(p.elements, p.dofs, p.map.size(), p.map.essential);
  solve_monolithic(ms, p.elements, p.dofs, ri, rb, u_mono, lam_mono);
  EXPECT_LT((u - u_mono).norm() / u_mono.norm(), 1e-9);
  EXPECT_LT((lam - lam_mono).norm() / lam_mono.norm(), 1e-9);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const VectorXd x = random_vector(ni, gen);
    const VectorXd direct = p.elements[e].ii * x;
    EXPECT_LT((cs.apply_interior(e, x) - direct).norm(), 1e-12 * direct.norm());
  }
}

TEST(GlobalSystem, ZeroDataGivesZero) {
  const Mesh mesh = build_structured_rect(0, 1, 0, 1, 3, 3, mixed_spec());
  const Problem p = make_problem(mesh, 1, unit_material(), 0.1);
  const CondensedSystem cs(p.elements, p.dofs, p.map.size(), p.map.essential);
  VectorXd u, lam = VectorXd::Zero(p.map.size());
  cs.solve(VectorXd::Zero(30 * mesh.num_elements()), VectorXd::Zero(18 * mesh.num_elements()),
           u, lam);
  EXPECT_EQ(u.norm(), 0.0);
  EXPECT_EQ(lam.norm(), 0.0);
}

TEST(GlobalSystem, SingleElementAllEssential) {
  const Mesh mesh = Mesh::from_triangles(
      {Point2(0, 0), Point2(1, 0), Point2(0, 1)}, {{0, 1, 2}},
      [](int, int, const Point2&, const Point2&) { return BoundaryTags{}; });
  const Problem p = make_problem(mesh, 1, unit_material(), 0.1);
  const CondensedSystem cs(p.elements, p.dofs, p.map.size(), p.map.essential);
  EXPECT_EQ(cs.num_free(), 0);
  EXPECT_EQ(cs.matrix().rows(), 0);
  EXPECT_EQ(cs.factorization_count(), 0);
  std::mt19937 gen(1);
  const VectorXd ri = random_vector(30, gen), rb = random_vector(18, gen);
  VectorXd lam = random_vector(18, gen), u;
  const VectorXd lam0 = lam;
  cs.solve(ri, rb, u, lam);
  EXPECT_EQ(lam, lam0);
  const VectorXd direct = p.elements[0].ii.lu().solve(ri - p.elements[0].ib * lam0);
  EXPECT_LT((u - direct).norm(), 1e-12 * direct.norm());
}

TEST(GlobalSystem, FactorizesOnce) {
  const Mesh mesh = build_structured_rect(0, 1, 0, 1, 4, 4, mixed_spec());
  const Problem p = make_problem(mesh, 1, unit_material(), 0.01);
  const CondensedSystem cs(p.elements, p.dofs, p.map.size(), p.map.essential);
  std::mt19937 gen(4);
  VectorXd lam = VectorXd::Zero(p.map.size()), u;
  for (int step = 0; step < 10; ++step) {
    cs.solve(random_vector(30 * mesh.num_elements(), gen),
             random_vector(18 * mesh.num_elements(), gen), u, lam);
  }
  EXPECT_EQ(cs.factorization_count(), 1);
}

TEST(GlobalSystem, CouplingIsLocal) {
  const Mesh mesh = build_structured_rect(0, 1, 0, 1, 2, 2, mixed_spec());
  const Problem p = make_problem(mesh, 1, unit_material(), 0.1);
  const CondensedSystem cs(p.elements, p.dofs, p.map.size(), p.map.essential);
  std::vector<int> face_of(cs.num_free());
  for (int g = 0; g < p.map.size(); ++g) {
    if (p.map.free_index[g] >= 0) face_of[p.map.free_index[g]] = g / p.map.face_size;
  }
  std::set<std::pair<int, int>> neighbors;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        neighbors.insert({mesh.element_face(e, a), mesh.element_face(e, b)});
      }
    }
  }
  const SparseMatrix& a = cs.matrix();
  int nnz = 0;
  for (int c = 0; c < a.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) {
      EXPECT_TRUE(neighbors.count({face_of[it.row()], face_of[it.col()]}));
      ++nnz;
    }
  }
  EXPECT_GT(nnz, 0);
}

TEST(GlobalSystem, RejectsSingularInterior) {
  const Mesh mesh = build_structured_rect(0, 1, 0, 1, 1, 1, mixed_spec());
  Problem p = make_problem(mesh, 1, unit_material(), 0.1);
  p.elements[1].ii.row(3).setZero();
  p.elements[1].ii.col(3).setZero();
  try {
    CondensedSystem cs(p.elements, p.dofs, p.map.size(), p.map.essential);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Solver);
    EXPECT_NE(std::string(e.what()).find("element 1"), std::string::npos) << e.what();
  }
}

TEST(GlobalSystem, MatrixMarketExport) {
  const Mesh mesh = build_structured_rect(0, 1, 0, 1, 2, 2, mixed_spec());
  const Problem p = make_problem(mesh, 1, unit_material(), 0.1);
  const CondensedSystem cs(p.elements, p.dofs, p.map.size(), p.map.essential);
  const std::string path = ::testing::TempDir() + "porohdg_trace.mtx";
  write_matrix_market(cs.matrix(), path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  std::istringstream tokens(header);
  std::vector<std::string> words{std::istream_iterator<std::string>(tokens),
                                 std::istream_iterator<std::string>()};
  EXPECT_EQ(words, (std::vector<std::string>{"%%MatrixMarket", "matrix", "coordinate", "real",
                                             "general"}));
  SparseMatrix back;
  ASSERT_TRUE(Eigen::loadMarket(back, path));
  EXPECT_LT((MatrixXd(back) - MatrixXd(cs.matrix())).norm(),
            1e-12 * MatrixXd(cs.matrix()).norm());
  std::remove(path.c_str());
  EXPECT_THROW(write_matrix_market(cs.matrix(), "/nonexistent/dir/x.mtx"), Error);
}

TEST(GlobalSystem, BackendName) {
  const std::string name = sparse_backend_name();
  EXPECT_TRUE(name == "umfpack" || name == "eigen-sparselu");
}

}  // namespace
}  // namespace porohdg
