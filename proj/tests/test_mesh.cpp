// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "mesh.hpp"

namespace porohdg {
namespace {

void check_invariants(const Mesh& m, double domain_area) {
  double area = 0.0;
  for (int e = 0; e < m.num_elements(); ++e) {
    EXPECT_GT(m.area(e), 0.0);
    area += m.area(e);
  }
  EXPECT_NEAR(area, domain_area, 1e-12 * domain_area);
  std::map<std::pair<int, int>, int> count;
  for (const auto& t : m.triangles()) {
    for (int j = 0; j < 3; ++j) {
      int a = t[j], b = t[(j + 1) % 3];
      if (a > b) std::swap(a, b);
      ++count[{a, b}];
    }
  }
  EXPECT_EQ(static_cast<int>(count.size()), m.num_faces());
  for (const Face& f : m.faces()) {
    const int expected = f.is_boundary() ? 1 : 2;
    EXPECT_EQ((count[{f.vertices[0], f.vertices[1]}]), expected);
    EXPECT_NEAR(f.normal.norm(), 1.0, 1e-14);
    EXPECT_LT(f.vertices[0], f.vertices[1]);
    const Point2 c0 = m.centroid(f.elements[0]);
    const Point2 mid = 0.5 * (m.vertices()[f.vertices[0]] + m.vertices()[f.vertices[1]]);
    EXPECT_GT(f.normal.dot(mid - c0), 0.0);
    if (!f.is_boundary()) EXPECT_LT(f.elements[0], f.elements[1]);
  }
  // Euler relation for a simply connected domain.
  EXPECT_EQ(m.num_vertices() - m.num_faces() + m.num_elements(), 1);
  // No hanging vertex: no mesh vertex lies strictly inside any edge.
  std::set<int> used;
  for (const auto& t : m.triangles()) used.insert(t.begin(), t.end());
  EXPECT_EQ(static_cast<int>(used.size()), m.num_vertices());
  for (const Face& f : m.faces()) {
    const Point2& a = m.vertices()[f.vertices[0]];
    const Point2& b = m.vertices()[f.vertices[1]];
    for (int v : used) {
      if (v == f.vertices[0] || v == f.vertices[1]) continue;
      const Point2& p = m.vertices()[v];
      const double cross = (b - a).x() * (p - a).y() - (b - a).y() * (p - a).x();
      const double t = (p - a).dot(b - a) / (b - a).squaredNorm();
      EXPECT_FALSE(std::abs(cross) < 1e-12 && t > 1e-12 && t < 1 - 1e-12)
          << "vertex " << v << " hangs on face " << f.vertices[0] << '-' << f.vertices[1];
    }
  }
}

TEST(Mesh, StructuredCounts) {
  const Mesh m2 = build_structured_rect(0, 1, 0, 1, 2, 2);
  EXPECT_EQ(m2.num_elements(), 8);
  EXPECT_EQ(m2.num_vertices(), 9);
  EXPECT_EQ(m2.num_faces(), 16);
  const Mesh m1 = build_structured_rect(0, 1, 0, 1, 1, 1);
  EXPECT_EQ(m1.num_elements(), 2);
  EXPECT_EQ(m1.num_vertices(), 4);
  EXPECT_EQ(m1.num_faces(), 5);
  const Mesh m4 = build_structured_rect(0, 1, 0, 1, 4, 4);
  EXPECT_EQ(m4.num_elements(), 32);
  EXPECT_NEAR(mesh_size(m4), 0.25 * std::sqrt(2.0), 1e-15);
  check_invariants(m1, 1.0);
  check_invariants(m2, 1.0);
  check_invariants(build_structured_rect(-2, 3, 1, 2.5, 7, 3), 7.5);
}

TEST(Mesh, StructuredRejectsBadInput) {
  EXPECT_THROW(build_structured_rect(0, 1, 0, 1, 0, 1), Error);
  EXPECT_THROW(build_structured_rect(1, 0, 0, 1, 1, 1), Error);
}

TEST(Mesh, MeshSize) {
  EXPECT_NEAR(mesh_size(build_structured_rect(0, 1, 0, 1, 1, 1)), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(mesh_size(build_structured_rect(0, 1, 0, 1, 2, 2)), std::sqrt(2.0) / 2, 1e-15);
  const Mesh single = Mesh::from_triangles(
      {Point2(0, 0), Point2(1, 0), Point2(0, 1)}, {{0, 1, 2}},
      [](int, int, const Point2&, const Point2&) { return BoundaryTags{}; });
  EXPECT_NEAR(mesh_size(single), std::sqrt(2.0), 1e-15);
  EXPECT_THROW(mesh_size(Mesh{}), Error);
}

TEST(Mesh, BoundaryTagsBySide) {
  BoundarySpec spec;
  spec.fallback = {ElasticBc::Dirichlet, FlowBc::Pressure};
  spec.rules.push_back({Side::Top, {ElasticBc::Traction, FlowBc::Flux}});
  const Mesh m = build_structured_rect(0, 1, 0, 1, 3, 3, spec);
  int top = 0, other = 0;
  for (const Face& f : m.faces()) {
    if (!f.is_boundary()) continue;
    const double y = 0.5 * (m.vertices()[f.vertices[0]].y() + m.vertices()[f.vertices[1]].y());
    if (std::abs(y - 1.0) < 1e-12) {
      EXPECT_EQ(f.tags.elastic, ElasticBc::Traction);
      EXPECT_EQ(f.tags.flow, FlowBc::Flux);
      ++top;
    } else {
      EXPECT_EQ(f.tags.elastic, ElasticBc::Dirichlet);
      ++other;
    }
  }
  EXPECT_EQ(top, 3);
  EXPECT_EQ(other, 9);
}

TEST(Mesh, RejectsMissingDirichletOrPressure) {
  BoundarySpec spec;
  spec.fallback = {ElasticBc::Traction, FlowBc::Pressure};
  EXPECT_THROW(build_structured_rect(0, 1, 0, 1, 2, 2, spec), Error);
  spec.fallback = {ElasticBc::Dirichlet, FlowBc::Flux};
  EXPECT_THROW(build_structured_rect(0, 1, 0, 1, 2, 2, spec), Error);
}

TEST(Mesh, RejectsClockwiseAndOvershared) {
  auto tag = [](int, int, const Point2&, const Point2&) { return BoundaryTags{}; };
  EXPECT_THROW(Mesh::from_triangles({Point2(0, 0), Point2(1, 0), Point2(0, 1)}, {{0, 2, 1}}, tag),
               Error);
  EXPECT_THROW(Mesh::from_triangles({Point2(0, 0), Point2(1, 0), Point2(0, 1), Point2(1, 1),
                                     Point2(0.5, -1)},
                                    {{0, 1, 2}, {1, 3, 2}, {0, 4, 1}, {0, 1, 3}}, tag),
               Error);
}

TEST(Mesh, RefineIdentityCases) {
  const Mesh m = build_structured_rect(0, 1, 0, 1, 1, 1);
  const Mesh same = refine_near_point(m, Point2(0.5, 0.5), 1.0, 0);
  EXPECT_EQ(same.num_elements(), 2);
  const Mesh far = refine_near_point(m, Point2(10, 10), 0.5, 3);
  EXPECT_EQ(far.num_elements(), 2);
  EXPECT_EQ(far.num_vertices(), 4);
}

TEST(Mesh, RefineEveryElementOnce) {
  const Mesh m = build_structured_rect(0, 1, 0, 1, 1, 1);
  const Mesh r = refine_near_point(m, Point2(0.5, 0.5), 1.0, 1);
  EXPECT_EQ(r.num_elements(), 8);
  check_invariants(r, 1.0);
  EXPECT_NEAR(mesh_size(r), std::sqrt(2.0) / 2, 1e-15);
}

TEST(Mesh, LocalRefinementConforms) {
  BoundarySpec spec;
  spec.rules.push_back({Side::Left, {ElasticBc::Traction, FlowBc::Flux}});
  const Mesh m = build_structured_rect(-1, 1, -1, 1, 6, 6, spec);
  for (int levels = 1; levels <= 3; ++levels) {
    const Mesh r = refine_near_point(m, Point2(0.1, -0.05), 0.3, levels);
    check_invariants(r, 4.0);
    EXPECT_GT(r.num_elements(), m.num_elements());
    double hmin = 1e9;
    for (int e = 0; e < r.num_elements(); ++e) hmin = std::min(hmin, r.h(e));
    EXPECT_NEAR(hmin, mesh_size(m) / std::pow(2.0, levels) * 1.0, 1e-12);
    for (const Face& f : r.faces()) {
      if (!f.is_boundary()) continue;
      const double x = 0.5 * (r.vertices()[f.vertices[0]].x() + r.vertices()[f.vertices[1]].x());
      EXPECT_EQ(f.tags.elastic == ElasticBc::Traction, std::abs(x + 1) < 1e-12);
    }
  }
  // Boundary refinement keeps tags on split edges.
  const Mesh rb = refine_near_point(m, Point2(-1, 0), 0.2, 2);
  check_invariants(rb, 4.0);
}

TEST(Mesh, FileRoundTrip) {
  BoundarySpec spec;
  spec.rules.push_back({Side::Bottom, {ElasticBc::Traction, FlowBc::Flux}});
  const Mesh m = build_structured_rect(0, 2, 0, 1, 3, 2, spec);
  std::stringstream ss;
  write_mesh(ss, m);
  const Mesh r = read_mesh(ss);
  EXPECT_EQ(r.num_elements(), m.num_elements());
  EXPECT_EQ(r.num_faces(), m.num_faces());
  for (int f = 0; f < m.num_faces(); ++f) {
    EXPECT_EQ(r.faces()[f].vertices, m.faces()[f].vertices);
    EXPECT_EQ(r.faces()[f].tags, m.faces()[f].tags);
  }
}

TEST(Mesh, ReaderOrientsAndValidates) {
  std::istringstream in(
      "poro-mesh v1\n4\n0 0\n1 0\n1 1\n0 1\n2\n0 2 1\n0 2 3\n"
      "face 0 1 d p\nface 1 2 d p\nface 2 3 t f\nface 0 3 d p\n");
  const Mesh m = read_mesh(in);
  EXPECT_EQ(m.num_elements(), 2);
  check_invariants(m, 1.0);
  std::istringstream bad("poro-mesh v2\n");
  EXPECT_THROW(read_mesh(bad), Error);
  std::istringstream missing("poro-mesh v1\n3\n0 0\n1 0\n0 1\n1\n0 1 2\nface 0 1 d p\n");
  EXPECT_THROW(read_mesh(missing), Error);
}

}  // namespace
}  // namespace porohdg
