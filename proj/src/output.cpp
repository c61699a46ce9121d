// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#include "output.hpp"

#include <cstdio>
#include <fstream>
#include <memory>

#include "error.hpp"

namespace porohdg {

const std::array<std::string, 8>& vtk_field_names() {
  static const std::array<std::string, 8> n{"p", "vs1", "vs2", "vf1", "vf2", "sxx", "syy", "sxy"};
  return n;
}

Eigen::MatrixXd vertex_fields(const Discretization& disc, const State& state) {
  const Mesh& mesh = disc.mesh();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(mesh.num_vertices(), 8);
  Eigen::VectorXd count = Eigen::VectorXd::Zero(mesh.num_vertices());
  const SimplexBasis& basis = disc.reference().basis();
  std::array<Eigen::VectorXd, 3> phi;
  for (int i = 0; i < 3; ++i) {
    phi[i].resize(basis.size());
    basis.evaluate(reference_vertices()[i], phi[i]);
  }
  for (int e = 0; e < disc.num_elements(); ++e) {
    const auto& tri = mesh.triangles()[e];
    for (int i = 0; i < 3; ++i) {
      const PointValues v = evaluate_interior(disc.layout(), phi[i], state.element(e));
      Eigen::Matrix<double, 1, 8> row;
      row << v.pressure, v.solid[0], v.solid[1], v.fluid[0], v.fluid[1], v.stress[0],
          v.stress[1], v.stress[2];
      sum.row(tri[i]) += row;
      count[tri[i]] += 1.0;
    }
  }
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (count[v] > 0.0) sum.row(v) /= count[v];
  }
  return sum;
}

void write_vtk(const Discretization& disc, const State& state, const std::string& path) {
  std::unique_ptr<FILE, int (*)(FILE*)> f(std::fopen(path.c_str(), "w"), &std::fclose);
  if (!f) fail(ErrorKind::Io, "cannot write '" + path + "'");
  const Mesh& mesh = disc.mesh();
  const Eigen::MatrixXd values = vertex_fields(disc, state);
  FILE* o = f.get();
  std::fprintf(o, "# vtk DataFile Version 3.0\nporohdg t=%.9g\nASCII\nDATASET UNSTRUCTURED_GRID\n",
               state.t);
  std::fprintf(o, "POINTS %d double\n", mesh.num_vertices());
  for (const Point2& p : mesh.vertices()) std::fprintf(o, "%.9g %.9g 0\n", p.x(), p.y());
  std::fprintf(o, "CELLS %d %d\n", mesh.num_elements(), 4 * mesh.num_elements());
  for (const auto& t : mesh.triangles()) std::fprintf(o, "3 %d %d %d\n", t[0], t[1], t[2]);
  std::fprintf(o, "CELL_TYPES %d\n", mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) std::fprintf(o, "5\n");
  std::fprintf(o, "POINT_DATA %d\n", mesh.num_vertices());
  for (int c = 0; c < 8; ++c) {
    std::fprintf(o, "SCALARS %s double 1\nLOOKUP_TABLE default\n", vtk_field_names()[c].c_str());
    for (int v = 0; v < mesh.num_vertices(); ++v) std::fprintf(o, "%.9g\n", values(v, c));
  }
  if (std::ferror(o)) fail(ErrorKind::Io, "write error on '" + path + "'");
}

VtkData read_vtk(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
  auto bad = [&](const std::string& what) -> void {
    fail(ErrorKind::Io, "malformed VTK file '" + path + "': " + what);
  };
  std::string line;
  for (int i = 0; i < 4; ++i) {
    if (!std::getline(in, line)) bad("short header");
  }
  if (line != "DATASET UNSTRUCTURED_GRID") bad("not an unstructured grid");
  VtkData d;
  std::string word, type;
  int n = 0, total = 0;
  if (!(in >> word >> n >> type) || word != "POINTS") bad("missing POINTS");
  d.points.resize(n);
  for (auto& p : d.points) {
    double z;
    if (!(in >> p.x() >> p.y() >> z)) bad("truncated POINTS");
  }
  if (!(in >> word >> n >> total) || word != "CELLS" || total != 4 * n) bad("missing CELLS");
  d.cells.resize(n);
  for (auto& c : d.cells) {
    int three;
    if (!(in >> three >> c[0] >> c[1] >> c[2]) || three != 3) bad("non-triangle cell");
  }
  if (!(in >> word >> n) || word != "CELL_TYPES") bad("missing CELL_TYPES");
  for (int i = 0; i < n; ++i) {
    int t;
    if (!(in >> t) || t != 5) bad("unexpected cell type");
  }
  if (!(in >> word >> n) || word != "POINT_DATA" || n != static_cast<int>(d.points.size())) {
    bad("missing POINT_DATA");
  }
  std::string name, comps, lut, table;
  while (in >> word) {
    if (word != "SCALARS" || !(in >> name >> type >> comps >> lut >> table)) bad("bad SCALARS");
    std::vector<double> v(n);
    for (double& x : v) {
      if (!(in >> x)) bad("truncated field " + name);
    }
    d.names.push_back(name);
    d.fields.push_back(std::move(v));
  }
  return d;
}

}  // namespace porohdg
