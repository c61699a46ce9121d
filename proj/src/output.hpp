// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <vector>

#include "timestepper.hpp"

namespace porohdg {

/// Point field names in VTK output order.
const std::array<std::string, 8>& vtk_field_names();

/// Element polynomials sampled at the element vertices and averaged over
/// the elements sharing each vertex. Columns follow vtk_field_names().
Eigen::MatrixXd vertex_fields(const Discretization& disc, const State& state);

/// Legacy VTK ASCII unstructured grid with the vertex-averaged fields as
/// POINT_DATA scalars, printed with 9 significant digits.
void write_vtk(const Discretization& disc, const State& state, const std::string& path);

/// Minimal reader for files produced by write_vtk.
struct VtkData {
  std::vector<Point2> points;
  std::vector<std::array<int, 3>> cells;
  std::vector<std::string> names;
  std::vector<std::vector<double>> fields;
};
VtkData read_vtk(const std::string& path);

}  // namespace porohdg
