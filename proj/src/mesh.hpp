// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "fe_core.hpp"

namespace porohdg {

enum class ElasticBc { Traction, Dirichlet };  // Gamma_t / Gamma_d
enum class FlowBc { Flux, Pressure };          // Gamma_f / Gamma_p

struct BoundaryTags {
  ElasticBc elastic = ElasticBc::Dirichlet;
  FlowBc flow = FlowBc::Pressure;

  bool operator==(const BoundaryTags&) const = default;
};

enum class Side { Left, Right, Bottom, Top };

/// Boundary tag assignment by axis-aligned sides of a bounding box. Faces
/// not matched by any rule get `fallback`; later rules win.
struct BoundarySpec {
  struct Rule {
    Side side;
    BoundaryTags tags;
    bool operator==(const Rule&) const = default;
  };
  BoundaryTags fallback;
  std::vector<Rule> rules;

  bool operator==(const BoundarySpec&) const = default;
};

struct Face {
  std::array<int, 2> vertices{};          // ascending global vertex index
  std::array<int, 2> elements{-1, -1};    // elements[0] < elements[1]; -1 if boundary
  std::array<int, 2> local_index{-1, -1}; // local face number in each element
  Point2 normal;                          // unit, outward from elements[0]
  double length = 0.0;
  BoundaryTags tags;                      // meaningful on boundary faces only

  bool is_boundary() const { return elements[1] < 0; }
};

/// Called once per boundary face with its vertex ids and coordinates.
using BoundaryTagger =
    std::function<BoundaryTags(int a, int b, const Point2& pa, const Point2& pb)>;

/// Conforming triangulation with a face table. Immutable after construction.
class Mesh {
 public:
  Mesh() = default;

  /// Builds faces and validates: counterclockwise non-degenerate triangles,
  /// at most two elements per edge, Gamma_d and Gamma_p nonempty.
  static Mesh from_triangles(std::vector<Point2> vertices,
                             std::vector<std::array<int, 3>> triangles,
                             const BoundaryTagger& tagger);

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<Face>& faces() const { return faces_; }
  /// Global face id of local face j (opposite local vertex j) of element e.
  int element_face(int e, int j) const { return element_faces_[e][j]; }
  double h(int e) const { return h_[e]; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_elements() const { return static_cast<int>(triangles_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }

  std::array<Point2, 3> element_vertices(int e) const {
    const auto& t = triangles_[e];
    return {vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]};
  }
  Point2 centroid(int e) const;
  double area(int e) const;

 private:
  std::vector<Point2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<Face> faces_;
  std::vector<std::array<int, 3>> element_faces_;
  std::vector<double> h_;
};

/// Tagger for a rectangle [xmin,xmax]x[ymin,ymax] from side rules.
BoundaryTagger rectangle_tagger(const BoundarySpec& spec, double xmin,
                                double xmax, double ymin, double ymax);

/// nx*ny cells, each split along its lower-left to upper-right diagonal.
Mesh build_structured_rect(double xmin, double xmax, double ymin, double ymax,
                           int nx, int ny, const BoundarySpec& tags = {});

/// Red refinement of every element meeting the closed disk, `levels` times,
/// made conforming by a final green bisection closure.
Mesh refine_near_point(const Mesh& mesh, const Point2& center, double radius,
                       int levels);

/// max_K h_K. Throws InvalidInput on an empty mesh.
double mesh_size(const Mesh& mesh);

/// "poro-mesh v1" plain-text format.
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const Mesh& mesh);

}  // namespace porohdg
