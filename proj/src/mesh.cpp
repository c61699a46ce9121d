// Copyright 2026 The porohdg Authors
// SPDX-License-Identifier: Apache-2.0

#include "mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace porohdg {

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

double signed_area(const Point2& a, const Point2& b, const Point2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) -
                (c.x() - a.x()) * (b.y() - a.y()));
}

double point_segment_distance(const Point2& p, const Point2& a, const Point2& b) {
  const Point2 d = b - a;
  const double t = std::clamp((p - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
  return (p - (a + t * d)).norm();
}

bool triangle_meets_disk(const std::array<Point2, 3>& v, const Point2& c,
                         double r) {
  const double a0 = signed_area(v[0], v[1], c);
  const double a1 = signed_area(v[1], v[2], c);
  const double a2 = signed_area(v[2], v[0], c);
  if (a0 >= 0 && a1 >= 0 && a2 >= 0) return true;
  for (int j = 0; j < 3; ++j) {
    if (point_segment_distance(c, v[j], v[(j + 1) % 3]) <= r) return true;
  }
  return false;
}

char elastic_letter(ElasticBc b) { return b == ElasticBc::Traction ? 't' : 'd'; }
char flow_letter(FlowBc b) { return b == FlowBc::Flux ? 'f' : 'p'; }

}  // namespace

Mesh Mesh::from_triangles(std::vector<Point2> vertices,
                          std::vector<std::array<int, 3>> triangles,
                          const BoundaryTagger& tagger) {
  Mesh m;
  m.vertices_ = std::move(vertices);
  m.triangles_ = std::move(triangles);
  const int nv = m.num_vertices();
  for (std::size_t e = 0; e < m.triangles_.size(); ++e) {
    const auto& t = m.triangles_[e];
    for (int i : t) {
      if (i < 0 || i >= nv) {
        fail(ErrorKind::InvalidInput,
             "triangle " + std::to_string(e) + " references missing vertex");
      }
    }
    const double a = signed_area(m.vertices_[t[0]], m.vertices_[t[1]],
                                 m.vertices_[t[2]]);
    if (!(a > 0.0)) {
      fail(ErrorKind::InvalidInput,
           "triangle " + std::to_string(e) +
               " is degenerate or not counterclockwise");
    }
  }

  std::map<EdgeKey, int> lookup;
  m.element_faces_.resize(m.triangles_.size());
  m.h_.resize(m.triangles_.size());
  for (int e = 0; e < m.num_elements(); ++e) {
    const auto& t = m.triangles_[e];
    const AffineMap map = affine_map(m.element_vertices(e));
    m.h_[e] = *std::max_element(map.face_lengths.begin(), map.face_lengths.end());
    for (int j = 0; j < 3; ++j) {
      const EdgeKey key = edge_key(t[(j + 1) % 3], t[(j + 2) % 3]);
      auto [it, inserted] = lookup.try_emplace(key, m.num_faces());
      if (inserted) {
        Face f;
        f.vertices = {key.first, key.second};
        f.elements = {e, -1};
        f.local_index = {j, -1};
        f.normal = map.normals[j];
        f.length = map.face_lengths[j];
        m.faces_.push_back(f);
      } else {
        Face& f = m.faces_[it->second];
        if (f.elements[1] >= 0) {
          fail(ErrorKind::InvalidInput,
               "edge shared by more than two triangles");
        }
        f.elements[1] = e;
        f.local_index[1] = j;
      }
      m.element_faces_[e][j] = it->second;
    }
  }

  bool has_d = false, has_p = false;
  for (Face& f : m.faces_) {
    if (!f.is_boundary()) continue;
    f.tags = tagger(f.vertices[0], f.vertices[1], m.vertices_[f.vertices[0]],
                    m.vertices_[f.vertices[1]]);
    has_d |= f.tags.elastic == ElasticBc::Dirichlet;
    has_p |= f.tags.flow == FlowBc::Pressure;
  }
  if (!has_d || !has_p) {
    fail(ErrorKind::InvalidInput,
         "boundary must contain both a solid-velocity Dirichlet part and a "
         "pressure part");
  }
  return m;
}

Point2 Mesh::centroid(int e) const {
  const auto v = element_vertices(e);
  return (v[0] + v[1] + v[2]) / 3.0;
}

double Mesh::area(int e) const {
  const auto v = element_vertices(e);
  return signed_area(v[0], v[1], v[2]);
}

BoundaryTagger rectangle_tagger(const BoundarySpec& spec, double xmin,
                                double xmax, double ymin, double ymax) {
  const double tol = 1e-10 * std::max(xmax - xmin, ymax - ymin);
  return [=](int, int, const Point2& a, const Point2& b) {
    const Point2 mid = 0.5 * (a + b);
    BoundaryTags tags = spec.fallback;
    for (const auto& rule : spec.rules) {
      bool on = false;
      switch (rule.side) {
        case Side::Left: on = std::abs(mid.x() - xmin) < tol; break;
        case Side::Right: on = std::abs(mid.x() - xmax) < tol; break;
        case Side::Bottom: on = std::abs(mid.y() - ymin) < tol; break;
        case Side::Top: on = std::abs(mid.y() - ymax) < tol; break;
      }
      if (on) tags = rule.tags;
    }
    return tags;
  };
}

Mesh build_structured_rect(double xmin, double xmax, double ymin, double ymax,
                           int nx, int ny, const BoundarySpec& tags) {
  if (nx < 1 || ny < 1 || !(xmax > xmin) || !(ymax > ymin)) {
    fail(ErrorKind::InvalidInput, "invalid rectangle extents or resolution");
  }
  std::vector<Point2> verts;
  verts.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      verts.emplace_back(xmin + (xmax - xmin) * i / nx,
                         ymin + (ymax - ymin) * j / ny);
    }
  }
  std::vector<std::array<int, 3>> tris;
  tris.reserve(static_cast<std::size_t>(2) * nx * ny);
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return Mesh::from_triangles(std::move(verts), std::move(tris),
                              rectangle_tagger(tags, xmin, xmax, ymin, ymax));
}

Mesh refine_near_point(const Mesh& mesh, const Point2& center, double radius,
                       int levels) {
  if (levels < 0) fail(ErrorKind::InvalidInput, "refinement levels must be >= 0");
  if (levels == 0) return mesh;

  std::vector<Point2> verts = mesh.vertices();
  std::vector<std::array<int, 3>> leaves = mesh.triangles();
  std::map<EdgeKey, BoundaryTags> boundary;
  for (const Face& f : mesh.faces()) {
    if (f.is_boundary()) boundary[edge_key(f.vertices[0], f.vertices[1])] = f.tags;
  }
  // Midpoints of every edge ever split. Leaves only ever come from red
  // refinement, so a leaf edge with a recorded midpoint is hanging.
  std::map<EdgeKey, int> midpoint;
  auto split = [&](int a, int b) {
    const EdgeKey key = edge_key(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int m = static_cast<int>(verts.size());
    verts.push_back(0.5 * (verts[a] + verts[b]));
    midpoint.emplace(key, m);
    if (auto bt = boundary.find(key); bt != boundary.end()) {
      const BoundaryTags tags = bt->second;
      boundary[edge_key(a, m)] = tags;
      boundary[edge_key(m, b)] = tags;
    }
    return m;
  };
  auto red = [&](const std::array<int, 3>& t,
                 std::vector<std::array<int, 3>>& out) {
    const int m01 = split(t[0], t[1]);
    const int m12 = split(t[1], t[2]);
    const int m20 = split(t[2], t[0]);
    out.push_back({t[0], m01, m20});
    out.push_back({m01, t[1], m12});
    out.push_back({m20, m12, t[2]});
    out.push_back({m01, m12, m20});
  };
  auto hanging = [&](int a, int b) { return midpoint.count(edge_key(a, b)) > 0; };
  auto doubly_hanging = [&](int a, int b) {
    auto it = midpoint.find(edge_key(a, b));
    if (it == midpoint.end()) return false;
    return hanging(a, it->second) || hanging(it->second, b);
  };

  for (int level = 0; level < levels; ++level) {
    std::vector<std::array<int, 3>> next;
    for (const auto& t : leaves) {
      const std::array<Point2, 3> v{verts[t[0]], verts[t[1]], verts[t[2]]};
      if (triangle_meets_disk(v, center, radius)) {
        red(t, next);
      } else {
        next.push_back(t);
      }
    }
    leaves = std::move(next);
    // Keep every leaf with at most one hanging edge carrying one midpoint.
    for (bool changed = true; changed;) {
      changed = false;
      std::vector<std::array<int, 3>> out;
      for (const auto& t : leaves) {
        int count = 0;
        bool deep = false;
        for (int j = 0; j < 3; ++j) {
          count += hanging(t[j], t[(j + 1) % 3]);
          deep |= doubly_hanging(t[j], t[(j + 1) % 3]);
        }
        if (count >= 2 || deep) {
          red(t, out);
          changed = true;
        } else {
          out.push_back(t);
        }
      }
      leaves = std::move(out);
    }
  }

  std::vector<std::array<int, 3>> tris;
  tris.reserve(leaves.size() + leaves.size() / 4);
  for (const auto& t : leaves) {
    int j = 0;
    for (; j < 3; ++j) {
      if (hanging(t[j], t[(j + 1) % 3])) break;
    }
    if (j == 3) {
      tris.push_back(t);
      continue;
    }
    const int a = t[j], b = t[(j + 1) % 3], c = t[(j + 2) % 3];
    const int m = midpoint.at(edge_key(a, b));
    tris.push_back({a, m, c});
    tris.push_back({m, b, c});
  }

  return Mesh::from_triangles(
      std::move(verts), std::move(tris),
      [&boundary](int a, int b, const Point2&, const Point2&) {
        auto it = boundary.find(edge_key(a, b));
        if (it == boundary.end()) {
          fail(ErrorKind::InvalidInput, "refined boundary edge without tags");
        }
        return it->second;
      });
}

double mesh_size(const Mesh& mesh) {
  if (mesh.num_elements() == 0) fail(ErrorKind::InvalidInput, "empty mesh");
  double h = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) h = std::max(h, mesh.h(e));
  return h;
}

Mesh read_mesh(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("poro-mesh v1", 0) != 0) {
    fail(ErrorKind::Io, "missing 'poro-mesh v1' header");
  }
  auto expect = [&in](auto& value, const char* what) {
    if (!(in >> value)) fail(ErrorKind::Io, std::string("malformed mesh: ") + what);
  };
  int nv = 0, nt = 0;
  expect(nv, "vertex count");
  std::vector<Point2> verts(nv);
  for (auto& v : verts) {
    expect(v.x(), "vertex coordinate");
    expect(v.y(), "vertex coordinate");
  }
  expect(nt, "triangle count");
  std::vector<std::array<int, 3>> tris(nt);
  for (auto& t : tris) {
    for (int& i : t) expect(i, "triangle index");
  }
  std::map<EdgeKey, BoundaryTags> tags;
  std::string word;
  while (in >> word) {
    if (word != "face") fail(ErrorKind::Io, "unexpected token '" + word + "'");
    int a = 0, b = 0;
    std::string te, tf;
    expect(a, "face vertex");
    expect(b, "face vertex");
    expect(te, "elastic tag");
    expect(tf, "flow tag");
    if ((te != "t" && te != "d") || (tf != "f" && tf != "p")) {
      fail(ErrorKind::Io, "boundary tags must be (t|d) (f|p)");
    }
    tags[edge_key(a, b)] = {te == "t" ? ElasticBc::Traction : ElasticBc::Dirichlet,
                            tf == "f" ? FlowBc::Flux : FlowBc::Pressure};
  }
  // Orient clockwise input.
  for (auto& t : tris) {
    for (int i : t) {
      if (i < 0 || i >= nv) fail(ErrorKind::Io, "triangle index out of range");
    }
    if (signed_area(verts[t[0]], verts[t[1]], verts[t[2]]) < 0) std::swap(t[1], t[2]);
  }
  return Mesh::from_triangles(
      std::move(verts), std::move(tris),
      [&tags](int a, int b, const Point2&, const Point2&) {
        auto it = tags.find(edge_key(a, b));
        if (it == tags.end()) {
          fail(ErrorKind::Io, "boundary face without a 'face' tag line");
        }
        return it->second;
      });
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open mesh file " + path);
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << "poro-mesh v1\n" << mesh.num_vertices() << '\n';
  out << std::setprecision(17);
  for (const auto& v : mesh.vertices()) out << v.x() << ' ' << v.y() << '\n';
  out << mesh.num_elements() << '\n';
  for (const auto& t : mesh.triangles()) {
    out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
  for (const Face& f : mesh.faces()) {
    if (!f.is_boundary()) continue;
    out << "face " << f.vertices[0] << ' ' << f.vertices[1] << ' '
        << elastic_letter(f.tags.elastic) << ' ' << flow_letter(f.tags.flow)
        << '\n';
  }
}

}  // namespace porohdg
