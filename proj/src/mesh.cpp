// SPDX-License-Identifier: Apache-2.0
#include "shapemetric/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "shapemetric/error.hpp"

namespace shapemetric {

TriangleMesh::TriangleMesh(std::vector<Vec3> vertices, std::vector<Face> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!vertices_[i].allFinite()) {
      throw Error(ErrorKind::Data, "vertex " + std::to_string(i) + " has a non-finite coordinate");
    }
  }
  const auto n = static_cast<std::uint32_t>(vertices_.size());
  normals_.resize(faces_.size());
  areas_.resize(faces_.size());
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    for (std::uint32_t idx : faces_[f]) {
      if (idx >= n) {
        throw Error(ErrorKind::Structural, "face " + std::to_string(f) + " references vertex " +
                                               std::to_string(idx) + " but the mesh has " +
                                               std::to_string(n) + " vertices");
      }
    }
    const auto [a, b, c] = corners(f);
    const Vec3 cross = (b - a).cross(c - a);
    const double len = cross.norm();
    if (len > 0.0 && std::isfinite(len)) {
      normals_[f] = cross / len;
      areas_[f] = 0.5 * len;
    } else {
      normals_[f] = Vec3::Zero();
      areas_[f] = 0.0;
    }
  }
}

std::vector<std::uint32_t> TriangleMesh::degenerate_faces() const {
  std::vector<std::uint32_t> out;
  for (std::size_t f = 0; f < faces_.size(); ++f)
    if (is_degenerate(f)) out.push_back(static_cast<std::uint32_t>(f));
  return out;
}

double TriangleMesh::surface_area() const {
  double total = 0.0;
  for (double a : areas_) total += a;
  return total;
}

bool TriangleMesh::is_watertight() const {
  if (faces_.empty()) return false;
  // directed edge -> use count
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed;
  for (const Face& f : faces_) {
    for (int e = 0; e < 3; ++e) ++directed[{f[e], f[(e + 1) % 3]}];
  }
  for (const auto& [edge, count] : directed) {
    if (count != 1) return false;
    auto it = directed.find({edge.second, edge.first});
    if (it == directed.end() || it->second != 1) return false;
  }
  return true;
}

std::vector<Vec3> TriangleMesh::vertex_normals() const {
  std::vector<Vec3> out(vertices_.size(), Vec3::Zero());
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    for (std::uint32_t idx : faces_[f]) out[idx] += areas_[f] * normals_[f];
  }
  for (Vec3& n : out) {
    const double len = n.norm();
    if (len > 0.0) n /= len;
  }
  return out;
}

Aabb bounding_box(const std::vector<Vec3>& points) {
  if (points.empty()) throw Error(ErrorKind::EmptyGeometry, "bounding box of an empty vertex list");
  Aabb box{points.front(), points.front()};
  for (const Vec3& p : points) {
    box.min = box.min.cwiseMin(p);
    box.max = box.max.cwiseMax(p);
  }
  return box;
}

Aabb bounding_box(const TriangleMesh& mesh) { return bounding_box(mesh.vertices()); }

TriangleMesh transform_mesh(const TriangleMesh& mesh, double scale, const Vec3& offset) {
  std::vector<Vec3> verts;
  verts.reserve(mesh.vertex_count());
  for (const Vec3& v : mesh.vertices()) verts.push_back(scale * v + offset);
  return TriangleMesh(std::move(verts), mesh.faces());
}

UnitCubeTransform normalize_to_unit_cube(const TriangleMesh& mesh) {
  if (mesh.vertex_count() == 0) {
    throw Error(ErrorKind::EmptyGeometry, "cannot normalize a mesh without vertices");
  }
  const Aabb box = bounding_box(mesh);
  const double longest = box.extent().maxCoeff();
  if (!(longest > 0.0)) {
    throw Error(ErrorKind::DegenerateGeometry, "all vertices coincide; the mesh has zero extent");
  }
  UnitCubeTransform out;
  out.scale = 1.0 / longest;
  out.offset = -out.scale * box.center();
  out.mesh = transform_mesh(mesh, out.scale, out.offset);
  return out;
}

TriangleMesh submesh(const TriangleMesh& mesh, const std::vector<std::uint32_t>& faces) {
  std::vector<std::int64_t> remap(mesh.vertex_count(), -1);
  std::vector<Vec3> verts;
  std::vector<Face> out_faces;
  out_faces.reserve(faces.size());
  for (std::uint32_t f : faces) {
    Face nf{};
    for (int k = 0; k < 3; ++k) {
      const std::uint32_t v = mesh.faces().at(f)[k];
      if (remap[v] < 0) {
        remap[v] = static_cast<std::int64_t>(verts.size());
        verts.push_back(mesh.vertices()[v]);
      }
      nf[k] = static_cast<std::uint32_t>(remap[v]);
    }
    out_faces.push_back(nf);
  }
  return TriangleMesh(std::move(verts), std::move(out_faces));
}

}  // namespace shapemetric
