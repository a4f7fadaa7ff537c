// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "shapemetric/types.hpp"

namespace shapemetric {

struct Aabb {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();

  Vec3 center() const { return 0.5 * (min + max); }
  Vec3 extent() const { return max - min; }
  bool contains(const Vec3& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }
};

/// Indexed triangle soup with per-face unit normals.
///
/// Faces whose edge cross product vanishes are degenerate: they stay in the
/// face list (connectivity is preserved) but carry a zero normal and zero
/// area, and are skipped by area-weighted sampling. A mesh with no faces is
/// valid and represents an empty reconstruction.
class TriangleMesh {
 public:
  TriangleMesh() = default;
  /// Throws Error(Structural) on out-of-range indices and Error(Data) on
  /// non-finite coordinates.
  TriangleMesh(std::vector<Vec3> vertices, std::vector<Face> faces);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Face>& faces() const { return faces_; }
  const std::vector<Vec3>& face_normals() const { return normals_; }
  const std::vector<double>& face_areas() const { return areas_; }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t face_count() const { return faces_.size(); }
  bool empty() const { return faces_.empty(); }
  bool is_degenerate(std::size_t face) const { return areas_[face] == 0.0; }
  std::vector<std::uint32_t> degenerate_faces() const;
  double surface_area() const;

  /// The three corner positions of a face.
  std::array<Vec3, 3> corners(std::size_t face) const {
    const Face& f = faces_[face];
    return {vertices_[f[0]], vertices_[f[1]], vertices_[f[2]]};
  }

  /// Every undirected edge is shared by exactly two faces that traverse it
  /// in opposite directions.
  bool is_watertight() const;

  /// Area-weighted average of incident face normals (zero for isolated vertices).
  std::vector<Vec3> vertex_normals() const;

 private:
  std::vector<Vec3> vertices_;
  std::vector<Face> faces_;
  std::vector<Vec3> normals_;
  std::vector<double> areas_;
};

/// Tight axis-aligned bounds. Throws Error(EmptyGeometry) without vertices.
Aabb bounding_box(const TriangleMesh& mesh);
Aabb bounding_box(const std::vector<Vec3>& points);

struct UnitCubeTransform {
  TriangleMesh mesh;
  double scale = 1.0;
  Vec3 offset = Vec3::Zero();  // v' = scale * v + offset
};

/// Centers the bounding box at the origin and scales the longest side to 1.
UnitCubeTransform normalize_to_unit_cube(const TriangleMesh& mesh);

/// Applies v' = scale * v + offset to every vertex.
TriangleMesh transform_mesh(const TriangleMesh& mesh, double scale, const Vec3& offset);

/// Keeps only the listed faces; vertices are compacted.
TriangleMesh submesh(const TriangleMesh& mesh, const std::vector<std::uint32_t>& faces);

// ---- I/O -----------------------------------------------------------------

enum class MeshFormat { Auto, Obj, Off };

struct LoadReport {
  std::vector<std::uint32_t> degenerate_faces;
  std::size_t polygons_triangulated = 0;
  std::size_t records_ignored = 0;
};

/// Reads ASCII OBJ (v/f records only, polygons fan-triangulated) or OFF.
/// Auto picks the format from the file extension.
TriangleMesh load_mesh(const std::filesystem::path& path, MeshFormat format = MeshFormat::Auto,
                       LoadReport* report = nullptr);
TriangleMesh parse_obj(const std::string& text, LoadReport* report = nullptr);
TriangleMesh parse_off(const std::string& text, LoadReport* report = nullptr);

/// Coordinates are printed with 9 significant digits.
std::string format_obj(const TriangleMesh& mesh);
std::string format_off(const TriangleMesh& mesh);
void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path,
               MeshFormat format = MeshFormat::Auto);

MeshFormat format_from_extension(const std::filesystem::path& path);

}  // namespace shapemetric
