// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "shapemetric/mesh.hpp"
#include "shapemetric/pose.hpp"

namespace shapemetric {

struct SurfacePointSet {
  std::vector<Vec3> positions;
  std::vector<Vec3> normals;
  std::vector<std::uint32_t> face_ids;
  std::string source_mesh_id;

  std::size_t size() const { return positions.size(); }
  bool empty() const { return positions.empty(); }
};

enum class NormalMode {
  Face,         // the flat normal of the sampled face
  Interpolated  // barycentric blend of area-weighted vertex normals
};

const char* to_string(NormalMode mode);
NormalMode parse_normal_mode(const std::string& text);

struct SampleOptions {
  NormalMode normals = NormalMode::Face;
  std::string mesh_id;
};

/// Area-weighted uniform samples: a face is picked with probability
/// proportional to its area, then a uniform barycentric point on it.
/// Zero-area faces are never picked.
///
/// Samples are generated in fixed-size chunks with per-chunk derived seeds,
/// so output is identical for any thread count.
SurfacePointSet sample_surface(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed,
                               const SampleOptions& options = {});

/// i.i.d. uniform points in the axis-aligned cube of the given side about center.
std::vector<Vec3> sample_volume_uniform(const Vec3& center, double side, std::size_t n,
                                        std::uint64_t seed);

/// Rigid motion of positions and normals; face ids are kept.
SurfacePointSet transform_points(const SurfacePointSet& points, const RigidPose& pose);

/// Subset by boolean mask (mask[i] == keep).
SurfacePointSet select(const SurfacePointSet& points, const std::vector<bool>& mask, bool keep = true);

// "SPTS" binary: magic, u32 count, count x (3 f32 position, 3 f32 normal, u32 face id), little-endian.
void write_spts(const SurfacePointSet& points, const std::filesystem::path& path);
SurfacePointSet read_spts(const std::filesystem::path& path);
std::string encode_spts(const SurfacePointSet& points);
SurfacePointSet decode_spts(const std::string& bytes);

/// "x y z nx ny nz" per line, for inspection in external viewers.
void write_xyz(const SurfacePointSet& points, const std::filesystem::path& path);

}  // namespace shapemetric
