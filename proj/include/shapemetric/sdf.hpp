// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "shapemetric/bvh.hpp"
#include "shapemetric/mesh.hpp"

namespace shapemetric {

/// Signed distance to a triangle mesh: magnitude is the exact Euclidean
/// distance to the closest face, sign is negative where the generalized
/// winding number exceeds 0.5. Sign stays meaningful on open or
/// self-intersecting meshes.
class SignedDistanceField {
 public:
  explicit SignedDistanceField(const TriangleMesh& mesh);

  double operator()(const Vec3& p) const;
  double unsigned_distance(const Vec3& p) const;
  bool inside(const Vec3& p) const { return bvh_.winding_number(p) > 0.5; }
  std::vector<double> evaluate(const std::vector<Vec3>& points) const;

  const TriangleBvh& bvh() const { return bvh_; }

 private:
  TriangleBvh bvh_;
};

/// Checked entry point: the mesh must be non-empty and fit the unit cube
/// (bounding box inside [-0.5, 0.5]^3 up to 1e-6).
std::vector<double> signed_distance(const TriangleMesh& mesh, const std::vector<Vec3>& points);

// ---- training samples -------------------------------------------------------

enum class SampleBucket : std::uint8_t { Near003 = 0, Near01 = 1, Volume = 2 };

struct SdfSampleSet {
  std::vector<Vec3> positions;
  std::vector<double> sdf_values;
  std::vector<SampleBucket> buckets;

  std::size_t size() const { return positions.size(); }
};

/// Disjoint bucket shares and bands. The defaults read "50% within 0.03,
/// 80% within 0.1, 20% in the 1.2 cube" cumulatively, giving 50/30/20.
struct TrainingSampleConfig {
  double near_fraction = 0.5;
  double near_band = 0.03;
  double mid_fraction = 0.3;
  double mid_band = 0.1;
  double volume_side = 1.2;
};

struct BucketCounts {
  std::size_t near = 0, mid = 0, volume = 0;
};
BucketCounts bucket_counts(std::size_t n, const TrainingSampleConfig& cfg = {});

/// Surface samples displaced by isotropic Gaussian offsets (sigma = half the
/// band) and rejection-resampled until |sdf| <= band, plus uniform volume
/// points. Every sample stores its exact signed distance.
SdfSampleSet generate_training_samples(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed,
                                       const TrainingSampleConfig& cfg = {});
SdfSampleSet generate_training_samples(const SignedDistanceField& field, const TriangleMesh& mesh,
                                       std::size_t n, std::uint64_t seed,
                                       const TrainingSampleConfig& cfg = {});

/// occupied[k] = sdf[k] <= iso
std::vector<bool> occupancy_from_sdf(const std::vector<double>& sdf_values, double iso);

// ---- grids ----------------------------------------------------------------

/// Corner-aligned lattice: value (i, j, k) sits at
/// domain.min + (i, j, k) / (R - 1) * extent, stored x-fastest.
struct SdfGrid {
  int resolution = 0;
  Aabb domain;
  std::vector<double> values;

  std::size_t index(int i, int j, int k) const {
    const auto r = static_cast<std::size_t>(resolution);
    return static_cast<std::size_t>(i) + r * (static_cast<std::size_t>(j) + r * static_cast<std::size_t>(k));
  }
  double at(int i, int j, int k) const { return values[index(i, j, k)]; }
  Vec3 point(int i, int j, int k) const;
  Vec3 cell_size() const { return domain.extent() / static_cast<double>(resolution - 1); }
};

inline constexpr int kMinGridResolution = 2;
inline constexpr int kMaxGridResolution = 512;

SdfGrid evaluate_grid(const TriangleMesh& mesh, int resolution, const Aabb& domain);
SdfGrid evaluate_grid(const SignedDistanceField& field, int resolution, const Aabb& domain);

/// Samples any scalar function on the lattice (used for analytic fields).
template <typename Fn>
SdfGrid sample_grid(Fn&& fn, int resolution, const Aabb& domain);

// "SDFG": magic, u32 R, 6 f64 (min xyz, max xyz), R^3 f32 x-fastest, little-endian.
std::string encode_sdfg(const SdfGrid& grid);
SdfGrid decode_sdfg(const std::string& bytes);
void write_sdfg(const SdfGrid& grid, const std::filesystem::path& path);
SdfGrid read_sdfg(const std::filesystem::path& path);

// "SDFS": magic, u32 count, count x (3 f32 position, f32 sdf, u8 bucket).
std::string encode_sdfs(const SdfSampleSet& samples);
SdfSampleSet decode_sdfs(const std::string& bytes);
void write_sdfs(const SdfSampleSet& samples, const std::filesystem::path& path);
SdfSampleSet read_sdfs(const std::filesystem::path& path);

void validate_grid_request(int resolution, const Aabb& domain);

template <typename Fn>
SdfGrid sample_grid(Fn&& fn, int resolution, const Aabb& domain) {
  validate_grid_request(resolution, domain);
  SdfGrid grid;
  grid.resolution = resolution;
  grid.domain = domain;
  grid.values.resize(static_cast<std::size_t>(resolution) * resolution * resolution);
  for (int k = 0; k < resolution; ++k)
    for (int j = 0; j < resolution; ++j)
      for (int i = 0; i < resolution; ++i) grid.values[grid.index(i, j, k)] = fn(grid.point(i, j, k));
  return grid;
}

}  // namespace shapemetric
