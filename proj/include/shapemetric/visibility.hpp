// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "shapemetric/bvh.hpp"
#include "shapemetric/camera.hpp"
#include "shapemetric/metrics.hpp"
#include "shapemetric/surface_sampler.hpp"

namespace shapemetric {

struct DepthNormalMaps {
  int height = 0;
  int width = 0;
  std::vector<float> depth;     // distance along the pixel ray; +inf for background
  std::vector<Vec3> normals;    // camera frame, facing the camera; zero for background
  std::vector<bool> silhouette;

  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(col);
  }
};

/// One ray per pixel center; depth is the first-hit distance along the ray.
DepthNormalMaps render_maps(const TriangleMesh& mesh, const CameraRig& cam);
DepthNormalMaps render_maps(const TriangleBvh& bvh, const TriangleMesh& mesh, const CameraRig& cam);

/// visible[i] iff the first hit on the segment from the camera origin to
/// sample i lies within eps of the sample.
std::vector<bool> classify_visibility(const SurfacePointSet& samples, const TriangleMesh& mesh,
                                      const CameraRig& cam, double eps = 1e-4);
std::vector<bool> classify_visibility(const SurfacePointSet& samples, const TriangleBvh& occluder,
                                      const CameraRig& cam, double eps = 1e-4);

struct DecomposedReport {
  MetricReport visible;
  MetricReport occluded;
};

/// CD/NC/FS on the visible and on the self-occluded parts separately; IoU is
/// never reported for a partition. A partition with no points on either side
/// has its metrics left missing.
DecomposedReport evaluate_decomposed(const TriangleMesh& pred, const TriangleMesh& gt, const EvalConfig& cfg);

// "DNMP": u32 H, u32 W, H*W f32 depth (+inf background), H*W*3 f32 normals.
std::string encode_dnmp(const DepthNormalMaps& maps);
DepthNormalMaps decode_dnmp(const std::string& bytes);
void write_dnmp(const DepthNormalMaps& maps, const std::filesystem::path& path);
DepthNormalMaps read_dnmp(const std::filesystem::path& path);

/// Raw big-endian 16-bit planes for viewers that load PNG-style samples:
/// depth in units of 1/depth_scale (0 = background), normals mapped from
/// [-1, 1] to [0, 65535] (three planes), and a 1-byte silhouette plane.
void write_raw_planes(const DepthNormalMaps& maps, const std::filesystem::path& prefix,
                      double depth_scale = 10000.0);

}  // namespace shapemetric
