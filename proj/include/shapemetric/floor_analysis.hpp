// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "shapemetric/primitives.hpp"

namespace shapemetric {

enum class FloorMetric { CD, NC, FS };

/// Self-comparison statistics of one metric across sample counts.
/// Arrays are aligned with sample_counts; per_mesh[c][m] follows mesh_ids.
struct FloorCurve {
  FloorMetric metric = FloorMetric::FS;
  double threshold = 0.0;  // FS only, in percent
  std::vector<std::size_t> sample_counts;
  std::vector<double> mean;
  std::vector<double> std;    // population std across meshes
  std::vector<double> worst;  // max for CD, min for NC and FS
  std::vector<std::string> worst_mesh_ids;
  std::vector<std::string> mesh_ids;
  std::vector<std::vector<double>> per_mesh;

  std::string label() const;
};

struct FloorFailure {
  std::string mesh_id;
  std::string message;
};

struct FloorResult {
  std::vector<FloorCurve> curves;  // CD, NC, then FS per threshold
  std::vector<FloorFailure> failures;
};

struct FloorOptions {
  std::vector<std::size_t> counts = {10000, 30000, 100000, 300000, 1000000};
  std::vector<double> fs_thresholds = {0.25, 0.5, 1.0, 1.5, 2.0};
  std::uint64_t rng_seed = 0;
  std::size_t reps = 1;
};

/// Each mesh is fitted to the unit cube, then sampled twice per count with
/// independent seeds and compared with itself. Meshes that cannot be sampled
/// are listed in failures and left out of every curve.
/// Throws Error(InvalidArgument) on counts below 100, no thresholds, reps 0,
/// or when no mesh survives.
FloorResult sampling_floor(const std::vector<primitives::NamedMesh>& meshes, const FloorOptions& options);

const char* to_string(FloorMetric m);

/// count,mean,std,worst,worst_mesh_id
std::string format_floor_csv(const FloorCurve& curve);
/// Mean with a std error bar and the worst case dashed, one panel per metric family.
std::string format_floor_svg(const std::vector<FloorCurve>& curves);
/// One CSV per curve (<prefix>_<label>.csv) plus <prefix>.svg; returns the paths written.
std::vector<std::filesystem::path> write_floor_outputs(const FloorResult& result,
                                                       const std::filesystem::path& prefix);

}  // namespace shapemetric
