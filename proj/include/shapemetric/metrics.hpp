// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shapemetric/camera.hpp"
#include "shapemetric/mesh.hpp"
#include "shapemetric/nn_index.hpp"
#include "shapemetric/pose.hpp"
#include "shapemetric/surface_sampler.hpp"

namespace shapemetric {

// ---- correspondence metrics --------------------------------------------------
//
// For sampled surfaces S1 (prediction) and S2 (ground truth):
//   CD  = mean_{x in S1} |x - nn(x)| + mean_{y in S2} |y - nn(y)|
//   NC  = 1/2 mean_{x in S1} |<n_x, n_nn(x)>| + 1/2 mean_{y in S2} |<n_y, n_nn(y)>|
//   FS  = harmonic mean of precision (S1 within d of S2) and recall (S2 within d of S1)
// nn(.) is the Euclidean nearest neighbor in the other set.

/// Nearest-neighbor matches in one direction.
struct DirectedMatch {
  std::vector<double> distances;
  std::vector<std::uint32_t> indices;
};

struct PairMatch {
  DirectedMatch forward;   // S1 -> S2
  DirectedMatch backward;  // S2 -> S1
};

/// Both directions at once; every metric below can be derived from this.
/// Throws Error(EmptyGeometry) if either set is empty.
PairMatch match_pair(const SurfacePointSet& s1, const SurfacePointSet& s2);

struct FScore {
  double fs = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

double chamfer(const PairMatch& match);
double normal_consistency(const PairMatch& match, const SurfacePointSet& s1, const SurfacePointSet& s2);
/// Threshold d_percent is a percentage of the unit reconstruction volume's side.
FScore fscore(const PairMatch& match, double d_percent);

double chamfer(const SurfacePointSet& s1, const SurfacePointSet& s2);
double normal_consistency(const SurfacePointSet& s1, const SurfacePointSet& s2);
FScore fscore(const SurfacePointSet& s1, const SurfacePointSet& s2, double d_percent);

// ---- IoU --------------------------------------------------------------------

struct OccupancySet {
  std::vector<Vec3> positions;
  std::vector<bool> occupied;
};

/// |O1 and O2| / |O1 or O2| over shared evaluation points; an empty union is 1.
double iou_points(const OccupancySet& occ1, const OccupancySet& occ2);

// ---- pairwise evaluation -----------------------------------------------------

enum class EmptyPolicy { Exclude, Zero };
/// Independent: each mesh is fitted to the unit cube on its own.
/// SharedGt: the ground truth's unit-cube transform is applied to both.
enum class Normalization { Independent, SharedGt };
/// Which geometry occludes predicted samples in the visibility split.
enum class Occluder { Own, GroundTruth };

struct EvalConfig {
  std::size_t n_pred = 100000;
  std::size_t n_gt = 300000;
  std::size_t n_iou = 100000;
  std::vector<double> fs_thresholds = {0.5, 1.0, 2.0};
  double iso = 0.25;
  PivotMode pivot_mode = PivotMode::BboxCenter;
  DofTag dof_mode = DofTag::OC;
  std::uint64_t rng_seed = 0;
  EmptyPolicy empty_policy = EmptyPolicy::Exclude;
  Normalization normalization = Normalization::Independent;
  bool compute_iou = true;
  /// Leave IoU missing unless both meshes are watertight.
  bool iou_requires_watertight = false;
  NormalMode normal_mode = NormalMode::Face;
  CameraRig camera;
  double visibility_eps = 1e-4;
  Occluder pred_occluder = Occluder::Own;

  /// Throws Error(InvalidArgument) on non-positive counts or thresholds.
  void validate() const;
};

struct MetricReport {
  std::optional<double> cd;
  std::optional<double> iou;
  std::optional<double> nc;
  std::map<double, FScore> fs;  // keyed by threshold in percent
  bool empty_prediction = false;
  std::size_t n_pred_points = 0;
  std::size_t n_gt_points = 0;

  std::optional<double> fs_at(double d_percent) const {
    auto it = fs.find(d_percent);
    return it == fs.end() ? std::nullopt : std::optional<double>(it->second.fs);
  }
};

/// Normalizes both meshes to the unit cube, samples them, and reports CD, NC
/// and FS at every configured threshold, plus IoU over points drawn densely
/// near the ground-truth surface and uniformly in the volume. An empty or
/// zero-area prediction gives a report with empty_prediction set and all
/// metrics missing. Throws Error if the ground truth itself is unusable.
MetricReport evaluate_pair(const TriangleMesh& pred, const TriangleMesh& gt, const EvalConfig& cfg);

/// Metrics from already-sampled point sets (no normalization or IoU).
MetricReport evaluate_samples(const SurfacePointSet& pred, const SurfacePointSet& gt,
                              const std::vector<double>& fs_thresholds);

/// The pair (pred, gt) after the configured normalization.
std::pair<TriangleMesh, TriangleMesh> normalize_pair(const TriangleMesh& pred, const TriangleMesh& gt,
                                                     Normalization mode);

bool has_positive_area(const TriangleMesh& mesh);

const char* to_string(EmptyPolicy p);
EmptyPolicy parse_empty_policy(const std::string& text);
const char* to_string(Normalization n);
Normalization parse_normalization(const std::string& text);

}  // namespace shapemetric
