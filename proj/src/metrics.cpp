// SPDX-License-Identifier: Apache-2.0
#include "shapemetric/metrics.hpp"

#include <cmath>

#include "shapemetric/error.hpp"
#include "shapemetric/rng.hpp"
#include "shapemetric/sdf.hpp"

namespace shapemetric {

namespace {

enum Stream : std::uint64_t { kPredSamples = 1, kGtSamples = 2, kIouPoints = 3 };

DirectedMatch match_direction(const std::vector<Vec3>& from, const NnIndex& to) {
  DirectedMatch m;
  const auto nn = to.nearest_all(from);
  m.distances.resize(nn.size());
  m.indices.resize(nn.size());
  for (std::size_t i = 0; i < nn.size(); ++i) {
    m.distances[i] = std::sqrt(nn[i].distance2);
    m.indices[i] = nn[i].index;
  }
  return m;
}

double mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double fraction_within(const std::vector<double>& distances, double threshold) {
  std::size_t hits = 0;
  for (double d : distances) hits += d <= threshold ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(distances.size());
}

double mean_abs_cosine(const std::vector<Vec3>& normals, const std::vector<Vec3>& other,
                       const std::vector<std::uint32_t>& nn) {
  double sum = 0.0;
  for (std::size_t i = 0; i < normals.size(); ++i) sum += std::abs(normals[i].dot(other[nn[i]]));
  return sum / static_cast<double>(normals.size());
}

}  // namespace

PairMatch match_pair(const SurfacePointSet& s1, const SurfacePointSet& s2) {
  if (s1.empty() || s2.empty()) throw Error(ErrorKind::EmptyGeometry, "metric on an empty point set");
  const NnIndex i2(s2.positions);
  const NnIndex i1(s1.positions);
  return {match_direction(s1.positions, i2), match_direction(s2.positions, i1)};
}

double chamfer(const PairMatch& match) { return mean(match.forward.distances) + mean(match.backward.distances); }

double normal_consistency(const PairMatch& match, const SurfacePointSet& s1, const SurfacePointSet& s2) {
  return 0.5 * mean_abs_cosine(s1.normals, s2.normals, match.forward.indices) +
         0.5 * mean_abs_cosine(s2.normals, s1.normals, match.backward.indices);
}

FScore fscore(const PairMatch& match, double d_percent) {
  if (!(d_percent > 0.0)) throw Error(ErrorKind::InvalidArgument, "F-score threshold must be positive");
  const double threshold = d_percent / 100.0;
  FScore out;
  out.precision = fraction_within(match.forward.distances, threshold);
  out.recall = fraction_within(match.backward.distances, threshold);
  const double denom = out.precision + out.recall;
  out.fs = denom > 0.0 ? 2.0 * out.precision * out.recall / denom : 0.0;
  return out;
}

double chamfer(const SurfacePointSet& s1, const SurfacePointSet& s2) { return chamfer(match_pair(s1, s2)); }

double normal_consistency(const SurfacePointSet& s1, const SurfacePointSet& s2) {
  return normal_consistency(match_pair(s1, s2), s1, s2);
}

FScore fscore(const SurfacePointSet& s1, const SurfacePointSet& s2, double d_percent) {
  return fscore(match_pair(s1, s2), d_percent);
}

double iou_points(const OccupancySet& occ1, const OccupancySet& occ2) {
  if (occ1.occupied.size() != occ2.occupied.size() || occ1.positions.size() != occ2.positions.size()) {
    throw Error(ErrorKind::InvalidArgument, "occupancy sets have different lengths");
  }
  if (occ1.positions != occ2.positions) {
    throw Error(ErrorKind::InvalidArgument, "occupancy sets are evaluated at different points");
  }
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < occ1.occupied.size(); ++i) {
    const bool a = occ1.occupied[i], b = occ2.occupied[i];
    inter += (a && b) ? 1 : 0;
    uni += (a || b) ? 1 : 0;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

void EvalConfig::validate() const {
  if (n_pred == 0 || n_gt == 0 || n_iou == 0) {
    throw Error(ErrorKind::InvalidArgument, "sample counts must be positive");
  }
  if (fs_thresholds.empty()) throw Error(ErrorKind::InvalidArgument, "at least one F-score threshold is required");
  for (double d : fs_thresholds) {
    if (!(d > 0.0)) throw Error(ErrorKind::InvalidArgument, "F-score thresholds must be positive");
  }
  if (!(visibility_eps >= 0.0)) throw Error(ErrorKind::InvalidArgument, "visibility eps must be non-negative");
  camera.validate();
}

bool has_positive_area(const TriangleMesh& mesh) { return !mesh.empty() && mesh.surface_area() > 0.0; }

std::pair<TriangleMesh, TriangleMesh> normalize_pair(const TriangleMesh& pred, const TriangleMesh& gt,
                                                     Normalization mode) {
  const UnitCubeTransform g = normalize_to_unit_cube(gt);
  if (pred.vertex_count() == 0) return {pred, g.mesh};
  if (mode == Normalization::SharedGt) return {transform_mesh(pred, g.scale, g.offset), g.mesh};
  return {normalize_to_unit_cube(pred).mesh, g.mesh};
}

MetricReport evaluate_samples(const SurfacePointSet& pred, const SurfacePointSet& gt,
                              const std::vector<double>& fs_thresholds) {
  MetricReport report;
  report.n_pred_points = pred.size();
  report.n_gt_points = gt.size();
  if (pred.empty() || gt.empty()) {
    report.empty_prediction = pred.empty();
    return report;
  }
  const PairMatch match = match_pair(pred, gt);
  report.cd = chamfer(match);
  report.nc = normal_consistency(match, pred, gt);
  for (double d : fs_thresholds) report.fs[d] = fscore(match, d);
  return report;
}

MetricReport evaluate_pair(const TriangleMesh& pred, const TriangleMesh& gt, const EvalConfig& cfg) {
  cfg.validate();
  if (!has_positive_area(gt)) {
    throw Error(gt.empty() ? ErrorKind::EmptyGeometry : ErrorKind::DegenerateGeometry,
                "ground-truth mesh has no surface to compare against");
  }
  MetricReport report;
  report.n_gt_points = cfg.n_gt;
  // Zero extent cannot be normalized; treat it like an empty prediction.
  bool pred_usable = has_positive_area(pred);
  if (!pred_usable) {
    report.empty_prediction = true;
    return report;
  }
  const auto [p, g] = normalize_pair(pred, gt, cfg.normalization);

  const SurfacePointSet sp =
      sample_surface(p, cfg.n_pred, derive_seed(cfg.rng_seed, {kPredSamples}), {cfg.normal_mode, "pred"});
  const SurfacePointSet sg =
      sample_surface(g, cfg.n_gt, derive_seed(cfg.rng_seed, {kGtSamples}), {cfg.normal_mode, "gt"});
  report = evaluate_samples(sp, sg, cfg.fs_thresholds);

  const bool iou_allowed = !cfg.iou_requires_watertight || (p.is_watertight() && g.is_watertight());
  if (cfg.compute_iou && iou_allowed) {
    const SignedDistanceField gt_field(g);
    const SdfSampleSet pts =
        generate_training_samples(gt_field, g, cfg.n_iou, derive_seed(cfg.rng_seed, {kIouPoints}));
    OccupancySet occ_pred{pts.positions, occupancy_from_sdf(SignedDistanceField(p).evaluate(pts.positions), 0.0)};
    OccupancySet occ_gt{pts.positions, occupancy_from_sdf(pts.sdf_values, 0.0)};
    report.iou = iou_points(occ_pred, occ_gt);
  }
  return report;
}

const char* to_string(EmptyPolicy p) { return p == EmptyPolicy::Exclude ? "exclude" : "zero"; }

EmptyPolicy parse_empty_policy(const std::string& text) {
  if (text == "exclude" || text == "EXCLUDE") return EmptyPolicy::Exclude;
  if (text == "zero" || text == "ZERO") return EmptyPolicy::Zero;
  throw Error(ErrorKind::InvalidArgument, "unknown empty policy '" + text + "' (exclude, zero)");
}

const char* to_string(Normalization n) { return n == Normalization::Independent ? "independent" : "shared_gt"; }

Normalization parse_normalization(const std::string& text) {
  if (text == "independent") return Normalization::Independent;
  if (text == "shared_gt") return Normalization::SharedGt;
  throw Error(ErrorKind::InvalidArgument, "unknown normalization '" + text + "' (independent, shared_gt)");
}

}  // namespace shapemetric
