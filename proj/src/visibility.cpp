// SPDX-License-Identifier: Apache-2.0
#include "shapemetric/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shapemetric/binary_io.hpp"
#include "shapemetric/error.hpp"
#include "shapemetric/parallel.hpp"
#include "shapemetric/rng.hpp"

namespace shapemetric {

void CameraRig::validate() const {
  if (!(distance > 0.0)) throw Error(ErrorKind::InvalidArgument, "camera distance must be positive");
  if (!(focal_length_mm > 0.0) || !(sensor_width_mm > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "focal length and sensor width must be positive");
  }
  if (width <= 0 || width != height) throw Error(ErrorKind::InvalidArgument, "camera image must be square");
}

Vec3 CameraRig::pixel_ray(int row, int col) const {
  const double tan_half = 0.5 * sensor_width_mm / focal_length_mm;
  const double x = (2.0 * (col + 0.5) / width - 1.0) * tan_half;
  const double y = (1.0 - 2.0 * (row + 0.5) / height) * tan_half;
  return (pose.rotation * Vec3(x, y, -1.0)).normalized();
}

DepthNormalMaps render_maps(const TriangleBvh& bvh, const TriangleMesh& mesh, const CameraRig& cam) {
  cam.validate();
  DepthNormalMaps maps;
  maps.height = cam.height;
  maps.width = cam.width;
  const std::size_t n = static_cast<std::size_t>(cam.height) * static_cast<std::size_t>(cam.width);
  maps.depth.assign(n, std::numeric_limits<float>::infinity());
  maps.normals.assign(n, Vec3::Zero());
  std::vector<char> hit(n, 0);
  const Vec3 origin = cam.origin();
  const Mat3 world_to_cam = cam.pose.rotation.transpose();
  parallel_for(0, static_cast<std::size_t>(cam.height), [&](std::size_t row) {
    for (int col = 0; col < cam.width; ++col) {
      const std::size_t idx = maps.index(static_cast<int>(row), col);
      const Vec3 dir = cam.pixel_ray(static_cast<int>(row), col);
      const auto h = bvh.first_hit(origin, dir);
      if (!h) continue;
      Vec3 normal = mesh.face_normals()[h->face];
      if (normal.dot(dir) > 0.0) normal = -normal;
      maps.depth[idx] = static_cast<float>(h->t);
      maps.normals[idx] = world_to_cam * normal;
      hit[idx] = 1;
    }
  }, 1);
  maps.silhouette.assign(hit.begin(), hit.end());
  return maps;
}

DepthNormalMaps render_maps(const TriangleMesh& mesh, const CameraRig& cam) {
  return render_maps(TriangleBvh(mesh), mesh, cam);
}

std::vector<bool> classify_visibility(const SurfacePointSet& samples, const TriangleBvh& occluder,
                                      const CameraRig& cam, double eps) {
  const Vec3 origin = cam.origin();
  std::vector<char> visible(samples.size(), 0);
  parallel_for(0, samples.size(), [&](std::size_t i) {
    const Vec3 dir = samples.positions[i] - origin;
    const double dist = dir.norm();
    if (dist == 0.0) return;
    const Vec3 unit = dir / dist;
    const auto h = occluder.first_hit(origin, unit, dist + eps);
    visible[i] = (!h || h->t >= dist - eps) ? 1 : 0;
  }, 256);
  return {visible.begin(), visible.end()};
}

std::vector<bool> classify_visibility(const SurfacePointSet& samples, const TriangleMesh& mesh,
                                      const CameraRig& cam, double eps) {
  return classify_visibility(samples, TriangleBvh(mesh), cam, eps);
}

DecomposedReport evaluate_decomposed(const TriangleMesh& pred, const TriangleMesh& gt, const EvalConfig& cfg) {
  cfg.validate();
  if (!has_positive_area(gt)) {
    throw Error(gt.empty() ? ErrorKind::EmptyGeometry : ErrorKind::DegenerateGeometry,
                "ground-truth mesh has no surface to compare against");
  }
  DecomposedReport out;
  if (!has_positive_area(pred)) {
    out.visible.empty_prediction = out.occluded.empty_prediction = true;
    return out;
  }
  const auto [p, g] = normalize_pair(pred, gt, cfg.normalization);
  const SurfacePointSet sp = sample_surface(p, cfg.n_pred, derive_seed(cfg.rng_seed, {1}), {cfg.normal_mode, "pred"});
  const SurfacePointSet sg = sample_surface(g, cfg.n_gt, derive_seed(cfg.rng_seed, {2}), {cfg.normal_mode, "gt"});

  const TriangleBvh gt_bvh(g);
  const std::vector<bool> gt_vis = classify_visibility(sg, gt_bvh, cfg.camera, cfg.visibility_eps);
  const std::vector<bool> pred_vis =
      cfg.pred_occluder == Occluder::Own
          ? classify_visibility(sp, TriangleBvh(p), cfg.camera, cfg.visibility_eps)
          : classify_visibility(sp, gt_bvh, cfg.camera, cfg.visibility_eps);

  auto part = [&](bool keep) {
    const SurfacePointSet a = select(sp, pred_vis, keep);
    const SurfacePointSet b = select(sg, gt_vis, keep);
    MetricReport r = evaluate_samples(a, b, cfg.fs_thresholds);
    r.empty_prediction = false;  // partition emptiness is reported through missing metrics
    return r;
  };
  out.visible = part(true);
  out.occluded = part(false);
  return out;
}

// ---- serialization ----------------------------------------------------------

std::string encode_dnmp(const DepthNormalMaps& maps) {
  std::string out = "DNMP";
  binio::put_u32(out, static_cast<std::uint32_t>(maps.height));
  binio::put_u32(out, static_cast<std::uint32_t>(maps.width));
  for (float d : maps.depth) binio::put_f32(out, d);
  for (const Vec3& n : maps.normals)
    for (int k = 0; k < 3; ++k) binio::put_f32(out, static_cast<float>(n[k]));
  return out;
}

DepthNormalMaps decode_dnmp(const std::string& bytes) {
  binio::Reader in(bytes, "DNMP stream");
  in.expect_magic("DNMP");
  DepthNormalMaps maps;
  maps.height = static_cast<int>(in.u32());
  maps.width = static_cast<int>(in.u32());
  const std::size_t n = static_cast<std::size_t>(maps.height) * static_cast<std::size_t>(maps.width);
  if (in.remaining() != n * 16) throw Error(ErrorKind::Format, "DNMP payload size does not match dimensions");
  maps.depth.resize(n);
  for (float& d : maps.depth) d = in.f32();
  maps.normals.resize(n);
  for (Vec3& v : maps.normals)
    for (int k = 0; k < 3; ++k) v[k] = in.f32();
  maps.silhouette.resize(n);
  for (std::size_t i = 0; i < n; ++i) maps.silhouette[i] = std::isfinite(maps.depth[i]);
  return maps;
}

void write_dnmp(const DepthNormalMaps& maps, const std::filesystem::path& path) {
  binio::write_all(path, encode_dnmp(maps));
}

DepthNormalMaps read_dnmp(const std::filesystem::path& path) { return decode_dnmp(binio::read_all(path)); }

void write_raw_planes(const DepthNormalMaps& maps, const std::filesystem::path& prefix, double depth_scale) {
  auto put_be16 = [](std::string& s, std::uint16_t v) {
    s.push_back(static_cast<char>(v >> 8));
    s.push_back(static_cast<char>(v & 0xff));
  };
  auto quantize = [](double v) {
    return static_cast<std::uint16_t>(std::lround(std::clamp(v, 0.0, 65535.0)));
  };
  std::string depth, normals, mask;
  for (std::size_t i = 0; i < maps.depth.size(); ++i) {
    put_be16(depth, maps.silhouette[i] ? quantize(maps.depth[i] * depth_scale) : 0);
    mask.push_back(maps.silhouette[i] ? static_cast<char>(255) : 0);
  }
  for (int k = 0; k < 3; ++k)
    for (const Vec3& n : maps.normals) put_be16(normals, quantize((n[k] + 1.0) * 0.5 * 65535.0));
  const std::string base = prefix.string();
  binio::write_all(base + ".depth.u16", depth);
  binio::write_all(base + ".normals.u16", normals);
  binio::write_all(base + ".mask.u8", mask);
}

}  // namespace shapemetric
