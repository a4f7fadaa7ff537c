// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "oracles.hpp"
#include "shapemetric/error.hpp"
#include "shapemetric/primitives.hpp"
#include "shapemetric/visibility.hpp"

using namespace shapemetric;

namespace {

TriangleMesh front_half(const TriangleMesh& m) {
  std::vector<std::uint32_t> keep;
  for (std::uint32_t f = 0; f < m.face_count(); ++f) {
    const auto c = m.corners(f);
    if ((c[0] + c[1] + c[2]).z() > 0.0) keep.push_back(f);
  }
  return submesh(m, keep);
}

}  // namespace

TEST_CASE("camera rig defaults") {
  const CameraRig cam;
  CHECK(cam.half_fov() * 180.0 / oracle::kPi == doctest::Approx(17.744).epsilon(1e-4));
  CHECK((cam.origin() - Vec3(0, 0, 2.2)).norm() == 0.0);
  CHECK(cam.pixel_ray(0, 0).norm() == doctest::Approx(1.0));
  CHECK(cam.pixel_ray(127, 128).z() < -0.999);
  CameraRig bad = cam;
  bad.width = 200;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = cam;
  bad.distance = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("visible fraction of a sphere seen from a point") {
  const TriangleMesh s = primitives::icosphere(5, 0.5);
  const SurfacePointSet pts = sample_surface(s, 100000, 3);
  const auto vis = classify_visibility(pts, s, CameraRig{});
  std::size_t n = 0;
  for (bool b : vis) n += b ? 1 : 0;
  CHECK(std::abs(static_cast<double>(n) / 1e5 - oracle::visible_cap_fraction(0.5, 2.2)) <= 0.005);
}

TEST_CASE("convex mesh: agreement with the facing test away from the horizon") {
  const TriangleMesh s = primitives::icosphere(4, 0.5);
  const SurfacePointSet pts = sample_surface(s, 20000, 5);
  const CameraRig cam;
  const auto vis = classify_visibility(pts, s, cam);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const bool facing = pts.normals[i].dot(cam.origin() - pts.positions[i]) > 0.0;
    agree += facing == vis[i] ? 1 : 0;
  }
  CHECK(static_cast<double>(agree) / pts.size() >= 0.99);
}

TEST_CASE("single facing triangle and two stacked squares") {
  const TriangleMesh tri({Vec3(-0.3, -0.3, 0), Vec3(0.3, -0.3, 0), Vec3(0, 0.3, 0)}, {Face{0, 1, 2}});
  const SurfacePointSet ts = sample_surface(tri, 2000, 1);
  for (bool b : classify_visibility(ts, tri, CameraRig{})) CHECK(b);

  const TriangleMesh front = transform_mesh(primitives::square(1.0), 1.0, Vec3(-0.5, -0.5, 0.2));
  const TriangleMesh back = transform_mesh(primitives::square(0.5), 1.0, Vec3(-0.25, -0.25, -0.2));
  const TriangleMesh both = primitives::merge({front, back});
  const SurfacePointSet pts = sample_surface(both, 5000, 2);
  const auto vis = classify_visibility(pts, both, CameraRig{});
  std::size_t front_count = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const bool is_front = pts.positions[i].z() > 0.0;
    front_count += is_front ? 1 : 0;
    CHECK(vis[i] == is_front);
  }
  CHECK(front_count > 0);
  CHECK(front_count < pts.size());
  // partitions are complementary
  CHECK(select(pts, vis, true).size() + select(pts, vis, false).size() == pts.size());
}

TEST_CASE("depth and normal maps") {
  const TriangleMesh s = primitives::icosphere(5, 0.5);
  CameraRig cam;
  cam.width = cam.height = 65;
  const DepthNormalMaps maps = render_maps(s, cam);
  CHECK(maps.depth[maps.index(32, 32)] == doctest::Approx(1.7).epsilon(1e-3 / 1.7));
  CHECK(maps.normals[maps.index(32, 32)].z() > 0.999);
  for (std::size_t i = 0; i < maps.depth.size(); ++i) {
    CHECK(maps.silhouette[i] == std::isfinite(maps.depth[i]));
    if (maps.silhouette[i]) CHECK(maps.normals[i].norm() == doctest::Approx(1.0).epsilon(1e-6));
    else CHECK(maps.normals[i] == Vec3::Zero());
  }

  // the unit cube fits inside the field of view: the border stays background
  CameraRig wide;
  wide.width = wide.height = 64;
  const DepthNormalMaps cube = render_maps(primitives::box(Vec3::Ones()), wide);
  for (int k = 0; k < 64; ++k) {
    CHECK_FALSE(cube.silhouette[cube.index(0, k)]);
    CHECK_FALSE(cube.silhouette[cube.index(63, k)]);
    CHECK_FALSE(cube.silhouette[cube.index(k, 0)]);
    CHECK_FALSE(cube.silhouette[cube.index(k, 63)]);
  }
  CHECK(cube.silhouette[cube.index(32, 32)]);

  const DepthNormalMaps empty = render_maps(TriangleMesh(), wide);
  for (std::size_t i = 0; i < empty.depth.size(); ++i) {
    CHECK_FALSE(empty.silhouette[i]);
    CHECK(std::isinf(empty.depth[i]));
  }
}

TEST_CASE("depth equals a brute-force ray cast") {
  const TriangleMesh m = apply_pose(primitives::torus(12, 6, 0.3, 0.12), pose_from_angles(20, 35), PivotMode::BboxCenter);
  CameraRig cam;
  cam.width = cam.height = 48;
  cam.pose = pose_from_angles(40, -10);
  const DepthNormalMaps maps = render_maps(m, cam);
  int fg = 0;
  for (int r = 0; r < 48; ++r) {
    for (int c = 0; c < 48; ++c) {
      const auto t = oracle::first_hit(m, cam.origin(), cam.pixel_ray(r, c));
      const float d = maps.depth[maps.index(r, c)];
      REQUIRE(t.has_value() == std::isfinite(d));
      if (t) {
        ++fg;
        CHECK(std::abs(static_cast<double>(d) - *t) <= 1e-6 * *t);  // stored as f32
      }
    }
  }
  CHECK(fg > 100);
}

TEST_CASE("DNMP round trip and raw planes") {
  CameraRig cam;
  cam.width = cam.height = 16;
  const DepthNormalMaps maps = render_maps(primitives::icosphere(2, 0.5), cam);
  const std::string bytes = encode_dnmp(maps);
  CHECK(bytes.size() == 12 + 16 * 16 * 16);
  const DepthNormalMaps back = decode_dnmp(bytes);
  CHECK(back.silhouette == maps.silhouette);
  CHECK(encode_dnmp(back) == bytes);
  CHECK_THROWS_AS(decode_dnmp(bytes.substr(0, 100)), Error);
  const auto dir = oracle::temp_dir("raw_planes");
  write_raw_planes(maps, dir / "m");
  CHECK(std::filesystem::file_size(dir / "m.depth.u16") == 2 * 256);
  CHECK(std::filesystem::file_size(dir / "m.normals.u16") == 6 * 256);
  CHECK(std::filesystem::file_size(dir / "m.mask.u8") == 256);
}

TEST_CASE("decomposed metrics") {
  const TriangleMesh s = primitives::icosphere(5, 0.5);
  EvalConfig cfg;
  cfg.n_pred = 100000;
  cfg.n_gt = 100000;
  const DecomposedReport self = evaluate_decomposed(s, s, cfg);
  CHECK(*self.visible.fs_at(1.0) >= 0.99);
  CHECK(*self.occluded.fs_at(1.0) >= 0.99);
  CHECK_FALSE(self.visible.iou);
  CHECK_FALSE(self.occluded.iou);

  // Back half deleted. The prediction's occluded part is the band between the
  // equator and the visibility horizon z = r^2 / D; the ground truth's is
  // everything below the horizon. Precision is ~1 and recall is the band
  // widened by d below the equator, relative to the occluded height r + r^2/D.
  cfg.normalization = Normalization::SharedGt;
  const DecomposedReport half = evaluate_decomposed(front_half(s), s, cfg);
  CHECK(*half.visible.fs_at(1.0) >= 0.95);
  const double horizon = 0.25 / 2.2;
  const double recall = (horizon + 0.01) / (0.5 + horizon);
  const double expected = 2 * recall / (1 + recall);
  CHECK(*half.occluded.fs_at(1.0) == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("decomposition with an empty partition leaves metrics missing") {
  const TriangleMesh tri({Vec3(-0.3, -0.3, 0), Vec3(0.3, -0.3, 0), Vec3(0, 0.3, 0)}, {Face{0, 1, 2}});
  EvalConfig cfg;
  cfg.n_pred = cfg.n_gt = 2000;
  cfg.normalization = Normalization::SharedGt;
  const DecomposedReport r = evaluate_decomposed(tri, tri, cfg);
  CHECK(r.visible.cd);
  CHECK_FALSE(r.occluded.cd);
  CHECK_FALSE(r.occluded.fs_at(1.0));
  CHECK(evaluate_decomposed(TriangleMesh(), tri, cfg).visible.empty_prediction);
}
