// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <tbb/task_arena.h>

#include "oracles.hpp"
#include "shapemetric/error.hpp"
#include "shapemetric/primitives.hpp"
#include "shapemetric/surface_sampler.hpp"

using namespace shapemetric;

TEST_CASE("uniform over a square: half the points have x < 0.5") {
  const std::size_t n = 1000000;
  const SurfacePointSet s = sample_surface(primitives::square(), n, 11);
  REQUIRE(s.size() == n);
  std::size_t left = 0;
  for (const Vec3& p : s.positions) left += p.x() < 0.5 ? 1 : 0;
  // binomial sd 5e-4; 4 sd
  CHECK(std::abs(static_cast<double>(left) / n - 0.5) <= 0.002);
}

TEST_CASE("face choice follows area: 1:3 split gives 0.25") {
  const TriangleMesh m({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 2, 0), Vec3(5, 0, 0), Vec3(8, 0, 0), Vec3(5, 2, 0)},
                       {Face{0, 1, 2}, Face{3, 4, 5}});
  const std::size_t n = 1000000;
  const SurfacePointSet s = sample_surface(m, n, 3);
  std::size_t first = 0;
  for (auto f : s.face_ids) first += f == 0 ? 1 : 0;
  CHECK(std::abs(static_cast<double>(first) / n - 0.25) <= 0.002);
}

TEST_CASE("per-face counts within 4 sd on a 100-face mesh") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec3> verts;
  std::vector<Face> faces;
  for (std::uint32_t f = 0; f < 100; ++f) {
    const Vec3 a(u(rng), u(rng), u(rng));
    verts.push_back(a);
    verts.push_back(a + Vec3(u(rng), u(rng), u(rng)));
    verts.push_back(a + Vec3(u(rng), u(rng), u(rng)));
    faces.push_back({3 * f, 3 * f + 1, 3 * f + 2});
  }
  const TriangleMesh m(verts, faces);
  const std::size_t n = 200000;
  const SurfacePointSet s = sample_surface(m, n, 9);
  std::vector<std::size_t> counts(100, 0);
  for (auto f : s.face_ids) ++counts[f];
  const double total = m.surface_area();
  for (std::size_t f = 0; f < 100; ++f) {
    const double p = m.face_areas()[f] / total;
    const double sd = std::sqrt(n * p * (1 - p));
    CHECK(std::abs(static_cast<double>(counts[f]) - n * p) <= 4 * sd);
  }
}

TEST_CASE("barycentric draw is uniform within a triangle") {
  // The four midpoint sub-triangles have equal area.
  const TriangleMesh m({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)}, {Face{0, 1, 2}});
  const std::size_t n = 400000;
  const SurfacePointSet s = sample_surface(m, n, 4);
  std::array<std::size_t, 4> bins{};
  for (const Vec3& p : s.positions) {
    if (p.x() >= 0.5) ++bins[0];
    else if (p.y() >= 0.5) ++bins[1];
    else if (p.x() + p.y() <= 0.5) ++bins[2];
    else ++bins[3];
  }
  const double sd = std::sqrt(n * 0.25 * 0.75);
  for (auto b : bins) CHECK(std::abs(static_cast<double>(b) - n * 0.25) <= 4 * sd);
}

TEST_CASE("samples lie on their faces and carry face normals") {
  const TriangleMesh m = primitives::icosphere(2, 0.5);
  const SurfacePointSet s = sample_surface(m, 5000, 1, {NormalMode::Face, "sphere"});
  CHECK(s.source_mesh_id == "sphere");
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto c = m.corners(s.face_ids[i]);
    CHECK(oracle::triangle_distance(s.positions[i], c[0], c[1], c[2]) < 1e-12);
    CHECK((s.normals[i] - m.face_normals()[s.face_ids[i]]).norm() == 0.0);
  }
  const SurfacePointSet si = sample_surface(m, 2000, 1, {NormalMode::Interpolated, ""});
  for (std::size_t i = 0; i < si.size(); ++i) {
    CHECK(si.normals[i].norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(si.normals[i].dot(si.positions[i].normalized()) > 0.99);
  }
}

TEST_CASE("zero-area faces are never picked") {
  const TriangleMesh m({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(2, 0, 0)}, {Face{0, 1, 3}, Face{0, 1, 2}});
  const SurfacePointSet s = sample_surface(m, 10000, 2);
  for (auto f : s.face_ids) CHECK(f == 1);
}

TEST_CASE("sampling is deterministic and independent of thread count") {
  const TriangleMesh m = primitives::torus(24, 12, 0.35, 0.1);
  const SurfacePointSet a = sample_surface(m, 30000, 77);
  const SurfacePointSet b = sample_surface(m, 30000, 77);
  CHECK(a.positions == b.positions);
  SurfacePointSet c;
  tbb::task_arena(1).execute([&] { c = sample_surface(m, 30000, 77); });
  SurfacePointSet d;
  tbb::task_arena(4).execute([&] { d = sample_surface(m, 30000, 77); });
  CHECK(a.positions == c.positions);
  CHECK(a.positions == d.positions);
  CHECK(a.face_ids == d.face_ids);
  const SurfacePointSet e = sample_surface(m, 30000, 78);
  CHECK(a.positions != e.positions);
}

TEST_CASE("sampling errors") {
  CHECK_THROWS_AS(sample_surface(TriangleMesh(), 10, 0), Error);
  try {
    sample_surface(TriangleMesh({Vec3::Zero(), Vec3::UnitX(), Vec3::UnitX()}, {Face{0, 1, 2}}), 10, 0);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateGeometry);
  }
}

TEST_CASE("uniform volume points stay in their cube") {
  const auto pts = sample_volume_uniform(Vec3(0.1, 0, 0), 1.2, 100000, 6);
  Vec3 mean = Vec3::Zero();
  for (const Vec3& p : pts) {
    CHECK((p - Vec3(0.1, 0, 0)).cwiseAbs().maxCoeff() <= 0.6);
    mean += p;
  }
  mean /= static_cast<double>(pts.size());
  // sd of each coordinate mean: 1.2 / sqrt(12 n)
  CHECK((mean - Vec3(0.1, 0, 0)).cwiseAbs().maxCoeff() < 5 * 1.2 / std::sqrt(12.0 * 100000));
}

TEST_CASE("spts round trip and truncation") {
  const SurfacePointSet s = sample_surface(primitives::icosphere(1), 100, 1);
  const std::string bytes = encode_spts(s);
  CHECK(bytes.size() == 8 + 28 * s.size());
  const SurfacePointSet back = decode_spts(bytes);
  REQUIRE(back.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK((back.positions[i] - s.positions[i]).norm() < 1e-6);
    CHECK(back.face_ids[i] == s.face_ids[i]);
  }
  CHECK(encode_spts(back) == bytes);
  try {
    decode_spts(bytes.substr(0, bytes.size() - 3));
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Format);
  }
}

TEST_CASE("rigid transform and selection") {
  const SurfacePointSet s = sample_surface(primitives::icosphere(1), 50, 1);
  RigidPose pose = pose_from_angles(30, 10);
  pose.pivot = Vec3(0.1, 0.2, 0.3);
  const SurfacePointSet t = transform_points(s, pose);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK((t.positions[i] - pose.apply(s.positions[i])).norm() < 1e-15);
    CHECK((t.normals[i] - pose.rotation * s.normals[i]).norm() < 1e-15);
  }
  std::vector<bool> mask(s.size());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = i % 3 == 0;
  CHECK(select(s, mask, true).size() + select(s, mask, false).size() == s.size());
  CHECK(select(s, mask, true).size() == 17);
}
