// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "oracles.hpp"
#include "shapemetric/error.hpp"
#include "shapemetric/pose.hpp"
#include "shapemetric/primitives.hpp"

using namespace shapemetric;

TEST_CASE("angles round trip through the rotation matrix") {
  for (double az : {0.0, 10.0, 179.0, 181.0, 359.5}) {
    for (double el : {-50.0, -12.5, 0.0, 33.0, 50.0}) {
      const RigidPose p = pose_from_angles(az, el);
      CHECK(orthonormality_error(p.rotation) < 1e-14);
      const ViewAngles v = extract_view_angles(p.rotation);
      CHECK(v.azimuth_deg == doctest::Approx(az).epsilon(1e-12));
      CHECK(v.elevation_deg == doctest::Approx(el).epsilon(1e-12));
    }
  }
  // Y is up: azimuth alone keeps the up axis fixed
  CHECK((pose_from_angles(77, 0).rotation * Vec3::UnitY() - Vec3::UnitY()).norm() < 1e-15);
}

TEST_CASE("2-DOF draws stay in the elevation band and cover azimuth") {
  double lo = 1e9, hi = -1e9;
  std::array<int, 8> az_bins{};
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const RigidPose p = sample_pose_2dof(static_cast<std::uint64_t>(i));
    CHECK(p.dof_tag == DofTag::VC2);
    CHECK(orthonormality_error(p.rotation) < 1e-12);
    const ViewAngles v = extract_view_angles(p.rotation);
    lo = std::min(lo, v.elevation_deg);
    hi = std::max(hi, v.elevation_deg);
    CHECK(v.elevation_deg >= kElevationMinDeg - 1e-9);
    CHECK(v.elevation_deg <= kElevationMaxDeg + 1e-9);
    ++az_bins[static_cast<std::size_t>(v.azimuth_deg / 45.0) % 8];
  }
  CHECK(lo < -49.0);
  CHECK(hi > 49.0);
  // chi-square with 7 dof; 18.48 is the 0.01 critical value
  double chi2 = 0.0;
  for (int b : az_bins) chi2 += (b - n / 8.0) * (b - n / 8.0) / (n / 8.0);
  CHECK(chi2 < 18.48);
}

TEST_CASE("3-DOF rotation angles follow the Haar law") {
  const std::size_t n = 10000;
  std::vector<double> angles, object_angles;
  for (std::size_t i = 0; i < n; ++i) {
    const RigidPose p = sample_pose_3dof(i);
    CHECK(p.dof_tag == DofTag::VC3);
    CHECK(orthonormality_error(p.rotation) < 1e-12);
    angles.push_back(rotation_angle(p.rotation));
    object_angles.push_back(rotation_angle(sample_uniform_rotation(i)));
  }
  CHECK(oracle::ks_statistic(angles, oracle::haar_angle_cdf) < oracle::ks_critical_001(n));
  CHECK(oracle::ks_statistic(object_angles, oracle::haar_angle_cdf) < oracle::ks_critical_001(n));
  // the rotated x axis is uniform on the sphere: its z coordinate is uniform on [-1, 1]
  std::vector<double> z;
  for (std::size_t i = 0; i < n; ++i) z.push_back((sample_uniform_rotation(i + n) * Vec3::UnitX()).z());
  CHECK(oracle::ks_statistic(z, [](double t) { return 0.5 * (t + 1.0); }) < oracle::ks_critical_001(n));
}

TEST_CASE("one object rotation shared across views") {
  const Mat3 object = sample_uniform_rotation(42);
  for (std::uint64_t view = 0; view < 5; ++view) {
    const RigidPose p = sample_pose_3dof(42, view);
    // stripping the object rotation leaves a 2-DOF view rotation
    const Mat3 v = p.rotation * object.transpose();
    const ViewAngles a = extract_view_angles(v);
    CHECK(std::abs(a.elevation_deg) <= kElevationMaxDeg + 1e-9);
    CHECK((pose_from_angles(a.azimuth_deg, a.elevation_deg).rotation - v).norm() < 1e-12);
  }
  CHECK(sample_pose_3dof(42, 0).rotation != sample_pose_3dof(42, 1).rotation);
  CHECK(sample_pose(DofTag::OC, 5).rotation == Mat3::Identity());
}

TEST_CASE("pivot modes") {
  const TriangleMesh m = primitives::box(Vec3(1, 2, 3), Vec3(4, 5, 6));
  const RigidPose p = pose_from_angles(90, 0);
  const TriangleMesh about_center = apply_pose(m, p, PivotMode::BboxCenter);
  CHECK((bounding_box(about_center).center() - Vec3(4, 5, 6)).norm() < 1e-12);
  const TriangleMesh about_origin = apply_pose(m, p, PivotMode::FileOrigin);
  CHECK((bounding_box(about_origin).center() - p.rotation * Vec3(4, 5, 6)).norm() < 1e-12);
  CHECK(about_center.surface_area() == doctest::Approx(m.surface_area()));
  CHECK_THROWS_AS(apply_pose(TriangleMesh(), p, PivotMode::BboxCenter), Error);
  CHECK(parse_pivot_mode("file_origin") == PivotMode::FileOrigin);
  CHECK(parse_dof_tag("VC3") == DofTag::VC3);
  CHECK_THROWS_AS(parse_dof_tag("VC4"), Error);
}

TEST_CASE("pose draws are deterministic per seed") {
  CHECK(sample_pose_2dof(9).rotation == sample_pose_2dof(9).rotation);
  CHECK(sample_pose_3dof(9).rotation == sample_pose_3dof(9).rotation);
  CHECK(sample_pose_2dof(9).rotation != sample_pose_2dof(10).rotation);
}
