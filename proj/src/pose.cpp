// SPDX-License-Identifier: Apache-2.0
#include "shapemetric/pose.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "shapemetric/error.hpp"
#include "shapemetric/rng.hpp"

namespace shapemetric {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

enum Stream : std::uint64_t { kViewStream = 1, kObjectStream = 2 };

}  // namespace

const char* to_string(DofTag tag) {
  switch (tag) {
    case DofTag::OC: return "OC";
    case DofTag::VC2: return "VC2";
    case DofTag::VC3: return "VC3";
  }
  return "OC";
}

DofTag parse_dof_tag(const std::string& text) {
  if (text == "OC" || text == "oc") return DofTag::OC;
  if (text == "VC2" || text == "vc2") return DofTag::VC2;
  if (text == "VC3" || text == "vc3") return DofTag::VC3;
  throw Error(ErrorKind::InvalidArgument, "unknown dof mode '" + text + "' (OC, VC2, VC3)");
}

const char* to_string(PivotMode mode) {
  return mode == PivotMode::BboxCenter ? "bbox_center" : "file_origin";
}

PivotMode parse_pivot_mode(const std::string& text) {
  if (text == "bbox_center" || text == "BBOX_CENTER") return PivotMode::BboxCenter;
  if (text == "file_origin" || text == "FILE_ORIGIN") return PivotMode::FileOrigin;
  throw Error(ErrorKind::InvalidArgument,
              "unknown pivot mode '" + text + "' (bbox_center, file_origin)");
}

Mat3 rotation_about_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << c, 0, s,
       0, 1, 0,
       -s, 0, c;
  return r;
}

Mat3 rotation_about_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r << 1, 0, 0,
       0, c, -s,
       0, s, c;
  return r;
}

RigidPose pose_from_angles(double azimuth_deg, double elevation_deg) {
  RigidPose pose;
  pose.rotation = rotation_about_y(azimuth_deg * kDegToRad) * rotation_about_x(elevation_deg * kDegToRad);
  pose.dof_tag = DofTag::VC2;
  return pose;
}

ViewAngles extract_view_angles(const Mat3& r) {
  // Row 1 of R_y(a) R_x(e) is (0, cos e, -sin e); column 0 is (cos a, 0, -sin a).
  const double elevation = std::atan2(-r(1, 2), r(1, 1));
  double azimuth = std::atan2(-r(2, 0), r(0, 0)) / kDegToRad;
  if (azimuth < 0.0) azimuth += 360.0;
  if (azimuth >= 360.0) azimuth -= 360.0;
  return {azimuth, elevation / kDegToRad};
}

RigidPose sample_pose_2dof(std::uint64_t seed) {
  Rng rng(derive_seed(seed, {kViewStream}));
  const double azimuth = 360.0 * uniform_open(rng);
  const double elevation = kElevationMinDeg + (kElevationMaxDeg - kElevationMinDeg) * uniform_closed(rng);
  return pose_from_angles(azimuth, elevation);
}

Mat3 sample_uniform_rotation(std::uint64_t seed) {
  Rng rng(derive_seed(seed, {kObjectStream}));
  const double u1 = uniform_open(rng);
  const double u2 = uniform_open(rng);
  const double u3 = uniform_open(rng);
  const double two_pi = 2.0 * std::numbers::pi;
  const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
  Eigen::Quaterniond q(b * std::cos(two_pi * u3),   // w
                       a * std::sin(two_pi * u2),   // x
                       a * std::cos(two_pi * u2),   // y
                       b * std::sin(two_pi * u3));  // z
  q.normalize();
  return q.toRotationMatrix();
}

RigidPose sample_pose_3dof(std::uint64_t object_seed, std::uint64_t view_index) {
  RigidPose pose = sample_pose_2dof(derive_seed(object_seed, {kViewStream, view_index}));
  pose.rotation = pose.rotation * sample_uniform_rotation(object_seed);
  pose.dof_tag = DofTag::VC3;
  return pose;
}

RigidPose sample_pose_3dof(std::uint64_t seed) { return sample_pose_3dof(seed, 0); }

RigidPose sample_pose(DofTag tag, std::uint64_t seed) {
  switch (tag) {
    case DofTag::VC2: return sample_pose_2dof(seed);
    case DofTag::VC3: return sample_pose_3dof(seed);
    case DofTag::OC: break;
  }
  return RigidPose{};
}

double rotation_angle(const Mat3& r) {
  const double c = std::clamp(0.5 * (r.trace() - 1.0), -1.0, 1.0);
  return std::acos(c);
}

double orthonormality_error(const Mat3& r) {
  const double ortho = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  return std::max(ortho, std::abs(r.determinant() - 1.0));
}

RigidPose resolve_pivot(const TriangleMesh& mesh, RigidPose pose, PivotMode pivot_mode) {
  pose.pivot = pivot_mode == PivotMode::BboxCenter ? bounding_box(mesh).center() : Vec3::Zero();
  return pose;
}

TriangleMesh apply_pose(const TriangleMesh& mesh, const RigidPose& pose, PivotMode pivot_mode) {
  if (mesh.vertex_count() == 0) throw Error(ErrorKind::EmptyGeometry, "cannot pose an empty mesh");
  const RigidPose resolved = resolve_pivot(mesh, pose, pivot_mode);
  std::vector<Vec3> verts;
  verts.reserve(mesh.vertex_count());
  for (const Vec3& v : mesh.vertices()) verts.push_back(resolved.apply(v));
  return TriangleMesh(std::move(verts), mesh.faces());
}

}  // namespace shapemetric
