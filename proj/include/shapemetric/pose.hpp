// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "shapemetric/mesh.hpp"
#include "shapemetric/types.hpp"

namespace shapemetric {

/// Rotational freedom of the ground-truth frame: object-centered, or
/// viewer-centered with azimuth+elevation (VC2) or an extra SO(3) pre-rotation (VC3).
enum class DofTag { OC, VC2, VC3 };

enum class PivotMode { BboxCenter, FileOrigin };

const char* to_string(DofTag tag);
DofTag parse_dof_tag(const std::string& text);
const char* to_string(PivotMode mode);
PivotMode parse_pivot_mode(const std::string& text);

struct RigidPose {
  Mat3 rotation = Mat3::Identity();
  Vec3 pivot = Vec3::Zero();
  DofTag dof_tag = DofTag::OC;

  /// R (p - pivot) + pivot
  Vec3 apply(const Vec3& p) const { return rotation * (p - pivot) + pivot; }
};

// Axis convention: Y is up. Azimuth rotates about +Y, elevation about the
// camera-right axis +X, and rotation = R_y(azimuth) * R_x(elevation).
inline constexpr double kElevationMinDeg = -50.0;
inline constexpr double kElevationMaxDeg = 50.0;

Mat3 rotation_about_y(double radians);
Mat3 rotation_about_x(double radians);

/// R_y(azimuth) * R_x(elevation), angles in degrees.
RigidPose pose_from_angles(double azimuth_deg, double elevation_deg);

struct ViewAngles {
  double azimuth_deg;    // [0, 360)
  double elevation_deg;  // [-90, 90]
};
/// Inverse of pose_from_angles for matrices of that form.
ViewAngles extract_view_angles(const Mat3& rotation);

/// Azimuth uniform in [0, 360), elevation uniform in [-50, 50] (both ends included).
RigidPose sample_pose_2dof(std::uint64_t seed);

/// Haar-uniform rotation (Shoemake's quaternion construction).
Mat3 sample_uniform_rotation(std::uint64_t seed);

/// 2-DOF view rotation composed with one SO(3) draw per object:
/// rotation = R_view * R_object. The single-seed overload derives both from it.
RigidPose sample_pose_3dof(std::uint64_t seed);
RigidPose sample_pose_3dof(std::uint64_t object_seed, std::uint64_t view_index);

/// Dispatch on tag; OC yields the identity pose.
RigidPose sample_pose(DofTag tag, std::uint64_t seed);

/// Rotation angle in [0, pi] of a proper rotation matrix.
double rotation_angle(const Mat3& rotation);

/// Max |R^T R - I| entry and |det R - 1|.
double orthonormality_error(const Mat3& rotation);

/// Resolves the pivot from the mesh and applies v' = R (v - p) + p. Face
/// normals are recomputed. Throws Error(EmptyGeometry) on an empty mesh.
TriangleMesh apply_pose(const TriangleMesh& mesh, const RigidPose& pose, PivotMode pivot_mode);

/// The pose with its pivot set according to pivot_mode for this mesh.
RigidPose resolve_pivot(const TriangleMesh& mesh, RigidPose pose, PivotMode pivot_mode);

}  // namespace shapemetric
