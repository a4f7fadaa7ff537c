// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "shapemetric/pose.hpp"

namespace shapemetric {

/// Fixed pinhole rig: camera on +Z of the posed frame at `distance` from the
/// origin, looking at the origin, Y up. Defaults reproduce the rendering
/// setup used for the training and test views (2.2 units away, 50 mm lens on
/// a 32 mm sensor, 256 x 256 pixels).
struct CameraRig {
  double distance = 2.2;
  double focal_length_mm = 50.0;
  double sensor_width_mm = 32.0;
  int width = 256;
  int height = 256;
  RigidPose pose;  // camera-to-world rotation about the origin

  double half_fov() const { return std::atan(0.5 * sensor_width_mm / focal_length_mm); }
  Vec3 origin() const { return pose.rotation * Vec3(0.0, 0.0, distance); }
  /// World-space direction (unit length) through the center of pixel (row, col).
  Vec3 pixel_ray(int row, int col) const;
  /// Throws Error(InvalidArgument) unless distance > 0 and the image is square.
  void validate() const;
};

}  // namespace shapemetric
