// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "shapemetric/types.hpp"

namespace shapemetric {

/// Closest point on triangle (a, b, c) to p. Handles zero-area triangles by
/// falling back to the closest point on the three edges.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/// Moller-Trumbore; returns the ray parameter t > t_min of the hit, for
/// dir not necessarily normalized. Hits exactly on an edge count.
std::optional<double> intersect_ray_triangle(const Vec3& origin, const Vec3& dir, const Vec3& a,
                                             const Vec3& b, const Vec3& c, double t_min = 0.0);

/// Signed solid angle subtended by the oriented triangle at p
/// (Van Oosterom-Strackee), in steradians.
double solid_angle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace shapemetric
