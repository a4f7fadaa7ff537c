// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "shapemetric/mesh.hpp"

namespace shapemetric {

/// Bounding-volume hierarchy over the faces of a mesh. Immutable after
/// construction and safe to query from many threads.
///
/// Besides closest-point and ray queries it answers generalized winding
/// numbers exactly in sub-linear time: every node stores the oriented
/// boundary loop of its patch, and for a query outside the node box the
/// patch's winding number equals that of the fan closing its boundary.
class TriangleBvh {
 public:
  explicit TriangleBvh(const TriangleMesh& mesh);

  struct ClosestHit {
    double distance = std::numeric_limits<double>::infinity();
    std::uint32_t face = 0;
    Vec3 point = Vec3::Zero();
  };
  /// Exact closest point over all faces. Requires a non-empty mesh.
  ClosestHit closest(const Vec3& p) const;

  struct RayHit {
    double t;  // in units of |dir|
    std::uint32_t face;
  };
  std::optional<RayHit> first_hit(const Vec3& origin, const Vec3& dir,
                                  double t_max = std::numeric_limits<double>::infinity()) const;
  /// Number of faces crossed by the ray at t > 0.
  std::size_t count_hits(const Vec3& origin, const Vec3& dir) const;

  /// Generalized winding number: sum of signed solid angles over 4*pi.
  double winding_number(const Vec3& p) const;

  bool empty() const { return nodes_.empty(); }
  std::size_t face_count() const { return tris_.size(); }
  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Tri {
    Vec3 a, b, c;
    std::uint32_t face;
    std::uint32_t ia, ib, ic;
  };
  struct Node {
    Vec3 lo, hi;
    std::uint32_t first = 0, count = 0;
    std::uint32_t left = kNone, right = kNone;
    std::uint32_t edges_first = 0, edges_count = 0;  // into boundary_
    Vec3 cap = Vec3::Zero();                         // fan apex, inside the box
    bool leaf() const { return left == kNone; }
  };
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  std::uint32_t build(std::uint32_t first, std::uint32_t count);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> build_boundary(std::uint32_t node);
  double winding_sum(std::uint32_t node, const Vec3& p) const;

  std::vector<Vec3> vertices_;
  std::vector<Tri> tris_;
  std::vector<Node> nodes_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> boundary_;
};

}  // namespace shapemetric
