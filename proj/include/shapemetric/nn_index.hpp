// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "shapemetric/types.hpp"

namespace shapemetric {

/// Static kd-tree over a point set with an optional per-point normal payload.
///
/// Queries are exact; among equidistant points the lowest original index
/// wins, so results match a brute-force scan bit for bit.
class NnIndex {
 public:
  explicit NnIndex(std::vector<Vec3> points, std::vector<Vec3> normals = {});

  struct Neighbor {
    std::uint32_t index;
    double distance2;
  };

  Neighbor nearest(const Vec3& query) const;
  std::vector<Neighbor> nearest_all(const std::vector<Vec3>& queries) const;

  const std::vector<Vec3>& points() const { return points_; }
  const std::vector<Vec3>& normals() const { return normals_; }
  std::size_t size() const { return points_.size(); }

 private:
  struct Node {
    double split = 0.0;
    std::uint32_t begin = 0, end = 0;
    std::uint32_t left = 0, right = 0;  // 0 marks a leaf (the root is never a child)
    std::uint8_t axis = 0;
  };

  std::uint32_t build(std::uint32_t begin, std::uint32_t end);
  void search(std::uint32_t node, const Vec3& q, Neighbor& best) const;

  std::vector<Vec3> points_;
  std::vector<Vec3> normals_;
  std::vector<Vec3> sorted_;          // points in tree order
  std::vector<std::uint32_t> order_;  // tree order -> original index
  std::vector<Node> nodes_;
};

}  // namespace shapemetric
