// SPDX-License-Identifier: Apache-2.0
#include "shapemetric/nn_index.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "shapemetric/error.hpp"
#include "shapemetric/parallel.hpp"

namespace shapemetric {

namespace {

constexpr std::uint32_t kLeafSize = 8;

bool closer(double d2, std::uint32_t idx, const NnIndex::Neighbor& best) {
  return d2 < best.distance2 || (d2 == best.distance2 && idx < best.index);
}

}  // namespace

NnIndex::NnIndex(std::vector<Vec3> points, std::vector<Vec3> normals)
    : points_(std::move(points)), normals_(std::move(normals)) {
  if (!normals_.empty() && normals_.size() != points_.size()) {
    throw Error(ErrorKind::InvalidArgument, "normal payload length differs from point count");
  }
  if (points_.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorKind::InvalidArgument, "too many points for a 32-bit index");
  }
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  if (points_.empty()) return;
  nodes_.reserve(2 * points_.size() / kLeafSize + 2);
  build(0, static_cast<std::uint32_t>(points_.size()));
  sorted_.resize(points_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) sorted_[i] = points_[order_[i]];
}

std::uint32_t NnIndex::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back({0.0, begin, end, 0, 0, 0});
  if (end - begin <= kLeafSize) return id;

  Vec3 lo = points_[order_[begin]], hi = lo;
  for (std::uint32_t i = begin; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double pa = points_[a][axis], pb = points_[b][axis];
                     return pa < pb || (pa == pb && a < b);
                   });
  const double split = points_[order_[mid]][axis];
  const std::uint32_t left = build(begin, mid);
  const std::uint32_t right = build(mid, end);
  Node& n = nodes_[id];
  n.split = split;
  n.axis = static_cast<std::uint8_t>(axis);
  n.left = left;
  n.right = right;
  return id;
}

void NnIndex::search(std::uint32_t node, const Vec3& q, Neighbor& best) const {
  const Node& n = nodes_[node];
  if (n.left == 0) {
    for (std::uint32_t i = n.begin; i < n.end; ++i) {
      const double d2 = (sorted_[i] - q).squaredNorm();
      if (closer(d2, order_[i], best)) best = {order_[i], d2};
    }
    return;
  }
  // Left holds coordinates <= split, right holds >= split.
  const double diff = q[n.axis] - n.split;
  const std::uint32_t near = diff < 0.0 ? n.left : n.right;
  const std::uint32_t far = diff < 0.0 ? n.right : n.left;
  search(near, q, best);
  if (diff * diff <= best.distance2) search(far, q, best);
}

NnIndex::Neighbor NnIndex::nearest(const Vec3& query) const {
  if (points_.empty()) throw Error(ErrorKind::EmptyGeometry, "nearest neighbor in an empty point set");
  Neighbor best{std::numeric_limits<std::uint32_t>::max(), std::numeric_limits<double>::infinity()};
  search(0, query, best);
  return best;
}

std::vector<NnIndex::Neighbor> NnIndex::nearest_all(const std::vector<Vec3>& queries) const {
  std::vector<Neighbor> out(queries.size());
  parallel_for(0, queries.size(), [&](std::size_t i) { out[i] = nearest(queries[i]); }, 1024);
  return out;
}

}  // namespace shapemetric
