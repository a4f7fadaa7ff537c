// SPDX-License-Identifier: Apache-2.0
#include "shapemetric/bvh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shapemetric/triangle_query.hpp"

namespace shapemetric {

namespace {

constexpr std::uint32_t kLeafSize = 4;

double box_distance2(const Vec3& p, const Vec3& lo, const Vec3& hi) {
  double d2 = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double v = p[k] < lo[k] ? lo[k] - p[k] : (p[k] > hi[k] ? p[k] - hi[k] : 0.0);
    d2 += v * v;
  }
  return d2;
}

bool outside_box(const Vec3& p, const Vec3& lo, const Vec3& hi) {
  return (p.array() < lo.array()).any() || (p.array() > hi.array()).any();
}

// Entry parameter of the ray into the box, or +inf on a miss.
double ray_box(const Vec3& o, const Vec3& inv, const Vec3& lo, const Vec3& hi, double t_max) {
  double t0 = 0.0, t1 = t_max;
  for (int k = 0; k < 3; ++k) {
    if (std::isinf(inv[k])) {
      // parallel to this slab: 0 * inf would give NaN on the boundary
      if (o[k] < lo[k] || o[k] > hi[k]) return std::numeric_limits<double>::infinity();
      continue;
    }
    const double a = (lo[k] - o[k]) * inv[k];
    const double b = (hi[k] - o[k]) * inv[k];
    t0 = std::fmax(t0, std::fmin(a, b));
    t1 = std::fmin(t1, std::fmax(a, b));
  }
  return t0 <= t1 ? t0 : std::numeric_limits<double>::infinity();
}

}  // namespace

TriangleBvh::TriangleBvh(const TriangleMesh& mesh) : vertices_(mesh.vertices()) {
  tris_.reserve(mesh.face_count());
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    const Face& fc = mesh.faces()[f];
    tris_.push_back({vertices_[fc[0]], vertices_[fc[1]], vertices_[fc[2]], static_cast<std::uint32_t>(f),
                     fc[0], fc[1], fc[2]});
  }
  if (tris_.empty()) return;
  nodes_.reserve(2 * tris_.size() / kLeafSize + 1);
  build(0, static_cast<std::uint32_t>(tris_.size()));
  build_boundary(0);
}

std::uint32_t TriangleBvh::build(std::uint32_t first, std::uint32_t count) {
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  Vec3 clo = lo, chi = hi;
  for (std::uint32_t i = first; i < first + count; ++i) {
    const Tri& t = tris_[i];
    lo = lo.cwiseMin(t.a).cwiseMin(t.b).cwiseMin(t.c);
    hi = hi.cwiseMax(t.a).cwiseMax(t.b).cwiseMax(t.c);
    const Vec3 centroid = (t.a + t.b + t.c) / 3.0;
    clo = clo.cwiseMin(centroid);
    chi = chi.cwiseMax(centroid);
  }
  nodes_[id].lo = lo;
  nodes_[id].hi = hi;
  nodes_[id].first = first;
  nodes_[id].count = count;
  if (count <= kLeafSize) return id;

  int axis = 0;
  (chi - clo).maxCoeff(&axis);
  const std::uint32_t half = count / 2;
  auto begin = tris_.begin() + first;
  std::nth_element(begin, begin + half, begin + count, [axis](const Tri& x, const Tri& y) {
    const double cx = x.a[axis] + x.b[axis] + x.c[axis];
    const double cy = y.a[axis] + y.b[axis] + y.c[axis];
    return cx < cy || (cx == cy && x.face < y.face);
  });
  const std::uint32_t left = build(first, half);
  const std::uint32_t right = build(first + half, count - half);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> TriangleBvh::build_boundary(std::uint32_t node) {
  // Net directed-edge multiplicity after cancelling (a,b) against (b,a).
  std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, int>> signed_edges;
  auto add = [&](std::uint32_t a, std::uint32_t b) {
    if (a == b) return;
    if (a < b) signed_edges.push_back({{a, b}, 1});
    else signed_edges.push_back({{b, a}, -1});
  };
  Node& n = nodes_[node];
  if (n.leaf()) {
    for (std::uint32_t i = n.first; i < n.first + n.count; ++i) {
      const Tri& t = tris_[i];
      add(t.ia, t.ib);
      add(t.ib, t.ic);
      add(t.ic, t.ia);
    }
  } else {
    const std::uint32_t l = n.left, r = n.right;
    for (const auto& [a, b] : build_boundary(l)) add(a, b);
    for (const auto& [a, b] : build_boundary(r)) add(a, b);
  }
  std::sort(signed_edges.begin(), signed_edges.end());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::size_t i = 0; i < signed_edges.size();) {
    int net = 0;
    std::size_t j = i;
    while (j < signed_edges.size() && signed_edges[j].first == signed_edges[i].first) net += signed_edges[j++].second;
    const auto [lo, hi] = signed_edges[i].first;
    for (int k = 0; k < std::abs(net); ++k) out.push_back(net > 0 ? std::make_pair(lo, hi) : std::make_pair(hi, lo));
    i = j;
  }
  n.edges_first = static_cast<std::uint32_t>(boundary_.size());
  n.edges_count = static_cast<std::uint32_t>(out.size());
  n.cap = 0.5 * (n.lo + n.hi);
  boundary_.insert(boundary_.end(), out.begin(), out.end());
  return out;
}

TriangleBvh::ClosestHit TriangleBvh::closest(const Vec3& p) const {
  ClosestHit best;
  if (nodes_.empty()) return best;
  double best2 = std::numeric_limits<double>::infinity();
  std::uint32_t stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& n = nodes_[stack[--top]];
    if (box_distance2(p, n.lo, n.hi) > best2) continue;
    if (n.leaf()) {
      for (std::uint32_t i = n.first; i < n.first + n.count; ++i) {
        const Tri& t = tris_[i];
        const Vec3 q = closest_point_on_triangle(p, t.a, t.b, t.c);
        const double d2 = (p - q).squaredNorm();
        if (d2 < best2 || (d2 == best2 && t.face < best.face)) {
          best2 = d2;
          best.face = t.face;
          best.point = q;
        }
      }
      continue;
    }
    const double dl = box_distance2(p, nodes_[n.left].lo, nodes_[n.left].hi);
    const double dr = box_distance2(p, nodes_[n.right].lo, nodes_[n.right].hi);
    // push the farther child first so the nearer one is explored first
    if (dl <= dr) {
      stack[top++] = n.right;
      stack[top++] = n.left;
    } else {
      stack[top++] = n.left;
      stack[top++] = n.right;
    }
  }
  best.distance = std::sqrt(best2);
  return best;
}

std::optional<TriangleBvh::RayHit> TriangleBvh::first_hit(const Vec3& origin, const Vec3& dir,
                                                          double t_max) const {
  if (nodes_.empty()) return std::nullopt;
  const Vec3 inv = dir.cwiseInverse();
  std::optional<RayHit> best;
  double best_t = t_max;
  std::uint32_t stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& n = nodes_[stack[--top]];
    if (ray_box(origin, inv, n.lo, n.hi, best_t) == std::numeric_limits<double>::infinity()) continue;
    if (n.leaf()) {
      for (std::uint32_t i = n.first; i < n.first + n.count; ++i) {
        const Tri& t = tris_[i];
        auto hit = intersect_ray_triangle(origin, dir, t.a, t.b, t.c);
        if (hit && (*hit < best_t || (*hit == best_t && best && t.face < best->face))) {
          best_t = *hit;
          best = RayHit{*hit, t.face};
        }
      }
      continue;
    }
    const double tl = ray_box(origin, inv, nodes_[n.left].lo, nodes_[n.left].hi, best_t);
    const double tr = ray_box(origin, inv, nodes_[n.right].lo, nodes_[n.right].hi, best_t);
    if (tl <= tr) {
      stack[top++] = n.right;
      stack[top++] = n.left;
    } else {
      stack[top++] = n.left;
      stack[top++] = n.right;
    }
  }
  return best;
}

std::size_t TriangleBvh::count_hits(const Vec3& origin, const Vec3& dir) const {
  if (nodes_.empty()) return 0;
  const Vec3 inv = dir.cwiseInverse();
  const double inf = std::numeric_limits<double>::infinity();
  std::size_t hits = 0;
  std::uint32_t stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& n = nodes_[stack[--top]];
    if (ray_box(origin, inv, n.lo, n.hi, inf) == inf) continue;
    if (n.leaf()) {
      for (std::uint32_t i = n.first; i < n.first + n.count; ++i) {
        const Tri& t = tris_[i];
        if (intersect_ray_triangle(origin, dir, t.a, t.b, t.c)) ++hits;
      }
      continue;
    }
    stack[top++] = n.left;
    stack[top++] = n.right;
  }
  return hits;
}

double TriangleBvh::winding_sum(std::uint32_t node, const Vec3& p) const {
  const Node& n = nodes_[node];
  if (outside_box(p, n.lo, n.hi)) {
    if (n.edges_count == 0) return 0.0;
    if (n.edges_count < n.count) {
      double sum = 0.0;
      for (std::uint32_t e = n.edges_first; e < n.edges_first + n.edges_count; ++e) {
        const auto [a, b] = boundary_[e];
        sum += solid_angle(p, vertices_[a], vertices_[b], n.cap);
      }
      return sum;
    }
  }
  if (n.leaf() || n.edges_count >= n.count) {
    double sum = 0.0;
    for (std::uint32_t i = n.first; i < n.first + n.count; ++i) {
      const Tri& t = tris_[i];
      sum += solid_angle(p, t.a, t.b, t.c);
    }
    return sum;
  }
  return winding_sum(n.left, p) + winding_sum(n.right, p);
}

double TriangleBvh::winding_number(const Vec3& p) const {
  if (nodes_.empty()) return 0.0;
  return winding_sum(0, p) / (4.0 * std::numbers::pi);
}

}  // namespace shapemetric
