// SPDX-License-Identifier: Apache-2.0
#include "shapemetric/primitives.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <utility>

#include "shapemetric/error.hpp"

namespace shapemetric::primitives {

namespace {

constexpr double kPi = std::numbers::pi;

// Flips every face when the enclosed signed volume is negative.
TriangleMesh orient_outward(std::vector<Vec3> verts, std::vector<Face> faces) {
  double volume = 0.0;
  for (const Face& f : faces) volume += verts[f[0]].dot(verts[f[1]].cross(verts[f[2]]));
  if (volume < 0.0) {
    for (Face& f : faces) std::swap(f[1], f[2]);
  }
  return TriangleMesh(std::move(verts), std::move(faces));
}

std::uint32_t idx(std::size_t i) { return static_cast<std::uint32_t>(i); }

}  // namespace

TriangleMesh icosphere(int subdivisions, double radius, const Vec3& center) {
  if (subdivisions < 0) throw Error(ErrorKind::InvalidArgument, "negative subdivision level");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> verts = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
      {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1},
  };
  for (Vec3& v : verts) v.normalize();
  std::vector<Face> faces = {
      {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
      {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1},
  };
  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoint;
    auto mid = [&](std::uint32_t a, std::uint32_t b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      verts.push_back((verts[a] + verts[b]).normalized());
      const std::uint32_t id = idx(verts.size() - 1);
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<Face> next;
    next.reserve(faces.size() * 4);
    for (const Face& f : faces) {
      const std::uint32_t ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }
  for (Vec3& v : verts) v = center + radius * v;
  return TriangleMesh(std::move(verts), std::move(faces));
}

TriangleMesh box(const Vec3& size, const Vec3& center) {
  const Vec3 h = 0.5 * size;
  std::vector<Vec3> verts;
  for (int i = 0; i < 8; ++i) {
    verts.push_back(center + Vec3((i & 1) ? h.x() : -h.x(), (i & 2) ? h.y() : -h.y(),
                                  (i & 4) ? h.z() : -h.z()));
  }
  // outward winding, two triangles per side
  std::vector<Face> faces = {
      {0, 2, 3}, {0, 3, 1},  // -z
      {4, 5, 7}, {4, 7, 6},  // +z
      {0, 1, 5}, {0, 5, 4},  // -y
      {2, 6, 7}, {2, 7, 3},  // +y
      {0, 4, 6}, {0, 6, 2},  // -x
      {1, 3, 7}, {1, 7, 5},  // +x
  };
  return TriangleMesh(std::move(verts), std::move(faces));
}

namespace {

// Solid of revolution about +Y from a closed profile of (radius, y) pairs;
// zero-radius profile points collapse to a single pole vertex.
TriangleMesh revolve(int segments, const std::vector<std::pair<double, double>>& profile) {
  std::vector<Vec3> verts;
  std::vector<std::vector<std::uint32_t>> rings;
  for (const auto& [r, y] : profile) {
    std::vector<std::uint32_t> ring;
    if (r == 0.0) {
      verts.emplace_back(0.0, y, 0.0);
      ring.assign(static_cast<std::size_t>(segments), idx(verts.size() - 1));
    } else {
      for (int s = 0; s < segments; ++s) {
        const double a = 2.0 * kPi * s / segments;
        verts.emplace_back(r * std::cos(a), y, r * std::sin(a));
        ring.push_back(idx(verts.size() - 1));
      }
    }
    rings.push_back(std::move(ring));
  }
  std::vector<Face> faces;
  for (std::size_t k = 0; k + 1 < rings.size(); ++k) {
    const auto& lo = rings[k];
    const auto& hi = rings[k + 1];
    for (int s = 0; s < segments; ++s) {
      const std::size_t s1 = static_cast<std::size_t>((s + 1) % segments);
      const std::size_t s0 = static_cast<std::size_t>(s);
      if (lo[s0] != lo[s1]) faces.push_back({lo[s0], hi[s0], lo[s1]});
      if (hi[s0] != hi[s1]) faces.push_back({lo[s1], hi[s0], hi[s1]});
    }
  }
  return orient_outward(std::move(verts), std::move(faces));
}

}  // namespace

TriangleMesh cylinder(int segments, double radius, double height) {
  const double h = 0.5 * height;
  return revolve(segments, {{0.0, -h}, {radius, -h}, {radius, h}, {0.0, h}});
}

TriangleMesh cone(int segments, double radius, double height) {
  const double h = 0.5 * height;
  return revolve(segments, {{0.0, -h}, {radius, -h}, {0.0, h}});
}

TriangleMesh torus(int major_segments, int minor_segments, double major_radius, double minor_radius) {
  std::vector<Vec3> verts;
  for (int i = 0; i < major_segments; ++i) {
    const double u = 2.0 * kPi * i / major_segments;
    for (int j = 0; j < minor_segments; ++j) {
      const double v = 2.0 * kPi * j / minor_segments;
      const double r = major_radius + minor_radius * std::cos(v);
      verts.emplace_back(r * std::cos(u), minor_radius * std::sin(v), r * std::sin(u));
    }
  }
  auto at = [&](int i, int j) {
    return idx(static_cast<std::size_t>((i % major_segments) * minor_segments + (j % minor_segments)));
  };
  std::vector<Face> faces;
  for (int i = 0; i < major_segments; ++i) {
    for (int j = 0; j < minor_segments; ++j) {
      faces.push_back({at(i, j), at(i, j + 1), at(i + 1, j)});
      faces.push_back({at(i + 1, j), at(i, j + 1), at(i + 1, j + 1)});
    }
  }
  // A torus encloses positive volume, so the global flip is still meaningful.
  return orient_outward(std::move(verts), std::move(faces));
}

TriangleMesh tetrahedron() {
  std::vector<Vec3> verts = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  for (Vec3& v : verts) v /= std::sqrt(3.0);
  return orient_outward(std::move(verts), {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}});
}

TriangleMesh octahedron() {
  std::vector<Vec3> verts = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  std::vector<Face> faces = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                             {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  return orient_outward(std::move(verts), std::move(faces));
}

TriangleMesh square(double side) {
  return TriangleMesh({{0, 0, 0}, {side, 0, 0}, {side, side, 0}, {0, side, 0}}, {{0, 1, 2}, {0, 2, 3}});
}

TriangleMesh merge(const std::vector<TriangleMesh>& parts) {
  std::vector<Vec3> verts;
  std::vector<Face> faces;
  for (const TriangleMesh& m : parts) {
    const std::uint32_t base = idx(verts.size());
    verts.insert(verts.end(), m.vertices().begin(), m.vertices().end());
    for (const Face& f : m.faces()) faces.push_back({f[0] + base, f[1] + base, f[2] + base});
  }
  return TriangleMesh(std::move(verts), std::move(faces));
}

namespace {

TriangleMesh scaled(const TriangleMesh& m, const Vec3& s) {
  std::vector<Vec3> verts;
  for (const Vec3& v : m.vertices()) verts.push_back(v.cwiseProduct(s));
  return TriangleMesh(std::move(verts), m.faces());
}

TriangleMesh shifted(const TriangleMesh& m, const Vec3& d) { return transform_mesh(m, 1.0, d); }

}  // namespace

std::vector<NamedMesh> corpus() {
  std::vector<NamedMesh> out;
  out.push_back({"sphere", icosphere(4, 0.5)});
  out.push_back({"sphere_coarse", icosphere(1, 0.5)});
  out.push_back({"cube", box({1, 1, 1})});
  out.push_back({"box_long", box({1, 0.5, 0.5})});
  out.push_back({"box_slab", box({1, 1, 0.25})});
  out.push_back({"box_skew", box({1, 0.3, 0.6})});
  out.push_back({"cylinder", cylinder(48, 0.5, 1.0)});
  out.push_back({"cylinder_tall", cylinder(32, 0.25, 1.0)});
  out.push_back({"cylinder_disc", cylinder(48, 0.5, 0.3)});
  out.push_back({"cone", cone(48, 0.5, 1.0)});
  out.push_back({"cone_flat", cone(48, 0.5, 0.4)});
  out.push_back({"torus", torus(48, 24, 0.35, 0.15)});
  out.push_back({"torus_thin", torus(64, 16, 0.3, 0.1)});
  out.push_back({"tetrahedron", tetrahedron()});
  out.push_back({"octahedron", octahedron()});
  out.push_back({"ellipsoid", scaled(icosphere(3, 0.5), {1.0, 0.6, 0.4})});
  out.push_back({"ellipsoid_flat", scaled(icosphere(3, 0.5), {1.0, 1.0, 0.3})});
  out.push_back({"two_boxes", merge({box({0.4, 0.4, 0.4}, {-0.3, 0, 0}), box({0.4, 0.4, 0.4}, {0.3, 0, 0})})});
  out.push_back({"capsule", merge({cylinder(32, 0.2, 0.6), shifted(icosphere(3, 0.2), {0, 0.3, 0}),
                                   shifted(icosphere(3, 0.2), {0, -0.3, 0})})});
  out.push_back({"l_shape", merge({box({1.0, 0.3, 0.3}, {0, -0.35, 0}), box({0.3, 1.0, 0.3}, {-0.35, 0, 0})})});
  return out;
}

}  // namespace shapemetric::primitives
