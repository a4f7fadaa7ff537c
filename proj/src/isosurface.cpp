// SPDX-License-Identifier: Apache-2.0
#include "shapemetric/isosurface.hpp"

#include <array>
#include <cmath>
#include <unordered_map>

#include "marching_cubes_tables.hpp"
#include "shapemetric/error.hpp"
#include "shapemetric/parallel.hpp"

namespace shapemetric {

namespace {

constexpr std::array<std::array<int, 3>, 8> kCorner = {{
    {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1},
}};

// Cell edge -> (start corner offset, axis); the start is the lower lattice point.
struct EdgeRef {
  int dx, dy, dz, axis;
};
constexpr std::array<EdgeRef, 12> kEdge = {{
    {0, 0, 0, 0}, {1, 0, 0, 1}, {0, 1, 0, 0}, {0, 0, 0, 1},
    {0, 0, 1, 0}, {1, 0, 1, 1}, {0, 1, 1, 0}, {0, 0, 1, 1},
    {0, 0, 0, 2}, {1, 0, 0, 2}, {1, 1, 0, 2}, {0, 1, 0, 2},
}};

using EdgeKey = std::uint64_t;  // lattice index * 3 + axis

}  // namespace

TriangleMesh marching_cubes(const SdfGrid& grid, double iso) {
  const int r = grid.resolution;
  if (r < kMinGridResolution || grid.values.size() != static_cast<std::size_t>(r) * r * r) {
    throw Error(ErrorKind::InvalidArgument, "grid resolution and value count disagree");
  }
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    if (!std::isfinite(grid.values[i])) {
      throw Error(ErrorKind::Data, "grid value " + std::to_string(i) + " is not finite");
    }
  }

  // Triangles per z-slab as edge-key triples.
  const int cells = r - 1;
  std::vector<std::vector<std::array<EdgeKey, 3>>> slabs(static_cast<std::size_t>(cells));
  parallel_for(0, static_cast<std::size_t>(cells), [&](std::size_t kk) {
    const int k = static_cast<int>(kk);
    auto& tris = slabs[kk];
    for (int j = 0; j < cells; ++j) {
      for (int i = 0; i < cells; ++i) {
        int cube = 0;
        for (int c = 0; c < 8; ++c) {
          if (grid.at(i + kCorner[c][0], j + kCorner[c][1], k + kCorner[c][2]) < iso) cube |= 1 << c;
        }
        if (detail::kEdgeMask[cube] == 0) continue;
        const auto* row = detail::kTriangleTable[cube];
        for (int t = 0; row[t] != -1; t += 3) {
          std::array<EdgeKey, 3> tri{};
          for (int v = 0; v < 3; ++v) {
            const EdgeRef& e = kEdge[static_cast<std::size_t>(row[t + v])];
            tri[v] = static_cast<EdgeKey>(grid.index(i + e.dx, j + e.dy, k + e.dz)) * 3 + static_cast<EdgeKey>(e.axis);
          }
          // The table winds triangles with normals toward the below-iso side.
          std::swap(tri[1], tri[2]);
          tris.push_back(tri);
        }
      }
    }
  }, 1);

  std::unordered_map<EdgeKey, std::uint32_t> vertex_of;
  std::vector<Vec3> verts;
  std::vector<Face> faces;
  const auto rr = static_cast<EdgeKey>(r);
  auto vertex_for = [&](EdgeKey key) {
    auto [it, inserted] = vertex_of.try_emplace(key, static_cast<std::uint32_t>(verts.size()));
    if (inserted) {
      const auto axis = static_cast<int>(key % 3);
      const EdgeKey lattice = key / 3;
      const int i = static_cast<int>(lattice % rr);
      const int j = static_cast<int>((lattice / rr) % rr);
      const int k = static_cast<int>(lattice / (rr * rr));
      const int i1 = i + (axis == 0), j1 = j + (axis == 1), k1 = k + (axis == 2);
      const double v0 = grid.at(i, j, k), v1 = grid.at(i1, j1, k1);
      const Vec3 p0 = grid.point(i, j, k), p1 = grid.point(i1, j1, k1);
      const double t = (iso - v0) / (v1 - v0);
      verts.push_back(p0 + t * (p1 - p0));
    }
    return it->second;
  };
  for (const auto& slab : slabs) {
    for (const auto& tri : slab) faces.push_back({vertex_for(tri[0]), vertex_for(tri[1]), vertex_for(tri[2])});
  }
  return TriangleMesh(std::move(verts), std::move(faces));
}

}  // namespace shapemetric
