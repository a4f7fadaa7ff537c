// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "shapemetric/mesh.hpp"

namespace shapemetric::primitives {

// All closed primitives are watertight with outward-facing normals.

/// Subdivided icosahedron projected to a sphere: 10*4^k+2 vertices, 20*4^k faces.
TriangleMesh icosphere(int subdivisions, double radius = 1.0, const Vec3& center = Vec3::Zero());
TriangleMesh box(const Vec3& size, const Vec3& center = Vec3::Zero());
TriangleMesh cylinder(int segments, double radius, double height);
TriangleMesh cone(int segments, double radius, double height);
TriangleMesh torus(int major_segments, int minor_segments, double major_radius, double minor_radius);
/// Regular tetrahedron with unit circumradius.
TriangleMesh tetrahedron();
TriangleMesh octahedron();

/// Open square in the z = 0 plane spanning [0, side]^2, two triangles, normal +Z.
TriangleMesh square(double side = 1.0);

/// Union of meshes as one soup (no welding).
TriangleMesh merge(const std::vector<TriangleMesh>& parts);

struct NamedMesh {
  std::string id;
  TriangleMesh mesh;
};

/// The bundled 20-shape corpus used for sampling-floor checks.
std::vector<NamedMesh> corpus();

}  // namespace shapemetric::primitives
