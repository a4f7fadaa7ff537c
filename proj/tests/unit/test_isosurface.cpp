// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "oracles.hpp"
#include "shapemetric/error.hpp"
#include "shapemetric/isosurface.hpp"
#include "shapemetric/primitives.hpp"
#include "shapemetric/sdf.hpp"

using namespace shapemetric;

namespace {

const Aabb kDomain{Vec3::Constant(-0.5), Vec3::Constant(0.5)};

double signed_volume(const TriangleMesh& m) {
  double v = 0.0;
  for (std::size_t f = 0; f < m.face_count(); ++f) {
    const auto c = m.corners(f);
    v += c[0].dot(c[1].cross(c[2])) / 6.0;
  }
  return v;
}

}  // namespace

TEST_CASE("sphere field gives a closed outward mesh on the iso surface") {
  const SdfGrid g = sample_grid([](const Vec3& p) { return p.norm() - 0.35; }, 48, kDomain);
  const TriangleMesh m = marching_cubes(g, 0.0);
  REQUIRE(m.face_count() > 0);
  CHECK(m.is_watertight());
  CHECK(signed_volume(m) == doctest::Approx(4.0 / 3.0 * oracle::kPi * 0.35 * 0.35 * 0.35).epsilon(0.01));
  double worst = 0.0;
  for (const Vec3& v : m.vertices()) worst = std::max(worst, std::abs(v.norm() - 0.35));
  // linear interpolation along an edge of length h misses a curved level set by O(h^2 / r)
  const double h = 1.0 / 47;
  CHECK(worst < h * h / 0.35);
}

TEST_CASE("normals point toward increasing field values") {
  // plane z = 0.12 with the field increasing in +z
  const SdfGrid g = sample_grid([](const Vec3& p) { return p.z() - 0.12; }, 16, kDomain);
  const TriangleMesh m = marching_cubes(g, 0.0);
  REQUIRE(m.face_count() > 0);
  for (const Vec3& v : m.vertices()) CHECK(v.z() == doctest::Approx(0.12).epsilon(1e-12));
  for (std::size_t f = 0; f < m.face_count(); ++f) CHECK(m.face_normals()[f].z() == doctest::Approx(1.0));
  CHECK(m.surface_area() == doctest::Approx(1.0).epsilon(1e-12));

  const SdfGrid flipped = sample_grid([](const Vec3& p) { return 0.12 - p.z(); }, 16, kDomain);
  const TriangleMesh mf = marching_cubes(flipped, 0.0);
  for (std::size_t f = 0; f < mf.face_count(); ++f) CHECK(mf.face_normals()[f].z() == doctest::Approx(-1.0));
}

TEST_CASE("iso level shifts the surface") {
  const SdfGrid g = sample_grid([](const Vec3& p) { return p.norm() - 0.2; }, 40, kDomain);
  const TriangleMesh m = marching_cubes(g, 0.1);
  double mean = 0.0;
  for (const Vec3& v : m.vertices()) mean += v.norm();
  mean /= static_cast<double>(m.vertex_count());
  CHECK(mean == doctest::Approx(0.3).epsilon(0.01));
}

TEST_CASE("mesh SDF round trip through the grid") {
  const TriangleMesh src = normalize_to_unit_cube(primitives::torus(32, 16, 0.3, 0.12)).mesh;
  const SdfGrid g = evaluate_grid(src, 40, Aabb{Vec3::Constant(-0.6), Vec3::Constant(0.6)});
  const TriangleMesh m = marching_cubes(g, 0.0);
  CHECK(m.is_watertight());
  const SignedDistanceField f(src);
  double worst = 0.0;
  for (const Vec3& v : m.vertices()) worst = std::max(worst, std::abs(f(v)));
  CHECK(worst < g.cell_size().x());
}

TEST_CASE("empty and invalid grids") {
  const SdfGrid pos = sample_grid([](const Vec3&) { return 1.0; }, 8, kDomain);
  CHECK(marching_cubes(pos, 0.0).empty());
  SdfGrid bad = pos;
  bad.values[5] = std::numeric_limits<double>::quiet_NaN();
  try {
    marching_cubes(bad, 0.0);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Data);
  }
}

TEST_CASE("extraction is deterministic") {
  const SdfGrid g = sample_grid([](const Vec3& p) { return std::abs(p.x()) + std::abs(p.y()) + p.z() * p.z() - 0.3; },
                                33, kDomain);
  const TriangleMesh a = marching_cubes(g, 0.0);
  const TriangleMesh b = marching_cubes(g, 0.0);
  CHECK(a.vertices() == b.vertices());
  CHECK(a.faces() == b.faces());
}
