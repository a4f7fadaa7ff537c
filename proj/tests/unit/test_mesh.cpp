// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <functional>
#include <set>

#include "oracles.hpp"
#include "shapemetric/binary_io.hpp"
#include "shapemetric/error.hpp"
#include "shapemetric/mesh.hpp"
#include "shapemetric/primitives.hpp"

using namespace shapemetric;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Io;
}

double signed_volume(const TriangleMesh& m) {
  double v = 0.0;
  for (std::size_t f = 0; f < m.face_count(); ++f) {
    const auto c = m.corners(f);
    v += c[0].dot(c[1].cross(c[2])) / 6.0;
  }
  return v;
}

}  // namespace

TEST_CASE("obj parsing handles polygons, index forms and comments") {
  const std::string text =
      "# quad with texture/normal indices\n"
      "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n"
      "vn 0 0 1\n"
      "f 1/1/1 2/2/1 3/3/1 4//1\n"
      "f -4 -3 -1\n";
  LoadReport report;
  const TriangleMesh m = parse_obj(text, &report);
  CHECK(m.vertex_count() == 4);
  CHECK(m.face_count() == 3);
  CHECK(report.polygons_triangulated == 1);
  CHECK(m.faces()[0] == Face{0, 1, 2});
  CHECK(m.faces()[1] == Face{0, 2, 3});
  CHECK(m.faces()[2] == Face{0, 1, 3});
  CHECK(m.surface_area() == doctest::Approx(1.5));
}

TEST_CASE("obj errors carry kind and line") {
  try {
    parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 0\n");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Format);
    CHECK(e.line() == 4);
  }
  try {
    parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 7\n");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Structural);
    CHECK(e.line() == 4);
  }
  CHECK(kind_of([] { parse_obj("v 0 nan 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n"); }) == ErrorKind::Data);
  CHECK(kind_of([] { parse_obj("v 0 zero 0\n"); }) == ErrorKind::Format);
}

TEST_CASE("off parsing tolerates per-face colours") {
  const std::string text = "OFF\n# comment\n4 2 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n3 0 1 2 255 0 0\n4 0 1 2 3\n";
  const TriangleMesh m = parse_off(text);
  CHECK(m.vertex_count() == 4);
  CHECK(m.face_count() == 3);
  CHECK(kind_of([] { parse_off("OFX\n0 0 0\n"); }) == ErrorKind::Format);
  CHECK(kind_of([] { parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 5\n"); }) == ErrorKind::Structural);
  CHECK(kind_of([] { parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n"); }) == ErrorKind::Format);
}

TEST_CASE("mesh text round-trips byte for byte") {
  const TriangleMesh m = primitives::icosphere(2, 0.37, Vec3(0.1, -0.2, 0.05));
  const std::string obj1 = format_obj(m);
  CHECK(format_obj(parse_obj(obj1)) == obj1);
  const std::string off1 = format_off(m);
  CHECK(format_off(parse_off(off1)) == off1);

  const auto dir = oracle::temp_dir("mesh_io");
  save_mesh(m, dir / "a.off");
  const TriangleMesh back = load_mesh(dir / "a.off");
  CHECK(back.face_count() == m.face_count());
  CHECK(kind_of([&] { load_mesh(dir / "missing.obj"); }) == ErrorKind::Io);
  binio::write_all(dir / "bad.obj", "v 1 2\n");
  try {
    load_mesh(dir / "bad.obj");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("bad.obj") != std::string::npos);
  }
}

TEST_CASE("constructor validates indices and coordinates") {
  CHECK(kind_of([] { TriangleMesh({Vec3::Zero()}, {Face{0, 0, 1}}); }) == ErrorKind::Structural);
  CHECK(kind_of([] {
          TriangleMesh({Vec3(0, 0, std::numeric_limits<double>::infinity()), Vec3::UnitX(), Vec3::UnitY()},
                       {Face{0, 1, 2}});
        }) == ErrorKind::Data);
  const TriangleMesh degenerate({Vec3::Zero(), Vec3::UnitX(), 2 * Vec3::UnitX()}, {Face{0, 1, 2}});
  CHECK(degenerate.is_degenerate(0));
  CHECK(degenerate.face_normals()[0] == Vec3::Zero());
  CHECK(degenerate.surface_area() == 0.0);
}

TEST_CASE("icosphere counts, area and orientation") {
  const TriangleMesh s3 = primitives::icosphere(3);
  CHECK(s3.vertex_count() == 642);
  CHECK(s3.face_count() == 1280);
  CHECK(s3.is_watertight());
  const TriangleMesh s4 = primitives::icosphere(4, 0.5);
  CHECK(s4.surface_area() == doctest::Approx(oracle::kPi).epsilon(0.01));
  CHECK(signed_volume(s4) == doctest::Approx(4.0 / 3.0 * oracle::kPi * 0.125).epsilon(0.01));
  for (const Vec3& v : s4.vertices()) CHECK(v.norm() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("corpus primitives are closed, outward and distinct") {
  const auto corpus = primitives::corpus();
  REQUIRE(corpus.size() == 20);
  std::set<std::string> ids;
  for (const auto& nm : corpus) {
    INFO(nm.id);
    ids.insert(nm.id);
    CHECK(nm.mesh.surface_area() > 0.0);
    CHECK(signed_volume(nm.mesh) > 0.0);
    CHECK(nm.mesh.is_watertight());
  }
  CHECK(ids.size() == 20);
  const TriangleMesh b = primitives::box(Vec3(1, 2, 3));
  CHECK(signed_volume(b) == doctest::Approx(6.0));
  CHECK(b.surface_area() == doctest::Approx(22.0));
  CHECK_FALSE(primitives::square().is_watertight());
}

TEST_CASE("unit cube normalization") {
  const TriangleMesh m = primitives::box(Vec3(2, 4, 1), Vec3(5, -3, 2));
  const UnitCubeTransform t = normalize_to_unit_cube(m);
  const Aabb bb = bounding_box(t.mesh);
  CHECK(bb.extent().maxCoeff() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(bb.center().norm() < 1e-15);
  CHECK(t.scale == doctest::Approx(0.25));
  for (std::size_t i = 0; i < m.vertex_count(); ++i) {
    CHECK((t.scale * m.vertices()[i] + t.offset - t.mesh.vertices()[i]).norm() < 1e-15);
  }
  // idempotent
  const UnitCubeTransform t2 = normalize_to_unit_cube(t.mesh);
  for (std::size_t i = 0; i < m.vertex_count(); ++i) {
    CHECK((t2.mesh.vertices()[i] - t.mesh.vertices()[i]).norm() < 1e-15);
  }
  CHECK(kind_of([] { normalize_to_unit_cube(TriangleMesh()); }) == ErrorKind::EmptyGeometry);
  CHECK(kind_of([] { normalize_to_unit_cube(TriangleMesh({Vec3::Ones(), Vec3::Ones(), Vec3::Ones()}, {Face{0, 1, 2}})); }) ==
        ErrorKind::DegenerateGeometry);
}

TEST_CASE("submesh keeps the listed faces") {
  const TriangleMesh m = primitives::icosphere(1);
  const TriangleMesh s = submesh(m, {0, 5});
  CHECK(s.face_count() == 2);
  CHECK(s.vertex_count() <= 6);
  CHECK(s.surface_area() == doctest::Approx(m.face_areas()[0] + m.face_areas()[5]));
}
