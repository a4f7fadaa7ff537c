// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "shapemetric/error.hpp"
#include "shapemetric/floor_analysis.hpp"

using namespace shapemetric;

namespace {

const FloorCurve& curve(const FloorResult& r, const std::string& label) {
  for (const auto& c : r.curves) {
    if (c.label() == label) return c;
  }
  FAIL("missing curve " << label);
  return r.curves.front();
}

std::vector<primitives::NamedMesh> small_set() {
  return {{"sphere", primitives::icosphere(4, 0.5)},
          {"cube", primitives::box(Vec3::Ones())},
          {"torus", primitives::torus(32, 16, 0.35, 0.15)}};
}

}  // namespace

TEST_CASE("sphere floor follows the Poisson nearest-neighbour law") {
  FloorOptions opt;
  opt.counts = {10000};
  opt.fs_thresholds = {1.0};
  opt.reps = 3;
  const FloorResult r = sampling_floor({{"sphere", primitives::icosphere(5, 0.5)}}, opt);
  const double lambda = 10000 / oracle::kPi;
  // FS@1 means a distance of 0.01 in unit-cube units
  const double within = oracle::poisson_within(lambda, 0.01);
  CHECK(curve(r, "fs@1").mean[0] == doctest::Approx(within).epsilon(0.015));
  CHECK(curve(r, "cd").mean[0] == doctest::Approx(2 * oracle::poisson_mean_nn(lambda)).epsilon(0.02));
  CHECK(curve(r, "nc").mean[0] > 0.99);
}

TEST_CASE("curve structure, ordering and determinism") {
  FloorOptions opt;
  opt.counts = {2000, 8000};
  opt.fs_thresholds = {0.5, 1.0, 2.0};
  opt.rng_seed = 11;
  const FloorResult r = sampling_floor(small_set(), opt);
  REQUIRE(r.curves.size() == 5);
  CHECK(r.curves[0].label() == "cd");
  CHECK(r.curves[1].label() == "nc");
  CHECK(r.curves[2].label() == "fs@0.5");
  CHECK(r.failures.empty());
  for (const auto& c : r.curves) {
    REQUIRE(c.mean.size() == 2);
    CHECK(c.mesh_ids.size() == 3);
    for (std::size_t k = 0; k < 2; ++k) {
      const auto& v = c.per_mesh[k];
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= 3.0;
      CHECK(c.mean[k] == doctest::Approx(mean).epsilon(1e-12));
      const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      if (c.metric == FloorMetric::CD) {
        CHECK(c.worst[k] == *hi);
        CHECK(c.worst[k] >= c.mean[k]);
      } else {
        CHECK(c.worst[k] == *lo);
        CHECK(c.worst[k] <= c.mean[k]);
      }
      CHECK(c.std[k] >= 0.0);
    }
  }
  // larger threshold never scores lower on the same draws
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t m = 0; m < 3; ++m) {
      CHECK(curve(r, "fs@0.5").per_mesh[k][m] <= curve(r, "fs@1").per_mesh[k][m]);
      CHECK(curve(r, "fs@1").per_mesh[k][m] <= curve(r, "fs@2").per_mesh[k][m]);
    }
  }
  // denser sampling lowers the chamfer floor
  CHECK(curve(r, "cd").mean[1] < curve(r, "cd").mean[0]);

  const FloorResult again = sampling_floor(small_set(), opt);
  for (std::size_t i = 0; i < r.curves.size(); ++i) CHECK(again.curves[i].per_mesh == r.curves[i].per_mesh);
}

TEST_CASE("corpus FS@1 floor rises with the sample count") {
  FloorOptions opt;
  opt.counts = {10000, 30000, 100000};
  opt.fs_thresholds = {1.0};
  const FloorResult r = sampling_floor(primitives::corpus(), opt);
  const FloorCurve& fs = curve(r, "fs@1");
  CHECK(fs.mesh_ids.size() == 20);
  CHECK(fs.mean[0] < fs.mean[1]);
  CHECK(fs.mean[1] < fs.mean[2]);
}

TEST_CASE("unusable meshes are recorded, bad options rejected") {
  auto meshes = small_set();
  meshes.push_back({"empty", TriangleMesh()});
  FloorOptions opt;
  opt.counts = {500};
  opt.fs_thresholds = {1.0};
  const FloorResult r = sampling_floor(meshes, opt);
  REQUIRE(r.failures.size() == 1);
  CHECK(r.failures[0].mesh_id == "empty");
  CHECK(r.curves[0].mesh_ids.size() == 3);

  FloorOptions bad = opt;
  bad.counts = {50};
  CHECK_THROWS_AS(sampling_floor(meshes, bad), Error);
  bad = opt;
  bad.fs_thresholds = {};
  CHECK_THROWS_AS(sampling_floor(meshes, bad), Error);
  bad = opt;
  bad.reps = 0;
  CHECK_THROWS_AS(sampling_floor(meshes, bad), Error);
  CHECK_THROWS_AS(sampling_floor({{"empty", TriangleMesh()}}, opt), Error);
}

TEST_CASE("CSV and SVG outputs") {
  FloorOptions opt;
  opt.counts = {500, 1000};
  opt.fs_thresholds = {1.0};
  const FloorResult r = sampling_floor(small_set(), opt);
  const std::string csv = format_floor_csv(r.curves[0]);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "count,mean,std,worst,worst_mesh_id");
  std::getline(in, line);
  CHECK(line.rfind("500,", 0) == 0);
  const std::string svg = format_floor_svg(r.curves);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);

  const auto dir = oracle::temp_dir("floor_out");
  const auto written = write_floor_outputs(r, dir / "floor");
  CHECK(written.size() == 4);
  CHECK(std::filesystem::exists(dir / "floor_fs_1.csv"));
  CHECK(std::filesystem::exists(dir / "floor.svg"));
}
