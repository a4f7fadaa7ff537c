// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "oracles.hpp"
#include "shapemetric/error.hpp"
#include "shapemetric/metrics.hpp"
#include "shapemetric/nn_index.hpp"
#include "shapemetric/primitives.hpp"
#include "shapemetric/sdf.hpp"

using namespace shapemetric;

namespace {

SurfacePointSet points(std::vector<Vec3> pos, std::vector<Vec3> normals = {}) {
  SurfacePointSet s;
  if (normals.empty()) normals.assign(pos.size(), Vec3::UnitZ());
  s.positions = std::move(pos);
  s.normals = std::move(normals);
  s.face_ids.assign(s.positions.size(), 0);
  return s;
}

}  // namespace

TEST_CASE("kd-tree agrees with a linear scan, ties included") {
  auto pts = oracle::random_points(10000, -1, 1, 1);
  // exact duplicates and a lattice make ties common
  for (int i = 0; i < 500; ++i) pts.push_back(pts[static_cast<std::size_t>(i) * 7]);
  for (int x = 0; x < 10; ++x)
    for (int y = 0; y < 10; ++y) pts.emplace_back(0.1 * x, 0.1 * y, 0.0);
  const NnIndex index(pts);
  auto queries = oracle::random_points(1000, -1.1, 1.1, 2);
  for (int x = 0; x < 10; ++x) queries.emplace_back(0.1 * x + 0.05, 0.05, 0.0);  // equidistant to 4 lattice points
  for (int i = 0; i < 20; ++i) queries.push_back(pts[static_cast<std::size_t>(i) * 7]);
  const auto all = index.nearest_all(queries);
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const std::uint32_t ref = oracle::nearest_index(pts, queries[q]);
    CHECK(all[q].index == ref);
    CHECK(all[q].distance2 == (pts[ref] - queries[q]).squaredNorm());
    CHECK(index.nearest(queries[q]).index == ref);
  }
}

TEST_CASE("chamfer, normal consistency and F-score on constructed sets") {
  const SurfacePointSet a = points({Vec3(0, 0, 0), Vec3(1, 0, 0)}, {Vec3::UnitZ(), Vec3::UnitX()});
  const SurfacePointSet b = points({Vec3(0, 0, 0.003), Vec3(1, 0, 0.02), Vec3(5, 0, 0)},
                                   {-Vec3::UnitZ(), Vec3::UnitY(), Vec3::UnitZ()});
  // forward: 0.003, 0.02; backward: 0.003, 0.02, 4
  CHECK(chamfer(a, b) == doctest::Approx((0.003 + 0.02) / 2 + (0.003 + 0.02 + 4.0) / 3));
  // forward |cos|: 1, 0; backward: 1, 0, |<z, x>| = 0
  CHECK(normal_consistency(a, b) == doctest::Approx(0.5 * 0.5 + 0.5 * (1.0 / 3)));
  const FScore f1 = fscore(a, b, 1.0);
  CHECK(f1.precision == doctest::Approx(0.5));
  CHECK(f1.recall == doctest::Approx(1.0 / 3));
  CHECK(f1.fs == doctest::Approx(2 * 0.5 * (1.0 / 3) / (0.5 + 1.0 / 3)));
  const FScore f2 = fscore(a, b, 2.0);  // threshold inclusive
  CHECK(f2.precision == 1.0);
  const FScore none = fscore(points({Vec3(0, 0, 0)}), points({Vec3(1, 0, 0)}), 1.0);
  CHECK(none.fs == 0.0);
  CHECK_THROWS_AS(fscore(a, b, 0.0), Error);
  CHECK_THROWS_AS(chamfer(a, SurfacePointSet()), Error);
}

TEST_CASE("metric symmetries, scaling and threshold monotonicity") {
  const TriangleMesh m1 = primitives::icosphere(3, 0.5);
  const TriangleMesh m2 = primitives::box(Vec3(0.8, 0.9, 0.7));
  const SurfacePointSet s1 = sample_surface(m1, 5000, 1);
  const SurfacePointSet s2 = sample_surface(m2, 6000, 2);
  CHECK(chamfer(s1, s2) == doctest::Approx(chamfer(s2, s1)).epsilon(1e-14));
  CHECK(normal_consistency(s1, s2) == doctest::Approx(normal_consistency(s2, s1)).epsilon(1e-14));
  const FScore f12 = fscore(s1, s2, 1.0), f21 = fscore(s2, s1, 1.0);
  CHECK(f12.precision == f21.recall);
  CHECK(f12.recall == f21.precision);

  const double s = 3.0;
  SurfacePointSet t1 = s1, t2 = s2;
  for (auto& p : t1.positions) p *= s;
  for (auto& p : t2.positions) p *= s;
  CHECK(chamfer(t1, t2) == doctest::Approx(s * chamfer(s1, s2)).epsilon(1e-12));
  CHECK(fscore(t1, t2, 2.0 * s).fs == fscore(s1, s2, 2.0).fs);

  const PairMatch match = match_pair(s1, s2);
  double prev = -1.0;
  for (double d = 0.25; d <= 20.0; d *= 1.5) {
    const double f = fscore(match, d).fs;
    CHECK(f >= prev);
    prev = f;
  }
}

TEST_CASE("joint rigid motion leaves metrics unchanged") {
  const TriangleMesh m1 = primitives::torus(24, 12, 0.3, 0.1);
  const TriangleMesh m2 = primitives::icosphere(3, 0.4);
  RigidPose pose = pose_from_angles(73.0, -21.0);
  pose.rotation = pose.rotation * sample_uniform_rotation(5);
  const Vec3 shift(0.3, -0.2, 0.7);
  auto move = [&](const TriangleMesh& m) {
    std::vector<Vec3> v;
    for (const Vec3& p : m.vertices()) v.push_back(pose.rotation * p + shift);
    return TriangleMesh(v, m.faces());
  };
  const std::vector<double> fs = {0.5, 1.0, 2.0};
  const MetricReport a = evaluate_samples(sample_surface(m1, 20000, 7), sample_surface(m2, 20000, 8), fs);
  const MetricReport b = evaluate_samples(sample_surface(move(m1), 20000, 7), sample_surface(move(m2), 20000, 8), fs);
  CHECK(std::abs(*a.cd - *b.cd) < 1e-6);
  CHECK(std::abs(*a.nc - *b.nc) < 1e-6);
  for (double d : fs) CHECK(std::abs(*a.fs_at(d) - *b.fs_at(d)) < 1e-6);
}

TEST_CASE("concentric spheres: chamfer is the radius gap") {
  const auto a = sample_surface(primitives::icosphere(5, 0.3), 100000, 21);
  const auto b = sample_surface(primitives::icosphere(5, 0.4), 100000, 22);
  CHECK(std::abs(chamfer(a, b) - 0.2) <= 0.003);
}

TEST_CASE("point IoU") {
  const std::vector<Vec3> pos = {Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  const OccupancySet a{pos, {true, true, false, false}};
  CHECK(iou_points(a, a) == 1.0);
  CHECK(iou_points(a, OccupancySet{pos, {false, false, true, true}}) == 0.0);
  CHECK(iou_points(a, OccupancySet{pos, {true, false, true, false}}) == doctest::Approx(1.0 / 3));
  CHECK(iou_points(OccupancySet{pos, {false, false, false, false}}, OccupancySet{pos, {false, false, false, false}}) ==
        1.0);
  CHECK_THROWS_AS(iou_points(a, OccupancySet{{Vec3::Zero()}, {true}}), Error);
  std::vector<Vec3> moved = pos;
  moved[0].x() = 1e-9;
  CHECK_THROWS_AS(iou_points(a, OccupancySet{moved, a.occupied}), Error);
}

TEST_CASE("nested cubes: IoU equals the volume ratio") {
  const auto pts = sample_volume_uniform(Vec3::Zero(), 1.0, 1000000, 12);
  const SignedDistanceField outer(primitives::box(Vec3::Constant(1.0)));
  const SignedDistanceField inner(primitives::box(Vec3::Constant(0.5)));
  const OccupancySet o{pts, occupancy_from_sdf(outer.evaluate(pts), 0.0)};
  const OccupancySet i{pts, occupancy_from_sdf(inner.evaluate(pts), 0.0)};
  CHECK(std::abs(iou_points(i, o) - 0.125) <= 0.002);
}

TEST_CASE("self comparison of a sphere") {
  const TriangleMesh s = primitives::icosphere(5, 0.5);
  EvalConfig cfg;
  const MetricReport r = evaluate_pair(s, s, cfg);
  REQUIRE(r.fs.size() == 3);
  CHECK(r.fs.count(0.5) == 1);
  CHECK(r.fs.count(1.0) == 1);
  CHECK(r.fs.count(2.0) == 1);
  CHECK(*r.fs_at(1.0) >= 0.99);
  CHECK(*r.nc >= 0.99);
  CHECK(*r.iou >= 0.98);
  CHECK(r.n_pred_points == 100000);
  CHECK(r.n_gt_points == 300000);
  // Sampling floor at 100K/300K on a sphere of area pi: 1/(2 sqrt(lambda)) per direction.
  const double floor = oracle::poisson_mean_nn(300000 / oracle::kPi) + oracle::poisson_mean_nn(100000 / oracle::kPi);
  CHECK(*r.cd == doctest::Approx(floor).epsilon(0.03));

  EvalConfig dense = cfg;
  dense.n_pred = dense.n_gt = 1000000;
  dense.compute_iou = false;
  CHECK(*evaluate_pair(s, s, dense).cd <= 0.002);
}

TEST_CASE("empty and degenerate predictions") {
  const TriangleMesh gt = primitives::icosphere(2, 0.5);
  EvalConfig cfg;
  cfg.n_pred = cfg.n_gt = 2000;
  cfg.n_iou = 1000;
  const MetricReport r = evaluate_pair(TriangleMesh(), gt, cfg);
  CHECK(r.empty_prediction);
  CHECK_FALSE(r.cd);
  CHECK_FALSE(r.nc);
  CHECK_FALSE(r.iou);
  CHECK(r.fs.empty());
  const TriangleMesh flat({Vec3::Zero(), Vec3::UnitX(), 2 * Vec3::UnitX()}, {Face{0, 1, 2}});
  CHECK(evaluate_pair(flat, gt, cfg).empty_prediction);
  CHECK_THROWS_AS(evaluate_pair(gt, TriangleMesh(), cfg), Error);
  EvalConfig bad = cfg;
  bad.fs_thresholds = {1.0, -1.0};
  CHECK_THROWS_AS(evaluate_pair(gt, gt, bad), Error);
  bad = cfg;
  bad.n_gt = 0;
  CHECK_THROWS_AS(evaluate_pair(gt, gt, bad), Error);
}

TEST_CASE("normalization modes") {
  const TriangleMesh gt = primitives::box(Vec3(2, 2, 2));
  const TriangleMesh pred = primitives::box(Vec3(1, 1, 1));
  const auto [pi, gi] = normalize_pair(pred, gt, Normalization::Independent);
  CHECK(bounding_box(pi).extent().maxCoeff() == doctest::Approx(1.0));
  const auto [ps, gs] = normalize_pair(pred, gt, Normalization::SharedGt);
  CHECK(bounding_box(ps).extent().maxCoeff() == doctest::Approx(0.5));
  CHECK(bounding_box(gs).extent().maxCoeff() == doctest::Approx(1.0));
  CHECK(parse_normalization("shared_gt") == Normalization::SharedGt);
  CHECK(parse_empty_policy("ZERO") == EmptyPolicy::Zero);
  CHECK_THROWS_AS(parse_empty_policy("worst"), Error);
}
