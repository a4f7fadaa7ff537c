// SPDX-License-Identifier: Apache-2.0
#include "shapemetric/surface_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "shapemetric/binary_io.hpp"
#include "shapemetric/error.hpp"
#include "shapemetric/parallel.hpp"
#include "shapemetric/rng.hpp"

namespace shapemetric {

namespace {

constexpr std::size_t kChunk = 4096;

}  // namespace

SurfacePointSet sample_surface(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed,
                               const SampleOptions& options) {
  if (mesh.empty()) throw Error(ErrorKind::EmptyGeometry, "cannot sample an empty mesh");
  // Inclusive prefix sums; zero-area faces repeat the previous value and are
  // never returned by upper_bound.
  const auto& areas = mesh.face_areas();
  std::vector<double> cdf(areas.size());
  double running = 0.0;
  for (std::size_t f = 0; f < areas.size(); ++f) {
    running += areas[f];
    cdf[f] = running;
  }
  const double total = running;
  if (!(total > 0.0)) throw Error(ErrorKind::DegenerateGeometry, "mesh has zero surface area");

  std::vector<Vec3> vertex_normals;
  if (options.normals == NormalMode::Interpolated) vertex_normals = mesh.vertex_normals();

  SurfacePointSet out;
  out.source_mesh_id = options.mesh_id;
  out.positions.resize(n);
  out.normals.resize(n);
  out.face_ids.resize(n);
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  parallel_for(0, chunks, [&](std::size_t c) {
    Rng rng(derive_seed(seed, {c}));
    const std::size_t end = std::min(n, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      const double u = uniform_open(rng) * total;
      auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      if (it == cdf.end()) it = std::prev(cdf.end());
      auto face = static_cast<std::size_t>(it - cdf.begin());
      while (areas[face] == 0.0) --face;  // only reachable through rounding at the top end
      const double r1 = std::sqrt(uniform_open(rng));
      const double r2 = uniform_open(rng);
      const double wa = 1.0 - r1, wb = r1 * (1.0 - r2), wc = r1 * r2;
      const auto [a, b, c3] = mesh.corners(face);
      out.positions[i] = wa * a + wb * b + wc * c3;
      if (options.normals == NormalMode::Face) {
        out.normals[i] = mesh.face_normals()[face];
      } else {
        const Face& f = mesh.faces()[face];
        Vec3 blended = wa * vertex_normals[f[0]] + wb * vertex_normals[f[1]] + wc * vertex_normals[f[2]];
        const double len = blended.norm();
        out.normals[i] = len > 0.0 ? Vec3(blended / len) : mesh.face_normals()[face];
      }
      out.face_ids[i] = static_cast<std::uint32_t>(face);
    }
  }, 1);
  return out;
}

std::vector<Vec3> sample_volume_uniform(const Vec3& center, double side, std::size_t n,
                                        std::uint64_t seed) {
  if (!(side > 0.0)) throw Error(ErrorKind::InvalidArgument, "cube side must be positive");
  std::vector<Vec3> out(n);
  const Vec3 lo = center - Vec3::Constant(0.5 * side);
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  parallel_for(0, chunks, [&](std::size_t c) {
    Rng rng(derive_seed(seed, {c, 0x766f6cULL}));
    const std::size_t end = std::min(n, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      const double x = uniform_open(rng), y = uniform_open(rng), z = uniform_open(rng);
      out[i] = lo + side * Vec3(x, y, z);
    }
  }, 1);
  return out;
}

SurfacePointSet transform_points(const SurfacePointSet& points, const RigidPose& pose) {
  SurfacePointSet out = points;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.positions[i] = pose.apply(points.positions[i]);
    out.normals[i] = pose.rotation * points.normals[i];
  }
  return out;
}

SurfacePointSet select(const SurfacePointSet& points, const std::vector<bool>& mask, bool keep) {
  if (mask.size() != points.size()) throw Error(ErrorKind::InvalidArgument, "mask length mismatch");
  SurfacePointSet out;
  out.source_mesh_id = points.source_mesh_id;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (mask[i] != keep) continue;
    out.positions.push_back(points.positions[i]);
    out.normals.push_back(points.normals[i]);
    out.face_ids.push_back(points.face_ids[i]);
  }
  return out;
}

std::string encode_spts(const SurfacePointSet& points) {
  std::string out = "SPTS";
  out.reserve(8 + points.size() * 28);
  binio::put_u32(out, static_cast<std::uint32_t>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (int k = 0; k < 3; ++k) binio::put_f32(out, static_cast<float>(points.positions[i][k]));
    for (int k = 0; k < 3; ++k) binio::put_f32(out, static_cast<float>(points.normals[i][k]));
    binio::put_u32(out, points.face_ids[i]);
  }
  return out;
}

SurfacePointSet decode_spts(const std::string& bytes) {
  binio::Reader in(bytes, "SPTS stream");
  in.expect_magic("SPTS");
  const std::uint32_t n = in.u32();
  if (in.remaining() != static_cast<std::size_t>(n) * 28) {
    throw Error(ErrorKind::Format, "SPTS payload size does not match count " + std::to_string(n));
  }
  SurfacePointSet out;
  out.positions.resize(n);
  out.normals.resize(n);
  out.face_ids.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (int k = 0; k < 3; ++k) out.positions[i][k] = in.f32();
    for (int k = 0; k < 3; ++k) out.normals[i][k] = in.f32();
    out.face_ids[i] = in.u32();
  }
  return out;
}

void write_spts(const SurfacePointSet& points, const std::filesystem::path& path) {
  binio::write_all(path, encode_spts(points));
}

SurfacePointSet read_spts(const std::filesystem::path& path) { return decode_spts(binio::read_all(path)); }

void write_xyz(const SurfacePointSet& points, const std::filesystem::path& path) {
  std::string out;
  char buf[192];
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec3& p = points.positions[i];
    const Vec3& q = points.normals[i];
    std::snprintf(buf, sizeof buf, "%.9g %.9g %.9g %.9g %.9g %.9g\n", p.x(), p.y(), p.z(), q.x(), q.y(), q.z());
    out += buf;
  }
  binio::write_all(path, out);
}

const char* to_string(NormalMode mode) { return mode == NormalMode::Face ? "face" : "interpolated"; }

NormalMode parse_normal_mode(const std::string& text) {
  if (text == "face") return NormalMode::Face;
  if (text == "interpolated") return NormalMode::Interpolated;
  throw Error(ErrorKind::InvalidArgument, "unknown normal mode '" + text + "' (face, interpolated)");
}

}  // namespace shapemetric
