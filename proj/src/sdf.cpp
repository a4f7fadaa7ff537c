// SPDX-License-Identifier: Apache-2.0
#include "shapemetric/sdf.hpp"

#include <cmath>
#include <random>

#include "shapemetric/binary_io.hpp"
#include "shapemetric/error.hpp"
#include "shapemetric/parallel.hpp"
#include "shapemetric/rng.hpp"
#include "shapemetric/surface_sampler.hpp"

namespace shapemetric {

SignedDistanceField::SignedDistanceField(const TriangleMesh& mesh) : bvh_(mesh) {
  if (mesh.empty()) throw Error(ErrorKind::EmptyGeometry, "signed distance to an empty mesh");
}

double SignedDistanceField::unsigned_distance(const Vec3& p) const { return bvh_.closest(p).distance; }

double SignedDistanceField::operator()(const Vec3& p) const {
  const double d = unsigned_distance(p);
  return inside(p) ? -d : d;
}

std::vector<double> SignedDistanceField::evaluate(const std::vector<Vec3>& points) const {
  std::vector<double> out(points.size());
  parallel_for(0, points.size(), [&](std::size_t i) { out[i] = (*this)(points[i]); }, 64);
  return out;
}

std::vector<double> signed_distance(const TriangleMesh& mesh, const std::vector<Vec3>& points) {
  if (mesh.empty()) throw Error(ErrorKind::EmptyGeometry, "signed distance to an empty mesh");
  const Aabb box = bounding_box(mesh);
  constexpr double kSlack = 0.5 + 1e-6;
  if ((box.min.array() < -kSlack).any() || (box.max.array() > kSlack).any()) {
    throw Error(ErrorKind::InvalidArgument,
                "mesh is not normalized to the unit cube; call normalize_to_unit_cube first");
  }
  return SignedDistanceField(mesh).evaluate(points);
}

BucketCounts bucket_counts(std::size_t n, const TrainingSampleConfig& cfg) {
  BucketCounts c;
  c.near = static_cast<std::size_t>(std::llround(cfg.near_fraction * static_cast<double>(n)));
  c.mid = static_cast<std::size_t>(std::llround(cfg.mid_fraction * static_cast<double>(n)));
  if (c.near + c.mid > n) throw Error(ErrorKind::InvalidArgument, "bucket fractions exceed 1");
  c.volume = n - c.near - c.mid;
  return c;
}

namespace {

constexpr std::size_t kChunk = 2048;
constexpr int kMaxRounds = 64;

void fill_band(const SignedDistanceField& field, const TriangleMesh& mesh, std::size_t wanted, double band,
               std::uint64_t seed, SampleBucket tag, SdfSampleSet& out) {
  const double sigma = 0.5 * band;
  std::size_t have = 0;
  for (int round = 0; have < wanted; ++round) {
    if (round == kMaxRounds) {
      throw Error(ErrorKind::DegenerateGeometry, "near-surface rejection sampling did not converge");
    }
    const std::size_t remaining = wanted - have;
    const std::size_t batch = std::max<std::size_t>(64, remaining + remaining / 2);
    const std::uint64_t round_seed = derive_seed(seed, {static_cast<std::uint64_t>(tag), static_cast<std::uint64_t>(round)});
    SurfacePointSet base = sample_surface(mesh, batch, round_seed);
    std::vector<double> values(batch);
    const std::size_t chunks = (batch + kChunk - 1) / kChunk;
    parallel_for(0, chunks, [&](std::size_t c) {
      Rng rng(derive_seed(round_seed, {c, 0x6f6666ULL}));
      std::normal_distribution<double> gauss(0.0, sigma);
      const std::size_t end = std::min(batch, (c + 1) * kChunk);
      for (std::size_t i = c * kChunk; i < end; ++i) {
        const double dx = gauss(rng), dy = gauss(rng), dz = gauss(rng);
        base.positions[i] += Vec3(dx, dy, dz);
        values[i] = field(base.positions[i]);
      }
    }, 1);
    for (std::size_t i = 0; i < batch && have < wanted; ++i) {
      if (std::abs(values[i]) > band) continue;
      out.positions.push_back(base.positions[i]);
      out.sdf_values.push_back(values[i]);
      out.buckets.push_back(tag);
      ++have;
    }
  }
}

}  // namespace

SdfSampleSet generate_training_samples(const SignedDistanceField& field, const TriangleMesh& mesh,
                                       std::size_t n, std::uint64_t seed, const TrainingSampleConfig& cfg) {
  if (n < 10) throw Error(ErrorKind::InvalidArgument, "training sample count must be at least 10");
  const BucketCounts counts = bucket_counts(n, cfg);
  SdfSampleSet out;
  out.positions.reserve(n);
  out.sdf_values.reserve(n);
  out.buckets.reserve(n);
  fill_band(field, mesh, counts.near, cfg.near_band, seed, SampleBucket::Near003, out);
  fill_band(field, mesh, counts.mid, cfg.mid_band, seed, SampleBucket::Near01, out);

  std::vector<Vec3> volume = sample_volume_uniform(Vec3::Zero(), cfg.volume_side, counts.volume,
                                                   derive_seed(seed, {static_cast<std::uint64_t>(SampleBucket::Volume)}));
  std::vector<double> values = field.evaluate(volume);
  for (std::size_t i = 0; i < volume.size(); ++i) {
    out.positions.push_back(volume[i]);
    out.sdf_values.push_back(values[i]);
    out.buckets.push_back(SampleBucket::Volume);
  }
  return out;
}

SdfSampleSet generate_training_samples(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed,
                                       const TrainingSampleConfig& cfg) {
  if (mesh.empty()) throw Error(ErrorKind::EmptyGeometry, "training samples for an empty mesh");
  return generate_training_samples(SignedDistanceField(mesh), mesh, n, seed, cfg);
}

std::vector<bool> occupancy_from_sdf(const std::vector<double>& sdf_values, double iso) {
  std::vector<bool> out(sdf_values.size());
  for (std::size_t k = 0; k < sdf_values.size(); ++k) out[k] = sdf_values[k] <= iso;
  return out;
}

// ---- grids ------------------------------------------------------------------

Vec3 SdfGrid::point(int i, int j, int k) const {
  const double den = static_cast<double>(resolution - 1);
  const Vec3 t(i / den, j / den, k / den);
  return ((Vec3::Ones() - t).array() * domain.min.array() + t.array() * domain.max.array()).matrix();
}

void validate_grid_request(int resolution, const Aabb& domain) {
  if (resolution < kMinGridResolution || resolution > kMaxGridResolution) {
    throw Error(ErrorKind::InvalidArgument, "grid resolution must be in [2, 512], got " + std::to_string(resolution));
  }
  if (!((domain.max.array() > domain.min.array()).all())) {
    throw Error(ErrorKind::InvalidArgument, "grid domain is degenerate");
  }
}

SdfGrid evaluate_grid(const SignedDistanceField& field, int resolution, const Aabb& domain) {
  validate_grid_request(resolution, domain);
  SdfGrid grid;
  grid.resolution = resolution;
  grid.domain = domain;
  grid.values.resize(static_cast<std::size_t>(resolution) * resolution * resolution);
  parallel_for(0, static_cast<std::size_t>(resolution), [&](std::size_t kk) {
    const int k = static_cast<int>(kk);
    for (int j = 0; j < resolution; ++j)
      for (int i = 0; i < resolution; ++i) grid.values[grid.index(i, j, k)] = field(grid.point(i, j, k));
  }, 1);
  return grid;
}

SdfGrid evaluate_grid(const TriangleMesh& mesh, int resolution, const Aabb& domain) {
  validate_grid_request(resolution, domain);
  return evaluate_grid(SignedDistanceField(mesh), resolution, domain);
}

std::string encode_sdfg(const SdfGrid& grid) {
  std::string out = "SDFG";
  binio::put_u32(out, static_cast<std::uint32_t>(grid.resolution));
  for (int k = 0; k < 3; ++k) binio::put_f64(out, grid.domain.min[k]);
  for (int k = 0; k < 3; ++k) binio::put_f64(out, grid.domain.max[k]);
  out.reserve(out.size() + grid.values.size() * 4);
  for (double v : grid.values) binio::put_f32(out, static_cast<float>(v));
  return out;
}

SdfGrid decode_sdfg(const std::string& bytes) {
  binio::Reader in(bytes, "SDFG stream");
  in.expect_magic("SDFG");
  SdfGrid grid;
  grid.resolution = static_cast<int>(in.u32());
  for (int k = 0; k < 3; ++k) grid.domain.min[k] = in.f64();
  for (int k = 0; k < 3; ++k) grid.domain.max[k] = in.f64();
  if (grid.resolution < kMinGridResolution || grid.resolution > kMaxGridResolution) {
    throw Error(ErrorKind::Format, "SDFG resolution out of range");
  }
  const std::size_t count = static_cast<std::size_t>(grid.resolution) * grid.resolution * grid.resolution;
  if (in.remaining() != count * 4) throw Error(ErrorKind::Format, "SDFG payload size does not match resolution");
  grid.values.resize(count);
  for (double& v : grid.values) v = in.f32();
  return grid;
}

void write_sdfg(const SdfGrid& grid, const std::filesystem::path& path) { binio::write_all(path, encode_sdfg(grid)); }
SdfGrid read_sdfg(const std::filesystem::path& path) { return decode_sdfg(binio::read_all(path)); }

std::string encode_sdfs(const SdfSampleSet& samples) {
  std::string out = "SDFS";
  binio::put_u32(out, static_cast<std::uint32_t>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (int k = 0; k < 3; ++k) binio::put_f32(out, static_cast<float>(samples.positions[i][k]));
    binio::put_f32(out, static_cast<float>(samples.sdf_values[i]));
    binio::put_u8(out, static_cast<std::uint8_t>(samples.buckets[i]));
  }
  return out;
}

SdfSampleSet decode_sdfs(const std::string& bytes) {
  binio::Reader in(bytes, "SDFS stream");
  in.expect_magic("SDFS");
  const std::uint32_t n = in.u32();
  if (in.remaining() != static_cast<std::size_t>(n) * 17) {
    throw Error(ErrorKind::Format, "SDFS payload size does not match count");
  }
  SdfSampleSet out;
  for (std::uint32_t i = 0; i < n; ++i) {
    Vec3 p;
    for (int k = 0; k < 3; ++k) p[k] = in.f32();
    out.positions.push_back(p);
    out.sdf_values.push_back(in.f32());
    const std::uint8_t b = in.u8();
    if (b > 2) throw Error(ErrorKind::Format, "SDFS bucket tag out of range");
    out.buckets.push_back(static_cast<SampleBucket>(b));
  }
  return out;
}

void write_sdfs(const SdfSampleSet& samples, const std::filesystem::path& path) {
  binio::write_all(path, encode_sdfs(samples));
}
SdfSampleSet read_sdfs(const std::filesystem::path& path) { return decode_sdfs(binio::read_all(path)); }

}  // namespace shapemetric
