// SPDX-License-Identifier: Apache-2.0
#include "shapemetric/floor_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shapemetric/binary_io.hpp"
#include "shapemetric/error.hpp"
#include "shapemetric/metrics.hpp"
#include "shapemetric/parallel.hpp"
#include "shapemetric/rng.hpp"
#include "shapemetric/surface_sampler.hpp"
#include "shapemetric/text.hpp"

namespace shapemetric {

const char* to_string(FloorMetric m) {
  switch (m) {
    case FloorMetric::CD: return "cd";
    case FloorMetric::NC: return "nc";
    case FloorMetric::FS: return "fs";
  }
  return "?";
}

std::string FloorCurve::label() const {
  if (metric != FloorMetric::FS) return to_string(metric);
  return "fs@" + format_short(threshold);
}

FloorResult sampling_floor(const std::vector<primitives::NamedMesh>& meshes, const FloorOptions& options) {
  if (options.counts.empty()) throw Error(ErrorKind::InvalidArgument, "no sample counts given");
  for (std::size_t c : options.counts) {
    if (c < 100) throw Error(ErrorKind::InvalidArgument, "sample counts must be at least 100");
  }
  if (options.fs_thresholds.empty()) throw Error(ErrorKind::InvalidArgument, "no F-score thresholds given");
  for (double d : options.fs_thresholds) {
    if (!(d > 0.0)) throw Error(ErrorKind::InvalidArgument, "F-score thresholds must be positive");
  }
  if (options.reps == 0) throw Error(ErrorKind::InvalidArgument, "reps must be positive");

  FloorResult result;
  std::vector<TriangleMesh> usable;
  std::vector<std::string> ids;
  for (const auto& nm : meshes) {
    try {
      if (!has_positive_area(nm.mesh)) throw Error(ErrorKind::DegenerateGeometry, "mesh has no surface area");
      usable.push_back(normalize_to_unit_cube(nm.mesh).mesh);
      ids.push_back(nm.id);
    } catch (const Error& e) {
      result.failures.push_back({nm.id, e.what()});
    }
  }
  if (usable.empty()) throw Error(ErrorKind::InvalidArgument, "no usable meshes for the sampling floor");

  const std::size_t n_curves = 2 + options.fs_thresholds.size();
  const std::size_t n_counts = options.counts.size();
  // values[count][mesh][curve], averaged over reps
  std::vector<std::vector<std::vector<double>>> values(
      n_counts, std::vector<std::vector<double>>(usable.size(), std::vector<double>(n_curves, 0.0)));

  for (std::size_t ci = 0; ci < n_counts; ++ci) {
    const std::size_t n = options.counts[ci];
    parallel_for(0, usable.size(), [&](std::size_t m) {
      auto& out = values[ci][m];
      for (std::size_t rep = 0; rep < options.reps; ++rep) {
        const std::uint64_t base = derive_seed(options.rng_seed, {m, n, rep});
        const SurfacePointSet a = sample_surface(usable[m], n, derive_seed(base, {0}));
        const SurfacePointSet b = sample_surface(usable[m], n, derive_seed(base, {1}));
        const PairMatch match = match_pair(a, b);
        out[0] += chamfer(match);
        out[1] += normal_consistency(match, a, b);
        for (std::size_t t = 0; t < options.fs_thresholds.size(); ++t) {
          out[2 + t] += fscore(match, options.fs_thresholds[t]).fs;
        }
      }
      for (double& v : out) v /= static_cast<double>(options.reps);
    }, 1);
  }

  for (std::size_t k = 0; k < n_curves; ++k) {
    FloorCurve curve;
    curve.metric = k == 0 ? FloorMetric::CD : k == 1 ? FloorMetric::NC : FloorMetric::FS;
    curve.threshold = k >= 2 ? options.fs_thresholds[k - 2] : 0.0;
    curve.sample_counts = options.counts;
    curve.mesh_ids = ids;
    const bool higher_is_worse = curve.metric == FloorMetric::CD;
    for (std::size_t ci = 0; ci < n_counts; ++ci) {
      std::vector<double> col(usable.size());
      for (std::size_t m = 0; m < usable.size(); ++m) col[m] = values[ci][m][k];
      double sum = 0.0;
      for (double v : col) sum += v;
      const double mean = sum / static_cast<double>(col.size());
      double ss = 0.0;
      for (double v : col) ss += (v - mean) * (v - mean);
      std::size_t worst = 0;
      for (std::size_t m = 1; m < col.size(); ++m) {
        if (higher_is_worse ? col[m] > col[worst] : col[m] < col[worst]) worst = m;
      }
      curve.mean.push_back(mean);
      curve.std.push_back(std::sqrt(ss / static_cast<double>(col.size())));
      curve.worst.push_back(col[worst]);
      curve.worst_mesh_ids.push_back(ids[worst]);
      curve.per_mesh.push_back(std::move(col));
    }
    result.curves.push_back(std::move(curve));
  }
  return result;
}

std::string format_floor_csv(const FloorCurve& curve) {
  std::string out = "count,mean,std,worst,worst_mesh_id\n";
  for (std::size_t i = 0; i < curve.sample_counts.size(); ++i) {
    out += std::to_string(curve.sample_counts[i]) + ',' + format_exact(curve.mean[i]) + ',' +
           format_exact(curve.std[i]) + ',' + format_exact(curve.worst[i]) + ',' + curve.worst_mesh_ids[i] + '\n';
  }
  return out;
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

void svg_panel(std::ostringstream& os, const std::vector<const FloorCurve*>& curves, const std::string& title,
               double x0, double y0, double w, double h) {
  double lo_c = 1e300, hi_c = 0.0, lo_v = 1e300, hi_v = -1e300;
  for (const FloorCurve* c : curves) {
    for (std::size_t i = 0; i < c->sample_counts.size(); ++i) {
      lo_c = std::min(lo_c, static_cast<double>(c->sample_counts[i]));
      hi_c = std::max(hi_c, static_cast<double>(c->sample_counts[i]));
      lo_v = std::min({lo_v, c->mean[i] - c->std[i], c->worst[i]});
      hi_v = std::max({hi_v, c->mean[i] + c->std[i], c->worst[i]});
    }
  }
  if (hi_v - lo_v < 1e-12) {
    lo_v -= 0.5;
    hi_v += 0.5;
  }
  const double pad = 0.05 * (hi_v - lo_v);
  lo_v -= pad;
  hi_v += pad;
  const double lx0 = std::log10(lo_c), lx1 = std::log10(hi_c);
  auto px = [&](double c) {
    return lx1 > lx0 ? x0 + 50 + (std::log10(c) - lx0) / (lx1 - lx0) * (w - 70) : x0 + w / 2;
  };
  auto py = [&](double v) { return y0 + h - 30 - (v - lo_v) / (hi_v - lo_v) * (h - 60); };

  os << "<text x=\"" << x0 + w / 2 << "\" y=\"" << y0 + 16 << "\" text-anchor=\"middle\">" << title << "</text>\n";
  os << "<line x1=\"" << x0 + 50 << "\" y1=\"" << y0 + h - 30 << "\" x2=\"" << x0 + w - 20 << "\" y2=\"" << y0 + h - 30
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << x0 + 50 << "\" y1=\"" << y0 + 30 << "\" x2=\"" << x0 + 50 << "\" y2=\"" << y0 + h - 30
     << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = lo_v + (hi_v - lo_v) * t / 4.0;
    os << "<text x=\"" << x0 + 46 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\" font-size=\"10\">"
       << format_short(v) << "</text>\n";
  }
  if (!curves.empty()) {
    for (std::size_t c : curves.front()->sample_counts) {
      os << "<text x=\"" << px(static_cast<double>(c)) << "\" y=\"" << y0 + h - 14
         << "\" text-anchor=\"middle\" font-size=\"10\">" << c << "</text>\n";
    }
  }
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const FloorCurve& c = *curves[k];
    const char* color = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
    std::string mean_pts, worst_pts;
    for (std::size_t i = 0; i < c.sample_counts.size(); ++i) {
      const double x = px(static_cast<double>(c.sample_counts[i]));
      mean_pts += format_short(x) + "," + format_short(py(c.mean[i])) + " ";
      worst_pts += format_short(x) + "," + format_short(py(c.worst[i])) + " ";
      os << "<line x1=\"" << x << "\" y1=\"" << py(c.mean[i] - c.std[i]) << "\" x2=\"" << x << "\" y2=\""
         << py(c.mean[i] + c.std[i]) << "\" stroke=\"" << color << "\"/>\n";
    }
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"" << mean_pts << "\"/>\n";
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-dasharray=\"4,3\" points=\"" << worst_pts
       << "\"/>\n";
    os << "<text x=\"" << x0 + w - 24 << "\" y=\"" << y0 + 40 + 14 * k << "\" text-anchor=\"end\" font-size=\"10\" fill=\""
       << color << "\">" << c.label() << "</text>\n";
  }
}

}  // namespace

std::string format_floor_svg(const std::vector<FloorCurve>& curves) {
  std::vector<const FloorCurve*> cd, nc, fs;
  for (const auto& c : curves) {
    (c.metric == FloorMetric::CD ? cd : c.metric == FloorMetric::NC ? nc : fs).push_back(&c);
  }
  const double w = 360, h = 300;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 3 * w << "\" height=\"" << h
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg_panel(os, cd, "Chamfer distance", 0, 0, w, h);
  svg_panel(os, nc, "Normal consistency", w, 0, w, h);
  svg_panel(os, fs, "F-score", 2 * w, 0, w, h);
  os << "</svg>\n";
  return os.str();
}

std::vector<std::filesystem::path> write_floor_outputs(const FloorResult& result,
                                                       const std::filesystem::path& prefix) {
  std::vector<std::filesystem::path> written;
  for (const auto& c : result.curves) {
    std::string label = c.label();
    std::replace(label.begin(), label.end(), '@', '_');
    const std::filesystem::path p = prefix.string() + "_" + label + ".csv";
    binio::write_all(p, format_floor_csv(c));
    written.push_back(p);
  }
  const std::filesystem::path svg = prefix.string() + ".svg";
  binio::write_all(svg, format_floor_svg(result.curves));
  written.push_back(svg);
  return written;
}

}  // namespace shapemetric
