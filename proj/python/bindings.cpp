// SPDX-License-Identifier: Apache-2.0
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "shapemetric/error.hpp"
#include "shapemetric/floor_analysis.hpp"
#include "shapemetric/harness.hpp"
#include "shapemetric/isosurface.hpp"
#include "shapemetric/metrics.hpp"
#include "shapemetric/pose.hpp"
#include "shapemetric/sdf.hpp"
#include "shapemetric/surface_sampler.hpp"
#include "shapemetric/visibility.hpp"

namespace py = pybind11;
using namespace shapemetric;

namespace {

using F64 = py::array_t<double, py::array::c_style | py::array::forcecast>;
using I64 = py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>;

std::vector<Vec3> to_points(const F64& a, const char* name) {
  if (a.ndim() != 2 || a.shape(1) != 3) throw py::value_error(std::string(name) + " must have shape (n, 3)");
  std::vector<Vec3> out(static_cast<std::size_t>(a.shape(0)));
  auto r = a.unchecked<2>();
  for (py::ssize_t i = 0; i < a.shape(0); ++i) out[static_cast<std::size_t>(i)] = Vec3(r(i, 0), r(i, 1), r(i, 2));
  return out;
}

F64 from_points(const std::vector<Vec3>& pts) {
  F64 a({static_cast<py::ssize_t>(pts.size()), py::ssize_t{3}});
  auto w = a.mutable_unchecked<2>();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (int k = 0; k < 3; ++k) w(static_cast<py::ssize_t>(i), k) = pts[i][k];
  return a;
}

TriangleMesh to_mesh(const F64& vertices, const I64& faces) {
  std::vector<Vec3> v = to_points(vertices, "vertices");
  if (faces.ndim() != 2 || faces.shape(1) != 3) throw py::value_error("faces must have shape (m, 3)");
  std::vector<Face> f(static_cast<std::size_t>(faces.shape(0)));
  auto r = faces.unchecked<2>();
  for (py::ssize_t i = 0; i < faces.shape(0); ++i) {
    for (int k = 0; k < 3; ++k) {
      if (r(i, k) < 0) throw py::value_error("negative face index");
      f[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = static_cast<std::uint32_t>(r(i, k));
    }
  }
  return TriangleMesh(std::move(v), std::move(f));
}

py::tuple from_mesh(const TriangleMesh& m) {
  I64 f({static_cast<py::ssize_t>(m.face_count()), py::ssize_t{3}});
  auto w = f.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.face_count(); ++i)
    for (int k = 0; k < 3; ++k) w(static_cast<py::ssize_t>(i), k) = m.faces()[i][static_cast<std::size_t>(k)];
  return py::make_tuple(from_points(m.vertices()), f);
}

py::dict report_dict(const MetricReport& r) {
  py::dict d;
  auto opt = [](const std::optional<double>& v) -> py::object {
    return v ? py::object(py::float_(*v)) : py::object(py::none());
  };
  d["cd"] = opt(r.cd);
  d["nc"] = opt(r.nc);
  d["iou"] = opt(r.iou);
  py::dict fs, precision, recall;
  for (const auto& [t, s] : r.fs) {
    fs[py::float_(t)] = s.fs;
    precision[py::float_(t)] = s.precision;
    recall[py::float_(t)] = s.recall;
  }
  d["fs"] = fs;
  d["precision"] = precision;
  d["recall"] = recall;
  d["empty_prediction"] = r.empty_prediction;
  d["n_pred"] = r.n_pred_points;
  d["n_gt"] = r.n_gt_points;
  return d;
}

SurfacePointSet to_samples(const F64& points, const F64& normals) {
  SurfacePointSet s;
  s.positions = to_points(points, "points");
  s.normals = to_points(normals, "normals");
  if (s.normals.size() != s.positions.size()) throw py::value_error("points and normals differ in length");
  s.face_ids.assign(s.positions.size(), 0);
  return s;
}

F64 mat3(const Mat3& m) {
  F64 a({py::ssize_t{3}, py::ssize_t{3}});
  auto w = a.mutable_unchecked<2>();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) w(r, c) = m(r, c);
  return a;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Surface sampling, signed distances, marching cubes and reconstruction metrics.";
  py::register_exception<Error>(m, "ShapemetricError", PyExc_RuntimeError);

  m.def("load_mesh", [](const std::filesystem::path& p) { return from_mesh(load_mesh(p)); }, py::arg("path"),
        "Read an OBJ or OFF file; returns (vertices, faces).");
  m.def("save_mesh",
        [](const F64& v, const I64& f, const std::filesystem::path& p) { save_mesh(to_mesh(v, f), p); },
        py::arg("vertices"), py::arg("faces"), py::arg("path"));
  m.def("normalize_to_unit_cube",
        [](const F64& v, const I64& f) { return from_mesh(normalize_to_unit_cube(to_mesh(v, f)).mesh); },
        py::arg("vertices"), py::arg("faces"));

  m.def(
      "sample_surface",
      [](const F64& v, const I64& f, std::size_t n, std::uint64_t seed, const std::string& normals) {
        const SampleOptions opt{parse_normal_mode(normals), {}};
        const SurfacePointSet s = sample_surface(to_mesh(v, f), n, seed, opt);
        py::array_t<std::uint32_t> ids(static_cast<py::ssize_t>(s.size()));
        std::copy(s.face_ids.begin(), s.face_ids.end(), ids.mutable_data());
        return py::make_tuple(from_points(s.positions), from_points(s.normals), ids);
      },
      py::arg("vertices"), py::arg("faces"), py::arg("n"), py::arg("seed") = 0, py::arg("normals") = "face",
      "Area-weighted uniform samples; returns (points, normals, face_ids).");

  m.def(
      "signed_distance",
      [](const F64& v, const I64& f, const F64& points) {
        const SignedDistanceField field(to_mesh(v, f));
        const auto d = field.evaluate(to_points(points, "points"));
        return py::array_t<double>(static_cast<py::ssize_t>(d.size()), d.data());
      },
      py::arg("vertices"), py::arg("faces"), py::arg("points"), "Negative inside (winding number above 0.5).");

  m.def(
      "sdf_grid",
      [](const F64& v, const I64& f, int res, double bound) {
        const SdfGrid g = evaluate_grid(to_mesh(v, f), res, Aabb{Vec3::Constant(-bound), Vec3::Constant(bound)});
        const auto s = static_cast<py::ssize_t>(sizeof(double));
        const auto r = static_cast<py::ssize_t>(res);
        // indexed [i, j, k] along x, y, z
        return py::array_t<double>({r, r, r}, {s, s * r, s * r * r}, g.values.data());
      },
      py::arg("vertices"), py::arg("faces"), py::arg("res") = 64, py::arg("bound") = 0.5);

  m.def(
      "marching_cubes",
      [](py::array_t<double> values, double bound, double iso) {
        if (values.ndim() != 3 || values.shape(0) != values.shape(1) || values.shape(1) != values.shape(2))
          throw py::value_error("values must be a cubic 3D array indexed [x, y, z]");
        SdfGrid g;
        g.resolution = static_cast<int>(values.shape(0));
        g.domain = Aabb{Vec3::Constant(-bound), Vec3::Constant(bound)};
        g.values.resize(static_cast<std::size_t>(values.size()));
        auto r = values.unchecked<3>();
        for (int k = 0; k < g.resolution; ++k)
          for (int j = 0; j < g.resolution; ++j)
            for (int i = 0; i < g.resolution; ++i) g.values[g.index(i, j, k)] = r(i, j, k);
        return from_mesh(marching_cubes(g, iso));
      },
      py::arg("values"), py::arg("bound") = 0.5, py::arg("iso") = 0.0);

  m.def(
      "evaluate",
      [](const F64& pv, const I64& pf, const F64& gv, const I64& gf, std::size_t n_pred, std::size_t n_gt,
         std::size_t n_iou, std::vector<double> fs, std::uint64_t seed, bool compute_iou,
         const std::string& normalization) {
        EvalConfig cfg;
        cfg.n_pred = n_pred;
        cfg.n_gt = n_gt;
        cfg.n_iou = n_iou;
        cfg.fs_thresholds = std::move(fs);
        cfg.rng_seed = seed;
        cfg.compute_iou = compute_iou;
        cfg.normalization = parse_normalization(normalization);
        TriangleMesh pred = pv.shape(0) == 0 ? TriangleMesh() : to_mesh(pv, pf);
        MetricReport r;
        {
          py::gil_scoped_release release;
          r = evaluate_pair(pred, to_mesh(gv, gf), cfg);
        }
        return report_dict(r);
      },
      py::arg("pred_vertices"), py::arg("pred_faces"), py::arg("gt_vertices"), py::arg("gt_faces"),
      py::arg("n_pred") = 100000, py::arg("n_gt") = 300000, py::arg("n_iou") = 100000,
      py::arg("fs") = std::vector<double>{0.5, 1.0, 2.0}, py::arg("seed") = 0, py::arg("compute_iou") = true,
      py::arg("normalization") = "independent",
      "Chamfer, normal consistency, F-score per threshold (percent of the unit cube) and IoU.");

  m.def(
      "evaluate_points",
      [](const F64& pp, const F64& pn, const F64& gp, const F64& gn, std::vector<double> fs) {
        return report_dict(evaluate_samples(to_samples(pp, pn), to_samples(gp, gn), fs));
      },
      py::arg("pred_points"), py::arg("pred_normals"), py::arg("gt_points"), py::arg("gt_normals"),
      py::arg("fs") = std::vector<double>{0.5, 1.0, 2.0});

  m.def(
      "visible_mask",
      [](const F64& points, const F64& v, const I64& f, double distance) {
        SurfacePointSet s;
        s.positions = to_points(points, "points");
        s.normals.assign(s.positions.size(), Vec3::UnitZ());
        s.face_ids.assign(s.positions.size(), 0);
        CameraRig cam;
        cam.distance = distance;
        const auto vis = classify_visibility(s, to_mesh(v, f), cam);
        py::array_t<bool> out(static_cast<py::ssize_t>(vis.size()));
        for (std::size_t i = 0; i < vis.size(); ++i) out.mutable_data()[i] = vis[i];
        return out;
      },
      py::arg("points"), py::arg("vertices"), py::arg("faces"), py::arg("distance") = 2.2,
      "True where the camera on +z sees the point.");

  m.def("sample_pose", [](const std::string& dof, std::uint64_t seed) {
    return mat3(sample_pose(parse_dof_tag(dof), seed).rotation);
  }, py::arg("dof"), py::arg("seed"));

  m.def(
      "sampling_floor",
      [](std::vector<std::size_t> counts, std::vector<double> fs, std::uint64_t seed) {
        FloorOptions opt;
        opt.counts = std::move(counts);
        opt.fs_thresholds = std::move(fs);
        opt.rng_seed = seed;
        FloorResult r;
        {
          py::gil_scoped_release release;
          r = sampling_floor(primitives::corpus(), opt);
        }
        py::dict out;
        for (const auto& c : r.curves) out[py::str(c.label())] = c.mean;
        return out;
      },
      py::arg("counts"), py::arg("fs") = std::vector<double>{1.0}, py::arg("seed") = 0,
      "Mean self-comparison score per count over the bundled primitive corpus.");

  m.def(
      "evaluate_manifest",
      [](const std::filesystem::path& manifest, const std::filesystem::path& pred_dir, std::size_t n_pred,
         std::size_t n_gt, bool compute_iou, std::uint64_t seed) {
        EvalConfig cfg;
        cfg.n_pred = n_pred;
        cfg.n_gt = n_gt;
        cfg.compute_iou = compute_iou;
        cfg.rng_seed = seed;
        const DatasetManifest man = DatasetManifest::load(manifest);
        EvalResult r;
        {
          py::gil_scoped_release release;
          r = run_eval(man, pred_dir, cfg);
        }
        return py::make_tuple(format_results_csv(r.table), format_aggregate_csv(r.aggregate), r.exit_code());
      },
      py::arg("manifest"), py::arg("pred_dir"), py::arg("n_pred") = 100000, py::arg("n_gt") = 300000,
      py::arg("compute_iou") = true, py::arg("seed") = 0, "Returns (results_csv, aggregate_csv, exit_code).");
}
