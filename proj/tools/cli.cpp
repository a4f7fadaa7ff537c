// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <set>

#include "shapemetric/binary_io.hpp"
#include "shapemetric/error.hpp"
#include "shapemetric/floor_analysis.hpp"
#include "shapemetric/harness.hpp"
#include "shapemetric/isosurface.hpp"
#include "shapemetric/parallel.hpp"
#include "shapemetric/primitives.hpp"
#include "shapemetric/rng.hpp"
#include "shapemetric/sdf.hpp"
#include "shapemetric/text.hpp"
#include "shapemetric/visibility.hpp"

namespace fs = std::filesystem;

namespace shapemetric {

namespace {

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kFatal = 2;

// Flat key=value; '#' starts a comment. Keys are option names without the
// leading dashes, '_' and '-' interchangeable.
std::vector<std::pair<std::string, std::string>> read_config(const fs::path& path) {
  std::vector<std::pair<std::string, std::string>> out;
  const auto lines = split(binio::read_all(path), '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Format, path.string() + ": expected key=value", i + 1);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.empty()) throw Error(ErrorKind::Format, path.string() + ": empty key", i + 1);
    out.emplace_back(key, value);
  }
  return out;
}

// Config entries become --key=value arguments placed right after the
// subcommand name, skipped when the same option is given explicitly.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config = args[i].substr(9);
  }
  if (config.empty() || args.empty()) return args;
  std::set<std::string> given;
  for (const auto& a : args) {
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  }
  if (args.size() < 2) return args;
  std::vector<std::string> out = {args[0], args[1]};
  for (const auto& [k, v] : read_config(config)) {
    if (!given.count(k)) out.push_back("--" + k + "=" + v);
  }
  out.insert(out.end(), args.begin() + 2, args.end());
  return out;
}

struct EvalFlags {
  std::size_t n_pred = 100000;
  std::size_t n_gt = 300000;
  std::size_t n_iou = 100000;
  std::string fs = "0.5,1,2";
  double iso = 0.25;
  std::string pivot = "bbox_center";
  std::string dof = "OC";
  std::uint64_t seed = 0;
  std::string empty_policy = "exclude";
  std::string normalization = "independent";
  bool no_iou = false;
  bool iou_watertight = false;
  std::string normals = "face";
  double distance = 2.2;
  double eps = 1e-4;
  std::string occluder = "own";

  void add(CLI::App* app) {
    app->add_option("--n-pred", n_pred, "points sampled on the prediction")->capture_default_str();
    app->add_option("--n-gt", n_gt, "points sampled on the ground truth")->capture_default_str();
    app->add_option("--n-iou", n_iou, "IoU evaluation points")->capture_default_str();
    app->add_option("--fs", fs, "F-score thresholds in percent, comma separated")->capture_default_str();
    app->add_option("--iso", iso, "iso level (recorded; extraction uses it)")->capture_default_str();
    app->add_option("--pivot", pivot, "bbox_center | file_origin")->capture_default_str();
    app->add_option("--dof", dof, "OC | VC2 | VC3")->capture_default_str();
    app->add_option("--seed", seed, "base random seed")->capture_default_str();
    app->add_option("--empty-policy", empty_policy, "exclude | zero")->capture_default_str();
    app->add_option("--normalization", normalization, "independent | shared_gt")->capture_default_str();
    app->add_flag("--no-iou", no_iou, "skip IoU");
    app->add_flag("--iou-watertight", iou_watertight, "report IoU only for watertight pairs");
    app->add_option("--normals", normals, "face | interpolated")->capture_default_str();
    app->add_option("--distance", distance, "camera distance")->capture_default_str();
    app->add_option("--eps", eps, "visibility tolerance")->capture_default_str();
    app->add_option("--occluder", occluder, "own | gt: geometry occluding predicted samples")->capture_default_str();
  }

  EvalConfig config() const {
    EvalConfig c;
    c.n_pred = n_pred;
    c.n_gt = n_gt;
    c.n_iou = n_iou;
    c.fs_thresholds = parse_double_list(fs, "--fs");
    c.iso = iso;
    c.pivot_mode = parse_pivot_mode(pivot);
    c.dof_mode = parse_dof_tag(dof);
    c.rng_seed = seed;
    c.empty_policy = parse_empty_policy(empty_policy);
    c.normalization = parse_normalization(normalization);
    c.compute_iou = !no_iou;
    c.iou_requires_watertight = iou_watertight;
    c.normal_mode = parse_normal_mode(normals);
    c.camera.distance = distance;
    c.visibility_eps = eps;
    if (occluder == "own") c.pred_occluder = Occluder::Own;
    else if (occluder == "gt") c.pred_occluder = Occluder::GroundTruth;
    else throw Error(ErrorKind::InvalidArgument, "unknown occluder '" + occluder + "' (own, gt)");
    c.validate();
    return c;
  }
};

std::string report_row(const std::string& label, const MetricReport& r, const std::vector<double>& fs) {
  auto opt = [](const std::optional<double>& v) { return v ? format_short(*v) : std::string("-"); };
  std::string s = label + "  cd=" + opt(r.cd) + "  nc=" + opt(r.nc);
  if (r.iou) s += "  iou=" + opt(r.iou);
  for (double d : fs) s += "  fs@" + format_short(d) + "=" + opt(r.fs_at(d));
  if (r.empty_prediction) s += "  (empty prediction)";
  return s + "  n_pred=" + std::to_string(r.n_pred_points) + "  n_gt=" + std::to_string(r.n_gt_points) + "\n";
}

std::string usage_footer() {
  return "Every subcommand accepts --config FILE with key=value lines naming its options.\n"
         "SHAPEMETRIC_THREADS caps worker threads. Exit codes: 0 ok, 1 partial, 2 fatal.\n";
}

}  // namespace

int cli_main(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  ThreadLimit limit;
  CLI::App app("Shape reconstruction evaluation: sampling, SDFs, isosurfaces, metrics, visibility.", "shapemetric");
  app.require_subcommand(1);
  app.footer(usage_footer());
  std::string config;
  auto add_config = [&](CLI::App* sub) { sub->add_option("--config", config, "key=value file of defaults"); };

  // sample
  auto* sample = app.add_subcommand("sample", "surface, volume or SDF sample points");
  std::string s_mesh, s_out, s_kind = "surface", s_normals = "face";
  std::size_t s_n = 100000;
  std::uint64_t s_seed = 0;
  bool s_normalize = false;
  sample->add_option("--mesh", s_mesh, "input mesh (.obj/.off)");
  sample->add_option("--out", s_out, "output (.spts or .xyz for surface, .xyz for volume, .sdfs for sdf)")->required();
  sample->add_option("--kind", s_kind, "surface | volume | sdf")->capture_default_str();
  sample->add_option("--n", s_n, "number of points")->capture_default_str();
  sample->add_option("--seed", s_seed, "random seed")->capture_default_str();
  sample->add_option("--normals", s_normals, "face | interpolated")->capture_default_str();
  sample->add_flag("--normalize", s_normalize, "fit the mesh to the unit cube first (always on for sdf)");
  add_config(sample);

  // sdf-grid
  auto* grid = app.add_subcommand("sdf-grid", "signed distances on a regular grid");
  std::string g_mesh, g_out;
  int g_res = 64;
  double g_bound = 0.5;
  grid->add_option("--mesh", g_mesh, "input mesh")->required();
  grid->add_option("--out", g_out, "output .sdfg")->required();
  grid->add_option("--res", g_res, "grid points per axis")->capture_default_str();
  grid->add_option("--bound", g_bound, "domain is [-bound, bound]^3")->capture_default_str();
  add_config(grid);

  // extract
  auto* extract = app.add_subcommand("extract", "marching cubes on a stored grid");
  std::string x_grid, x_out;
  double x_iso = 0.25;
  extract->add_option("--grid", x_grid, "input .sdfg")->required();
  extract->add_option("--out", x_out, "output mesh (.obj/.off)")->required();
  extract->add_option("--iso", x_iso, "iso level")->capture_default_str();
  add_config(extract);

  // eval
  auto* eval = app.add_subcommand("eval", "score predictions listed in a manifest");
  EvalFlags e_flags;
  std::string e_manifest, e_pred, e_out = "results.csv", e_agg, e_jsonl, e_reps_out;
  bool e_decompose = false;
  std::size_t e_reps = 1;
  eval->add_option("--manifest", e_manifest, "manifest CSV")->required();
  eval->add_option("--pred", e_pred, "directory of predicted meshes <mesh_id>.obj|.off")->required();
  eval->add_option("--out", e_out, "per-mesh results CSV")->capture_default_str();
  eval->add_option("--aggregate", e_agg, "aggregate CSV");
  eval->add_option("--jsonl", e_jsonl, "per-mesh records, one JSON object per line");
  eval->add_flag("--decompose", e_decompose, "add visible/occluded columns");
  eval->add_option("--reps", e_reps, "reruns with derived seeds to measure evaluation spread")->capture_default_str();
  eval->add_option("--reps-out", e_reps_out, "rerun spread CSV (default <out>.reps.csv)");
  e_flags.add(eval);
  add_config(eval);

  // decompose
  auto* decompose = app.add_subcommand("decompose", "visible vs self-occluded metrics for one pair");
  EvalFlags d_flags;
  std::string d_pred, d_gt, d_out;
  decompose->add_option("--pred", d_pred, "predicted mesh")->required();
  decompose->add_option("--gt", d_gt, "ground-truth mesh")->required();
  decompose->add_option("--out", d_out, "CSV with one row per partition");
  d_flags.add(decompose);
  add_config(decompose);

  // floor
  auto* floor = app.add_subcommand("floor", "sampling-floor curves by self-comparison");
  std::string f_counts = "10000,30000,100000,300000,1000000", f_fs = "0.25,0.5,1,1.5,2", f_manifest,
              f_out = "floor";
  std::uint64_t f_seed = 0;
  std::size_t f_reps = 1;
  floor->add_option("--counts", f_counts, "sample counts")->capture_default_str();
  floor->add_option("--fs", f_fs, "F-score thresholds in percent")->capture_default_str();
  floor->add_option("--manifest", f_manifest, "meshes to analyze (default: built-in primitive corpus)");
  floor->add_option("--out", f_out, "output prefix for CSVs and the SVG")->capture_default_str();
  floor->add_option("--seed", f_seed, "random seed")->capture_default_str();
  floor->add_option("--reps", f_reps, "repetitions averaged per mesh and count")->capture_default_str();
  add_config(floor);

  // pose
  auto* pose = app.add_subcommand("pose", "generate object poses");
  std::string p_dof = "VC2", p_out;
  std::size_t p_n = 1;
  std::uint64_t p_seed = 0;
  pose->add_option("--dof", p_dof, "OC | VC2 | VC3")->capture_default_str();
  pose->add_option("--n", p_n, "number of poses")->capture_default_str();
  pose->add_option("--seed", p_seed, "random seed")->capture_default_str();
  pose->add_option("--out", p_out, "CSV (default stdout)");
  add_config(pose);

  // render
  auto* render = app.add_subcommand("render", "depth, normal and silhouette maps");
  std::string r_mesh, r_out, r_dof = "OC", r_pivot = "bbox_center";
  std::uint64_t r_seed = 0;
  int r_res = 256;
  double r_distance = 2.2;
  bool r_raw = false;
  render->add_option("--mesh", r_mesh, "input mesh")->required();
  render->add_option("--out", r_out, "output prefix (<out>.dnmp)")->required();
  render->add_option("--dof", r_dof, "OC | VC2 | VC3 object pose")->capture_default_str();
  render->add_option("--seed", r_seed, "pose seed")->capture_default_str();
  render->add_option("--pivot", r_pivot, "bbox_center | file_origin")->capture_default_str();
  render->add_option("--res", r_res, "image side in pixels")->capture_default_str();
  render->add_option("--distance", r_distance, "camera distance")->capture_default_str();
  render->add_flag("--raw", r_raw, "also write 16-bit raw planes");
  add_config(render);

  // aggregate
  auto* aggregate = app.add_subcommand("aggregate", "per-class summary of a results CSV");
  std::string a_results, a_out, a_policy = "exclude";
  aggregate->add_option("--results", a_results, "per-mesh results CSV")->required();
  aggregate->add_option("--out", a_out, "aggregate CSV");
  aggregate->add_option("--empty-policy", a_policy, "exclude | zero")->capture_default_str();
  add_config(aggregate);

  // manifest-init
  auto* minit = app.add_subcommand("manifest-init", "manifest from a class/instance mesh tree");
  std::string m_root, m_out, m_split = "TEST", m_unseen;
  minit->add_option("--root", m_root, "dataset root")->required();
  minit->add_option("--out", m_out, "manifest CSV")->required();
  minit->add_option("--split", m_split, "split tag for every entry")->capture_default_str();
  minit->add_option("--unseen", m_unseen, "comma separated classes tagged UNSEEN (others SEEN)");
  add_config(minit);

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* sub = nullptr;
    for (const CLI::App* s : app.get_subcommands()) sub = s;
    err << (sub ? sub->help() : app.help());
    return kFatal;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFatal;
  }

  try {
    if (*sample) {
      const NormalMode nm = parse_normal_mode(s_normals);
      if (s_kind == "volume") {
        const auto pts = sample_volume_uniform(Vec3::Zero(), 1.2, s_n, s_seed);
        std::string text;
        for (const Vec3& p : pts) text += format_exact(p.x()) + ' ' + format_exact(p.y()) + ' ' + format_exact(p.z()) + '\n';
        binio::write_all(s_out, text);
      } else {
        if (s_mesh.empty()) throw Error(ErrorKind::InvalidArgument, "--mesh is required for --kind " + s_kind);
        TriangleMesh mesh = load_mesh(s_mesh);
        if (s_kind == "sdf") {
          mesh = normalize_to_unit_cube(mesh).mesh;
          write_sdfs(generate_training_samples(mesh, s_n, s_seed), s_out);
        } else if (s_kind == "surface") {
          if (s_normalize) mesh = normalize_to_unit_cube(mesh).mesh;
          const auto pts = sample_surface(mesh, s_n, s_seed, {nm, fs::path(s_mesh).stem().string()});
          if (fs::path(s_out).extension() == ".xyz") write_xyz(pts, s_out);
          else write_spts(pts, s_out);
        } else {
          throw Error(ErrorKind::InvalidArgument, "unknown --kind '" + s_kind + "' (surface, volume, sdf)");
        }
      }
      out << "wrote " << s_n << " points to " << s_out << "\n";
      return kOk;
    }

    if (*grid) {
      const TriangleMesh mesh = normalize_to_unit_cube(load_mesh(g_mesh)).mesh;
      const Aabb domain{Vec3::Constant(-g_bound), Vec3::Constant(g_bound)};
      validate_grid_request(g_res, domain);
      write_sdfg(evaluate_grid(mesh, g_res, domain), g_out);
      out << "wrote " << g_res << "^3 grid to " << g_out << "\n";
      return kOk;
    }

    if (*extract) {
      const TriangleMesh mesh = marching_cubes(read_sdfg(x_grid), x_iso);
      save_mesh(mesh, x_out);
      out << "wrote " << mesh.vertex_count() << " vertices, " << mesh.face_count() << " faces to " << x_out << "\n";
      return kOk;
    }

    if (*eval) {
      const EvalConfig cfg = e_flags.config();
      if (e_reps == 0) throw Error(ErrorKind::InvalidArgument, "--reps must be positive");
      const DatasetManifest manifest = DatasetManifest::load(e_manifest);
      const RunOptions opts{e_decompose};
      std::vector<EvalResult> runs;
      for (std::size_t rep = 0; rep < e_reps; ++rep) {
        EvalConfig c = cfg;
        if (rep > 0) c.rng_seed = derive_seed(cfg.rng_seed, {rep});
        runs.push_back(run_eval(manifest, e_pred, c, opts));
      }
      const EvalResult& first = runs.front();
      binio::write_all(e_out, format_results_csv(first.table));
      if (!e_agg.empty()) binio::write_all(e_agg, format_aggregate_csv(first.aggregate));
      if (!e_jsonl.empty()) binio::write_all(e_jsonl, format_results_jsonl(first.table));
      if (e_reps > 1) {
        const std::string path = e_reps_out.empty() ? e_out + ".reps.csv" : e_reps_out;
        binio::write_all(path, format_rerun_csv(rerun_spread(runs)));
      }
      out << format_aggregate_table(first.aggregate);
      for (const auto& r : first.table.rows) {
        if (r.status == RowStatus::Failed) err << "failed: " << r.mesh_id << ": " << r.error << "\n";
      }
      if (first.aggregate.empty()) return kPartial;
      return first.exit_code();
    }

    if (*decompose) {
      const EvalConfig cfg = d_flags.config();
      TriangleMesh gt = load_mesh(d_gt);
      if (cfg.dof_mode != DofTag::OC) gt = apply_pose(gt, sample_pose(cfg.dof_mode, cfg.rng_seed), cfg.pivot_mode);
      const DecomposedReport r = evaluate_decomposed(load_mesh(d_pred), gt, cfg);
      out << report_row("visible ", r.visible, cfg.fs_thresholds) << report_row("occluded", r.occluded, cfg.fs_thresholds);
      if (!d_out.empty()) {
        ResultTable t;
        t.metric_columns = metric_columns(cfg.fs_thresholds, false);
        for (const auto& [label, rep] : {std::pair{"visible", &r.visible}, std::pair{"occluded", &r.occluded}}) {
          ResultRecord rec;
          rec.mesh_id = fs::path(d_gt).stem().string();
          rec.class_label = label;
          rec.split = "-";
          rec.status = rep->empty_prediction ? RowStatus::Empty : RowStatus::Ok;
          rec.n_pred = rep->n_pred_points;
          rec.n_gt = rep->n_gt_points;
          for (const auto& col : t.metric_columns) {
            std::optional<double> v;
            if (col == "cd") v = rep->cd;
            else if (col == "nc") v = rep->nc;
            else if (col == "iou") v = rep->iou;
            else {
              const auto at = col.find('@');
              const double d = parse_double(col.substr(at + 1), col);
              if (auto it = rep->fs.find(d); it != rep->fs.end()) {
                const std::string kind = col.substr(0, at);
                v = kind == "fs" ? it->second.fs : kind == "precision" ? it->second.precision : it->second.recall;
              }
            }
            rec.values.push_back(v);
          }
          t.rows.push_back(std::move(rec));
        }
        binio::write_all(d_out, format_results_csv(t));
      }
      return kOk;
    }

    if (*floor) {
      FloorOptions opts;
      opts.counts = parse_size_list(f_counts, "--counts");
      opts.fs_thresholds = parse_double_list(f_fs, "--fs");
      opts.rng_seed = f_seed;
      opts.reps = f_reps;
      std::vector<primitives::NamedMesh> meshes;
      std::vector<FloorFailure> load_failures;
      if (f_manifest.empty()) {
        meshes = primitives::corpus();
      } else {
        for (const auto& e : DatasetManifest::load(f_manifest).entries) {
          try {
            meshes.push_back({e.mesh_id, load_mesh(e.path)});
          } catch (const Error& ex) {
            load_failures.push_back({e.mesh_id, ex.what()});
          }
        }
      }
      FloorResult result = sampling_floor(meshes, opts);
      result.failures.insert(result.failures.begin(), load_failures.begin(), load_failures.end());
      for (const auto& f : result.failures) err << "warning: skipped " << f.mesh_id << ": " << f.message << "\n";
      for (const auto& p : write_floor_outputs(result, f_out)) out << "wrote " << p.string() << "\n";
      for (const auto& c : result.curves) {
        out << c.label();
        for (std::size_t i = 0; i < c.sample_counts.size(); ++i) {
          out << "  " << c.sample_counts[i] << ":" << format_short(c.mean[i]);
        }
        out << "\n";
      }
      return result.failures.empty() ? kOk : kPartial;
    }

    if (*pose) {
      const DofTag tag = parse_dof_tag(p_dof);
      std::string text = "index,dof,azimuth_deg,elevation_deg,r00,r01,r02,r10,r11,r12,r20,r21,r22\n";
      for (std::size_t i = 0; i < p_n; ++i) {
        const RigidPose rp = sample_pose(tag, derive_seed(p_seed, {i}));
        const ViewAngles va = extract_view_angles(rp.rotation);
        text += std::to_string(i) + ',' + to_string(tag) + ',' + format_exact(va.azimuth_deg) + ',' +
                format_exact(va.elevation_deg);
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c) text += ',' + format_exact(rp.rotation(r, c));
        text += '\n';
      }
      if (p_out.empty()) out << text;
      else binio::write_all(p_out, text);
      return kOk;
    }

    if (*render) {
      TriangleMesh mesh = normalize_to_unit_cube(load_mesh(r_mesh)).mesh;
      const DofTag tag = parse_dof_tag(r_dof);
      if (tag != DofTag::OC) mesh = apply_pose(mesh, sample_pose(tag, r_seed), parse_pivot_mode(r_pivot));
      CameraRig cam;
      cam.width = cam.height = r_res;
      cam.distance = r_distance;
      const DepthNormalMaps maps = render_maps(mesh, cam);
      write_dnmp(maps, r_out + ".dnmp");
      if (r_raw) write_raw_planes(maps, r_out);
      std::size_t fg = 0;
      for (bool b : maps.silhouette) fg += b ? 1 : 0;
      out << "wrote " << r_out << ".dnmp (" << fg << " foreground pixels)\n";
      return kOk;
    }

    if (*aggregate) {
      const ResultTable table = parse_results_csv(binio::read_all(a_results));
      const AggregateReport rep = aggregate_by_class(table, parse_empty_policy(a_policy));
      out << format_aggregate_table(rep);
      if (!a_out.empty()) binio::write_all(a_out, format_aggregate_csv(rep));
      return rep.empty() ? kPartial : kOk;
    }

    if (*minit) {
      std::vector<std::string> unseen;
      if (!m_unseen.empty()) unseen = split(m_unseen, ',');
      const DatasetManifest m = manifest_from_tree(m_root, parse_split(m_split), unseen);
      const fs::path out_path(m_out);
      binio::write_all(out_path, m.format(out_path.parent_path().empty() ? fs::path(".") : out_path.parent_path()));
      out << "wrote " << m.entries.size() << " entries to " << m_out << "\n";
      return kOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFatal;
  }
  return kFatal;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace shapemetric
