// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "oracles.hpp"
#include "shapemetric/binary_io.hpp"
#include "shapemetric/harness.hpp"
#include "shapemetric/primitives.hpp"
#include "shapemetric/sdf.hpp"
#include "shapemetric/text.hpp"
#include "shapemetric/visibility.hpp"

using namespace shapemetric;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "shapemetric");
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

// gt/<id>.obj, pred/<id>.obj (same mesh), manifest.csv
fs::path small_dataset(const std::string& name) {
  const fs::path root = oracle::temp_dir(name);
  save_mesh(primitives::icosphere(2, 0.5), root / "gt" / "ball" / "b1.obj");
  save_mesh(primitives::box(Vec3(1, 0.5, 0.5)), root / "gt" / "box" / "x1.obj");
  save_mesh(primitives::icosphere(2, 0.5), root / "pred" / "ball" / "b1.obj");
  save_mesh(primitives::box(Vec3(1, 0.5, 0.5)), root / "pred" / "box" / "x1.obj");
  return root;
}

}  // namespace

TEST_CASE("usage errors exit 2 with help") {
  const Run none = run({});
  CHECK(none.code == 2);
  const Run bad = run({"extract", "--grid", "g.sdfg", "--out", "m.obj", "--bogus"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("error:") != std::string::npos);
  CHECK(bad.err.find("--grid") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"extract", "--grid", "/nonexistent/g.sdfg", "--out", "m.obj"}).code == 2);
}

TEST_CASE("sdf-grid then extract") {
  const fs::path dir = oracle::temp_dir("cli_grid");
  save_mesh(primitives::icosphere(3, 0.5), dir / "s.obj");
  REQUIRE(run({"sdf-grid", "--mesh", (dir / "s.obj").string(), "--out", (dir / "s.sdfg").string(), "--res", "24"})
              .code == 0);
  const SdfGrid g = read_sdfg(dir / "s.sdfg");
  CHECK(g.resolution == 24);
  REQUIRE(run({"extract", "--grid", (dir / "s.sdfg").string(), "--out", (dir / "m.off").string(), "--iso", "0"})
              .code == 0);
  const TriangleMesh m = load_mesh(dir / "m.off");
  CHECK(m.is_watertight());
  CHECK(m.face_count() > 100);
}

TEST_CASE("sample kinds") {
  const fs::path dir = oracle::temp_dir("cli_sample");
  const std::string mesh = (dir / "t.obj").string();
  save_mesh(primitives::torus(24, 12, 0.3, 0.1), dir / "t.obj");
  REQUIRE(run({"sample", "--mesh", mesh, "--out", (dir / "s.spts").string(), "--n", "500"}).code == 0);
  CHECK(read_spts(dir / "s.spts").size() == 500);
  REQUIRE(run({"sample", "--mesh", mesh, "--out", (dir / "s.xyz").string(), "--n", "300", "--normals",
               "interpolated"})
              .code == 0);
  CHECK(count_lines(binio::read_all(dir / "s.xyz")) == 300);
  REQUIRE(run({"sample", "--kind", "volume", "--out", (dir / "v.xyz").string(), "--n", "200"}).code == 0);
  CHECK(count_lines(binio::read_all(dir / "v.xyz")) == 200);
  REQUIRE(run({"sample", "--kind", "sdf", "--mesh", mesh, "--out", (dir / "d.sdfs").string(), "--n", "1000"}).code ==
          0);
  CHECK(read_sdfs(dir / "d.sdfs").size() == 1000);
  CHECK(run({"sample", "--kind", "cloud", "--mesh", mesh, "--out", (dir / "x.xyz").string()}).code == 2);
}

TEST_CASE("eval, aggregate and config defaults") {
  const fs::path root = small_dataset("cli_eval");
  const std::string manifest = (root / "manifest.csv").string();
  REQUIRE(run({"manifest-init", "--root", (root / "gt").string(), "--out", manifest, "--unseen", "box"}).code == 0);
  const DatasetManifest m = DatasetManifest::load(manifest);
  REQUIRE(m.entries.size() == 2);
  CHECK(m.entries[0].mesh_id == "ball/b1");
  CHECK(m.entries[1].split == Split::Unseen);

  binio::write_all(root / "eval.cfg", "# quick settings\nn_pred = 50000\nn-gt=5000\nno_iou=true\nfs=1\n");
  const std::string results = (root / "r.csv").string();
  const Run e = run({"eval", "--config", (root / "eval.cfg").string(), "--manifest", manifest, "--pred",
                     (root / "pred").string(), "--out", results, "--aggregate", (root / "agg.csv").string(),
                     "--n-gt", "60000"});
  REQUIRE(e.code == 0);
  const ResultTable t = parse_results_csv(binio::read_all(results));
  REQUIRE(t.rows.size() == 2);
  CHECK(t.metric_columns == metric_columns({1.0}, false));
  CHECK(t.rows[0].n_pred == 50000);
  CHECK(t.rows[0].n_gt == 60000);  // explicit flag beats the config file
  CHECK_FALSE(t.rows[0].values[1]);  // iou skipped
  CHECK(*t.rows[0].values[3] >= 0.95);
  CHECK(e.out.find("Avg (instance)") != std::string::npos);

  const Run a = run({"aggregate", "--results", results, "--out", (root / "agg2.csv").string()});
  CHECK(a.code == 0);
  CHECK(binio::read_all(root / "agg2.csv") == binio::read_all(root / "agg.csv"));

  // a header-only results file has nothing to aggregate
  binio::write_all(root / "empty.csv", format_results_csv(ResultTable{t.metric_columns, {}}));
  CHECK(run({"aggregate", "--results", (root / "empty.csv").string()}).code == 1);

  // an unreadable gt file fails its row: exit 1
  binio::write_all(root / "gt" / "box" / "x1.obj", "v 0 0 0\nf 1 2 3\n");
  const Run partial = run({"eval", "--config", (root / "eval.cfg").string(), "--manifest", manifest, "--pred",
                           (root / "pred").string(), "--out", results});
  CHECK(partial.code == 1);
  CHECK(partial.err.find("box/x1") != std::string::npos);
  CHECK(run({"eval", "--manifest", (root / "missing.csv").string(), "--pred", "."}).code == 2);
}

TEST_CASE("floor, pose, render and decompose") {
  const fs::path dir = oracle::temp_dir("cli_misc");
  const Run f = run({"floor", "--counts", "200,400", "--fs", "1", "--out", (dir / "fl").string()});
  REQUIRE(f.code == 0);
  CHECK(fs::exists(dir / "fl_cd.csv"));
  CHECK(fs::exists(dir / "fl.svg"));
  CHECK(run({"floor", "--counts", "10"}).code == 2);

  const Run p = run({"pose", "--dof", "VC3", "--n", "5", "--seed", "3"});
  REQUIRE(p.code == 0);
  CHECK(count_lines(p.out) == 6);
  CHECK(p.out.rfind("index,dof,azimuth_deg,elevation_deg,r00", 0) == 0);
  CHECK(run({"pose", "--dof", "VC3", "--n", "5", "--seed", "3"}).out == p.out);

  save_mesh(primitives::icosphere(2, 0.5), dir / "s.obj");
  const Run r = run({"render", "--mesh", (dir / "s.obj").string(), "--out", (dir / "view").string(), "--res", "32",
                     "--raw"});
  REQUIRE(r.code == 0);
  const DepthNormalMaps maps = read_dnmp(dir / "view.dnmp");
  CHECK(maps.width == 32);
  CHECK(maps.silhouette[maps.index(16, 16)]);
  CHECK(fs::exists(dir / "view.mask.u8"));

  save_mesh(primitives::icosphere(3, 0.5), dir / "g.obj");
  const Run d = run({"decompose", "--pred", (dir / "g.obj").string(), "--gt", (dir / "g.obj").string(), "--n-pred",
                     "5000", "--n-gt", "5000", "--out", (dir / "d.csv").string()});
  REQUIRE(d.code == 0);
  CHECK(d.out.find("visible") != std::string::npos);
  CHECK(parse_results_csv(binio::read_all(dir / "d.csv")).rows.size() == 2);
}
