// SPDX-License-Identifier: Apache-2.0
#include "shapemetric/harness.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "shapemetric/binary_io.hpp"
#include "shapemetric/error.hpp"
#include "shapemetric/parallel.hpp"
#include "shapemetric/rng.hpp"
#include "shapemetric/text.hpp"
#include "shapemetric/visibility.hpp"

namespace fs = std::filesystem;

namespace shapemetric {

namespace {

const std::vector<std::string> kManifestHeader = {"mesh_id", "class", "path", "split", "seed"};
const std::vector<std::string> kLeading = {"mesh_id", "class", "split", "status"};
const std::vector<std::string> kTrailing = {"empty", "n_pred", "n_gt", "error"};

std::string opt_text(const std::optional<double>& v) { return v ? format_exact(*v) : std::string(); }

bool is_chamfer_column(const std::string& name) {
  return name == "cd" || (name.size() > 3 && name.compare(name.size() - 3, 3, "_cd") == 0);
}

int split_rank(const std::string& s) {
  try {
    return static_cast<int>(parse_split(s));
  } catch (const Error&) {
    return 100;
  }
}

}  // namespace

const char* to_string(Split s) {
  switch (s) {
    case Split::Seen: return "SEEN";
    case Split::Unseen: return "UNSEEN";
    case Split::Train: return "TRAIN";
    case Split::Val: return "VAL";
    case Split::Test: return "TEST";
  }
  return "?";
}

Split parse_split(const std::string& text) {
  for (Split s : {Split::Seen, Split::Unseen, Split::Train, Split::Val, Split::Test}) {
    if (text == to_string(s)) return s;
  }
  throw Error(ErrorKind::Data, "unknown split tag '" + text + "' (SEEN, UNSEEN, TRAIN, VAL, TEST)");
}

const char* to_string(RowStatus s) {
  switch (s) {
    case RowStatus::Ok: return "ok";
    case RowStatus::Empty: return "empty";
    case RowStatus::Failed: return "failed";
  }
  return "?";
}

std::uint64_t id_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// ---- manifest -------------------------------------------------------------------

DatasetManifest DatasetManifest::parse(const std::string& text, const fs::path& base_dir, bool check_paths) {
  const auto rows = parse_csv(text);
  if (rows.empty() || rows[0] != kManifestHeader) {
    throw Error(ErrorKind::Format, "manifest header must be mesh_id,class,path,split,seed", 1);
  }
  DatasetManifest m;
  std::set<std::string> seen;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const std::size_t line = i + 1;
    if (r.size() != kManifestHeader.size()) {
      throw Error(ErrorKind::Format, "expected 5 fields, found " + std::to_string(r.size()), line);
    }
    ManifestEntry e;
    e.mesh_id = r[0];
    e.class_label = r[1];
    if (e.mesh_id.empty()) throw Error(ErrorKind::Format, "empty mesh_id", line);
    if (!seen.insert(e.mesh_id).second) {
      throw Error(ErrorKind::Structural, "duplicate mesh_id '" + e.mesh_id + "'", line);
    }
    e.path = fs::path(r[2]).is_absolute() ? fs::path(r[2]) : base_dir / r[2];
    try {
      e.split = parse_split(r[3]);
      if (!trim(r[4]).empty()) e.seed = parse_size(r[4], "seed");
    } catch (const Error& err) {
      throw Error(ErrorKind::Format, err.detail(), line);
    }
    if (check_paths && !fs::exists(e.path)) {
      throw Error(ErrorKind::Io, "manifest line " + std::to_string(line) + ": no such file " + e.path.string());
    }
    m.entries.push_back(std::move(e));
  }
  return m;
}

DatasetManifest DatasetManifest::load(const fs::path& path) {
  try {
    return parse(binio::read_all(path), path.parent_path());
  } catch (const Error& e) {
    throw e.within(path.string());
  }
}

std::string DatasetManifest::format(const fs::path& base_dir) const {
  std::string out = "mesh_id,class,path,split,seed\n";
  for (const auto& e : entries) {
    std::string rel = fs::absolute(e.path).lexically_relative(fs::absolute(base_dir)).generic_string();
    if (rel.empty()) rel = fs::absolute(e.path).generic_string();
    out += csv_field(e.mesh_id) + ',' + csv_field(e.class_label) + ',' + csv_field(rel) + ',' + to_string(e.split) +
           ',' + (e.seed ? std::to_string(*e.seed) : std::string()) + '\n';
  }
  return out;
}

DatasetManifest manifest_from_tree(const fs::path& root, Split split, const std::vector<std::string>& unseen_classes) {
  if (!fs::is_directory(root)) throw Error(ErrorKind::Io, "not a directory: " + root.string());
  std::vector<fs::path> files;
  for (const auto& de : fs::recursive_directory_iterator(root)) {
    if (!de.is_regular_file()) continue;
    std::string ext = de.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".obj" || ext == ".off") files.push_back(de.path());
  }
  std::sort(files.begin(), files.end());
  DatasetManifest m;
  std::set<std::string> ids;
  for (const auto& f : files) {
    const fs::path rel = f.lexically_relative(root);
    ManifestEntry e;
    e.mesh_id = rel.parent_path().empty() ? rel.stem().generic_string()
                                          : (rel.parent_path() / rel.stem()).generic_string();
    if (!ids.insert(e.mesh_id).second) continue;  // a.obj next to a.off: first wins
    e.class_label = std::distance(rel.begin(), rel.end()) > 1 ? rel.begin()->string() : "unlabeled";
    e.path = f;
    e.split = split;
    if (!unseen_classes.empty()) {
      const bool unseen = std::find(unseen_classes.begin(), unseen_classes.end(), e.class_label) != unseen_classes.end();
      e.split = unseen ? Split::Unseen : Split::Seen;
    }
    e.seed = id_hash(e.mesh_id) & 0x7fffffffULL;
    m.entries.push_back(std::move(e));
  }
  return m;
}

// ---- result tables ------------------------------------------------------------------

std::vector<std::string> metric_columns(const std::vector<double>& fs_thresholds, bool decomposed) {
  std::vector<std::string> cols = {"cd", "iou", "nc"};
  for (const char* prefix : {"fs@", "precision@", "recall@"}) {
    for (double d : fs_thresholds) cols.push_back(prefix + format_short(d));
  }
  if (decomposed) {
    for (const char* part : {"vis_", "occ_"}) {
      cols.push_back(std::string(part) + "cd");
      cols.push_back(std::string(part) + "nc");
      for (double d : fs_thresholds) cols.push_back(std::string(part) + "fs@" + format_short(d));
    }
  }
  return cols;
}

std::string format_results_csv(const ResultTable& table) {
  std::string out;
  std::vector<std::string> header = kLeading;
  header.insert(header.end(), table.metric_columns.begin(), table.metric_columns.end());
  header.insert(header.end(), kTrailing.begin(), kTrailing.end());
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + csv_field(header[i]);
  out += '\n';
  for (const auto& r : table.rows) {
    out += csv_field(r.mesh_id) + ',' + csv_field(r.class_label) + ',' + csv_field(r.split) + ',' + to_string(r.status);
    for (const auto& v : r.values) out += ',' + opt_text(v);
    out += std::string(",") + (r.status == RowStatus::Empty ? "1" : "0") + ',' + std::to_string(r.n_pred) + ',' +
           std::to_string(r.n_gt) + ',' + csv_field(r.error) + '\n';
  }
  return out;
}

ResultTable parse_results_csv(const std::string& text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw Error(ErrorKind::Format, "results CSV has no header", 1);
  const auto& h = rows[0];
  const std::size_t fixed = kLeading.size() + kTrailing.size();
  if (h.size() < fixed || !std::equal(kLeading.begin(), kLeading.end(), h.begin()) ||
      !std::equal(kTrailing.begin(), kTrailing.end(), h.end() - static_cast<long>(kTrailing.size()))) {
    throw Error(ErrorKind::Format, "unrecognized results CSV header", 1);
  }
  ResultTable table;
  table.metric_columns.assign(h.begin() + static_cast<long>(kLeading.size()),
                              h.end() - static_cast<long>(kTrailing.size()));
  const std::size_t nm = table.metric_columns.size();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const std::size_t line = i + 1;
    if (r.size() != h.size()) throw Error(ErrorKind::Format, "wrong number of fields", line);
    ResultRecord rec;
    rec.mesh_id = r[0];
    rec.class_label = r[1];
    rec.split = r[2];
    if (r[3] == "ok") rec.status = RowStatus::Ok;
    else if (r[3] == "empty") rec.status = RowStatus::Empty;
    else if (r[3] == "failed") rec.status = RowStatus::Failed;
    else throw Error(ErrorKind::Format, "unknown status '" + r[3] + "'", line);
    try {
      for (std::size_t k = 0; k < nm; ++k) {
        const std::string& f = r[kLeading.size() + k];
        rec.values.push_back(f.empty() ? std::nullopt : std::optional<double>(parse_double(f, table.metric_columns[k])));
      }
      const std::size_t t = kLeading.size() + nm;
      rec.n_pred = parse_size(r[t + 1], "n_pred");
      rec.n_gt = parse_size(r[t + 2], "n_gt");
    } catch (const Error& e) {
      throw Error(ErrorKind::Format, e.detail(), line);
    }
    rec.error = r.back();
    table.rows.push_back(std::move(rec));
  }
  return table;
}

std::string format_results_jsonl(const ResultTable& table) {
  std::string out;
  for (const auto& r : table.rows) {
    nlohmann::ordered_json j;
    j["mesh_id"] = r.mesh_id;
    j["class"] = r.class_label;
    j["split"] = r.split;
    j["status"] = to_string(r.status);
    for (std::size_t k = 0; k < r.values.size(); ++k) {
      j[table.metric_columns[k]] = r.values[k] ? nlohmann::ordered_json(*r.values[k]) : nlohmann::ordered_json();
    }
    j["empty"] = r.status == RowStatus::Empty;
    j["n_pred"] = r.n_pred;
    j["n_gt"] = r.n_gt;
    if (!r.error.empty()) j["error"] = r.error;
    out += j.dump() + '\n';
  }
  return out;
}

// ---- aggregation --------------------------------------------------------------------

namespace {

struct Accumulator {
  GroupStats stats;
  std::vector<double> sums;
  std::vector<std::size_t> counts;

  Accumulator(std::string label, std::size_t nm) : sums(nm, 0.0), counts(nm, 0) { stats.label = std::move(label); }

  void add(const ResultRecord& r, const std::vector<char>& chamfer, EmptyPolicy policy) {
    ++stats.n_rows;
    if (r.status == RowStatus::Failed) {
      ++stats.n_failed;
      return;
    }
    if (r.status == RowStatus::Empty) {
      ++stats.n_empty;
      if (policy == EmptyPolicy::Zero) {
        for (std::size_t k = 0; k < sums.size(); ++k) {
          if (!chamfer[k]) ++counts[k];  // adds 0
        }
      }
      return;
    }
    ++stats.n_scored;
    for (std::size_t k = 0; k < sums.size(); ++k) {
      if (r.values[k]) {
        sums[k] += *r.values[k];
        ++counts[k];
      }
    }
  }

  GroupStats finish() {
    stats.metrics.resize(sums.size());
    for (std::size_t k = 0; k < sums.size(); ++k) {
      stats.metrics[k].count = counts[k];
      if (counts[k] > 0) stats.metrics[k].mean = sums[k] / static_cast<double>(counts[k]);
    }
    return stats;
  }
};

SplitAggregate aggregate_rows(const std::string& split, const std::vector<const ResultRecord*>& rows,
                              const std::vector<char>& chamfer, std::size_t nm, EmptyPolicy policy) {
  SplitAggregate out;
  out.split = split;
  std::map<std::string, Accumulator> per_class;
  Accumulator all("Avg (instance)", nm);
  for (const ResultRecord* r : rows) {
    per_class.try_emplace(r->class_label, r->class_label, nm).first->second.add(*r, chamfer, policy);
    all.add(*r, chamfer, policy);
  }
  out.instance_mean = all.finish();
  out.class_mean.label = "Avg (class-mean)";
  out.class_mean.metrics.resize(nm);
  std::vector<double> sums(nm, 0.0);
  for (auto& [label, acc] : per_class) {
    GroupStats g = acc.finish();
    out.class_mean.n_rows += g.n_rows;
    out.class_mean.n_scored += g.n_scored;
    out.class_mean.n_empty += g.n_empty;
    out.class_mean.n_failed += g.n_failed;
    for (std::size_t k = 0; k < nm; ++k) {
      if (g.metrics[k].mean) {
        sums[k] += *g.metrics[k].mean;
        ++out.class_mean.metrics[k].count;
      }
    }
    out.classes.push_back(std::move(g));
  }
  for (std::size_t k = 0; k < nm; ++k) {
    const std::size_t c = out.class_mean.metrics[k].count;
    if (c > 0) out.class_mean.metrics[k].mean = sums[k] / static_cast<double>(c);
  }
  return out;
}

}  // namespace

AggregateReport aggregate_by_class(const ResultTable& table, EmptyPolicy policy) {
  AggregateReport report;
  report.metric_columns = table.metric_columns;
  report.policy = policy;
  if (table.rows.empty()) return report;
  const std::size_t nm = table.metric_columns.size();
  std::vector<char> chamfer(nm);
  for (std::size_t k = 0; k < nm; ++k) chamfer[k] = is_chamfer_column(table.metric_columns[k]);
  for (const auto& r : table.rows) {
    if (r.values.size() != nm) throw Error(ErrorKind::InvalidArgument, "row width does not match metric columns");
  }

  std::vector<const ResultRecord*> all;
  std::map<std::pair<int, std::string>, std::vector<const ResultRecord*>> by_split;
  for (const auto& r : table.rows) {
    all.push_back(&r);
    by_split[{split_rank(r.split), r.split}].push_back(&r);
  }
  report.splits.push_back(aggregate_rows("ALL", all, chamfer, nm, policy));
  for (const auto& [key, rows] : by_split) report.splits.push_back(aggregate_rows(key.second, rows, chamfer, nm, policy));
  return report;
}

std::string format_aggregate_csv(const AggregateReport& report) {
  std::string out = "split,class,n,scored,empty,failed";
  for (const auto& c : report.metric_columns) out += ',' + csv_field(c);
  out += '\n';
  auto line = [&](const std::string& split, const GroupStats& g) {
    out += csv_field(split) + ',' + csv_field(g.label) + ',' + std::to_string(g.n_rows) + ',' +
           std::to_string(g.n_scored) + ',' + std::to_string(g.n_empty) + ',' + std::to_string(g.n_failed);
    for (const auto& m : g.metrics) out += ',' + opt_text(m.mean);
    out += '\n';
  };
  for (const auto& s : report.splits) {
    for (const auto& g : s.classes) line(s.split, g);
    line(s.split, s.class_mean);
    line(s.split, s.instance_mean);
  }
  return out;
}

std::string format_aggregate_table(const AggregateReport& report) {
  if (report.empty()) return "(no rows)\n";
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> head = {"split", "class", "n", "scored", "empty", "failed"};
  head.insert(head.end(), report.metric_columns.begin(), report.metric_columns.end());
  cells.push_back(head);
  for (const auto& s : report.splits) {
    std::vector<const GroupStats*> groups;
    for (const auto& g : s.classes) groups.push_back(&g);
    groups.push_back(&s.class_mean);
    groups.push_back(&s.instance_mean);
    for (const GroupStats* g : groups) {
      std::vector<std::string> row = {s.split, g->label, std::to_string(g->n_rows), std::to_string(g->n_scored),
                                      std::to_string(g->n_empty), std::to_string(g->n_failed)};
      for (const auto& m : g->metrics) row.push_back(m.mean ? format_short(*m.mean) : "-");
      cells.push_back(std::move(row));
    }
  }
  std::vector<std::size_t> width(head.size(), 0);
  for (const auto& row : cells)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  std::string out;
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += row[i];
      if (i + 1 < row.size()) out += std::string(width[i] - row[i].size() + 2, ' ');
    }
    out += '\n';
  }
  return out;
}

// ---- batch evaluation -----------------------------------------------------------------

namespace {

std::optional<fs::path> find_prediction(const fs::path& pred_dir, const std::string& mesh_id) {
  for (const char* ext : {".obj", ".off"}) {
    fs::path p = pred_dir / (mesh_id + ext);
    if (fs::exists(p)) return p;
  }
  return std::nullopt;
}

void put_report(ResultRecord& rec, const std::map<std::string, std::size_t>& col, const std::string& prefix,
                const MetricReport& r, bool with_pr) {
  auto set = [&](const std::string& name, std::optional<double> v) { rec.values[col.at(prefix + name)] = v; };
  set("cd", r.cd);
  set("nc", r.nc);
  if (with_pr) set("iou", r.iou);
  for (const auto& [d, f] : r.fs) {
    const std::string key = format_short(d);
    set("fs@" + key, f.fs);
    if (with_pr) {
      set("precision@" + key, f.precision);
      set("recall@" + key, f.recall);
    }
  }
}

ResultRecord evaluate_entry(const ManifestEntry& e, const fs::path& pred_dir, const EvalConfig& cfg,
                            const RunOptions& options, const std::map<std::string, std::size_t>& col,
                            std::size_t n_cols) {
  ResultRecord rec;
  rec.mesh_id = e.mesh_id;
  rec.class_label = e.class_label;
  rec.split = to_string(e.split);
  rec.values.assign(n_cols, std::nullopt);
  try {
    TriangleMesh gt = load_mesh(e.path);
    EvalConfig local = cfg;
    local.rng_seed = derive_seed(cfg.rng_seed, {id_hash(e.mesh_id)});
    if (cfg.dof_mode != DofTag::OC) {
      const std::uint64_t pose_seed = e.seed.value_or(derive_seed(local.rng_seed, {0x706f7365}));
      gt = apply_pose(gt, sample_pose(cfg.dof_mode, pose_seed), cfg.pivot_mode);
    }
    const auto pred_path = find_prediction(pred_dir, e.mesh_id);
    const TriangleMesh pred = pred_path ? load_mesh(*pred_path) : TriangleMesh();
    const MetricReport report = evaluate_pair(pred, gt, local);
    rec.status = report.empty_prediction ? RowStatus::Empty : RowStatus::Ok;
    rec.n_pred = report.n_pred_points;
    rec.n_gt = report.n_gt_points;
    if (!pred_path) rec.error = "no prediction file";
    if (rec.status == RowStatus::Ok) {
      put_report(rec, col, "", report, true);
      if (options.decompose) {
        const DecomposedReport d = evaluate_decomposed(pred, gt, local);
        put_report(rec, col, "vis_", d.visible, false);
        put_report(rec, col, "occ_", d.occluded, false);
      }
    }
  } catch (const std::exception& ex) {
    rec.status = RowStatus::Failed;
    rec.n_pred = rec.n_gt = 0;
    rec.values.assign(n_cols, std::nullopt);
    rec.error = ex.what();
  }
  return rec;
}

}  // namespace

EvalResult run_eval(const DatasetManifest& manifest, const fs::path& pred_dir, const EvalConfig& cfg,
                    const RunOptions& options) {
  cfg.validate();
  EvalResult result;
  result.table.metric_columns = metric_columns(cfg.fs_thresholds, options.decompose);
  std::map<std::string, std::size_t> col;
  for (std::size_t k = 0; k < result.table.metric_columns.size(); ++k) col[result.table.metric_columns[k]] = k;
  const std::size_t n = manifest.entries.size();
  result.table.rows.resize(n);
  parallel_for(0, n, [&](std::size_t i) {
    result.table.rows[i] = evaluate_entry(manifest.entries[i], pred_dir, cfg, options, col, col.size());
  }, 1);
  for (const auto& r : result.table.rows) result.n_failed += r.status == RowStatus::Failed ? 1 : 0;
  result.aggregate = aggregate_by_class(result.table, cfg.empty_policy);
  return result;
}

RerunStats rerun_spread(const std::vector<EvalResult>& runs) {
  RerunStats s;
  if (runs.empty()) return s;
  s.metric_columns = runs.front().aggregate.metric_columns;
  const std::size_t nm = s.metric_columns.size();
  for (const auto& r : runs) {
    if (r.aggregate.empty()) {
      s.per_rep.emplace_back(nm, std::nullopt);
      continue;
    }
    std::vector<std::optional<double>> v(nm);
    for (std::size_t k = 0; k < nm; ++k) v[k] = r.aggregate.splits.front().instance_mean.metrics[k].mean;
    s.per_rep.push_back(std::move(v));
  }
  s.mean.assign(nm, std::nullopt);
  s.std.assign(nm, std::nullopt);
  for (std::size_t k = 0; k < nm; ++k) {
    std::vector<double> xs;
    for (const auto& rep : s.per_rep)
      if (rep[k]) xs.push_back(*rep[k]);
    if (xs.empty()) continue;
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    s.mean[k] = mean;
    s.std[k] = std::sqrt(ss / static_cast<double>(xs.size()));
  }
  return s;
}

std::string format_rerun_csv(const RerunStats& stats) {
  std::string out = "metric,reps,mean,std\n";
  for (std::size_t k = 0; k < stats.metric_columns.size(); ++k) {
    out += csv_field(stats.metric_columns[k]) + ',' + std::to_string(stats.per_rep.size()) + ',' +
           opt_text(stats.mean[k]) + ',' + opt_text(stats.std[k]) + '\n';
  }
  return out;
}

}  // namespace shapemetric
