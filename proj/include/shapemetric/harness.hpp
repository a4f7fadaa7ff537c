// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shapemetric/metrics.hpp"

namespace shapemetric {

enum class Split { Seen, Unseen, Train, Val, Test };
const char* to_string(Split s);
Split parse_split(const std::string& text);

struct ManifestEntry {
  std::string mesh_id;
  std::string class_label;
  std::filesystem::path path;  // resolved against the manifest's directory
  Split split = Split::Test;
  std::optional<std::uint64_t> seed;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;

  /// CSV with header mesh_id,class,path,split,seed (seed may be blank).
  /// Throws Error(Format) on a bad header or row, Error(Structural) on a
  /// duplicate mesh_id, Error(Io) when a path does not exist.
  static DatasetManifest parse(const std::string& text, const std::filesystem::path& base_dir,
                               bool check_paths = true);
  static DatasetManifest load(const std::filesystem::path& path);
  std::string format(const std::filesystem::path& base_dir) const;
};

/// Walks root for .obj/.off files (sorted); class is the first directory
/// under root, mesh_id the relative path without extension.
DatasetManifest manifest_from_tree(const std::filesystem::path& root, Split split,
                                   const std::vector<std::string>& unseen_classes = {});

// ---- per-mesh results ---------------------------------------------------------

enum class RowStatus { Ok, Empty, Failed };
const char* to_string(RowStatus s);

struct ResultRecord {
  std::string mesh_id;
  std::string class_label;
  std::string split;
  RowStatus status = RowStatus::Ok;
  std::size_t n_pred = 0;
  std::size_t n_gt = 0;
  std::string error;
  std::vector<std::optional<double>> values;  // aligned with ResultTable::metric_columns

  bool operator==(const ResultRecord&) const = default;
};

struct ResultTable {
  std::vector<std::string> metric_columns;
  std::vector<ResultRecord> rows;

  bool operator==(const ResultTable&) const = default;
};

/// cd, iou, nc, fs@d..., precision@d..., recall@d..., then vis_/occ_ variants
/// of cd, nc and fs@d when decomposed.
std::vector<std::string> metric_columns(const std::vector<double>& fs_thresholds, bool decomposed);

/// Columns: mesh_id,class,split,status,<metrics>,empty,n_pred,n_gt,error.
/// Values print as round-trip decimals; missing values are blank.
std::string format_results_csv(const ResultTable& table);
ResultTable parse_results_csv(const std::string& text);

// ---- aggregation --------------------------------------------------------------

struct MetricStat {
  std::optional<double> mean;
  std::size_t count = 0;

  bool operator==(const MetricStat&) const = default;
};

struct GroupStats {
  std::string label;
  std::size_t n_rows = 0;
  std::size_t n_scored = 0;
  std::size_t n_empty = 0;
  std::size_t n_failed = 0;
  std::vector<MetricStat> metrics;

  bool operator==(const GroupStats&) const = default;
};

struct SplitAggregate {
  std::string split;  // "ALL" or a split tag
  std::vector<GroupStats> classes;  // sorted by class label
  GroupStats class_mean;            // unweighted mean of class means
  GroupStats instance_mean;         // mean over rows

  bool operator==(const SplitAggregate&) const = default;
};

struct AggregateReport {
  std::vector<std::string> metric_columns;
  EmptyPolicy policy = EmptyPolicy::Exclude;
  std::vector<SplitAggregate> splits;  // ALL first, then each split present

  bool empty() const { return splits.empty(); }
  bool operator==(const AggregateReport&) const = default;
};

/// Failed rows never contribute. Empty rows contribute nothing under
/// Exclude; under Zero they count as 0 for every metric except the chamfer
/// columns, which have no finite worst case and stay excluded.
AggregateReport aggregate_by_class(const ResultTable& table, EmptyPolicy policy);

/// split,class,n,scored,empty,failed,<metrics>; class rows then the two Avg rows.
std::string format_aggregate_csv(const AggregateReport& report);
/// Fixed-width table for terminals.
std::string format_aggregate_table(const AggregateReport& report);

// ---- batch evaluation -----------------------------------------------------------

struct RunOptions {
  bool decompose = false;
};

struct EvalResult {
  ResultTable table;
  AggregateReport aggregate;
  std::size_t n_failed = 0;

  /// 0 when every entry was scored or recorded empty, 1 when any failed.
  int exit_code() const { return n_failed > 0 ? 1 : 0; }
};

/// Prediction for an entry is <pred_dir>/<mesh_id>.obj, else .off; neither
/// means an empty prediction. Under VC2/VC3 the ground truth is posed with
/// the entry's seed before evaluation, so scoring happens in the view frame.
/// Unreadable or unusable meshes give a Failed row; the run continues.
/// Rows follow manifest order.
EvalResult run_eval(const DatasetManifest& manifest, const std::filesystem::path& pred_dir, const EvalConfig& cfg,
                    const RunOptions& options = {});

/// Instance means of the ALL split across k reruns with derived seeds.
struct RerunStats {
  std::vector<std::string> metric_columns;
  std::vector<std::vector<std::optional<double>>> per_rep;
  std::vector<std::optional<double>> mean;
  std::vector<std::optional<double>> std;
};
RerunStats rerun_spread(const std::vector<EvalResult>& runs);
std::string format_rerun_csv(const RerunStats& stats);

/// One JSON object per row.
std::string format_results_jsonl(const ResultTable& table);

/// Stable 64-bit hash of a mesh id (FNV-1a).
std::uint64_t id_hash(const std::string& text);

}  // namespace shapemetric
