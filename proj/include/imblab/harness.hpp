#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "imblab/balancing.hpp"
#include "imblab/classifiers.hpp"
#include "imblab/dataset.hpp"
#include "imblab/dynsel.hpp"
#include "imblab/hardness.hpp"
#include "imblab/metrics.hpp"
#include "imblab/pool.hpp"
#include "imblab/synthetic.hpp"
#include "json.hpp"

namespace imblab {

inline constexpr const char* kVersion = "0.1.0";

/// Where the experiment data comes from: a file on disk, the Drebin
/// two-part layout, or the built-in blob generator.
struct DatasetSource {
  std::string type = "synthetic";  // csv | sparse | drebin | synthetic
  std::string path;                // csv / sparse
  std::string feature_dir;         // drebin
  std::string manifest;            // drebin
  std::size_t min_feature_count = 10;
  BlobConfig synthetic;
};

Dataset load_dataset(const DatasetSource& source);

struct ExperimentConfig {
  DatasetSource dataset;
  std::vector<std::string> models = {"bagging_decision_tree"};
  std::vector<BalanceMode> balance_modes = {BalanceMode::none,
                                            BalanceMode::bbb};
  int iterations = 30;
  double test_fraction = 0.2;

  int pool_size = 100;
  BaseKind pool_base = BaseKind::tree;  // selector pools
  bool pool_rf_mode = true;             // rf-mode trees for selector pools
  int rf_features = 0;                  // <1 selects round(sqrt(d))

  SmoteConfig smote;  // seed is derived per iteration

  double dsel_fraction = 0.25;
  int dsel_k = 7;
  MetaDesConfig metades;
  double static_keep_fraction = 0.5;
  RankMetric rank_metric = RankMetric::accuracy;

  TreeConfig tree;
  int knn_k = 5;
  double nb_alpha = 1.0;

  std::uint64_t seed = 42;
  std::string out_dir = "results";
  int threads = 1;
  bool save_pools = false;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

/// One (iteration, model, balance) cell. Failed arms carry ok=false and
/// the reason; the rest of the experiment is unaffected.
struct RunRecord {
  int iteration = 0;
  std::string model;
  BalanceMode balance = BalanceMode::none;
  bool ok = true;
  std::string error;
  MetricsReport metrics;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
};

struct ArmAggregate {
  std::string model;
  BalanceMode balance = BalanceMode::none;
  AggregateReport report;
};

struct ExperimentResult {
  std::vector<RunRecord> records;      // ordered (iteration, model, balance)
  std::vector<ArmAggregate> aggregates;  // config order, ok runs only
};

bool model_needs_pool(const std::string& model);
bool model_needs_dsel(const std::string& model);
bool model_known(const std::string& model);

/// Evaluate one arm on a fixed split. All randomness derives from
/// iteration_seed, so a cell re-run reproduces its metrics exactly.
MetricsReport evaluate_cell(const Dataset& train, const Dataset& test,
                            const std::string& model, BalanceMode balance,
                            const ExperimentConfig& config,
                            std::uint64_t iteration_seed);

/// The full protocol: per iteration a fresh stratified split, every
/// (model, balance) arm trained on the training side and scored on the
/// untouched test side, aggregated across iterations.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Paired comparison of two balance modes over the configured models.
struct ComparisonRow {
  std::string model;
  std::string metric;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double delta = 0.0;  // a - b
};

std::vector<ComparisonRow> compare_balancing(
    const ExperimentConfig& config, BalanceMode mode_a = BalanceMode::bbb,
    BalanceMode mode_b = BalanceMode::whole_set);

// report writers -----------------------------------------------------------

void write_results_csv(const std::filesystem::path& path,
                       const std::vector<ArmAggregate>& aggregates);
void write_results_md(const std::filesystem::path& path,
                      const std::vector<ArmAggregate>& aggregates);
void write_runs_json(const std::filesystem::path& path,
                     const std::vector<RunRecord>& records);
std::vector<RunRecord> read_runs_json(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path,
                    const ExperimentConfig& config);
void write_comparison_csv(const std::filesystem::path& path,
                          const std::vector<ComparisonRow>& rows,
                          const std::string& name_a = "a",
                          const std::string& name_b = "b");
void write_kdn_csv(const std::filesystem::path& path, const Dataset& data,
                   const KdnReport& report);
void write_cdf_csv(const std::filesystem::path& path, const KdnReport& report,
                   Label which);

/// Aggregate records (ok runs only) in first-seen (model, balance) order.
std::vector<ArmAggregate> aggregate_records(
    const std::vector<RunRecord>& records);

/// Standard report bundle: results.csv, results.md, runs.json,
/// manifest.json under out_dir. Returns true when any record failed.
bool emit_reports(const ExperimentConfig& config,
                  const ExperimentResult& result,
                  const std::filesystem::path& out_dir);

}  // namespace imblab
