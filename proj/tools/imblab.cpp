// imblab command line: dataset ingestion, experiment protocol, balancing
// comparison, instance-hardness reports.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "imblab/errors.hpp"
#include "imblab/harness.hpp"

namespace fs = std::filesystem;
using namespace imblab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitPartial = 3;

void print_summary(const DatasetSummary& s) {
  std::cout << "rows: " << s.total << "\n"
            << "positives: " << s.positives << "\n"
            << "negatives: " << s.negatives << "\n"
            << "features: " << s.n_features << "\n"
            << "imbalance_ratio: " << format_ratio(s.imbalance_ratio) << "\n";
}

void print_aggregates(const std::vector<ArmAggregate>& aggregates) {
  for (const auto& agg : aggregates) {
    std::cout << agg.model << " [" << balance_mode_name(agg.balance)
              << "]  recall " << format_cell(agg.report.recall) << "  f1 "
              << format_cell(agg.report.f1) << "  g-mean "
              << format_cell(agg.report.g_mean) << "  mcc "
              << format_cell(agg.report.mcc) << "  (" << agg.report.runs
              << " runs)\n";
  }
}

struct ExperimentFlags {
  std::string config_path;
  std::vector<std::string> models;
  std::vector<std::string> balance;
  std::optional<int> iterations;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out_dir;
  bool save_pools = false;
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& flags) {
  cmd->add_option("-c,--config", flags.config_path,
                  "JSON config file (see README for the schema)");
  cmd->add_option("--models", flags.models,
                  "Override the configured model list")
      ->delimiter(',');
  cmd->add_option("--balance", flags.balance,
                  "Override balance modes (none|bbb|whole_set)")
      ->delimiter(',');
  cmd->add_option("--iterations", flags.iterations);
  cmd->add_option("--seed", flags.seed, "Master seed");
  cmd->add_option("--threads", flags.threads,
                  "Concurrent iterations (default 1)");
  cmd->add_option("-o,--out", flags.out_dir, "Output directory");
  cmd->add_flag("--save-pools", flags.save_pools,
                "Write iteration-0 pool artifacts");
}

ExperimentConfig resolve_config(const ExperimentFlags& flags) {
  ExperimentConfig cfg;
  if (!flags.config_path.empty()) cfg = load_config(flags.config_path);
  if (!flags.models.empty()) {
    cfg.models = flags.models;
    for (const auto& model : cfg.models) {
      if (!model_known(model)) throw ConfigError("unknown model: " + model);
    }
  }
  if (!flags.balance.empty()) {
    cfg.balance_modes.clear();
    for (const auto& name : flags.balance) {
      cfg.balance_modes.push_back(balance_mode_from_name(name));
    }
  }
  if (flags.iterations) cfg.iterations = *flags.iterations;
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.threads) cfg.threads = *flags.threads;
  if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
  if (flags.save_pools) cfg.save_pools = true;
  if (cfg.iterations < 1) throw ConfigError("iterations must be >= 1");
  return cfg;
}

int run(int argc, char** argv) {
  CLI::App app{
      "imblab — bagging with per-bootstrap balancing, dynamic classifier "
      "selection and imbalance-aware evaluation"};
  app.require_subcommand(1);

  // ingest ------------------------------------------------------------
  auto* ingest = app.add_subcommand(
      "ingest", "Vectorize a Drebin-layout feature directory");
  std::string features_dir, manifest_path, ingest_out;
  std::size_t min_count = 10;
  std::string ingest_format = "sparse";
  ingest->add_option("--features", features_dir,
                     "Directory with one feature file per application")
      ->required();
  ingest->add_option("--manifest", manifest_path,
                     "CSV with a sha256 column listing malware")
      ->required();
  ingest->add_option("--min-count", min_count,
                     "Keep features occurring in at least this many apps");
  ingest->add_option("-o,--out", ingest_out, "Output dataset file")
      ->required();
  ingest->add_option("--format", ingest_format, "sparse|csv")
      ->check(CLI::IsMember({"sparse", "csv"}));

  // summarize ----------------------------------------------------------
  auto* summarize_cmd =
      app.add_subcommand("summarize", "Class counts and imbalance ratio");
  std::string summarize_input;
  summarize_cmd
      ->add_option("-i,--input", summarize_input,
                   "Dataset file (.csv or sparse format)")
      ->required();

  // experiment ----------------------------------------------------------
  auto* experiment_cmd = app.add_subcommand(
      "experiment", "Run the full iterated split/train/evaluate protocol");
  ExperimentFlags experiment_flags;
  add_experiment_flags(experiment_cmd, experiment_flags);

  // compare-balancing ----------------------------------------------------
  auto* compare_cmd = app.add_subcommand(
      "compare-balancing",
      "Paired per-model comparison of two balancing strategies");
  ExperimentFlags compare_flags;
  add_experiment_flags(compare_cmd, compare_flags);
  std::string mode_a = "bbb", mode_b = "whole_set";
  compare_cmd->add_option("--mode-a", mode_a, "First balancing arm");
  compare_cmd->add_option("--mode-b", mode_b, "Second balancing arm");

  // hardness --------------------------------------------------------------
  auto* hardness_cmd = app.add_subcommand(
      "hardness", "KDN instance-hardness scores and per-class CDFs");
  std::string hardness_input, hardness_config, hardness_out = "hardness";
  int kdn_k = 5;
  bool smote_compare = false;
  int smote_k = 5;
  std::uint64_t smote_seed = 0;
  hardness_cmd->add_option("-i,--input", hardness_input,
                           "Dataset file (.csv or sparse format)");
  hardness_cmd->add_option("-c,--config", hardness_config,
                           "Take the dataset from this config instead");
  hardness_cmd->add_option("-k", kdn_k, "Neighborhood size");
  hardness_cmd->add_option("-o,--out", hardness_out, "Output directory");
  hardness_cmd->add_flag("--smote-compare", smote_compare,
                         "Also report hardness after whole-set SMOTE");
  hardness_cmd->add_option("--smote-k", smote_k, "SMOTE neighbor count");
  hardness_cmd->add_option("--seed", smote_seed, "SMOTE seed");

  // report ------------------------------------------------------------
  auto* report_cmd = app.add_subcommand(
      "report", "Rebuild result tables from a recorded runs.json");
  std::string runs_path, report_out = "results";
  report_cmd->add_option("--runs", runs_path, "runs.json from an experiment")
      ->required();
  report_cmd->add_option("-o,--out", report_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  if (ingest->parsed()) {
    const Dataset ds = ingest_drebin(features_dir, manifest_path, min_count);
    if (ingest_format == "csv") {
      save_csv(ds, ingest_out);
    } else {
      save_sparse(ds, ingest_out);
    }
    print_summary(summarize(ds));
    std::cout << "wrote " << ingest_out << "\n";
    return kExitOk;
  }

  if (summarize_cmd->parsed()) {
    print_summary(summarize(load_any(summarize_input)));
    return kExitOk;
  }

  if (experiment_cmd->parsed()) {
    const ExperimentConfig cfg = resolve_config(experiment_flags);
    const ExperimentResult result = run_experiment(cfg);
    const bool any_failed = emit_reports(cfg, result, cfg.out_dir);
    print_aggregates(result.aggregates);
    std::cout << "wrote " << cfg.out_dir << "/results.csv\n";
    if (any_failed) {
      for (const auto& record : result.records) {
        if (!record.ok) {
          std::cerr << "arm failed: iteration " << record.iteration << " "
                    << record.model << " ["
                    << balance_mode_name(record.balance)
                    << "]: " << record.error << "\n";
        }
      }
      return kExitPartial;
    }
    return kExitOk;
  }

  if (compare_cmd->parsed()) {
    const ExperimentConfig cfg = resolve_config(compare_flags);
    const BalanceMode a = balance_mode_from_name(mode_a);
    const BalanceMode b = balance_mode_from_name(mode_b);
    const auto rows = compare_balancing(cfg, a, b);
    fs::create_directories(cfg.out_dir);
    write_comparison_csv(fs::path(cfg.out_dir) / "comparison.csv", rows,
                         balance_mode_name(a), balance_mode_name(b));
    write_manifest(fs::path(cfg.out_dir) / "manifest.json", cfg);
    for (const auto& row : rows) {
      std::cout << row.model << " " << row.metric << ": "
                << balance_mode_name(a) << "=" << row.mean_a << " "
                << balance_mode_name(b) << "=" << row.mean_b
                << " delta=" << row.delta << "\n";
    }
    std::cout << "wrote " << cfg.out_dir << "/comparison.csv\n";
    return kExitOk;
  }

  if (hardness_cmd->parsed()) {
    Dataset data;
    if (!hardness_input.empty()) {
      data = load_any(hardness_input);
    } else if (!hardness_config.empty()) {
      data = load_dataset(load_config(hardness_config).dataset);
    } else {
      throw ConfigError("hardness needs --input or --config");
    }
    fs::create_directories(hardness_out);
    const fs::path out(hardness_out);
    if (smote_compare) {
      SmoteConfig cfg;
      cfg.k_neighbors = smote_k;
      cfg.seed = smote_seed;
      const Dataset balanced = whole_set_balance(data, cfg);
      const HardnessShift shift = hardness_shift(data, balanced, kdn_k);
      write_kdn_csv(out / "kdn_before.csv", data, shift.before);
      write_kdn_csv(out / "kdn_after.csv", balanced, shift.after);
      write_cdf_csv(out / "cdf_before_negative.csv", shift.before,
                    Label::negative);
      write_cdf_csv(out / "cdf_before_positive.csv", shift.before,
                    Label::positive);
      write_cdf_csv(out / "cdf_after_negative.csv", shift.after,
                    Label::negative);
      write_cdf_csv(out / "cdf_after_positive.csv", shift.after,
                    Label::positive);
      std::cout << "mean kdn negative: " << shift.before.mean_negative
                << " -> " << shift.after.mean_negative << "\n"
                << "mean kdn positive: " << shift.before.mean_positive
                << " -> " << shift.after.mean_positive << "\n";
    } else {
      const KdnReport report = kdn_scores(data, kdn_k);
      write_kdn_csv(out / "kdn.csv", data, report);
      write_cdf_csv(out / "cdf_negative.csv", report, Label::negative);
      write_cdf_csv(out / "cdf_positive.csv", report, Label::positive);
      std::cout << "mean kdn negative: " << report.mean_negative << "\n"
                << "mean kdn positive: " << report.mean_positive << "\n";
    }
    std::cout << "wrote " << hardness_out << "\n";
    return kExitOk;
  }

  if (report_cmd->parsed()) {
    const auto records = read_runs_json(runs_path);
    const auto aggregates = aggregate_records(records);
    fs::create_directories(report_out);
    write_results_csv(fs::path(report_out) / "results.csv", aggregates);
    write_results_md(fs::path(report_out) / "results.md", aggregates);
    print_aggregates(aggregates);
    std::cout << "wrote " << report_out << "/results.csv\n";
    return kExitOk;
  }

  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
