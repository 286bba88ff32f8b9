#include "imblab/harness.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <thread>
#include <tuple>

#include "imblab/errors.hpp"
#include "imblab/model_io.hpp"

namespace imblab {

namespace {

using nlohmann::json;

// fixed masks so every stage of a cell draws from its own stream while
// still deriving from the iteration seed alone
constexpr std::uint64_t kPoolSeedMask = 0x7f4a7c15f39cc060ull;
constexpr std::uint64_t kSmoteSeedMask = 0x2545f4914f6cdd1dull;
constexpr std::uint64_t kDselSeedMask = 0x5851f42d4c957f2dull;

std::string csv_number(double value, int decimals) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

}  // namespace

Dataset load_dataset(const DatasetSource& source) {
  if (source.type == "csv") return load_csv(source.path);
  if (source.type == "sparse") return load_sparse(source.path);
  if (source.type == "file") return load_any(source.path);
  if (source.type == "drebin") {
    return ingest_drebin(source.feature_dir, source.manifest,
                         source.min_feature_count);
  }
  if (source.type == "synthetic") return make_blobs(source.synthetic);
  throw ConfigError("unknown dataset source type: " + source.type);
}

// ---------------------------------------------------------------------------
// configuration

namespace {

RankMetric rank_metric_from_name(const std::string& name) {
  if (name == "accuracy") return RankMetric::accuracy;
  if (name == "g_mean") return RankMetric::g_mean;
  throw ConfigError("unknown rank metric: " + name);
}

const char* rank_metric_name(RankMetric metric) {
  return metric == RankMetric::accuracy ? "accuracy" : "g_mean";
}

void check_keys(const json& j, const std::set<std::string>& known,
                const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) {
      throw ConfigError("unknown config key '" + key + "' in " + where);
    }
  }
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  check_keys(j, {"dataset", "models", "balance", "iterations", "test_fraction",
                 "pool", "smote", "dsel", "static", "rank_metric", "tree",
                 "knn", "nb", "seed", "out_dir", "threads", "save_pools"},
             "config");
  ExperimentConfig c;
  if (j.contains("dataset")) {
    const json& d = j.at("dataset");
    check_keys(d,
               {"type", "path", "feature_dir", "manifest", "min_feature_count",
                "n", "ir", "dim", "separation", "cluster_std", "data_seed"},
               "dataset");
    c.dataset.type = d.value("type", c.dataset.type);
    c.dataset.path = d.value("path", c.dataset.path);
    c.dataset.feature_dir = d.value("feature_dir", c.dataset.feature_dir);
    c.dataset.manifest = d.value("manifest", c.dataset.manifest);
    c.dataset.min_feature_count =
        d.value("min_feature_count", c.dataset.min_feature_count);
    c.dataset.synthetic.n_total = d.value("n", c.dataset.synthetic.n_total);
    c.dataset.synthetic.imbalance_ratio =
        d.value("ir", c.dataset.synthetic.imbalance_ratio);
    c.dataset.synthetic.dim = d.value("dim", c.dataset.synthetic.dim);
    c.dataset.synthetic.separation =
        d.value("separation", c.dataset.synthetic.separation);
    c.dataset.synthetic.cluster_std =
        d.value("cluster_std", c.dataset.synthetic.cluster_std);
    c.dataset.synthetic.seed = d.value("data_seed", c.dataset.synthetic.seed);
  }
  if (j.contains("models")) {
    c.models = j.at("models").get<std::vector<std::string>>();
  }
  if (j.contains("balance")) {
    c.balance_modes.clear();
    for (const auto& name : j.at("balance")) {
      c.balance_modes.push_back(
          balance_mode_from_name(name.get<std::string>()));
    }
  }
  c.iterations = j.value("iterations", c.iterations);
  c.test_fraction = j.value("test_fraction", c.test_fraction);
  if (j.contains("pool")) {
    const json& p = j.at("pool");
    check_keys(p, {"n", "base", "rf_mode", "rf_features"}, "pool");
    c.pool_size = p.value("n", c.pool_size);
    if (p.contains("base")) {
      c.pool_base = base_kind_from_name(p.at("base").get<std::string>());
    }
    c.pool_rf_mode = p.value("rf_mode", c.pool_rf_mode);
    c.rf_features = p.value("rf_features", c.rf_features);
  }
  if (j.contains("smote")) {
    const json& s = j.at("smote");
    check_keys(s, {"k_neighbors"}, "smote");
    c.smote.k_neighbors = s.value("k_neighbors", c.smote.k_neighbors);
  }
  if (j.contains("dsel")) {
    const json& d = j.at("dsel");
    check_keys(d,
               {"fraction", "k", "metades_kp", "consensus_threshold",
                "selection_threshold"},
               "dsel");
    c.dsel_fraction = d.value("fraction", c.dsel_fraction);
    c.dsel_k = d.value("k", c.dsel_k);
    c.metades.K = c.dsel_k;
    c.metades.Kp = d.value("metades_kp", c.metades.Kp);
    c.metades.consensus_threshold =
        d.value("consensus_threshold", c.metades.consensus_threshold);
    c.metades.selection_threshold =
        d.value("selection_threshold", c.metades.selection_threshold);
  }
  if (j.contains("static")) {
    const json& s = j.at("static");
    check_keys(s, {"keep_fraction"}, "static");
    c.static_keep_fraction = s.value("keep_fraction", c.static_keep_fraction);
  }
  if (j.contains("rank_metric")) {
    c.rank_metric =
        rank_metric_from_name(j.at("rank_metric").get<std::string>());
  }
  if (j.contains("tree")) {
    const json& t = j.at("tree");
    check_keys(t, {"max_depth", "min_samples_split"}, "tree");
    if (t.contains("max_depth") && t.at("max_depth").get<int>() > 0) {
      c.tree.max_depth = t.at("max_depth").get<int>();
    }
    c.tree.min_samples_split =
        t.value("min_samples_split", c.tree.min_samples_split);
  }
  if (j.contains("knn")) {
    check_keys(j.at("knn"), {"k"}, "knn");
    c.knn_k = j.at("knn").value("k", c.knn_k);
  }
  if (j.contains("nb")) {
    check_keys(j.at("nb"), {"alpha"}, "nb");
    c.nb_alpha = j.at("nb").value("alpha", c.nb_alpha);
  }
  c.seed = j.value("seed", c.seed);
  c.out_dir = j.value("out_dir", c.out_dir);
  c.threads = j.value("threads", c.threads);
  c.save_pools = j.value("save_pools", c.save_pools);

  if (c.iterations < 1) throw ConfigError("iterations must be >= 1");
  for (const auto& model : c.models) {
    if (!model_known(model)) throw ConfigError("unknown model: " + model);
  }
  if (c.models.empty()) throw ConfigError("no models configured");
  if (c.balance_modes.empty()) throw ConfigError("no balance modes configured");
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json balance = json::array();
  for (BalanceMode m : c.balance_modes) balance.push_back(balance_mode_name(m));
  return {
      {"dataset",
       {{"type", c.dataset.type},
        {"path", c.dataset.path},
        {"feature_dir", c.dataset.feature_dir},
        {"manifest", c.dataset.manifest},
        {"min_feature_count", c.dataset.min_feature_count},
        {"n", c.dataset.synthetic.n_total},
        {"ir", c.dataset.synthetic.imbalance_ratio},
        {"dim", c.dataset.synthetic.dim},
        {"separation", c.dataset.synthetic.separation},
        {"cluster_std", c.dataset.synthetic.cluster_std},
        {"data_seed", c.dataset.synthetic.seed}}},
      {"models", c.models},
      {"balance", std::move(balance)},
      {"iterations", c.iterations},
      {"test_fraction", c.test_fraction},
      {"pool",
       {{"n", c.pool_size},
        {"base", base_kind_name(c.pool_base)},
        {"rf_mode", c.pool_rf_mode},
        {"rf_features", c.rf_features}}},
      {"smote", {{"k_neighbors", c.smote.k_neighbors}}},
      {"dsel",
       {{"fraction", c.dsel_fraction},
        {"k", c.dsel_k},
        {"metades_kp", c.metades.Kp},
        {"consensus_threshold", c.metades.consensus_threshold},
        {"selection_threshold", c.metades.selection_threshold}}},
      {"static", {{"keep_fraction", c.static_keep_fraction}}},
      {"rank_metric", rank_metric_name(c.rank_metric)},
      {"tree",
       {{"max_depth", c.tree.max_depth ? *c.tree.max_depth : 0},
        {"min_samples_split", c.tree.min_samples_split}}},
      {"knn", {{"k", c.knn_k}}},
      {"nb", {{"alpha", c.nb_alpha}}},
      {"seed", c.seed},
      {"out_dir", c.out_dir},
      {"threads", c.threads},
      {"save_pools", c.save_pools}};
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path.string() + ": " +
                      e.what());
  }
  return config_from_json(j);
}

// ---------------------------------------------------------------------------
// model registry

namespace {

const std::set<std::string> kMonolithic = {"decision_tree", "knn", "nb"};
const std::set<std::string> kBagging = {"bagging_decision_tree", "bagging_knn",
                                        "bagging_nb", "random_forest"};
const std::set<std::string> kSelector = {"single_best", "static_selection",
                                         "knop", "metades", "ola"};

}  // namespace

bool model_known(const std::string& model) {
  return kMonolithic.count(model) || kBagging.count(model) ||
         kSelector.count(model);
}

bool model_needs_pool(const std::string& model) {
  return kBagging.count(model) || kSelector.count(model);
}

bool model_needs_dsel(const std::string& model) {
  return kSelector.count(model) > 0;
}

// ---------------------------------------------------------------------------
// evaluation

namespace {

MetricsReport evaluate_cell_impl(const Dataset& train, const Dataset& test,
                                 const std::string& model, BalanceMode balance,
                                 const ExperimentConfig& config,
                                 std::uint64_t iteration_seed,
                                 ClassifierPool* pool_out) {
  if (!model_known(model)) throw ConfigError("unknown model: " + model);
  SmoteConfig smote = config.smote;
  smote.seed = iteration_seed ^ kSmoteSeedMask;
  const std::uint64_t pool_seed = iteration_seed ^ kPoolSeedMask;

  std::vector<Label> predictions;
  if (!model_needs_pool(model)) {
    if (balance == BalanceMode::bbb) {
      throw ConfigError("balance mode 'bbb' needs a pooled model, not " +
                        model);
    }
    const Dataset* fit_on = &train;
    Dataset balanced;
    if (balance == BalanceMode::whole_set) {
      balanced = whole_set_balance(train, smote);
      fit_on = &balanced;
    }
    std::unique_ptr<Classifier> fitted;
    if (model == "decision_tree") {
      TreeConfig tc = config.tree;
      tc.seed = pool_seed;
      fitted = train_decision_tree(*fit_on, tc);
    } else if (model == "knn") {
      fitted = train_knn(*fit_on, config.knn_k);
    } else {
      fitted = train_bernoulli_nb(*fit_on, config.nb_alpha);
    }
    predictions = fitted->predict_all(test.features);
    return compute_metrics(confusion(predictions, test.labels));
  }

  PoolConfig pc;
  pc.n = config.pool_size;
  pc.balance = balance;
  pc.smote = smote;
  pc.seed = pool_seed;
  pc.tree = config.tree;
  pc.knn_k = config.knn_k;
  pc.nb_alpha = config.nb_alpha;
  if (model == "bagging_decision_tree") {
    pc.base_kind = BaseKind::tree;
  } else if (model == "bagging_knn") {
    pc.base_kind = BaseKind::knn;
  } else if (model == "bagging_nb") {
    pc.base_kind = BaseKind::nb;
  } else if (model == "random_forest") {
    pc.base_kind = BaseKind::tree;
    pc.rf_feature_subsample = config.rf_features;
  } else {
    pc.base_kind = config.pool_base;
    if (config.pool_rf_mode && pc.base_kind == BaseKind::tree) {
      pc.rf_feature_subsample = config.rf_features;
    }
  }

  if (!model_needs_dsel(model)) {
    const ClassifierPool pool = build_pool(train, pc);
    if (pool_out) *pool_out = pool;
    predictions = majority_vote_all(pool, test.features);
    return compute_metrics(confusion(predictions, test.labels));
  }

  // dsel_fraction 0 reuses the full training set as DSEL (competence is
  // then estimated on memorized rows; the hold-out is the default)
  Dataset pool_train, dsel_data;
  if (config.dsel_fraction == 0.0) {
    pool_train = train;
    dsel_data = train;
  } else {
    std::tie(pool_train, dsel_data) =
        dsel_split(train, config.dsel_fraction, iteration_seed ^ kDselSeedMask);
  }
  const int needed =
      model == "metades"
          ? std::max(config.metades.K, config.metades.Kp) + 1
          : (model == "ola" || model == "knop" ? config.dsel_k : 1);
  if (dsel_data.rows() < needed) {
    throw ConfigError("DSEL has " + std::to_string(dsel_data.rows()) +
                      " rows, fewer than the required " +
                      std::to_string(needed));
  }
  const ClassifierPool pool = build_pool(pool_train, pc);
  if (pool_out) *pool_out = pool;
  const Dsel dsel = build_dsel(std::move(dsel_data), pool);

  if (model == "single_best") {
    const Classifier& best =
        single_best(pool, dsel.data, config.rank_metric);
    predictions = best.predict_all(test.features);
  } else if (model == "static_selection") {
    const ClassifierPool sub = static_selection(
        pool, dsel.data, config.static_keep_fraction, config.rank_metric);
    predictions = majority_vote_all(sub, test.features);
  } else if (model == "ola") {
    for (Eigen::Index i = 0; i < test.rows(); ++i) {
      predictions.push_back(
          ola_select(pool, dsel, sparse_row(test.features, i), config.dsel_k));
    }
  } else if (model == "knop") {
    for (Eigen::Index i = 0; i < test.rows(); ++i) {
      predictions.push_back(knop_select(pool, dsel,
                                        sparse_row(test.features, i),
                                        config.dsel_k));
    }
  } else {  // metades
    MetaDesConfig md = config.metades;
    md.seed = iteration_seed;
    const MetaDesModel meta = metades_train(pool, dsel, md);
    for (Eigen::Index i = 0; i < test.rows(); ++i) {
      predictions.push_back(
          metades_select(meta, pool, dsel, sparse_row(test.features, i)));
    }
  }
  return compute_metrics(confusion(predictions, test.labels));
}

}  // namespace

MetricsReport evaluate_cell(const Dataset& train, const Dataset& test,
                            const std::string& model, BalanceMode balance,
                            const ExperimentConfig& config,
                            std::uint64_t iteration_seed) {
  return evaluate_cell_impl(train, test, model, balance, config,
                            iteration_seed, nullptr);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  for (const auto& model : config.models) {
    if (!model_known(model)) throw ConfigError("unknown model: " + model);
  }
  if (config.iterations < 1) throw ConfigError("iterations must be >= 1");

  const Dataset data = load_dataset(config.dataset);

  auto run_iteration = [&](int iteration) {
    std::vector<RunRecord> records;
    const std::uint64_t iteration_seed =
        config.seed + static_cast<std::uint64_t>(iteration);
    std::optional<SplitPair> split;
    std::string split_error;
    try {
      split = stratified_split(data, config.test_fraction, iteration_seed);
    } catch (const std::exception& e) {
      split_error = e.what();
    }
    for (const auto& model : config.models) {
      for (BalanceMode balance : config.balance_modes) {
        RunRecord record;
        record.iteration = iteration;
        record.model = model;
        record.balance = balance;
        record.seed = iteration_seed;
        const auto start = std::chrono::steady_clock::now();
        if (!split) {
          record.ok = false;
          record.error = split_error;
        } else {
          try {
            ClassifierPool saved;
            ClassifierPool* sink = nullptr;
            if (config.save_pools && iteration == 0 &&
                model_needs_pool(model)) {
              sink = &saved;
            }
            record.metrics =
                evaluate_cell_impl(split->train, split->test, model, balance,
                                   config, iteration_seed, sink);
            if (sink) {
              std::filesystem::create_directories(config.out_dir);
              save_pool(saved,
                        std::filesystem::path(config.out_dir) /
                            ("pool_" + model + "_" +
                             balance_mode_name(balance) + ".json"));
            }
          } catch (const std::exception& e) {
            record.ok = false;
            record.error = e.what();
          }
        }
        record.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        records.push_back(std::move(record));
      }
    }
    return records;
  };

  std::vector<std::vector<RunRecord>> per_iteration(
      static_cast<std::size_t>(config.iterations));
  const int threads =
      std::max(1, std::min(config.threads, config.iterations));
  if (threads == 1) {
    for (int it = 0; it < config.iterations; ++it) {
      per_iteration[static_cast<std::size_t>(it)] = run_iteration(it);
    }
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        const int it = next.fetch_add(1);
        if (it >= config.iterations) return;
        per_iteration[static_cast<std::size_t>(it)] = run_iteration(it);
      }
    };
    std::vector<std::thread> crew;
    for (int t = 0; t < threads; ++t) crew.emplace_back(worker);
    for (auto& t : crew) t.join();
  }

  ExperimentResult result;
  for (auto& batch : per_iteration) {
    for (auto& record : batch) result.records.push_back(std::move(record));
  }
  result.aggregates = aggregate_records(result.records);
  return result;
}

std::vector<ArmAggregate> aggregate_records(
    const std::vector<RunRecord>& records) {
  std::vector<ArmAggregate> aggregates;
  std::vector<std::pair<std::string, BalanceMode>> order;
  for (const auto& record : records) {
    const auto key = std::make_pair(record.model, record.balance);
    if (std::find(order.begin(), order.end(), key) == order.end()) {
      order.push_back(key);
    }
  }
  for (const auto& [model, balance] : order) {
    std::vector<MetricsReport> runs;
    for (const auto& record : records) {
      if (record.ok && record.model == model && record.balance == balance) {
        runs.push_back(record.metrics);
      }
    }
    if (runs.empty()) continue;  // arm failed everywhere; nothing to report
    aggregates.push_back({model, balance, aggregate(runs)});
  }
  return aggregates;
}

std::vector<ComparisonRow> compare_balancing(const ExperimentConfig& config,
                                             BalanceMode mode_a,
                                             BalanceMode mode_b) {
  ExperimentConfig arms = config;
  arms.balance_modes = mode_a == mode_b
                           ? std::vector<BalanceMode>{mode_a}
                           : std::vector<BalanceMode>{mode_a, mode_b};
  const ExperimentResult result = run_experiment(arms);

  auto find = [&](const std::string& model, BalanceMode mode)
      -> const AggregateReport* {
    for (const auto& agg : result.aggregates) {
      if (agg.model == model && agg.balance == mode) return &agg.report;
    }
    return nullptr;
  };

  std::vector<ComparisonRow> rows;
  for (const auto& model : arms.models) {
    const AggregateReport* a = find(model, mode_a);
    const AggregateReport* b = find(model, mode_b);
    if (!a || !b) {
      std::cerr << "warning: no completed runs for model '" << model
                << "', skipped in comparison\n";
      continue;
    }
    const std::pair<const char*, AggregateCell AggregateReport::*> metrics[] =
        {{"recall", &AggregateReport::recall},
         {"f1", &AggregateReport::f1},
         {"g_mean", &AggregateReport::g_mean},
         {"mcc", &AggregateReport::mcc}};
    for (const auto& [name, member] : metrics) {
      ComparisonRow row;
      row.model = model;
      row.metric = name;
      row.mean_a = (a->*member).mean;
      row.mean_b = (b->*member).mean;
      row.delta = row.mean_a - row.mean_b;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// reports

void write_results_csv(const std::filesystem::path& path,
                       const std::vector<ArmAggregate>& aggregates) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "model,balance,recall_mean,recall_std,f1_mean,f1_std,gmean_mean,"
         "gmean_std,mcc_mean,mcc_std,iterations\n";
  for (const auto& agg : aggregates) {
    const AggregateReport& r = agg.report;
    out << agg.model << "," << balance_mode_name(agg.balance) << ","
        << csv_number(r.recall.mean * 100.0, 2) << ","
        << csv_number(r.recall.stddev * 100.0, 2) << ","
        << csv_number(r.f1.mean * 100.0, 2) << ","
        << csv_number(r.f1.stddev * 100.0, 2) << ","
        << csv_number(r.g_mean.mean * 100.0, 2) << ","
        << csv_number(r.g_mean.stddev * 100.0, 2) << ","
        << csv_number(r.mcc.mean * 100.0, 2) << ","
        << csv_number(r.mcc.stddev * 100.0, 2) << "," << r.runs << "\n";
  }
}

void write_results_md(const std::filesystem::path& path,
                      const std::vector<ArmAggregate>& aggregates) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "| Model | Balance | Recall | F1 score | G-Mean | MCC | Runs |\n";
  out << "|---|---|---|---|---|---|---|\n";
  for (const auto& agg : aggregates) {
    const AggregateReport& r = agg.report;
    out << "| " << agg.model << " | " << balance_mode_name(agg.balance)
        << " | " << format_cell(r.recall) << " | " << format_cell(r.f1)
        << " | " << format_cell(r.g_mean) << " | " << format_cell(r.mcc)
        << " | " << r.runs << " |\n";
  }
}

namespace {

json metrics_to_json(const MetricsReport& m) {
  return {{"recall", m.recall},   {"precision", m.precision},
          {"f1", m.f1},           {"g_mean", m.g_mean},
          {"mcc", m.mcc},         {"accuracy", m.accuracy},
          {"zero_division", m.zero_division}};
}

MetricsReport metrics_from_json(const json& j) {
  MetricsReport m;
  m.recall = j.at("recall").get<double>();
  m.precision = j.at("precision").get<double>();
  m.f1 = j.at("f1").get<double>();
  m.g_mean = j.at("g_mean").get<double>();
  m.mcc = j.at("mcc").get<double>();
  m.accuracy = j.at("accuracy").get<double>();
  m.zero_division = j.at("zero_division").get<bool>();
  return m;
}

}  // namespace

void write_runs_json(const std::filesystem::path& path,
                     const std::vector<RunRecord>& records) {
  json arr = json::array();
  for (const auto& record : records) {
    arr.push_back({{"iteration", record.iteration},
                   {"model", record.model},
                   {"balance", balance_mode_name(record.balance)},
                   {"ok", record.ok},
                   {"error", record.error},
                   {"metrics", metrics_to_json(record.metrics)},
                   {"wall_seconds", record.wall_seconds},
                   {"seed", record.seed}});
  }
  const json j = {
      {"format", "imblab-runs"}, {"version", 1}, {"records", std::move(arr)}};
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

std::vector<RunRecord> read_runs_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  json j;
  in >> j;
  if (j.value("format", "") != "imblab-runs" || j.value("version", 0) != 1) {
    throw DataError("not an imblab-runs v1 file: " + path.string());
  }
  std::vector<RunRecord> records;
  for (const auto& r : j.at("records")) {
    RunRecord record;
    record.iteration = r.at("iteration").get<int>();
    record.model = r.at("model").get<std::string>();
    record.balance = balance_mode_from_name(r.at("balance").get<std::string>());
    record.ok = r.at("ok").get<bool>();
    record.error = r.at("error").get<std::string>();
    record.metrics = metrics_from_json(r.at("metrics"));
    record.wall_seconds = r.at("wall_seconds").get<double>();
    record.seed = r.at("seed").get<std::uint64_t>();
    records.push_back(std::move(record));
  }
  return records;
}

void write_manifest(const std::filesystem::path& path,
                    const ExperimentConfig& config) {
  json seeds = json::array();
  for (int it = 0; it < config.iterations; ++it) {
    seeds.push_back(config.seed + static_cast<std::uint64_t>(it));
  }
  char eigen_version[32];
  std::snprintf(eigen_version, sizeof eigen_version, "%d.%d.%d",
                EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION);
  const json j = {{"format", "imblab-manifest"},
                  {"version", 1},
                  {"config", config_to_json(config)},
                  {"iteration_seeds", std::move(seeds)},
                  {"versions",
                   {{"imblab", kVersion},
                    {"eigen", eigen_version},
                    {"nlohmann_json",
                     std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                         std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                         std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}}};
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

void write_comparison_csv(const std::filesystem::path& path,
                          const std::vector<ComparisonRow>& rows,
                          const std::string& name_a,
                          const std::string& name_b) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "model,metric," << name_a << "_mean," << name_b << "_mean,delta\n";
  for (const auto& row : rows) {
    out << row.model << "," << row.metric << ","
        << csv_number(row.mean_a, 4) << "," << csv_number(row.mean_b, 4)
        << "," << csv_number(row.delta, 4) << "\n";
  }
}

void write_kdn_csv(const std::filesystem::path& path, const Dataset& data,
                   const KdnReport& report) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "instance_id,class,kdn\n";
  for (std::size_t i = 0; i < report.scores.size(); ++i) {
    out << i << "," << label_name(data.labels[i]) << ","
        << csv_number(report.scores[i], 6) << "\n";
  }
}

void write_cdf_csv(const std::filesystem::path& path, const KdnReport& report,
                   Label which) {
  const auto& cdf =
      which == Label::positive ? report.cdf_positive : report.cdf_negative;
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "score,cumulative_fraction\n";
  for (const auto& point : cdf) {
    out << csv_number(point.score, 6) << "," << csv_number(point.fraction, 6)
        << "\n";
  }
}

bool emit_reports(const ExperimentConfig& config,
                  const ExperimentResult& result,
                  const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_manifest(out_dir / "manifest.json", config);
  if (result.records.empty()) {
    std::cerr << "warning: no run records; only the manifest was written\n";
    return false;
  }
  write_results_csv(out_dir / "results.csv", result.aggregates);
  write_results_md(out_dir / "results.md", result.aggregates);
  write_runs_json(out_dir / "runs.json", result.records);
  bool any_failed = false;
  for (const auto& record : result.records) any_failed |= !record.ok;
  return any_failed;
}

}  // namespace imblab
